"""Multisorted pp formulas: existentially quantified sorted linear systems,
their solution subspaces in representations, pp-pairs, implication over a
catalogue, free realisations, and pp-type generators.

A formula is a matrix of algebra elements over sorted variables: the free
variables come first, then the bound ones, and each row carries a target
sort.  The solution set in a module M is the projection, to the free
coordinates, of the kernel of the assembled action matrix; by finite
additivity this is computed exactly with no quantifier machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .exactfield import Matrix, hstack, span_contains, vstack
from .quiver import AlgebraElement, StructureAlgebra
from .rep import (
    Representation,
    RepMorphism,
    decompose,
    direct_sum_with_layout,
    hom_basis,
    is_isomorphic,
    kernel,
    projective_cover,
    projective_with_data,
    quotient_representation,
    top,
)


@dataclass(frozen=True)
class PpVar:
    name: str
    sort: int


class PpFormula:
    """exists y-bar: G(x-bar, y-bar) = 0 with sorted variables.

    rows is a sequence of (target_sort, entries) where entries has one
    AlgebraElement (or None for zero) per variable, free variables first.
    """

    def __init__(self, algebra: StructureAlgebra, free, bound, rows):
        self.algebra = algebra
        self.free = tuple(PpVar(*v) if not isinstance(v, PpVar) else v for v in free)
        self.bound = tuple(PpVar(*v) if not isinstance(v, PpVar) else v for v in bound)
        names = [v.name for v in self.free + self.bound]
        if len(set(names)) != len(names):
            raise DomainError("duplicate variable names in a pp formula")
        for v in self.free + self.bound:
            if not (0 <= v.sort < algebra.nsorts):
                raise DomainError(f"variable {v.name} has unknown sort {v.sort}")
        nvars = len(self.free) + len(self.bound)
        checked = []
        for target_sort, entries in rows:
            entries = tuple(entries)
            if len(entries) != nvars:
                raise DomainError("row length does not match the variable count")
            if not (0 <= target_sort < algebra.nsorts):
                raise DomainError("row has unknown target sort")
            for var, e in zip(self.free + self.bound, entries):
                if e is None or e.is_zero():
                    continue
                if e.algebra is not algebra:
                    raise DomainError("row entry from a different algebra")
                if e.source != var.sort or e.target != target_sort:
                    raise DomainError(
                        f"entry at variable {var.name} maps sort {e.source}->{e.target}, "
                        f"expected {var.sort}->{target_sort}"
                    )
            checked.append((target_sort, entries))
        self.rows = tuple(checked)

    @property
    def free_sorts(self) -> tuple[int, ...]:
        return tuple(v.sort for v in self.free)

    def renamed(self, mapping: dict[str, str]) -> "PpFormula":
        f = [(mapping.get(v.name, v.name), v.sort) for v in self.free]
        b = [(mapping.get(v.name, v.name), v.sort) for v in self.bound]
        return PpFormula(self.algebra, f, b, self.rows)

    def __repr__(self):
        fv = ", ".join(f"{v.name}:{self.algebra.sort_labels[v.sort]}" for v in self.free)
        return f"PpFormula({fv}; {len(self.bound)} bound, {len(self.rows)} rows)"


def pp_true(algebra: StructureAlgebra, sort: int, name: str = "x") -> PpFormula:
    """The formula x = x at one sort (full solution set)."""
    return PpFormula(algebra, [(name, sort)], [], [])


def pp_zero(algebra: StructureAlgebra, sort: int, name: str = "x") -> PpFormula:
    """The formula x = 0 at one sort."""
    return PpFormula(algebra, [(name, sort)], [], [(sort, (algebra.lazy(sort),))])


def pp_conj(f: PpFormula, g: PpFormula) -> PpFormula:
    """Conjunction of two formulas in the same free variables."""
    if f.algebra is not g.algebra or f.free != g.free:
        raise DomainError("conjunction needs identical free variables")
    used = {v.name for v in f.free + f.bound}
    rename = {}
    for v in g.bound:
        new = v.name
        while new in used:
            new = new + "'"
        rename[v.name] = new
        used.add(new)
    nf, nb = len(f.free), len(f.bound)
    ng = len(g.bound)
    bound = list(f.bound) + [PpVar(rename[v.name], v.sort) for v in g.bound]
    rows = []
    for t, entries in f.rows:
        rows.append((t, tuple(entries) + (None,) * ng))
    for t, entries in g.rows:
        rows.append((t, tuple(entries[:nf]) + (None,) * nb + tuple(entries[nf:])))
    return PpFormula(f.algebra, f.free, bound, rows)


@dataclass
class Subspace:
    """A subspace of a finite product of sorts of a representation."""

    sorts: tuple[int, ...]
    sort_dims: tuple[int, ...]
    basis: Matrix  # ambient x dim, columns independent

    @property
    def ambient_dim(self) -> int:
        return sum(self.sort_dims)

    @property
    def dim(self) -> int:
        return self.basis.cols

    def contains(self, other: "Subspace") -> bool:
        if self.sorts != other.sorts or self.sort_dims != other.sort_dims:
            raise DomainError("subspaces of different ambient products")
        return span_contains(self.basis, other.basis)

    def equals(self, other: "Subspace") -> bool:
        return self.contains(other) and other.contains(self)


def _assemble_system(phi: PpFormula, m: Representation) -> tuple[Matrix, list[int], int]:
    """The action matrix of phi on m; returns (matrix, column offsets per
    variable, ambient dimension of the free part)."""
    alg = phi.algebra
    if m.algebra is not alg:
        raise DomainError("formula and representation live over different algebras")
    field = alg.field
    allvars = phi.free + phi.bound
    offsets = []
    total = 0
    for v in allvars:
        offsets.append(total)
        total += m.dims[v.sort]
    free_dim = sum(m.dims[v.sort] for v in phi.free)
    rows = []
    for target_sort, entries in phi.rows:
        height = m.dims[target_sort]
        blocks = []
        for v, e in zip(allvars, entries):
            if e is None or e.is_zero():
                blocks.append(Matrix.zeros(field, height, m.dims[v.sort]))
            else:
                blocks.append(m.act_element(e, v.sort, target_sort))
        rows.append(hstack(blocks) if blocks else Matrix.zeros(field, height, 0))
    if rows:
        system = vstack(rows)
    else:
        system = Matrix.zeros(field, 0, total)
    return system, offsets, free_dim


def evaluate(phi: PpFormula, m: Representation) -> Subspace:
    """The pp-definable subgroup phi(m) as an exact subspace basis."""
    system, _, free_dim = _assemble_system(phi, m)
    ker = system.kernel_basis()
    projected = ker.take_rows(range(free_dim))
    return Subspace(
        phi.free_sorts,
        tuple(m.dims[v.sort] for v in phi.free),
        projected.column_space_basis(),
    )


class PpPair:
    """Ordered pair phi/psi with psi implying phi, certified on the
    additive generator of a designated catalogue."""

    def __init__(self, phi: PpFormula, psi: PpFormula, catalogue):
        if phi.algebra is not psi.algebra:
            raise DomainError("pair formulas over different algebras")
        if phi.free_sorts != psi.free_sorts:
            raise DomainError("pair formulas must share free variable sorts")
        if catalogue.algebra is not phi.algebra:
            raise DomainError("catalogue algebra mismatch")
        self.phi = phi
        self.psi = psi
        self.catalogue = catalogue
        m0 = catalogue.additive_generator()
        if not evaluate(phi, m0).contains(evaluate(psi, m0)):
            raise DomainError("psi does not imply phi on the additive generator")
        self.certified = True

    def __repr__(self):
        return f"PpPair({self.phi!r} / {self.psi!r})"


@dataclass
class PairValue:
    dim: int
    coset_reps: Matrix  # ambient x dim, representatives of phi(m) mod psi(m)
    phi_space: Subspace
    psi_space: Subspace


def evaluate_pair(pair: PpPair, m: Representation) -> PairValue:
    """Value phi(m)/psi(m) with deterministic coset representatives."""
    phi_space = evaluate(pair.phi, m)
    psi_space = evaluate(pair.psi, m)
    if not phi_space.contains(psi_space):
        raise DomainError("psi(m) not inside phi(m); pair certificate does not apply")
    from .exactfield import extend_to_basis

    reps = extend_to_basis(psi_space.basis, phi_space.basis)
    return PairValue(reps.cols, reps, phi_space, psi_space)


def implies(phi: PpFormula, psi: PpFormula, catalogue) -> bool:
    """phi implies psi on every module of the finite-representation-type
    category: decided by containment on the additive generator."""
    if phi.free_sorts != psi.free_sorts:
        raise DomainError("implication needs identical free sorts")
    if not catalogue.complete:
        raise DomainError("implication needs a complete catalogue")
    m0 = catalogue.additive_generator()
    return evaluate(psi, m0).contains(evaluate(phi, m0))


def equivalent(phi: PpFormula, psi: PpFormula, catalogue) -> bool:
    return implies(phi, psi, catalogue) and implies(psi, phi, catalogue)


# ----------------------------------------------------------------------
# Free realisations and pp-type generators
# ----------------------------------------------------------------------

@dataclass
class FreeRealisation:
    """A module C with a tuple whose pp-type is generated by the formula;
    vectors[k] is the column of the k-th free variable inside C at its sort."""

    formula: PpFormula
    module: Representation
    vectors: list[Matrix]


def free_realisation(phi: PpFormula) -> FreeRealisation:
    """Cokernel presentation built from the equation matrix: one projective
    generator per variable, one relation per row; the tuple is the image
    of the free generators."""
    alg = phi.algebra
    field = alg.field
    allvars = phi.free + phi.bound
    pdata = [projective_with_data(alg, v.sort) for v in allvars]
    total, layout = direct_sum_with_layout(alg, [p.rep for p in pdata])
    # relation vectors inside the direct sum, one per row
    rel_vectors: list[tuple[int, Matrix]] = []
    for target_sort, entries in phi.rows:
        vec = Matrix.zeros(field, total.dims[target_sort], 1).copy_data()
        for k, (v, e) in enumerate(zip(allvars, entries)):
            if e is None or e.is_zero():
                continue
            off = layout.offsets[k][target_sort]
            local = pdata[k].local_basis[target_sort]
            for bidx, c in e.coeffs.items():
                vec[off + local.index(bidx)][0] = vec[off + local.index(bidx)][0] + c
        rel_vectors.append((target_sort, Matrix(field, total.dims[target_sort], 1, vec)))
    sub_bases = _generated_submodule(total, rel_vectors)
    quot, proj = quotient_representation(total, sub_bases)
    vectors = []
    for k, v in enumerate(phi.free):
        gen_col = layout.offsets[k][pdata[k].gen_sort] + pdata[k].gen_pos
        col = Matrix.zeros(field, total.dims[v.sort], 1).copy_data()
        col[gen_col][0] = field.one()
        vectors.append(proj.blocks[v.sort] * Matrix(field, total.dims[v.sort], 1, col))
    return FreeRealisation(phi, quot, vectors)


def _generated_submodule(x: Representation, gens: list[tuple[int, Matrix]]) -> list[Matrix]:
    """Per-sort bases of the submodule generated by sorted column vectors."""
    alg = x.algebra
    field = alg.field
    cols: list[list[Matrix]] = [[] for _ in range(alg.nsorts)]
    for sort, vec in gens:
        cols[sort].append(vec)
        for i in range(alg.dim):
            if alg.is_idempotent_index(i) or alg.source[i] != sort:
                continue
            cols[alg.target[i]].append(x.act[i] * vec)
    out = []
    for s in range(alg.nsorts):
        if cols[s]:
            out.append(hstack(cols[s]).column_space_basis())
        else:
            out.append(Matrix.zeros(field, x.dims[s], 0))
    return out


class GeneratorPresentation:
    """A module with a chosen minimal generating set (lifts of a top
    basis), coefficient extraction over the generators, and the finitely
    many relation rows presenting the module on them."""

    def __init__(self, module: Representation):
        self.module = module
        self.cover = projective_cover(module)
        self.gen_sorts = [p.gen_sort for p in self.cover.data]

    @property
    def count(self) -> int:
        return len(self.cover.data)

    def generator_vectors(self) -> list[tuple[int, Matrix]]:
        """The generators as sorted column vectors of the module."""
        field = self.module.algebra.field
        out = []
        for j, pj in enumerate(self.cover.data):
            s = pj.gen_sort
            col = self.cover.layout.offsets[j][s] + pj.gen_pos
            out.append((s, self.cover.cover.blocks[s].col(col)))
        return out

    def express(self, sort: int, vec: Matrix) -> list[AlgebraElement | None]:
        """Algebra coefficients lambda_j with vec = sum lambda_j * gen_j."""
        alg = self.module.algebra
        pre = self.cover.cover.blocks[sort].solve(vec)
        if pre is None:
            raise DomainError("vector outside the module (internal error)")
        out = []
        for j, pj in enumerate(self.cover.data):
            off = self.cover.layout.offsets[j][sort]
            coeffs = {}
            for idx, b in enumerate(pj.local_basis[sort]):
                cc = pre.data[off + idx][0]
                if cc:
                    coeffs[b] = cc
            el = AlgebraElement(alg, coeffs)
            out.append(None if el.is_zero() else el)
        return out

    def relation_rows(self) -> list[tuple[int, list[AlgebraElement | None]]]:
        """Rows H with H(gens) = 0 generating all relations of the
        generators (module generators of the cover kernel)."""
        alg = self.module.algebra
        field = alg.field
        rows = []
        k_rep, ki = kernel(self.cover.cover)
        if k_rep.total_dim:
            ktop, kproj = top(k_rep)
            for s in range(alg.nsorts):
                if ktop.dims[s] == 0:
                    continue
                sec = kproj.blocks[s].solve(Matrix.identity(field, ktop.dims[s]))
                if sec is None:
                    raise DomainError("kernel top has no section (internal error)")
                lifted = ki.blocks[s] * sec
                for col in range(lifted.cols):
                    coeffs = []
                    pre = lifted.col(col)
                    for j, pj in enumerate(self.cover.data):
                        off = self.cover.layout.offsets[j][s]
                        cc = {}
                        for idx, b in enumerate(pj.local_basis[s]):
                            v = pre.data[off + idx][0]
                            if v:
                                cc[b] = v
                        el = AlgebraElement(alg, cc)
                        coeffs.append(None if el.is_zero() else el)
                    rows.append((s, coeffs))
        return rows


def generator_presentation(c: Representation) -> GeneratorPresentation:
    return GeneratorPresentation(c)


def pp_type_generator(c: Representation, vectors: list[tuple[int, Matrix]]) -> PpFormula:
    """A pp formula generating the pp-type of the tuple in c.

    Shape: exists y-bar (H y-bar = 0 and x-bar = Lambda y-bar), where the
    y-bar range over a minimal generating set of c, H presents c on that
    set, and Lambda expresses the tuple over the generators."""
    alg = c.algebra
    pres = generator_presentation(c)
    bound = [(f"y{j}", pres.gen_sorts[j]) for j in range(pres.count)]
    free = [(f"x{k}", sort) for k, (sort, _vec) in enumerate(vectors)]
    rows: list[tuple[int, tuple]] = []
    for k, (sort, vec) in enumerate(vectors):
        if vec.rows != c.dims[sort]:
            raise DomainError("tuple vector has wrong dimension for its sort")
        lam = pres.express(sort, vec)
        entries: list[AlgebraElement | None] = [None] * len(vectors) + [
            None if e is None else -e for e in lam
        ]
        entries[k] = alg.lazy(sort)
        rows.append((sort, tuple(entries)))
    for s, coeffs in pres.relation_rows():
        entries = [None] * len(vectors) + list(coeffs)
        rows.append((s, tuple(entries)))
    return PpFormula(alg, free, bound, rows)


def realisation_solution_span(fr: FreeRealisation, x: Representation) -> Subspace:
    """span{ f applied to the realisation tuple : f in Hom(C, x) }, the
    right-hand side of the free-realisation universal property."""
    alg = fr.module.algebra
    field = alg.field
    sorts = fr.formula.free_sorts
    cols = []
    for f in hom_basis(fr.module, x):
        parts = [f.blocks[s] * vec for s, vec in zip(sorts, fr.vectors)]
        cols.append(vstack(parts) if parts else Matrix.zeros(field, 0, 1))
    ambient = sum(x.dims[s] for s in sorts)
    if cols:
        basis = hstack(cols).column_space_basis()
    else:
        basis = Matrix.zeros(field, ambient, 0)
    return Subspace(sorts, tuple(x.dims[s] for s in sorts), basis)


# ----------------------------------------------------------------------
# Pp-definable natural maps
# ----------------------------------------------------------------------

def pair_value_data(pair: PpPair, cat) -> list[PairValue]:
    """Per catalogue entry: the pair value with its embedding data."""
    return [evaluate_pair(pair, e) for e in cat.entries]


def definable_map_formula(
    p: PpPair, q: PpPair, nat: RepMorphism, cat
) -> PpFormula:
    """A pp formula rho(x-bar, x-bar') defining the natural transformation
    `nat` (an Auslander-algebra module morphism from the functor of p to
    the functor of q): the pp-type generator of the concatenated tuple
    (c-bar, c-bar') where (C, c-bar) freely realises p.phi and c-bar'
    represents the image coset of c-bar under the component of nat at C."""
    fr = free_realisation(p.phi)
    c_mod = fr.module
    dec = decompose(c_mod)
    factors = dec.expanded()
    indices = []
    isos = []
    for f in factors:
        idx = cat.find(f)
        if idx is None:
            raise DomainError("free realisation leaves the catalogue")
        indices.append(idx)
        isos.append(is_isomorphic(f, cat.entries[idx]))
    targets = [cat.entries[i] for i in indices]
    d_total, d_layout = direct_sum_with_layout(cat.algebra, targets)
    sum_layout = direct_sum_with_layout(cat.algebra, factors)[1]
    from .rep import direct_sum_morphism

    w = direct_sum_morphism(
        (dec.sum_rep, sum_layout),
        (d_total, d_layout),
        {(t, t): isos[t] for t in range(len(factors))},
    ).compose(dec.to_sum)
    w_inv = w.inverse()
    p_data = pair_value_data(p, cat)
    q_data = pair_value_data(q, cat)
    field = cat.algebra.field
    p_sorts = p.phi.free_sorts
    q_sorts = q.phi.free_sorts
    # push the tuple into each catalogue summand
    pushed = [w.blocks[s] * vec for s, vec in zip(p_sorts, fr.vectors)]
    out_parts: list[list[Matrix]] = []  # per summand, per q-free-variable
    for t, idx in enumerate(indices):
        n_entry = cat.entries[idx]
        stacked = []
        for vs, vec in zip(p_sorts, pushed):
            off = d_layout.offsets[t][vs]
            stacked.append(
                Matrix(
                    field,
                    n_entry.dims[vs],
                    1,
                    [[vec.data[off + r][0]] for r in range(n_entry.dims[vs])],
                )
            )
        a_vec = vstack(stacked) if stacked else Matrix.zeros(field, 0, 1)
        pv = p_data[idx]
        mixed = hstack([pv.coset_reps, pv.psi_space.basis])
        sol = mixed.solve(a_vec)
        if sol is None:
            raise DomainError("realisation tuple escapes phi (internal error)")
        kappa = Matrix(field, pv.dim, 1, [[sol.data[r][0]] for r in range(pv.dim)])
        kappa2 = nat.blocks[idx] * kappa
        qv = q_data[idx]
        b_vec = qv.coset_reps * kappa2
        parts = []
        roff = 0
        for vs in q_sorts:
            h = n_entry.dims[vs]
            parts.append(Matrix(field, h, 1, [[b_vec.data[roff + r][0]] for r in range(h)]))
            roff += h
        out_parts.append(parts)
    # reassemble per q free variable over the direct sum, pull back through w
    cprime = []
    for l, vs in enumerate(q_sorts):
        vec = Matrix.zeros(field, d_total.dims[vs], 1).copy_data()
        for t in range(len(indices)):
            off = d_layout.offsets[t][vs]
            part = out_parts[t][l]
            for r in range(part.rows):
                vec[off + r][0] = part.data[r][0]
        cprime.append(w_inv.blocks[vs] * Matrix(field, d_total.dims[vs], 1, vec))
    tuple_vectors = [(s, v) for s, v in zip(p_sorts, fr.vectors)] + [
        (s, v) for s, v in zip(q_sorts, cprime)
    ]
    rho = pp_type_generator(c_mod, tuple_vectors)
    names = {}
    for k, v in enumerate(rho.free[: len(p_sorts)]):
        names[v.name] = f"x{k}"
    for k, v in enumerate(rho.free[len(p_sorts) :]):
        names[v.name] = f"x{k}'"
    return rho.renamed(names)


def definable_map_is_total_functional(rho: PpFormula, p: PpPair, q: PpPair, cat) -> bool:
    """Check on every catalogue module that rho defines a total relation
    from phi_p covering its free part, mapping into phi_q, and functional
    modulo psi_q."""
    np_ = len(p.phi.free)
    for m in cat.entries:
        r_space = evaluate(rho, m)
        phi_p = evaluate(p.phi, m)
        psi_p = evaluate(p.psi, m)
        phi_q = evaluate(q.phi, m)
        psi_q = evaluate(q.psi, m)
        first_dim = sum(m.dims[v.sort] for v in rho.free[:np_])
        first = r_space.basis.take_rows(range(first_dim))
        second = r_space.basis.take_rows(range(first_dim, r_space.basis.rows))
        # totality: projection to the first block covers phi_p
        if not span_contains(first, phi_p.basis):
            return False
        # image inside phi_q
        if not span_contains(phi_q.basis, second):
            return False
        # functional modulo psi_q: (0, b) in rho  =>  b in psi_q
        zero_first = first.kernel_basis()
        ambiguous = second * zero_first
        if not span_contains(psi_q.basis, ambiguous):
            return False
        # well-defined on cosets: for a in psi_p pick any paired b; its coset
        # must vanish, i.e. b in psi_q + (values over 0) = psi_q
        if psi_p.dim:
            paired = hstack([first, psi_p.basis]).kernel_basis()
            chosen = second * paired.take_rows(range(r_space.dim))
            if not span_contains(psi_q.basis, chosen):
                return False
    return True
