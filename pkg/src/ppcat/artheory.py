"""Catalogues of indecomposables, irreducible map multiplicities, almost
split sequences, and AR-quiver export for finite-representation-type
algebras.

The catalogue is built by a closure process: seed with projectives,
injectives and simples, then repeatedly apply the AR translates, radical,
top, socle quotient, and kernels/cokernels of all Hom-basis morphisms
between known entries, decomposing and deduplicating after each step,
until nothing new appears (or a bound is hit).  Over a prime field an
independent brute-force oracle enumerates arrow matrices directly, which
certifies closure completeness on bound quivers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field

from .errors import BudgetError, CertificationError, DomainError
from .exactfield import Matrix, hstack
from .quiver import BoundQuiver, StructureAlgebra
from .rep import (
    Representation,
    RepMorphism,
    ar_translate,
    ar_translate_inverse,
    cokernel,
    decompose,
    direct_sum_with_layout,
    expr_in_hom_basis,
    flatten_morphism,
    hom_basis,
    identity_morphism,
    injective,
    is_isomorphic,
    kernel,
    projective,
    radical,
    radical_of_end,
    simple,
    socle,
    top,
    zero_morphism,
)

DEFAULT_MAX_TOTAL_DIM = 24
DEFAULT_MAX_ENTRIES = 64


@dataclass
class Catalogue:
    """Ordered list of pairwise non-isomorphic indecomposables with flags.

    Entries are ordered by (total dimension, dimension vector lex); the
    additive generator is the direct sum of one copy of each entry."""

    algebra: StructureAlgebra
    entries: list[Representation]
    projective_flags: list[bool]
    injective_flags: list[bool]
    simple_flags: list[bool]
    complete: bool
    provenance: str
    _additive_generator: Representation | None = dataclass_field(default=None, repr=False)
    _generator_layout: object | None = dataclass_field(default=None, repr=False)

    def __len__(self):
        return len(self.entries)

    def label(self, i: int) -> str:
        return "(" + ",".join(str(d) for d in self.entries[i].dims) + ")"

    def labels(self) -> list[str]:
        return [self.label(i) for i in range(len(self.entries))]

    def additive_generator(self) -> Representation:
        if self._additive_generator is None:
            total, layout = direct_sum_with_layout(self.algebra, self.entries)
            self._additive_generator = total
            self._generator_layout = layout
        return self._additive_generator

    def generator_layout(self):
        self.additive_generator()
        return self._generator_layout

    def find(self, rep: Representation) -> int | None:
        """Index of the entry isomorphic to rep, or None."""
        for i, e in enumerate(self.entries):
            if e.dims == rep.dims and is_isomorphic(e, rep) is not None:
                return i
        return None

    def dim_vector_multiset(self) -> list[tuple[int, ...]]:
        return sorted(e.dims for e in self.entries)


def _seed_representations(alg: StructureAlgebra) -> list[Representation]:
    seeds = []
    for s in range(alg.nsorts):
        seeds.append(projective(alg, s))
        seeds.append(injective(alg, s))
        seeds.append(simple(alg, s))
    return seeds


def build_catalogue(
    alg: StructureAlgebra,
    max_total_dim: int = DEFAULT_MAX_TOTAL_DIM,
    max_entries: int = DEFAULT_MAX_ENTRIES,
) -> Catalogue:
    """Closure construction of the catalogue of indecomposables.

    Stops at a fixpoint (complete=True) or when a bound would be exceeded
    (complete=False, partial catalogue returned)."""
    known: list[Representation] = []
    truncated = False

    def add(rep: Representation) -> bool:
        nonlocal truncated
        added = False
        if rep.total_dim == 0:
            return False
        for factor in decompose(rep).expanded():
            if factor.total_dim > max_total_dim:
                truncated = True
                continue
            if any(
                e.dims == factor.dims and is_isomorphic(e, factor) is not None
                for e in known
            ):
                continue
            if len(known) >= max_entries:
                truncated = True
                continue
            known.append(factor)
            added = True
        return added

    for seed in _seed_representations(alg):
        add(seed)

    while True:
        changed = False
        snapshot = list(known)
        for x in snapshot:
            changed |= add(ar_translate(x))
            changed |= add(ar_translate_inverse(x))
            rad, _ = radical(x)
            changed |= add(rad)
            t, _ = top(x)
            changed |= add(t)
            _, soc_incl = socle(x)
            soc_quot, _ = cokernel(soc_incl)
            changed |= add(soc_quot)
        for x in snapshot:
            for y in snapshot:
                for f in hom_basis(x, y):
                    k, _ = kernel(f)
                    changed |= add(k)
                    c, _ = cokernel(f)
                    changed |= add(c)
        if truncated or not changed:
            break

    order = sorted(range(len(known)), key=lambda i: (known[i].total_dim, known[i].dims))
    entries = [known[i] for i in order]
    projs = [projective(alg, s) for s in range(alg.nsorts)]
    injs = [injective(alg, s) for s in range(alg.nsorts)]
    pflags, iflags, sflags = [], [], []
    for e in entries:
        pflags.append(any(p.dims == e.dims and is_isomorphic(p, e) is not None for p in projs))
        iflags.append(any(i.dims == e.dims and is_isomorphic(i, e) is not None for i in injs))
        sflags.append(e.total_dim == 1)
    return Catalogue(
        alg,
        entries,
        pflags,
        iflags,
        sflags,
        complete=not truncated,
        provenance="closure-fixpoint" if not truncated else "bounds-exceeded",
    )


# ----------------------------------------------------------------------
# Exhaustive oracle over a prime field
# ----------------------------------------------------------------------

ORACLE_BUDGET = 1 << 22


def exhaustive_catalogue_oracle(
    bq: BoundQuiver,
    dim_bound: int,
    budget: int = ORACLE_BUDGET,
) -> Catalogue:
    """Ground-truth catalogue over F_p by brute force: enumerate all arrow
    matrix tuples for every dimension vector with per-vertex dimension at
    most dim_bound, keep the relation-satisfying ones, decompose, dedup."""
    alg = bq.algebra()
    field = alg.field
    p = field.char
    if p == 0:
        raise DomainError("the exhaustive oracle requires a prime field")
    q = bq.quiver
    nv = len(q.vertices)
    vidx = q.vertex_index
    found: list[Representation] = []

    arrow_basis_index = {}
    for a in q.arrows:
        arrow_basis_index[a.name] = alg.labels.index(a.name)

    def all_matrices(rows, cols):
        if rows * cols == 0:
            yield Matrix.zeros(field, rows, cols)
            return
        for combo in itertools.product(range(p), repeat=rows * cols):
            yield Matrix.from_int_rows(
                field, [list(combo[r * cols : (r + 1) * cols]) for r in range(rows)]
            )

    for dims in itertools.product(range(dim_bound + 1), repeat=nv):
        if sum(dims) == 0:
            continue
        cost = 1
        for a in q.arrows:
            cost *= p ** (dims[vidx[a.target]] * dims[vidx[a.source]])
        if cost > budget:
            raise BudgetError("oracle enumeration budget exceeded")
        choices = [
            list(all_matrices(dims[vidx[a.target]], dims[vidx[a.source]])) for a in q.arrows
        ]
        for assignment in itertools.product(*choices):
            arrow_mats = {a.name: m for a, m in zip(q.arrows, assignment)}
            act = _path_actions(bq, alg, dims, arrow_mats)
            if act is None:
                continue
            try:
                rep = Representation(alg, dims, act)
            except DomainError:
                continue
            for factor in decompose(rep).expanded():
                if not any(
                    e.dims == factor.dims and is_isomorphic(e, factor) is not None
                    for e in found
                ):
                    found.append(factor)

    order = sorted(range(len(found)), key=lambda i: (found[i].total_dim, found[i].dims))
    entries = [found[i] for i in order]
    projs = [projective(alg, s) for s in range(alg.nsorts)]
    injs = [injective(alg, s) for s in range(alg.nsorts)]
    return Catalogue(
        alg,
        entries,
        [any(p_.dims == e.dims and is_isomorphic(p_, e) is not None for p_ in projs) for e in entries],
        [any(i_.dims == e.dims and is_isomorphic(i_, e) is not None for i_ in injs) for e in entries],
        [e.total_dim == 1 for e in entries],
        complete=True,
        provenance=f"exhaustive-oracle(F{p},bound={dim_bound})",
    )


def _path_actions(bq: BoundQuiver, alg, dims, arrow_mats):
    """Action matrices for every basis path from the arrow matrices; None
    when a relation fails."""
    q = bq.quiver
    vidx = q.vertex_index
    field = alg.field
    act = {}
    for i, label in enumerate(alg.labels):
        if alg.is_idempotent_index(i):
            continue
        path = bq.path(label)
        m = None
        for a in reversed(path.arrows):
            am = arrow_mats[a.name]
            m = am if m is None else am * m
        act[i] = m
    # relations: reduce each raw relation and also verify any path that
    # reduces to a combination acts consistently
    for rel in bq.relations:
        sort_s = vidx[rel.source]
        sort_t = vidx[rel.target]
        total = Matrix.zeros(field, dims[sort_t], dims[sort_s])
        for path, c in rel.terms.items():
            m = None
            for a in reversed(path.arrows):
                am = arrow_mats[a.name]
                m = am if m is None else am * m
            total = total + m.scale(c)
        if not total.is_zero():
            return None
    return act


def certify_catalogue(bq: BoundQuiver, cat: Catalogue, dim_bound: int, p: int = 2) -> Catalogue:
    """Cross-check a closure catalogue over any field against the
    exhaustive F_p oracle on the same bound quiver: the dim-vector
    multisets must agree, and over F_p entries must be pairwise
    isomorphic.  Returns a new Catalogue with enriched provenance."""
    from .exactfield import GF

    mod_bq = BoundQuiver(bq.quiver, GF(p), [_rebuild_combo(r, GF(p)) for r in bq.relations])
    closure = build_catalogue(mod_bq.algebra())
    oracle = exhaustive_catalogue_oracle(mod_bq, dim_bound)
    if closure.dim_vector_multiset() != oracle.dim_vector_multiset():
        raise CertificationError("closure and oracle dim-vector multisets differ")
    for e in oracle.entries:
        if closure.find(e) is None:
            raise CertificationError("oracle entry missing from closure catalogue")
    if cat.dim_vector_multiset() != oracle.dim_vector_multiset():
        raise CertificationError("catalogue disagrees with the F_p oracle multiset")
    return Catalogue(
        cat.algebra,
        cat.entries,
        cat.projective_flags,
        cat.injective_flags,
        cat.simple_flags,
        complete=cat.complete,
        provenance=cat.provenance + f"+oracle(F{p},bound={dim_bound})",
    )


def _rebuild_combo(combo, field):
    from fractions import Fraction

    from .quiver import PathCombo

    def convert(c):
        if isinstance(c, Fraction):
            return field.from_int(c.numerator) / field.from_int(c.denominator)
        return field.from_int(getattr(c, "v", c))

    return PathCombo(field, {p: convert(c) for p, c in combo.terms.items()})


# ----------------------------------------------------------------------
# Irreducible maps and almost split sequences
# ----------------------------------------------------------------------

def radical_hom_basis(cat: Catalogue, i: int, j: int) -> list[RepMorphism]:
    """Basis of rad(X_i, X_j): all of Hom for i != j, the radical of the
    endomorphism algebra on the diagonal."""
    if i != j:
        return hom_basis(cat.entries[i], cat.entries[j])
    return radical_of_end(cat.entries[i])


def irreducible_map_data(cat: Catalogue):
    """For each pair (i, j): (count, representative morphisms) where count
    is dim rad(X_i,X_j)/rad^2(X_i,X_j) and the representatives lift a basis
    of the quotient."""
    if not cat.complete:
        raise DomainError("irreducible map counts need a complete catalogue")
    n = len(cat.entries)
    rad = {(i, j): radical_hom_basis(cat, i, j) for i in range(n) for j in range(n)}
    out = {}
    for i in range(n):
        for j in range(n):
            basis = rad[(i, j)]
            if not basis:
                out[(i, j)] = (0, [])
                continue
            sq: list[RepMorphism] = []
            for z in range(n):
                for f in rad[(i, z)]:
                    for g in rad[(z, j)]:
                        sq.append(g.compose(f))
            field = cat.algebra.field
            flat_basis = [flatten_morphism(b) for b in basis]
            nflat = len(flat_basis[0])
            basis_mat = Matrix(field, nflat, len(basis), [[col[r] for col in flat_basis] for r in range(nflat)])
            sq_coords = []
            for s in sq:
                coords = expr_in_hom_basis(basis, s)
                if coords is None:
                    raise DomainError("rad^2 escaped rad (internal error)")
                sq_coords.append(coords)
            if sq_coords:
                sq_mat = Matrix(field, len(basis), len(sq_coords), [[c[r] for c in sq_coords] for r in range(len(basis))])
                sq_basis = sq_mat.column_space_basis()
            else:
                sq_mat = Matrix.zeros(field, len(basis), 0)
                sq_basis = sq_mat
            count = len(basis) - sq_basis.cols
            reps = []
            if count:
                ident = Matrix.identity(field, len(basis))
                from .exactfield import extend_to_basis

                lifted = extend_to_basis(sq_basis, ident)
                for c in range(lifted.cols):
                    vec = lifted.column_vector(c)
                    f = zero_morphism(cat.entries[i], cat.entries[j])
                    for coeff, b in zip(vec, basis):
                        if coeff:
                            f = f + b.scale(coeff)
                    reps.append(f)
            out[(i, j)] = (count, reps)
    return out


def irreducible_map_counts(cat: Catalogue) -> list[list[int]]:
    """Matrix of dim rad(X,Y)/rad^2(X,Y) over the catalogue."""
    data = irreducible_map_data(cat)
    n = len(cat.entries)
    return [[data[(i, j)][0] for j in range(n)] for i in range(n)]


@dataclass
class ArSequence:
    """Almost split sequence 0 -> left -> middle -> right -> 0 with an
    explicit exact, non-split witness; left is isomorphic to the AR
    translate of right."""

    left: int
    middle: list[int]
    right: int
    left_map: RepMorphism
    right_map: RepMorphism


def ar_sequences(cat: Catalogue) -> list[ArSequence]:
    """One almost split sequence per non-projective catalogue entry, built
    from irreducible-map representatives and verified exact and non-split."""
    if not cat.complete:
        raise DomainError("almost split sequences need a complete catalogue")
    data = irreducible_map_data(cat)
    n = len(cat.entries)
    out = []
    for c_idx in range(n):
        if cat.projective_flags[c_idx]:
            continue
        c_rep = cat.entries[c_idx]
        tau_c = ar_translate(c_rep)
        middle_parts: list[Representation] = []
        middle_indices: list[int] = []
        comps: list[RepMorphism] = []
        for z in range(n):
            count, reps = data[(z, c_idx)]
            for f in reps:
                middle_parts.append(cat.entries[z])
                middle_indices.append(z)
                comps.append(f)
        mid, layout = direct_sum_with_layout(cat.algebra, middle_parts)
        blocks = []
        for s in range(cat.algebra.nsorts):
            cols = [f.blocks[s] for f in comps]
            blocks.append(
                hstack(cols) if cols else Matrix.zeros(cat.algebra.field, c_rep.dims[s], 0)
            )
        g = RepMorphism(mid, c_rep, blocks)
        if not g.is_epi():
            raise CertificationError("almost split right map is not epi")
        k, ki = kernel(g)
        phi = is_isomorphic(tau_c, k)
        if phi is None:
            raise CertificationError(
                "kernel of the almost split map is not the AR translate "
                "(catalogue completeness bug)"
            )
        left_map = ki.compose(phi)
        if not left_map.is_mono():
            raise CertificationError("almost split left map is not mono")
        if not g.compose(left_map).is_zero():
            raise CertificationError("almost split composition not zero")
        if tau_c.total_dim + c_rep.total_dim != mid.total_dim:
            raise CertificationError("almost split dimension count fails")
        if _has_section(g):
            raise CertificationError("almost split sequence splits")
        out.append(ArSequence(cat.find(tau_c), sorted(middle_indices), c_idx, left_map, g))
    return out


def _has_section(g: RepMorphism) -> bool:
    """Does the epi g: M -> C admit a section (solves g∘s = id_C)?"""
    candidates = hom_basis(g.target, g.source)
    if not candidates:
        return g.target.total_dim == 0
    composed = [g.compose(s) for s in candidates]
    target_id = identity_morphism(g.target)
    return expr_in_hom_basis(composed, target_id) is not None


# ----------------------------------------------------------------------
# DOT export
# ----------------------------------------------------------------------

def export_ar_quiver(cat: Catalogue, sequences: list[ArSequence] | None = None) -> str:
    """Deterministic DOT text: solid arrows with irreducible-map
    multiplicities, dotted arrows for the AR translate of each almost
    split sequence."""
    counts = irreducible_map_counts(cat) if cat.complete and cat.entries else []
    if sequences is None and cat.complete and cat.entries:
        sequences = ar_sequences(cat)
    sequences = sequences or []
    n = len(cat.entries)
    arrow_total = sum(counts[i][j] for i in range(n) for j in range(n)) if counts else 0
    lines = [
        "digraph ar_quiver {",
        f"  // {n} indecomposables, {arrow_total} arrows, {len(sequences)} AR sequences",
        f"  // catalogue: {cat.provenance}" + ("" if cat.complete else " (INCOMPLETE)"),
        "  rankdir=LR;",
    ]
    for i in range(n):
        flags = []
        if cat.projective_flags[i]:
            flags.append("P")
        if cat.injective_flags[i]:
            flags.append("I")
        if cat.simple_flags[i]:
            flags.append("S")
        suffix = (" " + "".join(flags)) if flags else ""
        lines.append(f'  n{i} [label="{cat.label(i)}{suffix}"];')
    for i in range(n):
        for j in range(n):
            if counts and counts[i][j]:
                for _ in range(counts[i][j]):
                    lines.append(f"  n{i} -> n{j};")
    for seq in sequences:
        lines.append(f"  n{seq.right} -> n{seq.left} [style=dotted, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
