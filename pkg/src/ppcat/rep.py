"""Finite-dimensional modules over a StructureAlgebra.

A representation stores one vector space dimension per sort (idempotent)
and one exact matrix per non-idempotent basis element of the algebra;
idempotents act as the block projections for free.  Morphisms are one
matrix per sort, satisfying every commuting square exactly.  Everything
is immutable and every operation is pure.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import BudgetError, CertificationError, DomainError
from .exactfield import Matrix, extend_to_basis, hstack, vstack
from .quiver import AlgebraElement, StructureAlgebra


class Representation:
    """A left module over a StructureAlgebra in per-sort block form.

    `dims[s]` is the dimension at sort s and `act[i]` the matrix of basis
    element i (shape dims[target[i]] x dims[source[i]]); entries for
    idempotent indices are None and materialize as identity blocks.
    Construction asserts that the action respects the multiplication
    table exactly.
    """

    __slots__ = ("algebra", "dims", "act", "total_dim")

    def __init__(self, algebra: StructureAlgebra, dims, act, validate: bool = True):
        self.algebra = algebra
        self.dims = tuple(dims)
        if len(self.dims) != algebra.nsorts or any(d < 0 for d in self.dims):
            raise DomainError("bad dimension vector")
        store: list[Matrix | None] = [None] * algebra.dim
        for i in range(algebra.dim):
            if algebra.is_idempotent_index(i):
                continue
            m = act[i] if isinstance(act, (list, tuple)) else act.get(i)
            r, c = self.dims[algebra.target[i]], self.dims[algebra.source[i]]
            if m is None:
                m = Matrix.zeros(algebra.field, r, c)
            if (m.rows, m.cols) != (r, c):
                raise DomainError(f"action matrix for {algebra.labels[i]} has wrong shape")
            store[i] = m
        self.act = store
        self.total_dim = sum(self.dims)
        if validate:
            self._validate()

    def action(self, i: int) -> Matrix:
        m = self.act[i]
        if m is None:
            return Matrix.identity(self.algebra.field, self.dims[self.algebra.source[i]])
        return m

    def act_element(self, el: AlgebraElement, source_sort: int, target_sort: int) -> Matrix:
        """Matrix of a general algebra element between the stated sorts."""
        alg = self.algebra
        out = Matrix.zeros(alg.field, self.dims[target_sort], self.dims[source_sort])
        for i, c in el.coeffs.items():
            if alg.source[i] != source_sort or alg.target[i] != target_sort:
                raise DomainError("element sorts do not match the requested block")
            out = out + self.action(i).scale(c)
        return out

    def _validate(self):
        alg = self.algebra
        for i in range(alg.dim):
            if alg.is_idempotent_index(i):
                continue
            ai = self.act[i]
            for j in range(alg.dim):
                if alg.is_idempotent_index(j) or alg.source[i] != alg.target[j]:
                    continue
                prod = ai * self.act[j]
                expected = Matrix.zeros(alg.field, prod.rows, prod.cols)
                for k, c in alg.product_indices(i, j).items():
                    expected = expected + self.action(k).scale(c)
                if prod != expected:
                    raise DomainError(
                        f"action violates the relation {alg.labels[i]} * {alg.labels[j]}"
                    )

    def __repr__(self):
        return f"Rep{self.dims}"


class RepMorphism:
    """Morphism of representations: one matrix per sort, with every
    naturality square checked exactly on construction."""

    __slots__ = ("source", "target", "blocks")

    def __init__(self, source: Representation, target: Representation, blocks, validate=True):
        if source.algebra is not target.algebra:
            raise DomainError("morphism between different algebras")
        self.source = source
        self.target = target
        self.blocks = tuple(blocks)
        if len(self.blocks) != source.algebra.nsorts:
            raise DomainError("one block per sort required")
        for s, b in enumerate(self.blocks):
            if (b.rows, b.cols) != (target.dims[s], source.dims[s]):
                raise DomainError(f"block {s} has wrong shape")
        if validate:
            alg = source.algebra
            for i in range(alg.dim):
                if alg.is_idempotent_index(i):
                    continue
                s, t = alg.source[i], alg.target[i]
                if self.blocks[t] * source.act[i] != target.act[i] * self.blocks[s]:
                    raise DomainError(f"naturality fails at {alg.labels[i]}")

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        """self after other."""
        if other.target is not self.source and other.target.dims != self.source.dims:
            raise DomainError("composition mismatch")
        return RepMorphism(
            other.source,
            self.target,
            [a * b for a, b in zip(self.blocks, other.blocks)],
            validate=False,
        )

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(
            self.source,
            self.target,
            [a + b for a, b in zip(self.blocks, other.blocks)],
            validate=False,
        )

    def __sub__(self, other: "RepMorphism") -> "RepMorphism":
        return RepMorphism(
            self.source,
            self.target,
            [a - b for a, b in zip(self.blocks, other.blocks)],
            validate=False,
        )

    def scale(self, c) -> "RepMorphism":
        return RepMorphism(self.source, self.target, [b.scale(c) for b in self.blocks], validate=False)

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def is_mono(self) -> bool:
        return all(b.rank() == b.cols for b in self.blocks)

    def is_epi(self) -> bool:
        return all(b.rank() == b.rows for b in self.blocks)

    def is_iso(self) -> bool:
        return all(b.rows == b.cols for b in self.blocks) and self.is_mono()

    def inverse(self) -> "RepMorphism":
        inv = []
        for b in self.blocks:
            bi = b.inverse()
            if bi is None:
                raise DomainError("morphism is not invertible")
            inv.append(bi)
        return RepMorphism(self.target, self.source, inv, validate=False)

    def power(self, n: int) -> "RepMorphism":
        out = identity_morphism(self.source)
        for _ in range(n):
            out = self.compose(out)
        return out

    def __repr__(self):
        return f"RepMorphism{self.source.dims}->{self.target.dims}"


def zero_representation(algebra: StructureAlgebra) -> Representation:
    return Representation(algebra, [0] * algebra.nsorts, {}, validate=False)


def identity_morphism(x: Representation) -> RepMorphism:
    return RepMorphism(
        x, x, [Matrix.identity(x.algebra.field, d) for d in x.dims], validate=False
    )


def zero_morphism(x: Representation, y: Representation) -> RepMorphism:
    return RepMorphism(
        x,
        y,
        [Matrix.zeros(x.algebra.field, dy, dx) for dx, dy in zip(x.dims, y.dims)],
        validate=False,
    )


@dataclass
class SumLayout:
    """Column offsets of each summand inside a direct sum, per sort."""

    summands: list[Representation]
    offsets: list[list[int]]  # offsets[k][s]

    def injection(self, total: Representation, k: int) -> RepMorphism:
        field = total.algebra.field
        blocks = []
        for s in range(total.algebra.nsorts):
            m = Matrix.zeros(field, total.dims[s], self.summands[k].dims[s]).copy_data()
            off = self.offsets[k][s]
            for i in range(self.summands[k].dims[s]):
                m[off + i][i] = field.one()
            blocks.append(Matrix(field, total.dims[s], self.summands[k].dims[s], m))
        return RepMorphism(self.summands[k], total, blocks, validate=False)

    def projection(self, total: Representation, k: int) -> RepMorphism:
        field = total.algebra.field
        blocks = []
        for s in range(total.algebra.nsorts):
            m = Matrix.zeros(field, self.summands[k].dims[s], total.dims[s]).copy_data()
            off = self.offsets[k][s]
            for i in range(self.summands[k].dims[s]):
                m[i][off + i] = field.one()
            blocks.append(Matrix(field, self.summands[k].dims[s], total.dims[s], m))
        return RepMorphism(total, self.summands[k], blocks, validate=False)


def direct_sum_with_layout(algebra: StructureAlgebra, xs) -> tuple[Representation, SumLayout]:
    xs = list(xs)
    for x in xs:
        if x.algebra is not algebra:
            raise DomainError("direct sum across different algebras")
    nsorts = algebra.nsorts
    dims = [sum(x.dims[s] for x in xs) for s in range(nsorts)]
    offsets = []
    running = [0] * nsorts
    for x in xs:
        offsets.append(list(running))
        for s in range(nsorts):
            running[s] += x.dims[s]
    act = {}
    for i in range(algebra.dim):
        if algebra.is_idempotent_index(i):
            continue
        s, t = algebra.source[i], algebra.target[i]
        m = Matrix.zeros(algebra.field, dims[t], dims[s]).copy_data()
        for k, x in enumerate(xs):
            b = x.act[i]
            ro, co = offsets[k][t], offsets[k][s]
            for r in range(b.rows):
                m[ro + r][co : co + b.cols] = list(b.data[r])
        act[i] = Matrix(algebra.field, dims[t], dims[s], m)
    total = Representation(algebra, dims, act, validate=False)
    return total, SumLayout(xs, offsets)


def direct_sum(xs: list[Representation], algebra: StructureAlgebra | None = None) -> Representation:
    """Blockwise direct sum; dims add.  The empty sum needs the algebra."""
    if not xs:
        if algebra is None:
            raise DomainError("empty direct sum needs an explicit algebra")
        return zero_representation(algebra)
    return direct_sum_with_layout(xs[0].algebra, xs)[0]


def direct_sum_morphism(
    total_src: tuple[Representation, SumLayout],
    total_tgt: tuple[Representation, SumLayout],
    components,
) -> RepMorphism:
    """Assemble a morphism between direct sums from a component grid;
    components[(k_tgt, k_src)] maps src summand k_src to tgt summand k_tgt."""
    src, src_layout = total_src
    tgt, tgt_layout = total_tgt
    field = src.algebra.field
    blocks = []
    for s in range(src.algebra.nsorts):
        m = Matrix.zeros(field, tgt.dims[s], src.dims[s]).copy_data()
        for (kt, ks), f in components.items():
            b = f.blocks[s]
            ro, co = tgt_layout.offsets[kt][s], src_layout.offsets[ks][s]
            for r in range(b.rows):
                row = m[ro + r]
                for c in range(b.cols):
                    row[co + c] = b.data[r][c]
        blocks.append(Matrix(field, tgt.dims[s], src.dims[s], m))
    return RepMorphism(src, tgt, blocks)


# ----------------------------------------------------------------------
# Hom spaces
# ----------------------------------------------------------------------

def hom_basis(x: Representation, y: Representation) -> list[RepMorphism]:
    """A deterministic basis of Hom(x, y): solutions of the commuting
    square system for every non-idempotent basis element."""
    if x.algebra is not y.algebra:
        raise DomainError("hom between different algebras")
    alg = x.algebra
    field = alg.field
    nsorts = alg.nsorts
    offs = []
    n_unk = 0
    for s in range(nsorts):
        offs.append(n_unk)
        n_unk += y.dims[s] * x.dims[s]
    if n_unk == 0:
        return []
    rows: list[list] = []
    zero = field.zero()
    for b in range(alg.dim):
        if alg.is_idempotent_index(b):
            continue
        s, t = alg.source[b], alg.target[b]
        A = x.act[b]  # x_s -> x_t
        B = y.act[b]  # y_s -> y_t
        # f_t * A - B * f_s = 0, one equation per (i, j)
        for i in range(y.dims[t]):
            for j in range(x.dims[s]):
                row = [zero] * n_unk
                for k in range(x.dims[t]):
                    c = A.data[k][j]
                    if c:
                        row[offs[t] + i * x.dims[t] + k] = row[offs[t] + i * x.dims[t] + k] + c
                for k in range(y.dims[s]):
                    c = B.data[i][k]
                    if c:
                        row[offs[s] + k * x.dims[s] + j] = row[offs[s] + k * x.dims[s] + j] - c
                if any(row):
                    rows.append(row)
    if rows:
        ker = Matrix(field, len(rows), n_unk, rows).kernel_basis()
    else:
        ker = Matrix.identity(field, n_unk)
    out = []
    for c in range(ker.cols):
        vec = ker.column_vector(c)
        blocks = []
        for s in range(nsorts):
            d = [
                vec[offs[s] + i * x.dims[s] : offs[s] + (i + 1) * x.dims[s]]
                for i in range(y.dims[s])
            ]
            blocks.append(Matrix(field, y.dims[s], x.dims[s], d))
        out.append(RepMorphism(x, y, blocks, validate=False))
    return out


def flatten_morphism(f: RepMorphism) -> list:
    out = []
    for b in f.blocks:
        for row in b.data:
            out.extend(row)
    return out


def expr_in_hom_basis(basis: list[RepMorphism], f: RepMorphism) -> list | None:
    """Coefficients of f over a hom basis, or None if outside the span."""
    field = f.source.algebra.field
    if not basis:
        return [] if f.is_zero() else None
    cols = [flatten_morphism(b) for b in basis]
    n = len(cols[0])
    mat = Matrix(field, n, len(cols), [[c[i] for c in cols] for i in range(n)])
    rhs = Matrix.column(field, flatten_morphism(f))
    sol = mat.solve(rhs)
    return None if sol is None else sol.column_vector(0)


# ----------------------------------------------------------------------
# Kernels, cokernels, images
# ----------------------------------------------------------------------

def kernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    """Kernel subrepresentation and its (monic) inclusion."""
    alg = f.source.algebra
    kb = [f.blocks[s].kernel_basis() for s in range(alg.nsorts)]
    dims = [k.cols for k in kb]
    act = {}
    for i in range(alg.dim):
        if alg.is_idempotent_index(i):
            continue
        s, t = alg.source[i], alg.target[i]
        restricted = kb[t].solve(f.source.act[i] * kb[s])
        if restricted is None:
            raise DomainError("kernel is not a subrepresentation (internal error)")
        act[i] = restricted
    k = Representation(alg, dims, act, validate=False)
    incl = RepMorphism(k, f.source, kb)
    return k, incl


def _complement_projection(field, image_basis: Matrix, dim: int):
    """(projection, section) with kernel exactly the image span."""
    ident = Matrix.identity(field, dim)
    extra = extend_to_basis(image_basis, ident)
    e = hstack([image_basis, extra])
    einv = e.inverse()
    if einv is None:
        raise DomainError("complement construction failed")
    proj = einv.take_rows(range(image_basis.cols, dim))
    return proj, extra


def cokernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    """Cokernel representation and its (epic) projection."""
    alg = f.source.algebra
    field = alg.field
    projs, sections = [], []
    for s in range(alg.nsorts):
        w = f.blocks[s].column_space_basis()
        p, sec = _complement_projection(field, w, f.target.dims[s])
        projs.append(p)
        sections.append(sec)
    dims = [p.rows for p in projs]
    act = {}
    for i in range(alg.dim):
        if alg.is_idempotent_index(i):
            continue
        s, t = alg.source[i], alg.target[i]
        act[i] = projs[t] * f.target.act[i] * sections[s]
    c = Representation(alg, dims, act, validate=False)
    proj = RepMorphism(f.target, c, projs)
    return c, proj


def induced_on_cokernels(
    m: RepMorphism, q_src: RepMorphism, q_tgt: RepMorphism
) -> RepMorphism:
    """Given epis q_src: X -> C and q_tgt: X' -> C' and m: X -> X' with
    m(ker q_src) inside ker q_tgt, the unique map C -> C' commuting with
    the projections (verified exactly)."""
    field = m.source.algebra.field
    blocks = []
    for s in range(m.source.algebra.nsorts):
        section = q_src.blocks[s].solve(Matrix.identity(field, q_src.target.dims[s]))
        if section is None:
            raise DomainError("projection has no section")
        blocks.append(q_tgt.blocks[s] * m.blocks[s] * section)
    ind = RepMorphism(q_src.target, q_tgt.target, blocks)
    for s in range(m.source.algebra.nsorts):
        if ind.blocks[s] * q_src.blocks[s] != q_tgt.blocks[s] * m.blocks[s]:
            raise DomainError("map does not descend to the cokernels")
    return ind


def image(f: RepMorphism) -> tuple[Representation, RepMorphism, RepMorphism]:
    """Image subrepresentation with its factorization: returns
    (im, inclusion im->target, epi source->im) and incl∘epi == f."""
    alg = f.source.algebra
    bases = [f.blocks[s].column_space_basis() for s in range(alg.nsorts)]
    dims = [b.cols for b in bases]
    act = {}
    for i in range(alg.dim):
        if alg.is_idempotent_index(i):
            continue
        s, t = alg.source[i], alg.target[i]
        restricted = bases[t].solve(f.target.act[i] * bases[s])
        if restricted is None:
            raise DomainError("image is not a subrepresentation (internal error)")
        act[i] = restricted
    im = Representation(alg, dims, act, validate=False)
    incl = RepMorphism(im, f.target, bases)
    epi_blocks = []
    for s in range(alg.nsorts):
        g = bases[s].solve(f.blocks[s])
        if g is None:
            raise DomainError("image factorization failed")
        epi_blocks.append(g)
    epi = RepMorphism(f.source, im, epi_blocks)
    return im, incl, epi


def subrepresentation(x: Representation, bases: list[Matrix]) -> tuple[Representation, RepMorphism]:
    """Subrepresentation spanned by independent, action-closed column bases
    (one matrix per sort), with its inclusion."""
    alg = x.algebra
    act = {}
    for i in range(alg.dim):
        if alg.is_idempotent_index(i):
            continue
        s, t = alg.source[i], alg.target[i]
        restricted = bases[t].solve(x.act[i] * bases[s])
        if restricted is None:
            raise DomainError("column bases are not action-closed")
        act[i] = restricted
    sub = Representation(alg, [b.cols for b in bases], act, validate=False)
    return sub, RepMorphism(sub, x, bases)


def quotient_representation(x: Representation, bases: list[Matrix]) -> tuple[Representation, RepMorphism]:
    """Quotient of x by the action-closed subspace spanned per sort, with
    its projection."""
    sub, incl = subrepresentation(x, bases)
    return cokernel(incl)


# ----------------------------------------------------------------------
# Radical series (for algebras whose radical is spanned by the
# non-idempotent basis elements)
# ----------------------------------------------------------------------

def radical(x: Representation) -> tuple[Representation, RepMorphism]:
    """rad(x) = sum of the images of all radical basis actions."""
    alg = x.algebra
    field = alg.field
    rad_idx = alg.radical_indices()
    bases = []
    for s in range(alg.nsorts):
        cols = [x.act[i] for i in rad_idx if alg.target[i] == s]
        if cols:
            stacked = hstack(cols + [Matrix.zeros(field, x.dims[s], 0)])
            bases.append(stacked.column_space_basis())
        else:
            bases.append(Matrix.zeros(field, x.dims[s], 0))
    dims = [b.cols for b in bases]
    act = {}
    for i in range(alg.dim):
        if alg.is_idempotent_index(i):
            continue
        s, t = alg.source[i], alg.target[i]
        restricted = bases[t].solve(x.act[i] * bases[s])
        if restricted is None:
            raise DomainError("radical is not a subrepresentation (internal error)")
        act[i] = restricted
    r = Representation(alg, dims, act, validate=False)
    return r, RepMorphism(r, x, bases)


def top(x: Representation) -> tuple[Representation, RepMorphism]:
    """x modulo its radical, with the projection."""
    _, incl = radical(x)
    return cokernel(incl)


def socle(x: Representation) -> tuple[Representation, RepMorphism]:
    """Joint kernel of all radical basis actions."""
    alg = x.algebra
    field = alg.field
    rad_idx = alg.radical_indices()
    bases = []
    for s in range(alg.nsorts):
        mats = [x.act[i] for i in rad_idx if alg.source[i] == s]
        if mats:
            bases.append(vstack(mats).kernel_basis())
        else:
            bases.append(Matrix.identity(field, x.dims[s]))
    dims = [b.cols for b in bases]
    act = {}
    for i in range(alg.dim):
        if alg.is_idempotent_index(i):
            continue
        s, t = alg.source[i], alg.target[i]
        restricted = bases[t].solve(x.act[i] * bases[s])
        if restricted is None:
            raise DomainError("socle is not a subrepresentation (internal error)")
        act[i] = restricted
    r = Representation(alg, dims, act, validate=False)
    return r, RepMorphism(r, x, bases)


# ----------------------------------------------------------------------
# Projectives, injectives, simples
# ----------------------------------------------------------------------

@dataclass
class ProjectiveData:
    rep: Representation
    sort: int
    local_basis: list[list[int]]  # per sort, the global basis indices
    gen_sort: int
    gen_pos: int  # position of the idempotent generator inside its sort block


def projective_with_data(alg: StructureAlgebra, sort: int) -> ProjectiveData:
    """The indecomposable projective A·e_sort with bookkeeping."""
    field = alg.field
    local = [[] for _ in range(alg.nsorts)]
    for i in range(alg.dim):
        if alg.source[i] == sort:
            local[alg.target[i]].append(i)
    pos = {}
    for s in range(alg.nsorts):
        for idx, g in enumerate(local[s]):
            pos[g] = idx
    dims = [len(local[s]) for s in range(alg.nsorts)]
    act = {}
    for b in range(alg.dim):
        if alg.is_idempotent_index(b):
            continue
        s, t = alg.source[b], alg.target[b]
        m = Matrix.zeros(field, dims[t], dims[s]).copy_data()
        for j, y in enumerate(local[s]):
            for k, c in alg.product_indices(b, y).items():
                m[pos[k]][j] = c
        act[b] = Matrix(field, dims[t], dims[s], m)
    rep = Representation(alg, dims, act, validate=False)
    e = alg.idempotent_index[sort]
    return ProjectiveData(rep, sort, local, sort, pos[e])


def projective(alg: StructureAlgebra, sort: int) -> Representation:
    if not (0 <= sort < alg.nsorts):
        raise DomainError("unknown sort")
    return projective_with_data(alg, sort).rep


def injective(alg: StructureAlgebra, sort: int) -> Representation:
    """K-dual of the opposite-side projective at the sort."""
    if not (0 <= sort < alg.nsorts):
        raise DomainError("unknown sort")
    field = alg.field
    local = [[] for _ in range(alg.nsorts)]
    for i in range(alg.dim):
        if alg.target[i] == sort:
            local[alg.source[i]].append(i)
    pos = {}
    for s in range(alg.nsorts):
        for idx, g in enumerate(local[s]):
            pos[g] = idx
    dims = [len(local[s]) for s in range(alg.nsorts)]
    act = {}
    for a in range(alg.dim):
        if alg.is_idempotent_index(a):
            continue
        s, t = alg.source[a], alg.target[a]
        m = Matrix.zeros(field, dims[t], dims[s]).copy_data()
        # (a . y*)(z) = y*(z a): matrix entry [w, y] = coeff of y in w*a
        for w_idx, w in enumerate(local[t]):
            for y, c in alg.product_indices(w, a).items():
                if alg.source[y] == s:
                    m[w_idx][pos[y]] = c
        act[a] = Matrix(field, dims[t], dims[s], m)
    return Representation(alg, dims, act)


def simple(alg: StructureAlgebra, sort: int) -> Representation:
    """One-dimensional representation concentrated at the sort (radical
    basis elements act as zero; requires a recorded radical)."""
    if not (0 <= sort < alg.nsorts):
        raise DomainError("unknown sort")
    alg.radical_indices()  # raises when the radical is unknown
    dims = [1 if s == sort else 0 for s in range(alg.nsorts)]
    return Representation(alg, dims, {})


# ----------------------------------------------------------------------
# Minimal projective presentations
# ----------------------------------------------------------------------

@dataclass
class ProjCover:
    total: Representation
    layout: SumLayout
    data: list[ProjectiveData]
    cover: RepMorphism  # total -> x, epi


@dataclass
class ProjPresentation:
    """P1 --d1--> P0 --d0--> x -> 0 with both covers minimal."""

    x: Representation
    p0: ProjCover
    p1: ProjCover
    d1: RepMorphism  # p1.total -> p0.total


def projective_cover(x: Representation) -> ProjCover:
    alg = x.algebra
    field = alg.field
    t, proj = top(x)
    summands: list[ProjectiveData] = []
    lifts: list[tuple[int, Matrix]] = []
    for s in range(alg.nsorts):
        if t.dims[s] == 0:
            continue
        sec = proj.blocks[s].solve(Matrix.identity(field, t.dims[s]))
        if sec is None:
            raise DomainError("top projection has no section (internal error)")
        for j in range(t.dims[s]):
            summands.append(projective_with_data(alg, s))
            lifts.append((s, sec.col(j)))
    total, layout = direct_sum_with_layout(alg, [p.rep for p in summands])
    blocks = []
    for s in range(alg.nsorts):
        cols: list[Matrix] = []
        for (gsort, xi), pdata in zip(lifts, summands):
            local = pdata.local_basis[s]
            if local:
                mats = []
                for w in local:
                    mats.append(x.action(w) * xi)
                cols.append(hstack(mats))
            else:
                cols.append(Matrix.zeros(field, x.dims[s], 0))
        blocks.append(hstack(cols) if cols else Matrix.zeros(field, x.dims[s], 0))
    cover = RepMorphism(total, x, blocks)
    if not cover.is_epi():
        raise DomainError("projective cover is not epi (internal error)")
    return ProjCover(total, layout, summands, cover)


def minimal_projective_presentation(x: Representation) -> ProjPresentation:
    p0 = projective_cover(x)
    k, ki = kernel(p0.cover)
    p1 = projective_cover(k)
    d1 = ki.compose(p1.cover)
    return ProjPresentation(x, p0, p1, d1)


# ----------------------------------------------------------------------
# Duality, transpose, AR translates
# ----------------------------------------------------------------------

def dual(x: Representation) -> Representation:
    """K-dual as a representation of the opposite algebra."""
    op = x.algebra.opposite()
    act = {}
    for i in range(op.dim):
        if op.is_idempotent_index(i):
            continue
        act[i] = x.act[i].transpose()
    return Representation(op, x.dims, act)


def dual_morphism(f: RepMorphism, dual_src: Representation, dual_tgt: Representation) -> RepMorphism:
    """The dual of f: D(target) -> D(source)."""
    return RepMorphism(dual_tgt, dual_src, [b.transpose() for b in f.blocks])


def _presentation_connecting_elements(pres: ProjPresentation) -> dict[tuple[int, int], AlgebraElement]:
    """The algebra elements a_kl with d1 = right multiplication by (a_kl):
    component from P1 summand k into P0 summand l."""
    alg = pres.x.algebra
    out: dict[tuple[int, int], AlgebraElement] = {}
    for k, pk in enumerate(pres.p1.data):
        gs = pk.gen_sort
        col = pres.p1.layout.offsets[k][gs] + pk.gen_pos
        img = pres.d1.blocks[gs].col(col)
        for l, pl in enumerate(pres.p0.data):
            coeffs = {}
            off = pres.p0.layout.offsets[l][gs]
            for idx, g in enumerate(pl.local_basis[gs]):
                c = img.data[off + idx][0]
                if c:
                    coeffs[g] = c
            out[(k, l)] = AlgebraElement(alg, coeffs)
    return out


def _left_multiplication_map(
    alg: StructureAlgebra, a: AlgebraElement, src_proj: ProjectiveData, tgt_proj: ProjectiveData
) -> RepMorphism | None:
    """Over the opposite algebra: the map e_v A -> e_w A, y -> a*y, where
    src_proj/tgt_proj are opposite-algebra projectives at v and w."""
    op = alg.opposite()
    field = alg.field
    blocks = []
    for s in range(alg.nsorts):
        dom = src_proj.local_basis[s]
        cod = tgt_proj.local_basis[s]
        cpos = {g: i for i, g in enumerate(cod)}
        m = Matrix.zeros(field, len(cod), len(dom)).copy_data()
        for j, z in enumerate(dom):
            for i, c in a.coeffs.items():
                for kk, ck in alg.product_indices(i, z).items():
                    m[cpos[kk]][j] = m[cpos[kk]][j] + c * ck
        blocks.append(Matrix(field, len(cod), len(dom), m))
    return RepMorphism(src_proj.rep, tgt_proj.rep, blocks)


def transpose(x: Representation) -> Representation:
    """Cokernel of the presentation map under Hom(-, algebra); a module
    over the opposite algebra."""
    alg = x.algebra
    op = alg.opposite()
    pres = minimal_projective_presentation(x)
    elems = _presentation_connecting_elements(pres)
    p0_op = [projective_with_data(op, p.sort) for p in pres.p0.data]
    p1_op = [projective_with_data(op, p.sort) for p in pres.p1.data]
    src, src_layout = direct_sum_with_layout(op, [p.rep for p in p0_op])
    tgt, tgt_layout = direct_sum_with_layout(op, [p.rep for p in p1_op])
    components = {}
    for (k, l), a in elems.items():
        if a.is_zero():
            continue
        components[(k, l)] = _left_multiplication_map(alg, a, p0_op[l], p1_op[k])
    t = direct_sum_morphism((src, src_layout), (tgt, tgt_layout), components)
    c, _ = cokernel(t)
    return c


def ar_translate(x: Representation) -> Representation:
    """tau = D Tr, computed from a minimal projective presentation;
    projective summands contribute nothing."""
    return dual(transpose(x))


def ar_translate_inverse(x: Representation) -> Representation:
    """tau^- = Tr D; injective summands contribute nothing."""
    return transpose(dual(x))


# ----------------------------------------------------------------------
# Endomorphism-algebra analysis: radical, locality
# ----------------------------------------------------------------------

LOCALITY_ENUMERATION_BUDGET = 1 << 16


def _end_structure_constants(endo: list[RepMorphism]):
    """Multiplication constants of End(x) in the given basis."""
    consts = []
    for f in endo:
        row = []
        for g in endo:
            coeffs = expr_in_hom_basis(endo, f.compose(g))
            if coeffs is None:
                raise DomainError("endomorphism basis is not closed under composition")
            row.append(coeffs)
        consts.append(row)
    return consts


def _left_mult_matrices(field, consts, m):
    mats = []
    for i in range(m):
        data = [[consts[i][j][k] for j in range(m)] for k in range(m)]
        mats.append(Matrix(field, m, m, data))
    return mats


def _is_nilpotent(f: RepMorphism) -> bool:
    n = f.source.total_dim
    return f.power(n).is_zero()


def radical_of_end(x: Representation, endo: list[RepMorphism] | None = None) -> list[RepMorphism]:
    """A basis of rad End(x) for x with split local endomorphism algebra.

    Over the rationals this uses the characteristic-zero trace-form
    criterion; over a prime field all linear combinations are enumerated
    (within a budget).  Raises CertificationError when End(x) is not
    split local."""
    if endo is None:
        endo = hom_basis(x, x)
    field = x.algebra.field
    m = len(endo)
    if m == 0:
        return []
    if m == 1:
        if _is_nilpotent(endo[0]):
            raise CertificationError("identity missing from 1-dim End (zero object?)")
        return []
    if field.char == 0:
        consts = _end_structure_constants(endo)
        lmats = _left_mult_matrices(field, consts, m)
        gram = Matrix(
            field,
            m,
            m,
            [
                [_trace(lmats[i] * lmats[j]) for j in range(m)]
                for i in range(m)
            ],
        )
        ker = gram.kernel_basis()
        rad = []
        for c in range(ker.cols):
            vec = ker.column_vector(c)
            f = _combine(endo, vec)
            if not _is_nilpotent(f):
                raise CertificationError("trace-form radical contains a non-nilpotent")
            rad.append(f)
        if len(rad) != m - 1:
            raise CertificationError(
                "endomorphism algebra is not split local (residue dimension "
                f"{m - len(rad)})"
            )
        return rad
    # prime field: enumerate
    p = field.char
    if p**m > LOCALITY_ENUMERATION_BUDGET:
        raise BudgetError("endomorphism enumeration budget exceeded")
    rad_vectors: list[list] = []
    basis_mat = Matrix.zeros(field, m, 0)
    for combo in itertools.product(range(p), repeat=m):
        if not any(combo):
            continue
        f = _combine(endo, [field.from_int(c) for c in combo])
        if _is_nilpotent(f):
            v = Matrix.column(field, [field.from_int(c) for c in combo])
            if basis_mat.solve(v) is None:
                basis_mat = hstack([basis_mat, v])
                rad_vectors.append([field.from_int(c) for c in combo])
        elif not f.is_iso():
            raise CertificationError("endomorphism neither nilpotent nor invertible")
    if len(rad_vectors) != m - 1:
        raise CertificationError("endomorphism algebra is not local")
    return [_combine(endo, v) for v in rad_vectors]


def _trace(m: Matrix):
    t = m.field.zero()
    for i in range(m.rows):
        t = t + m.data[i][i]
    return t


def _combine(basis: list[RepMorphism], coeffs) -> RepMorphism:
    out = zero_morphism(basis[0].source, basis[0].target)
    for f, c in zip(basis, coeffs):
        if c:
            out = out + f.scale(c)
    return out


def certify_local(x: Representation, endo: list[RepMorphism] | None = None) -> bool:
    """True when End(x) is certified local (every element nilpotent or
    invertible); raises CertificationError when provably not local or not
    certifiable within budget."""
    if x.total_dim == 0:
        raise CertificationError("zero representation is not indecomposable")
    radical_of_end(x, endo)
    return True


# ----------------------------------------------------------------------
# Decomposition into indecomposables
# ----------------------------------------------------------------------

@dataclass
class Decomposition:
    """Indecomposable factors with multiplicities plus an explicit pair of
    mutually inverse morphisms between the input and the direct sum of the
    listed factors (each factor repeated by its multiplicity)."""

    factors: list[tuple[Representation, int]]
    sum_rep: Representation
    to_sum: RepMorphism
    from_sum: RepMorphism

    def expanded(self) -> list[Representation]:
        out = []
        for rep, mult in self.factors:
            out.extend([rep] * mult)
        return out


def _fitting_split(x: Representation, f: RepMorphism):
    g = f.power(x.total_dim)
    k, ki = kernel(g)
    if k.total_dim == 0 or k.total_dim == x.total_dim:
        return None
    im, ii, _ = image(g)
    blocks = [hstack([a, b]) for a, b in zip(ki.blocks, ii.blocks)]
    parts, layout = direct_sum_with_layout(x.algebra, [k, im])
    u = RepMorphism(parts, x, blocks)
    if not u.is_iso():
        return None
    return (k, im, layout, u)


def _split_recursive(x: Representation) -> tuple[list[Representation], RepMorphism]:
    """Returns indecomposable pieces and an iso x -> direct sum of them."""
    if x.total_dim == 0:
        return [], identity_morphism(x)
    endo = hom_basis(x, x)
    candidates = list(endo)
    for i in range(len(endo)):
        for j in range(i + 1, len(endo)):
            candidates.append(endo[i] + endo[j])
    split = None
    for f in candidates:
        split = _fitting_split(x, f)
        if split:
            break
    if split is None and x.algebra.field.char != 0:
        # exhaustive fallback: any non-invertible non-nilpotent combo splits
        p = x.algebra.field.char
        m = len(endo)
        if p**m <= LOCALITY_ENUMERATION_BUDGET:
            for combo in itertools.product(range(p), repeat=m):
                if not any(combo):
                    continue
                f = _combine(endo, [x.algebra.field.from_int(c) for c in combo])
                split = _fitting_split(x, f)
                if split:
                    break
    if split is None:
        certify_local(x, endo)
        return [x], identity_morphism(x)
    k, im, _layout, u = split
    v = u.inverse()  # x -> k (+) im
    pk, iso_k = _split_recursive(k)
    pi, iso_i = _split_recursive(im)
    sub_sum_k = iso_k.target
    total, _ = direct_sum_with_layout(x.algebra, pk + pi)
    # map (k (+) im) -> total through iso_k, iso_i
    blocks = []
    field = x.algebra.field
    for s in range(x.algebra.nsorts):
        m = Matrix.zeros(field, total.dims[s], k.dims[s] + im.dims[s]).copy_data()
        bk = iso_k.blocks[s]
        for r in range(bk.rows):
            for c in range(bk.cols):
                m[r][c] = bk.data[r][c]
        bi = iso_i.blocks[s]
        roff = sub_sum_k.dims[s]
        coff = k.dims[s]
        for r in range(bi.rows):
            for c in range(bi.cols):
                m[roff + r][coff + c] = bi.data[r][c]
        blocks.append(Matrix(field, total.dims[s], k.dims[s] + im.dims[s], m))
    parts = v.target  # k (+) im as one rep
    w = RepMorphism(parts, total, blocks)
    return pk + pi, w.compose(v)


def decompose(x: Representation) -> Decomposition:
    """Split x into indecomposables with an explicit certificate.

    Factors are ordered by (total dimension, dimension vector lex) and
    grouped into (factor, multiplicity) pairs; the zero representation
    decomposes into the empty list."""
    pieces, iso = _split_recursive(x)
    order = sorted(range(len(pieces)), key=lambda i: (pieces[i].total_dim, pieces[i].dims))
    sorted_pieces = [pieces[i] for i in order]
    src_total, src_layout = direct_sum_with_layout(x.algebra, pieces)
    tgt_total, tgt_layout = direct_sum_with_layout(x.algebra, sorted_pieces)
    components = {}
    for new_pos, old_pos in enumerate(order):
        components[(new_pos, old_pos)] = identity_morphism(pieces[old_pos])
    perm = direct_sum_morphism((src_total, src_layout), (tgt_total, tgt_layout), components)
    to_sum = perm.compose(iso)
    from_sum = to_sum.inverse()
    groups: list[tuple[Representation, int]] = []
    for rep in sorted_pieces:
        if groups and groups[-1][0].dims == rep.dims and is_isomorphic(groups[-1][0], rep):
            groups[-1] = (groups[-1][0], groups[-1][1] + 1)
        else:
            groups.append((rep, 1))
    return Decomposition(groups, tgt_total, to_sum, from_sum)


# ----------------------------------------------------------------------
# Isomorphism testing
# ----------------------------------------------------------------------

ISO_ENUMERATION_BUDGET = 1 << 20
ISO_RANDOM_TRIALS = 64
DEFAULT_ISO_SEED = 0


def is_isomorphic(
    x: Representation, y: Representation, seed: int | None = None
) -> RepMorphism | None:
    """An invertible morphism x -> y when one exists, else None.

    Over a prime field the coefficient space of the Hom basis is searched
    exhaustively (exact); over the rationals: basis elements and pairwise
    sums, then seeded random combinations, then a deterministic integer
    grid large enough to witness a not-identically-zero determinant."""
    if x.algebra is not y.algebra:
        raise DomainError("isomorphism test across different algebras")
    if x.dims != y.dims:
        return None
    if x.total_dim == 0:
        return zero_morphism(x, y)
    basis = hom_basis(x, y)
    if not basis:
        return None
    for f in basis:
        if f.is_iso():
            return f
    field = x.algebra.field
    h = len(basis)
    if field.char != 0:
        p = field.char
        if p**h > ISO_ENUMERATION_BUDGET:
            raise BudgetError("isomorphism search budget exceeded")
        for combo in itertools.product(range(p), repeat=h):
            if not any(combo):
                continue
            f = _combine(basis, [field.from_int(c) for c in combo])
            if f.is_iso():
                return f
        return None
    for i in range(h):
        for j in range(i + 1, h):
            for f in (basis[i] + basis[j], basis[i] - basis[j]):
                if f.is_iso():
                    return f
    rng = random.Random(DEFAULT_ISO_SEED if seed is None else seed)
    bound = 4 * (x.total_dim + 1)
    for _ in range(ISO_RANDOM_TRIALS):
        coeffs = [field.from_int(rng.randrange(-bound, bound + 1)) for _ in range(h)]
        f = _combine(basis, coeffs)
        if f.is_iso():
            return f
    deg = x.total_dim + 1
    if deg**h > ISO_ENUMERATION_BUDGET:
        raise BudgetError("isomorphism grid budget exceeded")
    for combo in itertools.product(range(deg), repeat=h):
        if not any(combo):
            continue
        f = _combine(basis, [field.from_int(c) for c in combo])
        if f.is_iso():
            return f
    return None
