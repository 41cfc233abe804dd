"""Monoidal structures on modules extended to the functor category by
right-exactness, plus tensor tables.

Two structures are built in: the tensor product over a commutative base
algebra, and (for the two-dimensional nilpotent base in characteristic 2)
the group-diagonal tensor product over the ground field.  On functors the
product is forced by (A,-) (x) (B,-) = (A (x) B,-) on representables and
right-exactness through presentations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .artheory import Catalogue
from .errors import DomainError
from .exactfield import Matrix, hstack, kron
from .funcat import (
    AuslanderAlgebra,
    FpFunctor,
    functor_presentation,
    representable_map,
    representable_with_data,
)
from .ppform import PpFormula, free_realisation, pp_type_generator
from .quiver import StructureAlgebra
from .rep import (
    Representation,
    RepMorphism,
    cokernel,
    decompose,
    direct_sum_with_layout,
    identity_morphism,
    zero_representation,
)


@dataclass
class MonoidalStructure:
    """A tensor product on modules over a fixed base algebra.

    tensor_modules/tensor_morphisms implement the bifunctor;
    tensor_vectors maps a pair of elements to the underlying element of
    the product; unit_right_iso(a) is the coherent iso a (x) unit -> a."""

    name: str
    algebra: StructureAlgebra
    unit: Representation
    tensor_modules: Callable[[Representation, Representation], Representation]
    tensor_morphisms: Callable[[RepMorphism, RepMorphism], RepMorphism]
    tensor_vectors: Callable[
        [Representation, Representation, int, Matrix, Matrix], tuple[int, Matrix]
    ]
    unit_right_iso: Callable[[Representation], RepMorphism]
    unit_left_iso: Callable[[Representation], RepMorphism]


# ----------------------------------------------------------------------
# Built-in 1: tensor over a commutative one-sorted base
# ----------------------------------------------------------------------

def _require_commutative_single_sort(alg: StructureAlgebra):
    if alg.nsorts != 1:
        raise DomainError("tensor over the base needs a one-sorted algebra")
    for i in range(alg.dim):
        for j in range(alg.dim):
            if alg.product_indices(i, j) != alg.product_indices(j, i):
                raise DomainError("tensor over the base needs a commutative algebra")


def _balanced_quotient_data(alg: StructureAlgebra, a: Representation, b: Representation):
    """The quotient (a (x)_K b) / span{r x (x) y - x (x) r y} together with
    the projection and a section."""
    field = alg.field
    da, db = a.dims[0], b.dims[0]
    ident_a = Matrix.identity(field, da)
    ident_b = Matrix.identity(field, db)
    cols = []
    for i in range(alg.dim):
        if alg.is_idempotent_index(i):
            continue
        rel = kron(a.act[i], ident_b) - kron(ident_a, b.act[i])
        cols.append(rel)
    if cols:
        span = hstack(cols).column_space_basis()
    else:
        span = Matrix.zeros(field, da * db, 0)
    from .rep import _complement_projection

    proj, section = _complement_projection(field, span, da * db)
    return proj, section


def tensor_over_base(alg: StructureAlgebra) -> MonoidalStructure:
    """The usual tensor product over a commutative base algebra."""
    _require_commutative_single_sort(alg)
    field = alg.field

    def tensor_modules(a: Representation, b: Representation) -> Representation:
        proj, section = _balanced_quotient_data(alg, a, b)
        db = b.dims[0]
        act = {}
        for i in range(alg.dim):
            if alg.is_idempotent_index(i):
                continue
            big = kron(a.act[i], Matrix.identity(field, db))
            act[i] = proj * big * section
        return Representation(alg, (proj.rows,), act)

    def tensor_morphisms(f: RepMorphism, g: RepMorphism) -> RepMorphism:
        src = tensor_modules(f.source, g.source)
        tgt = tensor_modules(f.target, g.target)
        psrc, ssrc = _balanced_quotient_data(alg, f.source, g.source)
        ptgt, stgt = _balanced_quotient_data(alg, f.target, g.target)
        block = ptgt * kron(f.blocks[0], g.blocks[0]) * ssrc
        return RepMorphism(src, tgt, [block])

    def tensor_vectors(a, b, sort, x: Matrix, y: Matrix):
        proj, _ = _balanced_quotient_data(alg, a, b)
        return 0, proj * kron(x, y)

    def unit_right_iso(a: Representation) -> RepMorphism:
        # a (x) R -> a: x (x) r -> r.x; R is the regular module with basis
        # the algebra basis elements
        unit = _regular_module(alg)
        t = tensor_modules(a, unit)
        _, section = _balanced_quotient_data(alg, a, unit)
        da = a.dims[0]
        cols = []
        for j in range(alg.dim):
            cols.append(a.action(j))
        raw = Matrix.zeros(field, da, da * alg.dim).copy_data()
        for i in range(da):
            for j in range(alg.dim):
                col_of = a.action(j).col(i)
                for r in range(da):
                    raw[r][i * alg.dim + j] = col_of.data[r][0]
        raw_m = Matrix(field, da, da * alg.dim, raw)
        block = raw_m * section
        return RepMorphism(t, a, [block])

    def unit_left_iso(a: Representation) -> RepMorphism:
        unit = _regular_module(alg)
        t = tensor_modules(unit, a)
        _, section = _balanced_quotient_data(alg, unit, a)
        da = a.dims[0]
        raw = Matrix.zeros(field, da, alg.dim * da).copy_data()
        for j in range(alg.dim):
            actj = a.action(j)
            for i in range(da):
                for r in range(da):
                    raw[r][j * da + i] = actj.data[r][i]
        raw_m = Matrix(field, da, alg.dim * da, raw)
        block = raw_m * section
        return RepMorphism(t, a, [block])

    unit = _regular_module(alg)
    return MonoidalStructure(
        "tensor_over_base",
        alg,
        unit,
        tensor_modules,
        tensor_morphisms,
        tensor_vectors,
        unit_right_iso,
        unit_left_iso,
    )


def _regular_module(alg: StructureAlgebra) -> Representation:
    from .rep import projective

    return projective(alg, 0)


# ----------------------------------------------------------------------
# Built-in 2: diagonal tensor over the ground field (char 2, nilpotent
# two-dimensional base)
# ----------------------------------------------------------------------

def _require_keps_char2(alg: StructureAlgebra):
    if alg.field.char != 2:
        raise DomainError("the diagonal structure needs characteristic 2")
    if alg.nsorts != 1 or alg.dim != 2:
        raise DomainError("the diagonal structure needs the two-dimensional nilpotent base")
    nil = 1 if alg.is_idempotent_index(0) else 0
    if alg.product_indices(nil, nil) != {}:
        raise DomainError("the non-idempotent basis element must square to zero")
    return nil


def diagonal_tensor(alg: StructureAlgebra) -> MonoidalStructure:
    """Group-diagonal tensor product over the ground field: the underlying
    space is the vector-space tensor product, and the nilpotent generator
    acts as n (x) 1 + 1 (x) n + n (x) n (from the group element 1 + n in
    characteristic 2)."""
    nil = _require_keps_char2(alg)
    field = alg.field

    def eps_action(a: Representation, b: Representation) -> Matrix:
        da, db = a.dims[0], b.dims[0]
        ia, ib = Matrix.identity(field, da), Matrix.identity(field, db)
        na, nb = a.act[nil], b.act[nil]
        return kron(na, ib) + kron(ia, nb) + kron(na, nb)

    def tensor_modules(a: Representation, b: Representation) -> Representation:
        return Representation(alg, (a.dims[0] * b.dims[0],), {nil: eps_action(a, b)})

    def tensor_morphisms(f: RepMorphism, g: RepMorphism) -> RepMorphism:
        src = tensor_modules(f.source, g.source)
        tgt = tensor_modules(f.target, g.target)
        return RepMorphism(src, tgt, [kron(f.blocks[0], g.blocks[0])])

    def tensor_vectors(a, b, sort, x: Matrix, y: Matrix):
        return 0, kron(x, y)

    def unit_right_iso(a: Representation) -> RepMorphism:
        unit = _trivial_module(alg, nil)
        t = tensor_modules(a, unit)
        return RepMorphism(t, a, [Matrix.identity(field, a.dims[0])])

    def unit_left_iso(a: Representation) -> RepMorphism:
        unit = _trivial_module(alg, nil)
        t = tensor_modules(unit, a)
        return RepMorphism(t, a, [Matrix.identity(field, a.dims[0])])

    unit = _trivial_module(alg, nil)
    return MonoidalStructure(
        "diagonal_tensor",
        alg,
        unit,
        tensor_modules,
        tensor_morphisms,
        tensor_vectors,
        unit_right_iso,
        unit_left_iso,
    )


def _trivial_module(alg: StructureAlgebra, nil: int) -> Representation:
    return Representation(alg, (1,), {nil: Matrix.zeros(alg.field, 1, 1)})


# ----------------------------------------------------------------------
# Induced tensor on the functor category
# ----------------------------------------------------------------------

def tensor_representables(
    a: Representation, b: Representation, aus: AuslanderAlgebra, ms: MonoidalStructure
) -> FpFunctor:
    """(A,-) (x) (B,-) = (A (x) B,-)."""
    from .funcat import representable

    return representable(ms.tensor_modules(a, b), aus)


@dataclass
class TensorProductData:
    """A tensor product of functors with its presenting data: the
    representable of A (x) B and the cokernel projection onto the product."""

    product: FpFunctor
    presenting: FpFunctor  # representable(A (x) B)
    projection: RepMorphism  # presenting -> product


def tensor_functors_data(
    base_map_f: RepMorphism | None,
    base_map_g: RepMorphism | None,
    aus: AuslanderAlgebra,
    ms: MonoidalStructure,
) -> TensorProductData:
    """The forced right-exact product from explicit presentations
    f = coker((a,-)) with a = base_map_f (None when both sides are zero
    modules), and likewise for g."""
    a_mod, a_prime = base_map_f.source, base_map_f.target
    b_mod, b_prime = base_map_g.source, base_map_g.target
    ab = ms.tensor_modules(a_mod, b_mod)
    ab_data = representable_with_data(ab, aus)
    maps = []
    if b_prime.total_dim:
        u = ms.tensor_morphisms(identity_morphism(a_mod), base_map_g)  # A(x)B -> A(x)B'
        u_data = representable_with_data(u.target, aus)
        maps.append(representable_map(u, u_data, ab_data))
    if a_prime.total_dim:
        v = ms.tensor_morphisms(base_map_f, identity_morphism(b_mod))  # A(x)B -> A'(x)B
        v_data = representable_with_data(v.target, aus)
        maps.append(representable_map(v, v_data, ab_data))
    if not maps:
        ident = identity_morphism(ab_data.module)
        return TensorProductData(ab_data.module, ab_data.module, ident)
    if len(maps) == 1:
        joint = maps[0]
    else:
        total, _layout = direct_sum_with_layout(aus.algebra, [m.source for m in maps])
        blocks = [hstack([m.blocks[s] for m in maps]) for s in range(aus.algebra.nsorts)]
        joint = RepMorphism(total, ab_data.module, blocks)
    c, proj = cokernel(joint)
    return TensorProductData(c, ab_data.module, proj)


def tensor_functors(
    f: FpFunctor, g: FpFunctor, aus: AuslanderAlgebra, ms: MonoidalStructure
) -> FpFunctor:
    """Right-exact extension through presentations: with
    f = coker((a,-)), a: A -> A', and g = coker((b,-)), b: B -> B',
    the product is coker( (A (x) B',-) (+) (A' (x) B,-) -> (A (x) B,-) )
    induced by (1_A (x) b,-) and (a (x) 1_B,-)."""
    if f.total_dim == 0 or g.total_dim == 0:
        return zero_representation(aus.algebra)
    fp = functor_presentation(f, aus)
    gp = functor_presentation(g, aus)
    return tensor_functors_data(fp.base_map, gp.base_map, aus, ms).product


@dataclass
class TensorTable:
    """Pairwise products of the indecomposable functors, each cell the
    multiset of indecomposable factors of the product (by label)."""

    labels: list[str]
    cells: list[list[tuple[str, ...]]]

    def render_tsv(self) -> str:
        out = ["\t" + "\t".join(self.labels)]
        for lbl, row in zip(self.labels, self.cells):
            cells = []
            for cell in row:
                cells.append(format_cell(cell))
            out.append(lbl + "\t" + "\t".join(cells))
        return "\n".join(out) + "\n"


def format_cell(cell: tuple[str, ...]) -> str:
    if not cell:
        return "0"
    counts: dict[str, int] = {}
    for c in cell:
        counts[c] = counts.get(c, 0) + 1
    parts = []
    for label in sorted(counts):
        n = counts[label]
        parts.append(label if n == 1 else f"{n}*{label}")
    return " + ".join(parts)


def tensor_table(
    aus: AuslanderAlgebra,
    fcat: Catalogue,
    ms: MonoidalStructure,
    namer: Callable[[FpFunctor], str] | None = None,
) -> TensorTable:
    """All pairwise products of the functor catalogue, decomposed and
    labelled (by composition series via `namer` when provided)."""
    if not fcat.complete:
        raise DomainError("tensor table needs a complete functor catalogue")
    if namer is None:
        namer = lambda f: "(" + ",".join(str(d) for d in f.dims) + ")"
    labels = [namer(f) for f in fcat.entries]
    cells = []
    for f in fcat.entries:
        row = []
        for g in fcat.entries:
            prod = tensor_functors(f, g, aus, ms)
            parts = []
            for factor, mult in decompose(prod).factors:
                parts.extend([namer(factor)] * mult)
            row.append(tuple(sorted(parts)))
        cells.append(row)
    return TensorTable(labels, cells)


# ----------------------------------------------------------------------
# The deliberately naive free-realisation tensor (a demonstrator)
# ----------------------------------------------------------------------

def naive_pp_tensor(
    phi: PpFormula, psi: PpFormula, ms: MonoidalStructure
) -> PpFormula:
    """Tensor of free realisations with the tensored tuple: a generator of
    the pp-type of (c (x) c') in C_phi (x) C_psi.  This reproduces the
    representable case correctly but is wrong in general (the correct
    induced tensor is forced through presentations instead)."""
    fr_phi = free_realisation(phi)
    fr_psi = free_realisation(psi)
    prod = ms.tensor_modules(fr_phi.module, fr_psi.module)
    vectors = []
    for sx, vx in zip(phi.free_sorts, fr_phi.vectors):
        for sy, vy in zip(psi.free_sorts, fr_psi.vectors):
            sort, vec = ms.tensor_vectors(fr_phi.module, fr_psi.module, 0, vx, vy)
            vectors.append((sort, vec))
    return pp_type_generator(prod, vectors)
