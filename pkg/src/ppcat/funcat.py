"""The category of pp-pairs / finitely presented functors, realized as
modules over the Auslander algebra of a catalogue.

A functor is stored only as a module over End(M0) where M0 is the direct
sum of one copy of each indecomposable: its value space at the i-th
indecomposable is the i-th sort, morphisms act by the diagonal action.
Conversions to and from pp-pairs go through projective presentations and
the Yoneda correspondence (projectives over the endomorphism algebra
correspond to catalogue modules, maps to reversed base maps).
"""

from __future__ import annotations

from dataclasses import dataclass

from .artheory import Catalogue, build_catalogue
from .errors import DomainError
from .exactfield import Matrix, block_diag, hstack
from .quiver import AlgebraElement, StructureAlgebra
from .rep import (
    Representation,
    RepMorphism,
    cokernel,
    direct_sum_morphism,
    direct_sum_with_layout,
    expr_in_hom_basis,
    hom_basis,
    identity_morphism,
    minimal_projective_presentation,
    radical_of_end,
    simple,
)
from .rep import _presentation_connecting_elements  # shared presentation plumbing
from .ppform import (
    PairValue,
    PpFormula,
    PpPair,
    generator_presentation,
    pair_value_data,
    pp_type_generator,
)

FpFunctor = Representation  # a module over the Auslander algebra


@dataclass
class AuslanderAlgebra:
    """End(M0) as a structure algebra, with the chosen hom bases.

    The basis of the (i, j) block is hom[(i, j)]; on the diagonal the
    first element is the identity and the rest span the radical of the
    (local) endomorphism algebra, so the radical of the whole algebra is
    spanned by the non-idempotent basis elements."""

    algebra: StructureAlgebra
    catalogue: Catalogue
    hom: dict[tuple[int, int], list[RepMorphism]]
    index_of: dict[tuple[int, int, int], int]
    pair_of: list[tuple[int, int, int]]
    big_index: dict[int, int] | None = None  # set on sub-algebras: -> parent index

    def hom_morphism(self, global_index: int) -> RepMorphism:
        i, j, k = self.pair_of[global_index]
        return self.hom[(i, j)][k]


def auslander_algebra(cat: Catalogue) -> AuslanderAlgebra:
    """Structure constants of End(M0) by composing hom bases."""
    if not cat.complete:
        raise DomainError("the Auslander algebra needs a complete catalogue")
    n = len(cat.entries)
    hom: dict[tuple[int, int], list[RepMorphism]] = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                hom[(i, j)] = [identity_morphism(cat.entries[i])] + radical_of_end(
                    cat.entries[i]
                )
            else:
                hom[(i, j)] = hom_basis(cat.entries[i], cat.entries[j])
    labels, source, target, pair_of = [], [], [], []
    index_of = {}
    for i in range(n):
        for j in range(n):
            for k in range(len(hom[(i, j)])):
                index_of[(i, j, k)] = len(labels)
                pair_of.append((i, j, k))
                labels.append(f"h{i}_{j}_{k}")
                source.append(i)
                target.append(j)
    idempotent_index = [index_of[(i, i, 0)] for i in range(n)]
    dim = len(labels)
    table: list[list[dict | None]] = [[None] * dim for _ in range(dim)]
    for x in range(dim):
        i1, j1, k1 = pair_of[x]
        f = hom[(i1, j1)][k1]
        for y in range(dim):
            i2, j2, k2 = pair_of[y]
            if j2 != i1:
                continue
            g = hom[(i2, j2)][k2]
            comp = f.compose(g)  # N_{i2} -> N_{j1}
            coeffs = expr_in_hom_basis(hom[(i2, j1)], comp)
            if coeffs is None:
                raise DomainError("composition escapes the hom basis (internal error)")
            cell = {}
            for k3, c in enumerate(coeffs):
                if c:
                    cell[index_of[(i2, j1, k3)]] = c
            table[x][y] = cell
    alg = StructureAlgebra(
        cat.algebra.field,
        labels,
        source,
        target,
        [cat.label(i) for i in range(n)],
        idempotent_index,
        table,
        radical_spanned=True,
    )
    return AuslanderAlgebra(alg, cat, hom, index_of, pair_of)


# ----------------------------------------------------------------------
# Representable functors
# ----------------------------------------------------------------------

@dataclass
class RepresentableData:
    """Hom(a, M0) as a module over the Auslander algebra, remembering the
    chosen hom bases so base maps can be transported."""

    module: Representation
    base: Representation
    bases: list[list[RepMorphism]]  # per catalogue index


def representable_with_data(a: Representation, aus: AuslanderAlgebra) -> RepresentableData:
    cat = aus.catalogue
    n = len(cat.entries)
    bases = [hom_basis(a, cat.entries[i]) for i in range(n)]
    dims = [len(b) for b in bases]
    act = {}
    for g in range(aus.algebra.dim):
        if aus.algebra.is_idempotent_index(g):
            continue
        i, j, _k = aus.pair_of[g]
        s = aus.hom_morphism(g)
        cols = []
        for hmorph in bases[i]:
            coeffs = expr_in_hom_basis(bases[j], s.compose(hmorph))
            if coeffs is None:
                raise DomainError("postcomposition escapes the hom basis")
            cols.append(coeffs)
        field = aus.algebra.field
        act[g] = Matrix(
            field,
            dims[j],
            dims[i],
            [[cols[c][r] for c in range(dims[i])] for r in range(dims[j])],
        )
    return RepresentableData(Representation(aus.algebra, dims, act), a, bases)


def representable(a: Representation, aus: AuslanderAlgebra) -> FpFunctor:
    """The functor Hom(a, -) as an Auslander-algebra module (projective)."""
    return representable_with_data(a, aus).module


def _same_representation(a: Representation, b: Representation) -> bool:
    if a is b:
        return True
    if a.algebra is not b.algebra or a.dims != b.dims:
        return False
    return all(
        (x is None and y is None) or (x is not None and y is not None and x == y)
        for x, y in zip(a.act, b.act)
    )


def representable_map(
    m: RepMorphism, data_src: RepresentableData, data_tgt: RepresentableData
) -> RepMorphism:
    """(m, -): Hom(target(m), -) -> Hom(source(m), -) by precomposition;
    data_src must be the representable of m.target, data_tgt of m.source."""
    if not _same_representation(data_src.base, m.target) or not _same_representation(
        data_tgt.base, m.source
    ):
        raise DomainError("representable data does not match the morphism")
    blocks = []
    field = data_src.module.algebra.field
    for i in range(len(data_src.bases)):
        cols = []
        for g in data_src.bases[i]:
            coeffs = expr_in_hom_basis(data_tgt.bases[i], g.compose(m))
            if coeffs is None:
                raise DomainError("precomposition escapes the hom basis")
            cols.append(coeffs)
        rows = data_tgt.module.dims[i]
        blocks.append(
            Matrix(field, rows, len(cols), [[cols[c][r] for c in range(len(cols))] for r in range(rows)])
        )
    return RepMorphism(data_src.module, data_tgt.module, blocks)


# ----------------------------------------------------------------------
# Pp-pairs  <->  functors
# ----------------------------------------------------------------------

@dataclass
class FunctorOfPair:
    functor: FpFunctor
    values: list[PairValue]  # per catalogue entry, with embedding data


def functor_of_pp_pair(pair: PpPair, aus: AuslanderAlgebra) -> FunctorOfPair:
    """Realize phi/psi as a module over the Auslander algebra: the i-th
    sort is phi(N_i)/psi(N_i), morphisms act diagonally on coset
    representatives."""
    cat = aus.catalogue
    if pair.catalogue is not cat:
        # re-certify against this catalogue
        pair = PpPair(pair.phi, pair.psi, cat)
    values = pair_value_data(pair, cat)
    dims = [v.dim for v in values]
    sorts = pair.phi.free_sorts
    field = aus.algebra.field
    act = {}
    for g in range(aus.algebra.dim):
        if aus.algebra.is_idempotent_index(g):
            continue
        i, j, _k = aus.pair_of[g]
        s = aus.hom_morphism(g)
        diag = block_diag(field, [s.blocks[v] for v in sorts])
        mapped = diag * values[i].coset_reps
        mixed = hstack([values[j].coset_reps, values[j].psi_space.basis])
        sol = mixed.solve(mapped)
        if sol is None:
            raise DomainError("diagonal action escapes phi (internal error)")
        act[g] = sol.take_rows(range(dims[j]))
    return FunctorOfPair(Representation(aus.algebra, dims, act), values)


@dataclass
class FunctorPresentation:
    """Base-level presentation of a functor F: a morphism m with
    F isomorphic to the cokernel of (m, -): precomposition by m from the
    representable of m.target to the representable of m.source."""

    base_map: RepMorphism
    source_indices: list[int]  # catalogue indices of the source summands
    target_indices: list[int]


def functor_presentation(f: FpFunctor, aus: AuslanderAlgebra) -> FunctorPresentation:
    """From a minimal projective presentation over the Auslander algebra,
    via the Yoneda translation (projective at sort i <-> catalogue module
    N_i, module maps <-> reversed base maps)."""
    cat = aus.catalogue
    pres = minimal_projective_presentation(f)
    elems = _presentation_connecting_elements(pres)
    src_idx = [p.sort for p in pres.p0.data]
    tgt_idx = [p.sort for p in pres.p1.data]
    b0 = [cat.entries[i] for i in src_idx]
    b1 = [cat.entries[i] for i in tgt_idx]
    src_total, src_layout = direct_sum_with_layout(cat.algebra, b0)
    tgt_total, tgt_layout = direct_sum_with_layout(cat.algebra, b1)
    components = {}
    for (k, l), el in elems.items():
        if el.is_zero():
            continue
        # el lies in e_{tgt_idx[k]} S e_{src_idx[l]} = Hom(N_{src_idx[l]}, N_{tgt_idx[k]})
        morph = None
        for g, c in el.coeffs.items():
            i, j, k3 = aus.pair_of[g]
            part = aus.hom[(i, j)][k3].scale(c)
            morph = part if morph is None else morph + part
        components[(k, l)] = morph
    base_map = direct_sum_morphism((src_total, src_layout), (tgt_total, tgt_layout), components)
    return FunctorPresentation(base_map, src_idx, tgt_idx)


def presentation_cokernel(fp: FunctorPresentation, aus: AuslanderAlgebra) -> FpFunctor:
    """Rebuild the functor from its base presentation (for round trips)."""
    data_tgt = representable_with_data(fp.base_map.target, aus)
    data_src = representable_with_data(fp.base_map.source, aus)
    rm = representable_map(fp.base_map, data_tgt, data_src)
    c, _ = cokernel(rm)
    return c


def pp_pair_of_functor(f: FpFunctor, aus: AuslanderAlgebra) -> PpPair:
    """A pp-pair whose functor is isomorphic to f: phi is the pp-type
    generator of the source generators; psi bounds the image of the
    presentation map through the target generators."""
    cat = aus.catalogue
    fp = functor_presentation(f, aus)
    x = fp.base_map.source
    y = fp.base_map.target
    xpres = generator_presentation(x)
    phi = pp_type_generator(x, xpres.generator_vectors())
    ypres = generator_presentation(y)
    nx = xpres.count
    ny = ypres.count
    free = [(v.name, v.sort) for v in phi.free]
    bound = [(f"y{j}", ypres.gen_sorts[j]) for j in range(ny)]
    rows: list[tuple[int, tuple]] = []
    # x_k = sum_j lambda_kj y_j where lambda expresses m(gen_k) over y-gens
    for k, (sort, vec) in enumerate(xpres.generator_vectors()):
        mapped = fp.base_map.blocks[sort] * vec
        lam = ypres.express(sort, mapped)
        entries: list[AlgebraElement | None] = [None] * nx + [
            None if e is None else -e for e in lam
        ]
        entries[k] = x.algebra.lazy(sort)
        rows.append((sort, tuple(entries)))
    # relations of the y generators
    for s, coeffs in ypres.relation_rows():
        rows.append((s, tuple([None] * nx + list(coeffs))))
    psi = PpFormula(x.algebra, free, bound, rows)
    return PpPair(phi, psi, cat)


# ----------------------------------------------------------------------
# Evaluation (functor applied to arbitrary modules and morphisms)
# ----------------------------------------------------------------------

@dataclass
class FunctorValue:
    dim: int
    hom_data: RepresentableData
    homs: list[RepMorphism]  # S-module maps Hom(d, M0) -> f


def evaluate_functor(f: FpFunctor, d: Representation, aus: AuslanderAlgebra) -> FunctorValue:
    """Value of the functor at a module: the space of Auslander-algebra
    module maps from Hom(d, M0) into f."""
    data = representable_with_data(d, aus)
    homs = hom_basis(data.module, f)
    return FunctorValue(len(homs), data, homs)


def evaluate_functor_morphism(
    f: FpFunctor,
    g: RepMorphism,
    aus: AuslanderAlgebra,
    value_src: FunctorValue | None = None,
    value_tgt: FunctorValue | None = None,
) -> Matrix:
    """The induced map F(g): F(source(g)) -> F(target(g)) in the bases of
    the computed values."""
    if value_src is None:
        value_src = evaluate_functor(f, g.source, aus)
    if value_tgt is None:
        value_tgt = evaluate_functor(f, g.target, aus)
    gm = representable_map(g, value_tgt.hom_data, value_src.hom_data)
    field = aus.algebra.field
    cols = []
    for u in value_src.homs:
        coeffs = expr_in_hom_basis(value_tgt.homs, u.compose(gm))
        if coeffs is None:
            raise DomainError("functor morphism escapes the value basis")
        cols.append(coeffs)
    return Matrix(
        field,
        value_tgt.dim,
        value_src.dim,
        [[cols[c][r] for c in range(value_src.dim)] for r in range(value_tgt.dim)],
    )


def functor_value_dims(f: FpFunctor) -> tuple[int, ...]:
    """Value dimensions at the catalogue modules (the sort dimensions)."""
    return f.dims


# ----------------------------------------------------------------------
# Catalogue-level operations
# ----------------------------------------------------------------------

def functor_catalogue(aus: AuslanderAlgebra, **bounds) -> Catalogue:
    """All indecomposable finitely presented functors, as the module
    catalogue of the Auslander algebra."""
    return build_catalogue(aus.algebra, **bounds)


def simple_functors(aus: AuslanderAlgebra) -> list[FpFunctor]:
    """Tops of the indecomposable projectives; one per catalogue module."""
    return [simple(aus.algebra, i) for i in range(len(aus.catalogue.entries))]


def composition_series_labels(f: FpFunctor, simple_names: dict[int, str]) -> str:
    """Radical-layer labels top to bottom, e.g. 'S/T/S'; semisimple layers
    with several factors are joined by '+'."""
    from .rep import radical

    if f.total_dim == 0:
        return "0"
    layers = []
    current = f
    while current.total_dim:
        rad, _ = radical(current)
        layer = []
        for s in range(f.algebra.nsorts):
            mult = current.dims[s] - rad.dims[s]
            layer.extend([simple_names.get(s, f"S{s}")] * mult)
        layers.append("+".join(sorted(layer)))
        current = rad
    return "/".join(layers)
