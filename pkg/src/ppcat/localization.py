"""Definable subcategories of a finite-representation-type module
category, their Serre subcategories of vanishing functors, and quotient
functor categories.

A definable subcategory is specified extensionally by the indecomposables
that additively generate it.  Its functor category is the module category
of the endomorphism algebra of the sub-generator; the quotient functor is
restriction of sorts (multiplication by the idempotent of the chosen
summands), which is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .artheory import Catalogue
from .errors import DomainError
from .funcat import AuslanderAlgebra, FpFunctor, functor_catalogue
from .ppform import PpPair, evaluate_pair
from .quiver import StructureAlgebra
from .rep import Representation, RepMorphism


@dataclass
class DefinableSubcatSpec:
    """Subset of catalogue indices generating the definable subcategory."""

    catalogue: Catalogue
    indices: tuple[int, ...]

    def __post_init__(self):
        n = len(self.catalogue.entries)
        idx = tuple(sorted(set(self.indices)))
        if any(i < 0 or i >= n for i in idx):
            raise DomainError("subcategory index out of range")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_modules(cls, catalogue: Catalogue, modules) -> "DefinableSubcatSpec":
        indices = []
        for m in modules:
            i = catalogue.find(m)
            if i is None:
                raise DomainError("module is not in the catalogue")
            indices.append(i)
        return cls(catalogue, tuple(indices))

    @classmethod
    def complement(cls, catalogue: Catalogue, excluded) -> "DefinableSubcatSpec":
        out = [i for i in range(len(catalogue.entries)) if i not in set(excluded)]
        return cls(catalogue, tuple(out))

    @classmethod
    def from_pp_pairs(cls, catalogue: Catalogue, pairs: list[PpPair]) -> "DefinableSubcatSpec":
        """The subcategory of modules on which every given pp-pair closes
        (evaluates to zero)."""
        indices = []
        for i, m in enumerate(catalogue.entries):
            if all(evaluate_pair(p, m).dim == 0 for p in pairs):
                indices.append(i)
        return cls(catalogue, tuple(indices))


@dataclass
class SerreSubcat:
    """The indecomposable functors vanishing on the subcategory, with the
    full vanishing table as the closure certificate."""

    spec: DefinableSubcatSpec
    functor_catalogue: Catalogue
    members: tuple[int, ...]  # indices into functor_catalogue
    vanishing: dict[int, bool]


def serre_subcategory(
    spec: DefinableSubcatSpec, aus: AuslanderAlgebra, fcat: Catalogue | None = None
) -> SerreSubcat:
    """Filter the functor catalogue by vanishing on the subcategory; the
    value of a functor at the i-th indecomposable is its i-th sort."""
    if aus.catalogue is not spec.catalogue:
        raise DomainError("Auslander algebra built from a different catalogue")
    if fcat is None:
        fcat = functor_catalogue(aus)
    if not fcat.complete:
        raise DomainError("Serre subcategory needs a complete functor catalogue")
    members = []
    vanishing = {}
    for k, f in enumerate(fcat.entries):
        vanish = all(f.dims[i] == 0 for i in spec.indices)
        vanishing[k] = vanish
        if vanish:
            members.append(k)
    return SerreSubcat(spec, fcat, tuple(members), vanishing)


def _sub_auslander(aus: AuslanderAlgebra, indices: tuple[int, ...]) -> AuslanderAlgebra:
    """End(sum of the chosen indecomposables), re-using the hom bases and
    structure constants of the full Auslander algebra (pure reindexing,
    so restriction of functors is coefficient-exact)."""
    cat = aus.catalogue
    sub_cat = Catalogue(
        cat.algebra,
        [cat.entries[i] for i in indices],
        [cat.projective_flags[i] for i in indices],
        [cat.injective_flags[i] for i in indices],
        [cat.simple_flags[i] for i in indices],
        complete=True,
        provenance=f"sub-catalogue{tuple(indices)}",
    )
    hom = {}
    labels, source, target, pair_of = [], [], [], []
    index_of = {}
    for i2, gi in enumerate(indices):
        for j2, gj in enumerate(indices):
            hom[(i2, j2)] = aus.hom[(gi, gj)]
            for k in range(len(hom[(i2, j2)])):
                index_of[(i2, j2, k)] = len(labels)
                pair_of.append((i2, j2, k))
                labels.append(f"h{i2}_{j2}_{k}")
                source.append(i2)
                target.append(j2)
    big_index = {}
    for small, (i2, j2, k) in enumerate(pair_of):
        big_index[small] = aus.index_of[(indices[i2], indices[j2], k)]
    back = {}
    for small, big in big_index.items():
        back[big] = small
    dim = len(labels)
    table: list[list[dict | None]] = [[None] * dim for _ in range(dim)]
    for x in range(dim):
        for y in range(dim):
            cell = aus.algebra.table[big_index[x]][big_index[y]]
            if cell is None:
                continue
            table[x][y] = {back[g]: c for g, c in cell.items()}
    idempotent_index = [index_of[(i2, i2, 0)] for i2 in range(len(indices))]
    alg = StructureAlgebra(
        cat.algebra.field,
        labels,
        source,
        target,
        [cat.label(i) for i in indices],
        idempotent_index,
        table,
        radical_spanned=True,
    )
    sub = AuslanderAlgebra(alg, sub_cat, hom, index_of, pair_of)
    sub.big_index = big_index  # small global basis index -> big one
    return sub


@dataclass
class QuotientCategory:
    """The functor category of the definable subcategory: modules over the
    endomorphism algebra of the sub-generator."""

    spec: DefinableSubcatSpec
    parent: AuslanderAlgebra
    aus: AuslanderAlgebra  # endomorphism algebra of the sub-generator
    functor_catalogue: Catalogue


def quotient_category(
    spec: DefinableSubcatSpec, aus: AuslanderAlgebra, **bounds
) -> QuotientCategory:
    """Build End(sum of chosen indecomposables) and its module catalogue."""
    if not spec.indices:
        raise DomainError("quotient by the empty subcategory")
    if aus.catalogue is not spec.catalogue:
        raise DomainError("Auslander algebra built from a different catalogue")
    sub = _sub_auslander(aus, spec.indices)
    fcat = functor_catalogue(sub, **bounds)
    return QuotientCategory(spec, aus, sub, fcat)


def localize_functor(f: FpFunctor, qc: QuotientCategory) -> FpFunctor:
    """Image of the functor under the exact quotient: keep the sorts of
    the chosen indecomposables and the hom actions between them."""
    spec = qc.spec
    small = qc.aus.algebra
    dims = [f.dims[i] for i in spec.indices]
    act = {}
    for g in range(small.dim):
        if small.is_idempotent_index(g):
            continue
        act[g] = f.act[qc.aus.big_index[g]]
    return Representation(small, dims, act)


def localize_morphism(m: RepMorphism, qc: QuotientCategory) -> RepMorphism:
    """Image of a functor morphism under the quotient (restriction of the
    sort blocks)."""
    src = localize_functor(m.source, qc)
    tgt = localize_functor(m.target, qc)
    blocks = [m.blocks[i] for i in qc.spec.indices]
    return RepMorphism(src, tgt, blocks)
