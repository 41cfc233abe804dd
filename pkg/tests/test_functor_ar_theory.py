"""AR theory inside the functor category itself: translates, almost split
sequences and definable maps over the Auslander algebra."""

import pytest

from ppcat.artheory import ar_sequences, build_catalogue, irreducible_map_data
from ppcat.funcat import (
    auslander_algebra,
    evaluate_functor,
    functor_catalogue,
    functor_of_pp_pair,
    pp_pair_of_functor,
)
from ppcat.ppform import definable_map_formula, definable_map_is_total_functional
from ppcat.rep import (
    ar_translate,
    ar_translate_inverse,
    direct_sum,
    is_isomorphic,
    projective,
    simple,
)


@pytest.fixture(scope="module")
def a3_bundle(a3):
    cat = build_catalogue(a3.algebra())
    aus = auslander_algebra(cat)
    fcat = functor_catalogue(aus)
    return a3, cat, aus, fcat


@pytest.fixture(scope="module")
def keps_bundle(keps):
    cat = build_catalogue(keps.algebra())
    aus = auslander_algebra(cat)
    fcat = functor_catalogue(aus)
    return keps, cat, aus, fcat


def test_functor_category_ar_sequences_count(a3_bundle):
    """One almost split sequence per non-projective functor: 17 functors,
    6 of them projective (the representables), so 11 sequences."""
    _, cat, aus, fcat = a3_bundle
    assert sum(fcat.projective_flags) == 6
    seqs = ar_sequences(fcat)
    assert len(seqs) == 11
    for s in seqs:
        assert is_isomorphic(
            fcat.entries[s.left], ar_translate(fcat.entries[s.right])
        ) is not None


def test_keps_functor_ar_quiver_is_cylinder(keps_bundle):
    """The AR quiver of the dual-number functor category is the 5-vertex
    cylinder mesh with 6 arrows: one into each projective (from its
    radical) plus the middles of the three almost split sequences."""
    _, cat, aus, fcat = keps_bundle
    data = irreducible_map_data(fcat)
    n = len(fcat)
    total = sum(data[(i, j)][0] for i in range(n) for j in range(n))
    assert total == 6
    seqs = ar_sequences(fcat)
    assert len(seqs) == 3
    assert sorted(len(s.middle) for s in seqs) == [1, 1, 2]
    for i in range(n):
        assert data[(i, i)][0] == 0


def test_tau_roundtrip_on_functor_catalogue(a3_bundle):
    _, cat, aus, fcat = a3_bundle
    for k, f in enumerate(fcat.entries):
        if fcat.projective_flags[k] or fcat.injective_flags[k]:
            continue
        back = ar_translate_inverse(ar_translate(f))
        assert is_isomorphic(back, f) is not None
        fwd = ar_translate(ar_translate_inverse(f))
        assert is_isomorphic(fwd, f) is not None


def test_tau_kills_projective_functors(a3_bundle):
    _, cat, aus, fcat = a3_bundle
    for k, f in enumerate(fcat.entries):
        if fcat.projective_flags[k]:
            assert ar_translate(f).total_dim == 0


def test_evaluate_functor_additive_in_the_argument(keps_bundle):
    keps, cat, aus, fcat = keps_bundle
    alg = keps.algebra()
    r = projective(alg, 0)
    k = simple(alg, 0)
    both = direct_sum([r, k])
    for f in fcat.entries:
        d_r = evaluate_functor(f, r, aus).dim
        d_k = evaluate_functor(f, k, aus).dim
        d_sum = evaluate_functor(f, both, aus).dim
        assert d_sum == d_r + d_k


def test_definable_map_along_every_irreducible_arrow(keps_bundle):
    """Each irreducible morphism of the K[eps] functor category is defined
    by a pp formula that is total and functional on the catalogue."""
    keps, cat, aus, fcat = keps_bundle
    data = irreducible_map_data(fcat)
    n = len(fcat)
    checked = 0
    for i in range(n):
        for j in range(n):
            count, reps = data[(i, j)]
            if not count:
                continue
            p = pp_pair_of_functor(fcat.entries[i], aus)
            q = pp_pair_of_functor(fcat.entries[j], aus)
            fp = functor_of_pp_pair(p, aus).functor
            fq = functor_of_pp_pair(q, aus).functor
            iso_p = is_isomorphic(fp, fcat.entries[i])
            iso_q = is_isomorphic(fcat.entries[j], fq)
            assert iso_p is not None and iso_q is not None
            for arrow in reps:
                nat = iso_q.compose(arrow).compose(iso_p)
                rho = definable_map_formula(p, q, nat, cat)
                assert definable_map_is_total_functional(rho, p, q, cat)
                checked += 1
    assert checked == 6
