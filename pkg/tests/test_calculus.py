import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopforge import calculus as C
from loopforge.catalog import enumerate_loops
from loopforge.errors import NotMoufang, NotNormal


def group_subgroup(G, gens):
    """Oracle: closure under multiplication only (enough in a finite group)."""
    S = {G.identity} | set(gens)
    while True:
        grown = S | {G.mul(a, b) for a in S for b in S}
        if grown == S:
            return S
        S = grown


def group_normal_subgroups(G):
    """Oracle: subgroups closed under conjugation, found from all subsets of generators."""
    subs = set()
    for r in range(0, 3):
        for gens in itertools.combinations(range(G.order), r):
            H = frozenset(group_subgroup(G, gens))
            if all(G.mul(G.inverse(g), G.mul(h, g)) in H for g in G for h in H):
                subs.add(H)
    return subs


def group_derived(G):
    comms = {G.mul(G.mul(G.inverse(a), G.inverse(b)), G.mul(a, b)) for a in G for b in G}
    return group_subgroup(G, comms)


def test_scalar_forms_solve_defining_equations(catalog):
    M = catalog["M(S3,2)"]
    for a, b, c in itertools.product(range(M.order), repeat=3):
        m = M.mul
        assert m(m(a, b), c) == m(m(a, C.assoc_alpha(M, a, b, c)), m(b, c))
        assert m(c, m(b, a)) == m(m(c, b), m(C.assoc_beta(M, a, b, c), a))
        assert m(m(a, b), c) == m(m(a, m(b, c)), C.assoc_bracket(M, a, b, c))
    for a, b in itertools.product(range(M.order), repeat=2):
        assert M.mul(a, b) == M.mul(b, M.mul(a, C.commutator_paren(M, a, b)))
        assert M.mul(a, b) == M.mul(M.mul(b, a), C.commutator_bracket(M, a, b))


def test_scalar_range_check(catalog):
    with pytest.raises(IndexError):
        C.commutator_paren(catalog["Z3"], 0, 3)


def test_subloop_generation(catalog):
    O = catalog["O16"]
    assert len(C.subloop_generated(O, [])) == 1
    assert len(C.subloop_generated(O, [2])) == 4
    assert len(C.subloop_generated(O, [2, 4])) == 8
    assert C.subloop_generated(O, [2, 4, 6]).is_whole()


@pytest.mark.parametrize("name, count", [("S3", 3), ("D4", 6), ("Q8", 6), ("Z2xS3", None)])
def test_normal_subloops_of_groups(catalog, name, count):
    G = catalog[name]
    found = {N.as_set() for N in C.normal_subloops(G)}
    assert found == group_normal_subgroups(G)
    if count is not None:
        assert len(found) == count


def test_normal_closure_in_group(catalog):
    S3 = catalog["S3"]
    swap = next(i for i in range(1, 6) if S3.mul(i, i) == 0)
    assert C.normal_closure(S3, [swap]).is_whole()
    three = next(i for i in range(1, 6) if S3.mul(i, i) != 0)
    assert len(C.normal_closure(S3, [three])) == 3


def test_as_normal_rejects(catalog):
    S3 = catalog["S3"]
    swap = next(i for i in range(1, 6) if S3.mul(i, i) == 0)
    with pytest.raises(NotNormal):
        C.as_normal(S3, [0, swap])
    with pytest.raises(NotNormal):
        C.as_normal(S3, [0, swap, 3])


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "Z2xS3", "V4", "Z8"])
def test_first_ca_subloop_of_group_is_derived_subgroup(catalog, name):
    G = catalog[name]
    assert C.ca_subloop(G, range(G.order)).as_set() == group_derived(G)
    assert C.ca_subloop(G, range(G.order), "mu").as_set() == group_derived(G)


def test_mu_kind_needs_moufang():
    loops = [Q for Q in enumerate_loops(5) if Q.order == 5]
    non_moufang = next(Q for Q in loops if not _is_group(Q))
    with pytest.raises(NotMoufang):
        C.ca_subloop(non_moufang, range(5), "mu")


def _is_group(Q):
    t = Q.table
    a, b, c = C.grids(Q.order, 3)
    return bool((t[t[a, b], c] == t[a, t[b, c]]).all())


def test_centers(catalog):
    for name in ("S3", "D4", "Q8", "Z2xS3", "Z6"):
        G = catalog[name]
        oracle = {a for a in G if all(G.mul(a, x) == G.mul(x, a) for x in G)}
        assert C.center(G).as_set() == oracle
    assert C.center(catalog["M(S3,2)"]).is_trivial()
    O = catalog["O16"]
    assert C.center(O).as_set() == {0, 1}
    assert len(C.center(catalog["Z2xM(S3,2)"])) == 2


def test_nuclei(catalog):
    O = catalog["O16"]
    nuc = C.nuclei(O)
    assert nuc.left.as_set() == nuc.middle.as_set() == nuc.right.as_set() == {0, 1}
    G = catalog["D4"]
    assert C.nuclei(G).nucleus.is_whole()


def test_relative_center_of_trivial_is_center(catalog):
    for Q in catalog.values():
        assert C.relative_center(Q, [Q.identity]) == C.center(Q)


def test_central_kernel_meet_matches_ca_subloop(catalog):
    for name in ("S3", "D4", "Q8", "M(S3,2)", "O16"):
        Q = catalog[name]
        for N in C.normal_subloops(Q):
            assert C.central_kernel_meet(Q, N.members) == C.ca_subloop(Q, N.members)


def test_image_in_center(catalog):
    D4 = catalog["D4"]
    Z = C.center(D4)
    assert C.image_in_center(D4, Z.members, [D4.identity])
    assert not C.image_in_center(D4, range(8), [D4.identity])


def test_subloop_ordering(catalog):
    O = catalog["O16"]
    small, big = C.subloop_generated(O, [2]), C.subloop_generated(O, [2, 4])
    assert small < big and small <= big and big >= small
    assert small != big and hash(small) == hash(C.subloop_generated(O, [3]))


small_loops = [Q for Q in enumerate_loops(5) if Q.order >= 2]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(small_loops), st.data())
def test_normal_closure_is_least_normal_superset(Q, data):
    gens = data.draw(st.lists(st.integers(0, Q.order - 1), max_size=2))
    N = C.normal_closure(Q, gens)
    assert set(gens) <= N.as_set()
    for K in C.normal_subloops(Q):
        if set(gens) <= K.as_set():
            assert N.as_set() <= K.as_set()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(small_loops))
def test_two_normality_tests_agree(Q):
    for members in itertools.chain.from_iterable(
        itertools.combinations(range(Q.order), r) for r in range(1, Q.order + 1)
    ):
        if Q.identity not in members or not C.is_subloop(Q, members):
            continue
        by_maps = C.translate_violation(Q, members) is None
        by_inclusions = C.inclusion_violation(Q, members) is None
        assert by_maps == by_inclusions


def test_associator_mask_matches_scan(catalog):
    M = catalog["M(S3,2)"]
    mask = C.associator_mask(M)
    for a, b, c in itertools.product(range(12), repeat=3):
        assert mask[a, b, c] == (M.mul(M.mul(a, b), c) == M.mul(a, M.mul(b, c)))
    assert not mask.flags.writeable
    assert np.count_nonzero(~mask) > 0
