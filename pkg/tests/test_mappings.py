import itertools

import pytest

from loopforge.catalog import cyclic, symmetric3
from loopforge.errors import GroupCap
from loopforge.mappings import (
    Perm,
    close_group,
    inner_L,
    inner_R,
    inner_T,
    inner_mapping_group,
    is_automorphism,
    left_translation,
    multiplication_group,
    non_automorphic_generator,
    right_translation,
)
from loopforge import properties as P


def naive_closure(gens, n):
    """Oracle: repeated composition with Python tuples."""
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[i]] for i in range(n))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def test_perm_composition_and_inverse():
    p = Perm([1, 2, 0])
    q = Perm([1, 0, 2])
    assert (p * q)(0) == p(q(0))
    assert (p * p.inverse()).is_identity()
    with pytest.raises(ValueError):
        Perm([0, 0, 1])


def test_close_group_symmetric_group():
    G = close_group([Perm([1, 0, 2, 3]), Perm([1, 2, 3, 0])])
    assert G.order == 24
    assert G.orbit(0) == {0, 1, 2, 3}
    assert len(G.stabilizer(0)) == 6


@pytest.mark.parametrize(
    "gens",
    [
        [(1, 2, 0, 3, 4)],
        [(1, 0, 2, 3, 4), (0, 1, 3, 4, 2)],
        [(1, 2, 3, 4, 0), (4, 3, 2, 1, 0)],
    ],
)
def test_close_group_matches_naive(gens):
    G = close_group([Perm(g) for g in gens])
    assert {p.images for p in G} == naive_closure(gens, 5)


def test_group_cap():
    with pytest.raises(GroupCap):
        close_group([Perm([1, 0, 2, 3, 4, 5]), Perm([1, 2, 3, 4, 5, 0])], cap=100)


def test_translations_and_inner_maps(catalog):
    M = catalog["M(S3,2)"]
    for x, y in itertools.product(range(M.order), repeat=2):
        assert left_translation(M, x)(y) == M.mul(x, y)
        assert right_translation(M, x)(y) == M.mul(y, x)
    z = 5
    for x, y in [(1, 2), (3, 7), (6, 11)]:
        assert M.mul(x, inner_T(M, x)(z)) == M.mul(z, x)
        assert M.mul(inner_R(M, x, y)(z), M.mul(x, y)) == M.mul(M.mul(z, x), y)
        assert M.mul(M.mul(x, y), inner_L(M, x, y)(z)) == M.mul(x, M.mul(y, z))


def _conjugation_group(G):
    """Oracle: inner automorphisms x -> g^-1 x g of a group."""
    return {tuple(G.mul(G.inverse(g), G.mul(x, g)) for x in G) for g in G}


def _two_sided_translations(G):
    return {tuple(G.mul(G.mul(g, x), h) for x in G) for g in G for h in G}


@pytest.mark.parametrize("name", ["Z4", "V4", "S3", "D4", "Q8", "Z2xS3"])
def test_group_multiplication_and_inner_groups(catalog, name):
    G = catalog[name]
    inn = inner_mapping_group(G)
    assert {p.images for p in inn} == _conjugation_group(G)
    assert {p.images for p in multiplication_group(G)} == _two_sided_translations(G)


def test_inner_group_of_moufang_loop(catalog):
    M = catalog["M(S3,2)"]
    inn = inner_mapping_group(M)
    mlt = multiplication_group(M)
    assert inn.order == 216
    assert mlt.order == inn.order * M.order
    assert set(mlt.stabilizer(M.identity)) == inn.as_set()


def test_automorphism_detection(catalog):
    S3 = catalog["S3"]
    for p, _ in inner_mapping_group(S3).generators:
        assert is_automorphism(S3, p)
    assert not is_automorphism(S3, Perm([0, 2, 1, 3, 4, 5]))
    assert non_automorphic_generator(catalog["M(S3,2)"]) is not None
    assert non_automorphic_generator(cyclic(5)) is None


def test_aloop_flags(catalog):
    assert P.is_aloop(symmetric3())
    assert not P.is_aloop(catalog["M(S3,2)"])
    assert not P.is_aloop(catalog["O16"])
