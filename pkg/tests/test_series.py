import pytest

from loopforge import series as S
from loopforge.catalog import dihedral, enumerate_loops
from loopforge.errors import NotMoufang

GROUPS = ["Z4", "V4", "S3", "D4", "Q8", "Z6", "Z2xS3", "Z2xZ4"]


def group_comm(G, a, b):
    return G.mul(G.mul(G.inverse(a), G.inverse(b)), G.mul(a, b))


def group_closure(G, gens):
    H = {G.identity} | set(gens)
    while True:
        grown = H | {G.mul(a, b) for a in H for b in H}
        if grown == H:
            return H
        H = grown


def group_lower(G):
    """Oracle: gamma_{i+1} = <[a, g] : a in gamma_i, g in G>, until it repeats."""
    chain = [set(range(G.order))]
    while True:
        nxt = group_closure(G, {group_comm(G, a, g) for a in chain[-1] for g in G})
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)


def group_upper(G):
    """Oracle: Z_{i+1} = {a : [a, g] in Z_i for every g}."""
    chain = [{G.identity}]
    while True:
        nxt = {a for a in G if all(group_comm(G, a, g) in chain[-1] for g in G)}
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)


@pytest.mark.parametrize("name", GROUPS)
def test_group_series_match_oracle(catalog, name):
    G = catalog[name]
    assert [H.as_set() for H in S.lower_central_series(G)] == group_lower(G)
    assert [H.as_set() for H in S.upper_central_series(G)] == group_upper(G)


@pytest.mark.parametrize("name", GROUPS)
def test_first_weight_subloop_is_derived_subgroup(catalog, name):
    G = catalog[name]
    derived = group_closure(G, {group_comm(G, a, b) for a in G for b in G})
    assert S.weight_subloop(G, 1).as_set() == derived
    assert S.weight_subloop(G, 1, "mu").as_set() == derived


def test_dihedral_upper_series():
    D4 = dihedral(4)
    upper = S.upper_central_series(D4)
    assert [H.as_set() for H in upper] == [{0}, {0, 2}, set(range(8))]
    assert S.nilpotency_class(D4) == 2


def test_octonion_series(catalog):
    O = catalog["O16"]
    rep = S.series_report(O)
    assert [len(H) for H in rep.lower] == [16, 2, 1]
    assert [len(H) for H in rep.upper] == [1, 2, 16]
    assert rep.lower[1] == rep.upper[1]
    assert rep.nilpotency_class == 2
    assert S.weight_subloop(O, 2, "mu").is_trivial()
    assert len(S.weight_subloop(O, 1, "mu")) == 2


def test_non_nilpotent_moufang_loop(catalog):
    M = catalog["M(S3,2)"]
    rep = S.series_report(M)
    assert rep.nilpotency_class is None
    assert not rep.lower[-1].is_trivial()
    assert S.upper_central_series(M)[-1].is_trivial()
    assert S.nilpotency_class(M, cross_validate=True) is None


def test_trivial_and_abelian_classes(catalog):
    assert S.nilpotency_class(catalog["1"]) == 0
    for name in ("Z2", "Z7", "V4", "Z2xZ4"):
        assert S.nilpotency_class(catalog[name], cross_validate=True) == 1


def test_cross_validation_on_class_two(catalog):
    for name in ("D4", "Q8", "O16"):
        assert S.nilpotency_class(catalog[name], cross_validate=True) == 2


def test_mu_series_needs_moufang():
    Q = next(Q for Q in enumerate_loops(5) if Q.order == 5 and not S.P.is_moufang(Q))
    with pytest.raises(NotMoufang):
        S.lower_central_series(Q, "mu")
    with pytest.raises(NotMoufang):
        S.weight_values(Q, 1, "mu")
    assert S.lower_central_series(Q)[0].is_whole()


def test_weight_subloop_rejects_bad_arguments(catalog):
    with pytest.raises(ValueError):
        S.weight_subloop(catalog["S3"], 0)
    with pytest.raises(ValueError):
        S.weight_values(catalog["S3"], 1, "nu")


def test_series_report_dict(catalog):
    d = S.series_report(catalog["D4"]).to_dict()
    assert d["class"] == 2 and d["nilpotent"]
    assert d["lower_orders"] == [8, 2, 1] and d["upper_orders"] == [1, 2, 8]


@pytest.mark.parametrize("name", ["1", "Z5", "D4", "Q8", "O16", "S3", "M(S3,2)"])
def test_verify_structure_passes(catalog, name):
    report = S.verify_structure(catalog[name])
    assert report.passed, report.to_text()
