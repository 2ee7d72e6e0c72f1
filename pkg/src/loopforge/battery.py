"""Exhaustive identity batteries for Moufang, IP and A-loops.

Each identity is a pair of terms compared over every assignment; variables
are named for display.  The batteries return :class:`CheckRecord` lists and
never raise on a failed identity: a failure is a finding with a witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import calculus as C
from . import properties as P
from .loop import CayleyLoop, quotient, restrict
from .mappings import inner_mapping_group, multiplication_group
from .report import INFO, CheckRecord, record
from .terms import (
    LDiv,
    Mul,
    One,
    RDiv,
    Term,
    Var,
    alpha,
    bassoc,
    bcomm,
    beta,
    comm,
    inv,
    values_equal,
)


@dataclass(frozen=True)
class Identity:
    name: str
    ref: str
    lhs: Term
    rhs: Term
    names: tuple[str, ...]


def prod(*ts: Term) -> Term:
    """Left-bracketed product."""
    out = ts[0]
    for t in ts[1:]:
        out = Mul(out, t)
    return out


def cube(t: Term) -> Term:
    return Mul(t, Mul(t, t))


def check_identity(
    Q: CayleyLoop,
    ident: Identity,
    domains: Mapping[int, Iterable[int]] | None = None,
    budget: int | None = None,
    prefix: str = "",
) -> CheckRecord:
    w = values_equal(Q, ident.lhs, ident.rhs, budget, domains)
    witness = None
    if w is not None:
        witness = {ident.names[k]: Q.label(v) for k, v in sorted(w.items())}
    return record(prefix + ident.name, ident.ref, w is None, witness)


def check_all(Q, idents: Sequence[Identity], domains=None, budget=None, prefix="") -> list[CheckRecord]:
    return [check_identity(Q, i, domains, budget, prefix) for i in idents]


# -- identity families -----------------------------------------------------------------------

XYZU = ("x", "y", "z", "u")
ABXYZ = ("a", "b", "x", "y", "z")
_x, _y, _z, _u = (Var(i) for i in range(4))


def _L(s: Term, t: Term, w: Term) -> Term:
    """``L(s,t)w = (st)\\(s(tw))``."""
    return LDiv(Mul(s, t), Mul(s, Mul(t, w)))


def moufang_core_identities() -> list[Identity]:
    """Consequences that every Moufang loop satisfies."""
    x, y, z, u = _x, _y, _z, _u
    c = bcomm(inv(u), inv(z))
    L = lambda w: _L(z, u, w)  # noqa: E731
    return [
        Identity("ip.left", "x^-1(xy) = y", Mul(inv(x), Mul(x, y)), y, XYZU),
        Identity("ip.right", "(yx)x^-1 = y", Mul(Mul(y, x), inv(x)), y, XYZU),
        Identity("ip.product", "(xy)^-1 = y^-1 x^-1", inv(Mul(x, y)), Mul(inv(y), inv(x)), XYZU),
        Identity("ip.involution", "(x^-1)^-1 = x", inv(inv(x)), x, XYZU),
        Identity(
            "assoc.alpha-bracket",
            "[x,y,z]^-1 = α(x,z^-1,y^-1)",
            inv(bassoc(x, y, z)),
            alpha(x, inv(z), inv(y)),
            XYZU,
        ),
        Identity("assoc.beta-bracket", "[x,y,z] = β(x^-1,z,y)", bassoc(x, y, z), beta(inv(x), z, y), XYZU),
        Identity("comm.bracket-paren", "[x,y] = (x,y)", bcomm(x, y), comm(x, y), XYZU),
        Identity(
            "inner.L-associator",
            "L(y,z)x = x[x,y,z]^-1 with L(s,t)w = (st)\\(s(tw))",
            _L(y, z, x),
            Mul(x, inv(bassoc(x, y, z))),
            XYZU,
        ),
        Identity(
            "inner.L-product",
            "L(z,u)(xy).[u^-1,z^-1] = L(z,u)x.(L(z,u)y.[u^-1,z^-1])",
            Mul(L(Mul(x, y)), c),
            Mul(L(x), Mul(L(y), c)),
            XYZU,
        ),
    ]


def all_or_none_clauses() -> list[Identity]:
    x, y, z = _x, _y, _z
    return [
        Identity("clause.i", "[[x,y,z],x] = 1", bcomm(bassoc(x, y, z), x), One, XYZU),
        Identity("clause.ii", "[x,y,[y,z]] = 1", bassoc(x, y, bcomm(y, z)), One, XYZU),
        Identity("clause.iii", "[x,y,z]^-1 = [x^-1,y,z]", inv(bassoc(x, y, z)), bassoc(inv(x), y, z), XYZU),
        Identity("clause.iv", "[x,y,z] = [x,z,y^-1]", bassoc(x, y, z), bassoc(x, z, inv(y)), XYZU),
    ]


def all_or_none_consequences() -> list[Identity]:
    x, y, z = _x, _y, _z
    xz = bcomm(x, z)
    return [
        Identity("cyclic", "[x,y,z] = [y,z,x]", bassoc(x, y, z), bassoc(y, z, x), XYZU),
        Identity("swap", "[x,y,z] = [y,x,z]^-1", bassoc(x, y, z), inv(bassoc(y, x, z)), XYZU),
        Identity(
            "commutator-expansion",
            "[xy,z] = [x,z][[x,z],y][y,z][x,y,z]^3",
            bcomm(Mul(x, y), z),
            prod(xz, bcomm(xz, y), bcomm(y, z), cube(bassoc(x, y, z))),
            XYZU,
        ),
    ]


def ip_identities() -> list[Identity]:
    x, y, z = _x, _y, _z
    return [
        Identity(
            "alpha-inverse",
            "α(x,y,z)^-1 = β(x^-1,y^-1,z^-1)",
            inv(alpha(x, y, z)),
            beta(inv(x), inv(y), inv(z)),
            XYZU,
        )
    ]


def class2_moufang_identities() -> list[Identity]:
    a, b, x, y, z = (Var(i) for i in range(5))
    B = bassoc
    return [
        Identity("cyclic.1", "[a,x,y] = [x,y,a]", B(a, x, y), B(x, y, a), ABXYZ),
        Identity("cyclic.2", "[a,x,y] = [y,a,x]", B(a, x, y), B(y, a, x), ABXYZ),
        Identity("inverse.1", "[a,x,y]^-1 = [a^-1,x,y]", inv(B(a, x, y)), B(inv(a), x, y), ABXYZ),
        Identity("inverse.2", "[a,x,y]^-1 = [a,x^-1,y]", inv(B(a, x, y)), B(a, inv(x), y), ABXYZ),
        Identity("inverse.3", "[a,x,y]^-1 = [a,y,x]", inv(B(a, x, y)), B(a, y, x), ABXYZ),
        Identity(
            "commutator.left",
            "[ab,x] = [a,x][b,x][a,b,x]^3",
            bcomm(Mul(a, b), x),
            prod(bcomm(a, x), bcomm(b, x), cube(B(a, b, x))),
            ABXYZ,
        ),
        Identity(
            "commutator.right",
            "[a,xy] = [a,x][a,y][a,x,y]^3",
            bcomm(a, Mul(x, y)),
            prod(bcomm(a, x), bcomm(a, y), cube(B(a, x, y))),
            ABXYZ,
        ),
        Identity("linear.middle", "[a,xy,z] = [a,x,z][a,y,z]", B(a, Mul(x, y), z), Mul(B(a, x, z), B(a, y, z)), ABXYZ),
        Identity("linear.right", "[a,x,yz] = [a,x,y][a,x,z]", B(a, x, Mul(y, z)), Mul(B(a, x, y), B(a, x, z)), ABXYZ),
        Identity("linear.left", "[ab,x,y] = [a,x,y][b,x,y]", B(Mul(a, b), x, y), Mul(B(a, x, y), B(b, x, y)), ABXYZ),
    ]


def class2_aloop_identities() -> list[Identity]:
    a, b, x, y, z = (Var(i) for i in range(5))
    out = [
        Identity("comm.mul-left", "(ab,x) = (a,x)(b,x)", comm(Mul(a, b), x), Mul(comm(a, x), comm(b, x)), ABXYZ),
        Identity("comm.mul-right", "(a,xy) = (a,x)(a,y)", comm(a, Mul(x, y)), Mul(comm(a, x), comm(a, y)), ABXYZ),
        Identity(
            "comm.ldiv-left", "(a\\b,x) = (a,x)^-1(b,x)", comm(LDiv(a, b), x), Mul(inv(comm(a, x)), comm(b, x)), ABXYZ
        ),
        Identity(
            "comm.ldiv-right", "(a,x\\y) = (a,x)^-1(a,y)", comm(a, LDiv(x, y)), Mul(inv(comm(a, x)), comm(a, y)), ABXYZ
        ),
        Identity(
            "comm.rdiv-left", "(a/b,x) = (a,x)(b,x)^-1", comm(RDiv(a, b), x), Mul(comm(a, x), inv(comm(b, x))), ABXYZ
        ),
        Identity(
            "comm.rdiv-right", "(a,x/y) = (a,x)(a,y)^-1", comm(a, RDiv(x, y)), Mul(comm(a, x), inv(comm(a, y))), ABXYZ
        ),
    ]
    for g, G in (("alpha", alpha), ("beta", beta)):
        s = "α" if g == "alpha" else "β"
        out += [
            Identity(f"{g}.mul-1", f"{s}(ab,x,y) = {s}(a,x,y){s}(b,x,y)", G(Mul(a, b), x, y), Mul(G(a, x, y), G(b, x, y)), ABXYZ),
            Identity(f"{g}.mul-2", f"{s}(a,xy,z) = {s}(a,x,z){s}(a,y,z)", G(a, Mul(x, y), z), Mul(G(a, x, z), G(a, y, z)), ABXYZ),
            Identity(f"{g}.mul-3", f"{s}(a,x,yz) = {s}(a,x,y){s}(a,x,z)", G(a, x, Mul(y, z)), Mul(G(a, x, y), G(a, x, z)), ABXYZ),
            Identity(
                f"{g}.ldiv-1",
                f"{s}(a\\b,x,y) = {s}(a,x,y)^-1{s}(b,x,y)",
                G(LDiv(a, b), x, y),
                Mul(inv(G(a, x, y)), G(b, x, y)),
                ABXYZ,
            ),
            Identity(
                f"{g}.ldiv-2",
                f"{s}(a,x\\y,z) = {s}(a,x,z)^-1{s}(a,y,z)",
                G(a, LDiv(x, y), z),
                Mul(inv(G(a, x, z)), G(a, y, z)),
                ABXYZ,
            ),
            Identity(
                f"{g}.ldiv-3",
                f"{s}(a,x,y\\z) = {s}(a,x,y)^-1{s}(a,x,z)",
                G(a, x, LDiv(y, z)),
                Mul(inv(G(a, x, y)), G(a, x, z)),
                ABXYZ,
            ),
            Identity(
                f"{g}.rdiv-1",
                f"{s}(a/b,x,y) = {s}(a,x,y){s}(b,x,y)^-1",
                G(RDiv(a, b), x, y),
                Mul(G(a, x, y), inv(G(b, x, y))),
                ABXYZ,
            ),
            Identity(
                f"{g}.rdiv-2",
                f"{s}(a,x/y,z) = {s}(a,x,z){s}(a,y,z)^-1",
                G(a, RDiv(x, y), z),
                Mul(G(a, x, z), inv(G(a, y, z))),
                ABXYZ,
            ),
            Identity(
                f"{g}.rdiv-3",
                f"{s}(a,x,y/z) = {s}(a,x,y){s}(a,x,z)^-1",
                G(a, x, RDiv(y, z)),
                Mul(G(a, x, y), inv(G(a, x, z))),
                ABXYZ,
            ),
        ]
    return out


def defining_equations() -> list[Identity]:
    """Each solved form substituted back into its defining equation."""
    a, b, c = _x, _y, _z
    names = ("a", "b", "c")
    return [
        Identity("def.paren", "ab = b(a(a,b))", Mul(a, b), Mul(b, Mul(a, comm(a, b))), names),
        Identity("def.bracket", "ab = (ba)[a,b]", Mul(a, b), Mul(Mul(b, a), bcomm(a, b)), names),
        Identity("def.alpha", "ab.c = (a α(a,b,c)).bc", Mul(Mul(a, b), c), Mul(Mul(a, alpha(a, b, c)), Mul(b, c)), names),
        Identity("def.beta", "c.ba = cb.(β(a,b,c) a)", Mul(c, Mul(b, a)), Mul(Mul(c, b), Mul(beta(a, b, c), a)), names),
        Identity(
            "def.bassoc", "ab.c = (a.bc)[a,b,c]", Mul(Mul(a, b), c), Mul(Mul(a, Mul(b, c)), bassoc(a, b, c)), names
        ),
    ]


# -- batteries ------------------------------------------------------------------------------------


def inner_mapping_forms(Q: CayleyLoop) -> list[CheckRecord]:
    """``T(b)a = a(a,b)``, ``R(b,c)a = aα(a,b,c)`` and ``L(c,b)a = β(a,b,c)a``."""
    t, L, R = Q.table, Q.ldiv_table, Q.rdiv_table
    a, b, c = C.grids(Q.order, 3)
    a2, b2 = C.grids(Q.order, 2)
    checks = [
        ("inner.T", "T(b)a = a(a,b)", L[b2, t[a2, b2]] == t[a2, C.comm_v(Q, a2, b2)]),
        ("inner.R", "R(b,c)a = a α(a,b,c)", R[t[t[a, b], c], t[b, c]] == t[a, C.alpha_v(Q, a, b, c)]),
        ("inner.L", "L(c,b)a = β(a,b,c) a", L[t[c, b], t[c, t[b, a]]] == t[C.beta_v(Q, a, b, c), a]),
    ]
    out = []
    for name, ref, mask in checks:
        bad = np.argwhere(~mask)
        out.append(record(name, ref, not len(bad), tuple(int(v) for v in bad[0]) if len(bad) else None))
    return out


def moufang_equivalence(Q: CayleyLoop) -> CheckRecord:
    w = P.moufang_witnesses(Q)
    holds = [v is None for v in w]
    ok = all(holds) or not any(holds)
    detail = ", ".join(f"{n}: {'holds' if h else 'fails'}" for n, h in zip(P.MOUFANG_IDENTITIES, holds))
    return record("moufang.equivalence", "the three Moufang identities hold together or fail together", ok, None, detail)


def associate_permutations(Q: CayleyLoop) -> CheckRecord:
    """``[a,b,c] = 1`` implies the same for permuted and inverted arguments."""
    Z = C.associator_mask(Q)
    invs = C.inv_v(Q, np.arange(Q.order))
    ar = np.arange(Q.order)
    for perm in itertools.permutations(range(3)):
        Zp = Z.transpose(perm)
        for flips in itertools.product((False, True), repeat=3):
            idx = [invs if f else ar for f in flips]
            Zv = Zp[np.ix_(*idx)]
            bad = np.argwhere(Z & ~Zv)
            if len(bad):
                return record(
                    "associate.permute-invert",
                    "[a,b,c] = 1 implies [a,b,c] = 1 after permuting or inverting arguments",
                    False,
                    tuple(int(v) for v in bad[0]),
                    f"permutation {perm}, inverted {flips}",
                )
    return record(
        "associate.permute-invert",
        "[a,b,c] = 1 implies [a,b,c] = 1 after permuting or inverting arguments",
        True,
    )


def four_element_associativity(Q: CayleyLoop) -> list[CheckRecord]:
    """For a,b,c,d with every three associating: [ab,c,d] = 1 iff [cd,a,b] = 1.

    The equivalence with ``[bc,d,a] = 1`` is reported for information.
    """
    Z = C.associator_mask(Q)
    t = Q.table
    a, b, c, d = C.grids(Q.order, 4)
    ok = Z[a, b, c] & Z[a, b, d] & Z[a, c, d] & Z[b, c, d]
    i = Z[t[a, b], c, d]
    ii = Z[t[c, d], a, b]
    iii = Z[t[b, c], d, a]
    bad = np.argwhere(ok & (i != ii))
    out = [
        record(
            "four-element.i-ii",
            "if every three of a,b,c,d associate then [ab,c,d] = 1 iff [cd,a,b] = 1",
            not len(bad),
            tuple(int(v) for v in bad[0]) if len(bad) else None,
        )
    ]
    bad = np.argwhere(ok & (i != iii))
    out.append(
        record(
            "four-element.i-iii",
            "if every three of a,b,c,d associate then [ab,c,d] = 1 iff [bc,d,a] = 1",
            None,
            tuple(int(v) for v in bad[0]) if len(bad) else None,
            "equivalent on this loop" if not len(bad) else "not equivalent on this loop",
        )
    )
    return out


def lemma_all_or_none(Q: CayleyLoop, budget=None) -> list[CheckRecord]:
    clauses = check_all(Q, all_or_none_clauses(), budget=budget, prefix="all-or-none.")
    holds = [r.verdict == "pass" for r in clauses]
    ok = all(holds) or not any(holds)
    detail = ", ".join(f"{r.ref}: {'holds' if h else 'fails'}" for r, h in zip(clauses, holds))
    out = [
        record(
            "all-or-none.agree",
            "the identities [[x,y,z],x] = 1, [x,y,[y,z]] = 1, [x,y,z]^-1 = [x^-1,y,z], "
            "[x,y,z] = [x,z,y^-1] hold together or fail together",
            ok,
            None,
            detail,
        )
    ]
    out += [
        CheckRecord(r.name, r.ref, INFO, r.witness, "holds" if h else "fails") for r, h in zip(clauses, holds)
    ]
    if all(holds):
        out += check_all(Q, all_or_none_consequences(), budget=budget, prefix="all-or-none.")
    return out


def nucleus_relations(Q: CayleyLoop) -> list[CheckRecord]:
    nuc = C.nuclei(Q)
    lam, mu, rho = nuc.left.as_set(), nuc.middle.as_set(), nuc.right.as_set()
    out = []
    if P.is_ip(Q):
        out.append(record("nuclei.ip", "IP loop: left, middle and right nuclei coincide", lam == mu == rho))
        t = Q.table
        central = {a for a in nuc.nucleus if bool((t[a] == t[:, a]).all())}
        out.append(
            record("center.ip", "IP loop: Z(Q) = {a in N(Q) | [a,x] = 1 for all x}", central == C.center(Q).as_set())
        )
    if P.is_aloop(Q):
        out.append(
            record("nuclei.aloop", "A-loop: left and right nuclei coincide inside the middle nucleus", lam == rho and lam <= mu)
        )
    return out


def aloop_equivalences(Q: CayleyLoop) -> CheckRecord:
    flags = {
        "IP": P.is_ip(Q),
        "alternative": P.is_alternative(Q),
        "diassociative": P.is_diassociative(Q),
        "Moufang": P.is_moufang(Q),
    }
    ok = len(set(flags.values())) == 1
    detail = ", ".join(f"{k}: {'yes' if v else 'no'}" for k, v in flags.items())
    return record("aloop.equivalences", "A-loop: IP, alternative, diassociative and Moufang are equivalent", ok, None, detail)


def lemma_battery(Q: CayleyLoop, budget: int | None = None) -> list[CheckRecord]:
    """Every element-level lemma whose hypotheses hold on ``Q``."""
    out = [moufang_equivalence(Q)]
    out += check_all(Q, defining_equations(), budget=budget)
    out += inner_mapping_forms(Q)
    if P.is_ip(Q):
        out += check_all(Q, ip_identities(), budget=budget, prefix="ip.")
    if P.is_moufang(Q):
        out += check_all(Q, moufang_core_identities(), budget=budget, prefix="moufang.")
        out.append(associate_permutations(Q))
        out += four_element_associativity(Q)
        out += lemma_all_or_none(Q, budget)
    if P.is_aloop(Q):
        out.append(aloop_equivalences(Q))
    out += nucleus_relations(Q)
    return out


# -- subloop-level batteries (small loops) --------------------------------------------------------


def all_subloops(Q: CayleyLoop, cap: int = C.NORMAL_ENUM_CAP) -> list[C.Subloop]:
    if Q.order > cap:
        raise ValueError(f"subloop enumeration is limited to order {cap}")

    def compute():
        start = C.subloop_generated(Q, [])
        found = {start.members: start}
        frontier = [start]
        while frontier:
            nxt = []
            for S in frontier:
                for g in range(Q.order):
                    if g not in S:
                        T = C.subloop_generated(Q, S.members + (g,))
                        if T.members not in found:
                            found[T.members] = T
                            nxt.append(T)
            frontier = nxt
        return sorted(found.values(), key=lambda s: (len(s), s.members))

    return Q.memo(("all-subloops", cap), compute)


def structural_battery(Q: CayleyLoop) -> list[CheckRecord]:
    """Normality and central-series facts checked over every (normal) subloop.

    Only for loops of order at most 16.
    """
    out = []
    inn = inner_mapping_group(Q, verify=False)
    stab = frozenset(multiplication_group(Q).stabilizer(Q.identity))
    out.append(
        record(
            "inner.stabilizer",
            "the inner mapping group is the stabilizer of 1 in the multiplication group",
            stab == inn.as_set(),
            None,
            f"orders {inn.order} and {len(stab)}",
        )
    )

    bad = None
    for S in all_subloops(Q):
        by_translates = C.translate_violation(Q, S.members) is None
        by_inclusions = C.inclusion_violation(Q, S.members) is None
        if by_translates != by_inclusions:
            bad = S.labels()
            break
    out.append(
        record(
            "normality.two-tests",
            "a subloop H is normal iff α(H,Q,Q), β(H,Q,Q), (H,Q) lie in H",
            bad is None,
            bad,
        )
    )

    normals = C.normal_subloops(Q)
    fails = {k: None for k in ("zn", "an", "za", "az", "meet")}
    for N in normals:
        A = C.ca_subloop(Q, N.members)
        Zn = C.relative_center(Q, N.members)
        QN, proj = quotient(Q, N.members)
        zq = C.center(QN).as_set()
        if fails["zn"] is None and not _preimage_equal(proj, zq, Zn):
            fails["zn"] = N.labels()
        QA, projA = quotient(Q, A.members)
        if fails["an"] is None and not {int(projA[n]) for n in N} <= C.center(QA).as_set():
            fails["an"] = N.labels()
        if fails["za"] is None and not N.as_set() <= C.relative_center(Q, A.members).as_set():
            fails["za"] = N.labels()
        if fails["az"] is None and not C.ca_subloop(Q, Zn.members).as_set() <= N.as_set():
            fails["az"] = N.labels()
        if fails["meet"] is None and C.central_kernel_meet(Q, N.members) != A:
            fails["meet"] = N.labels()
    refs = {
        "zn": "Z_N/N is the center of Q/N",
        "an": "N/A^N lies in the center of Q/A^N",
        "za": "Z_(A^N) contains N",
        "az": "A^(Z_N) is contained in N",
        "meet": "A^N is the intersection of all normal K with NK/K central in Q/K",
    }
    for k, ref in refs.items():
        out.append(record(f"central.{k}", ref, fails[k] is None, fails[k]))

    A1 = C.ca_subloop(Q, range(Q.order))
    QA, _ = quotient(Q, A1.members)
    abelian = P.is_group(QA) and P.is_commutative(QA)
    least = None
    for K in normals:
        QK, _ = quotient(Q, K.members)
        if P.is_group(QK) and P.is_commutative(QK) and not A1.as_set() <= K.as_set():
            least = K.labels()
            break
    out.append(
        record(
            "central.abelianization",
            "Q/A^Q(Q) is an abelian group and A^Q(Q) lies in every normal K with Q/K an abelian group",
            abelian and least is None,
            least,
        )
    )
    return out


def _preimage_equal(proj: np.ndarray, image: set[int], S: C.Subloop) -> bool:
    pre = {x for x in range(len(proj)) if int(proj[x]) in image}
    return pre == S.as_set()
