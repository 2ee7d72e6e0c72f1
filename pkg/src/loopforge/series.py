"""Upper and lower central series, nilpotency class and structure verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import battery
from . import calculus as C
from . import properties as P
from .errors import InternalError, NotMoufang, NotNormal
from .loop import CayleyLoop, quotient, restrict
from .report import CheckRecord, Report, record
from .terms import WEIGHT_CAP, gen_weight_words, value_set

SERIES_KINDS = ("alpha_beta", "mu")


def lower_central_series(Q: CayleyLoop, kind: str = "alpha_beta") -> list[C.NormalSubloop]:
    """``A_0 = Q``, ``A_{i+1} = A^{A_i}(Q)``, up to the first repeat (not included)."""

    def compute():
        chain = [C.whole(Q)]
        while True:
            nxt = C.ca_subloop(Q, chain[-1].members, kind)
            if nxt == chain[-1]:
                return chain
            chain.append(nxt)

    if kind == "mu" and not P.is_moufang(Q):
        raise NotMoufang(f"{Q.name or 'loop'} is not Moufang")
    return list(Q.memo(("lower", kind), compute))


def _preimage_of_center(Q: CayleyLoop, Z: C.Subloop) -> C.NormalSubloop:
    QZ, proj = quotient(Q, Z.members)
    zq = C.center(QZ).mask()
    return C.as_normal(Q, np.flatnonzero(zq[proj]))


def upper_central_series(Q: CayleyLoop) -> list[C.NormalSubloop]:
    """``Z_0 = {e}``, ``Z_{i+1}/Z_i = Z(Q/Z_i)``, up to the first repeat.

    Each step is cross-checked against the relative center ``Z_{Z_i}(Q)``.
    """

    def compute():
        chain = [C.trivial_subloop(Q)]
        while True:
            nxt = _preimage_of_center(Q, chain[-1])
            alt = C.relative_center(Q, chain[-1].members)
            if nxt != alt:
                raise InternalError(f"upper central step {len(chain)} disagrees with the relative center")
            if nxt == chain[-1]:
                return chain
            chain.append(nxt)

    return list(Q.memo("upper", compute))


@dataclass
class SeriesReport:
    upper: list[C.NormalSubloop]
    lower: list[C.NormalSubloop]
    nilpotency_class: int | None
    stabilized: dict[str, bool] = field(default_factory=lambda: {"upper": True, "lower": True})
    kind: str = "alpha_beta"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "upper": [s.labels() for s in self.upper],
            "lower": [s.labels() for s in self.lower],
            "upper_orders": [len(s) for s in self.upper],
            "lower_orders": [len(s) for s in self.lower],
            "class": self.nilpotency_class,
            "nilpotent": self.nilpotency_class is not None,
            "stabilized": dict(self.stabilized),
        }


def series_report(Q: CayleyLoop, kind: str = "alpha_beta") -> SeriesReport:
    """Both chains and the class, with the chain-length agreement enforced."""
    lower = lower_central_series(Q, kind)
    upper = upper_central_series(Q)
    lower_ok = lower[-1].is_trivial()
    upper_ok = upper[-1].is_whole()
    if lower_ok != upper_ok:
        raise InternalError("exactly one of the central series reaches its end")
    cls = None
    if lower_ok:
        cls = len(lower) - 1
        if len(upper) - 1 != cls:
            raise InternalError(f"upper series has {len(upper) - 1} steps, lower has {cls}")
    return SeriesReport(upper, lower, cls, kind=kind)


def _words_vanish(Q: CayleyLoop, n: int, budget: int | None) -> bool:
    if n == 0:
        return Q.order == 1
    return all(
        np.array_equal(value_set(Q, w, budget=budget), [Q.identity])
        for w in gen_weight_words("alpha_beta", n)
    )


def nilpotency_class(Q: CayleyLoop, cross_validate: bool = False, budget: int | None = None) -> int | None:
    """Class from the lower chain, or None when ``Q`` is not centrally nilpotent.

    The upper chain length is always compared.  With ``cross_validate`` the
    word route is compared too: all weight-``c`` commutator-associators
    vanish and some weight-``c-1`` one does not (for ``c <= WEIGHT_CAP``);
    for a non-nilpotent loop, words of weight ``len(lower)`` must not all
    vanish.
    """
    rep = series_report(Q)
    c = rep.nilpotency_class
    if cross_validate:
        if c is not None:
            if c <= WEIGHT_CAP and not _words_vanish(Q, c, budget):
                raise InternalError(f"weight-{c} words do not all vanish on a class-{c} loop")
            if 1 <= c <= WEIGHT_CAP + 1 and _words_vanish(Q, c - 1, budget):
                raise InternalError(f"weight-{c - 1} words vanish on a class-{c} loop")
        else:
            n = len(rep.lower)
            if n <= WEIGHT_CAP and _words_vanish(Q, n, budget):
                raise InternalError("all weight-n words vanish on a non-nilpotent loop")
    return c


# -- word subloops ---------------------------------------------------------------------------------

WEIGHT_KINDS = ("alpha_beta", "mu", "alpha", "beta")


def series_kind(kind: str) -> str:
    """The lower-series kind matching a word kind."""
    return "mu" if kind == "mu" else "alpha_beta"


def weight_values(
    Q: CayleyLoop, n: int, kind: str = "alpha_beta", budget: int | None = None, domain=None
) -> np.ndarray:
    """Every value of every canonical weight-``n`` word, optionally with all
    variables restricted to ``domain``."""
    if kind not in WEIGHT_KINDS:
        raise ValueError(f"kind must be one of {WEIGHT_KINDS}, got {kind!r}")
    if kind == "mu" and not P.is_moufang(Q):
        raise NotMoufang(f"{Q.name or 'loop'} is not Moufang")
    seen = np.zeros(Q.order, dtype=bool)
    for w in gen_weight_words(kind, n, with_commutators=kind in ("alpha", "beta")):
        doms = None if domain is None else {v: domain for v in w.vars()}
        seen[value_set(Q, w, doms, budget)] = True
    return np.flatnonzero(seen)


def weight_subloop(Q: CayleyLoop, n: int, kind: str = "alpha_beta", budget: int | None = None) -> C.Subloop:
    """Subloop generated by all values of all weight-``n`` words.

    Returned as a :class:`NormalSubloop` when normal, else as a plain
    :class:`Subloop`; compare with ``lower_central_series`` via
    :func:`weight_subloop_checks`.
    """
    if n < 1:
        raise ValueError("weight must be at least 1")
    S = C.subloop_generated(Q, weight_values(Q, n, kind, budget))
    try:
        return C.as_normal(Q, S.members)
    except NotNormal:
        return S


def weight_subloop_checks(
    Q: CayleyLoop, kind: str = "alpha_beta", budget: int | None = None, max_weight: int = WEIGHT_CAP
) -> list[CheckRecord]:
    """``weight_subloop(Q, n, kind) == A_n`` for ``n = 1 .. len(lower)``."""
    lower = lower_central_series(Q, series_kind(kind))
    out = []
    for n in range(1, min(len(lower), max_weight) + 1):
        A = lower[min(n, len(lower) - 1)]
        W = weight_subloop(Q, n, kind, budget)
        out.append(
            record(
                f"words.{kind}.{n}",
                f"A_{n} is generated by the values of weight-{n} commutator-associators",
                W == A,
                None if W == A else {"words": W.labels(), "series": A.labels()},
                f"order {len(W)}",
            )
        )
    return out


# -- structure verification --------------------------------------------------------------------------


def _section(Q: CayleyLoop, upper: C.Subloop, lower: C.Subloop) -> tuple[CayleyLoop, np.ndarray]:
    """``upper/lower`` as a loop, with the map from ``upper``'s members to cosets."""
    sub, index = restrict(Q, upper.members)
    pos = {int(m): k for k, m in enumerate(index)}
    quo, proj = quotient(sub, [pos[m] for m in lower.members])
    return quo, proj


def _series_facts(Q: CayleyLoop, rep: SeriesReport) -> list[CheckRecord]:
    out = []
    lower, upper = rep.lower, rep.upper
    for i in range(len(lower) - 1):
        inner = C.ca_generators(Q, lower[i].members)
        ok = set(int(v) for v in inner) <= lower[i + 1].as_set()
        out.append(record(f"lower.central.{i}", f"(A_{i},Q), α(A_{i},Q,Q), β(A_{i},Q,Q) lie in A_{i + 1}", ok))
    for i in range(len(upper) - 1):
        QZ, proj = quotient(Q, upper[i].members)
        zq = C.center(QZ).as_set()
        ok = {int(proj[z]) for z in upper[i + 1]} <= zq
        out.append(record(f"upper.central.{i}", f"Z_{i + 1}/Z_{i} lies in the center of Q/Z_{i}", ok))
    if rep.nilpotency_class is None:
        out.append(record("series.inclusions", "A_(r-i) ⊆ Z_i and A_i ⊆ Z_(r-i)", None, None, "not nilpotent"))
        return out
    r = rep.nilpotency_class
    bad = None
    for i in range(r + 1):
        if not (lower[r - i] <= upper[i] and lower[i] <= upper[r - i]):
            bad = i
            break
    out.append(record("series.inclusions", "A_(r-i) ⊆ Z_i and A_i ⊆ Z_(r-i) for every i", bad is None, bad))
    out.append(record("series.lengths", "the upper and lower series have equal length", len(upper) == len(lower), None, f"{r} steps"))
    return out


def _factor_checks(Q: CayleyLoop, rep: SeriesReport, budget: int | None) -> list[CheckRecord]:
    out = []
    lower = rep.lower
    gens = P.minimal_generating_set(Q)
    word_kind = "mu" if P.is_moufang(Q) else ("alpha_beta" if P.is_aloop(Q) else None)
    for i in range(len(lower)):
        nxt = lower[min(i + 1, len(lower) - 1)]
        quo, proj = _section(Q, lower[i], nxt)
        sub_index = {int(m): k for k, m in enumerate(sorted(lower[i].members))}
        abelian = P.is_group(quo) and P.is_commutative(quo)
        out.append(record(f"factor.{i}.abelian", f"A_{i}/A_{i + 1} is an abelian group", abelian, None, f"order {quo.order}"))
        if word_kind is None:
            out.append(record(f"factor.{i}.generated", f"A_{i}/A_{i + 1} is generated by weight-{i} words in the generators", None, None, "neither Moufang nor an A-loop"))
            continue
        if i == 0:
            vals = np.array(gens, dtype=np.int64)
        elif i > WEIGHT_CAP:
            out.append(record(f"factor.{i}.generated", f"A_{i}/A_{i + 1} is generated by weight-{i} words in the generators", None, None, "weight above the cap"))
            continue
        else:
            vals = weight_values(Q, i, word_kind, budget, domain=gens)
        inside = all(int(v) in lower[i] for v in vals)
        cosets = {int(proj[sub_index[int(v)]]) for v in vals if int(v) in lower[i]}
        ok = inside and C.subloop_generated(quo, cosets).is_whole()
        out.append(
            record(
                f"factor.{i}.generated",
                f"A_{i}/A_{i + 1} is generated by the cosets of weight-{i} {word_kind} words in the generators",
                ok,
                None,
                f"generators {[Q.label(g) for g in gens]}",
            )
        )
    return out


def _congruence_checks(Q: CayleyLoop, rep: SeriesReport, budget: int | None) -> list[CheckRecord]:
    out = []
    lower = rep.lower
    last = len(lower) - 1
    idents = []
    if P.is_moufang(Q):
        idents += battery.class2_moufang_identities()
    if P.is_aloop(Q):
        idents += battery.class2_aloop_identities()
    if not idents:
        return [record("congruences", "congruences modulo A_(k+2)", None, None, "neither Moufang nor an A-loop")]
    for k in range(max(1, last)):
        Ak, Ak2 = lower[min(k, last)], lower[min(k + 2, last)]
        quo, proj = quotient(Q, Ak2.members)
        ab = sorted({int(proj[a]) for a in Ak})
        recs = battery.check_all(quo, idents, domains={0: ab, 1: ab}, budget=budget, prefix=f"congruence.k{k}.")
        out += [
            CheckRecord(r.name, r.ref + f" modulo A_{k + 2}, with a, b in A_{k}", r.verdict, r.witness, r.detail)
            for r in recs
        ]
    return out


def verify_structure(Q: CayleyLoop, budget: int | None = None, kind: str | None = None) -> Report:
    """Series coherence, factor structure, the class-2 battery and the congruences."""
    if kind is None:
        kind = "mu" if P.is_moufang(Q) else "alpha_beta"
    rep = series_report(Q, kind)
    out = Report(f"structure of {Q.name or 'loop'}")
    out.sections["order"] = Q.order
    out.sections["series"] = rep.to_dict()
    out.add(_series_facts(Q, rep))
    if kind == "mu":
        same = lower_central_series(Q, "alpha_beta") == rep.lower
        out.add(record("series.mu-vs-alpha-beta", "Moufang loop: the μ and (α,β) lower series coincide", same))
    out.add(_factor_checks(Q, rep, budget))
    if rep.nilpotency_class == 2:
        if P.is_moufang(Q):
            out.add(battery.check_all(Q, battery.class2_moufang_identities(), budget=budget, prefix="class2."))
        if P.is_aloop(Q):
            out.add(battery.check_all(Q, battery.class2_aloop_identities(), budget=budget, prefix="class2."))
    out.add(_congruence_checks(Q, rep, budget))
    out.add(
        record(
            "subloops.finitely-generated",
            "every subloop of a finitely generated nilpotent Moufang or A-loop is finitely generated",
            None,
            None,
            "automatic for finite loops",
        )
    )
    return out
