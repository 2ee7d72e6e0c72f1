"""Commutators, associators, subloops, nuclei, centers and the subloops A^N(Q).

Each element operation has a scalar form with range checks and a ``_v``
form that broadcasts over numpy index arrays.  Solved forms:

    (a,b)   = a\\(b\\(ab))          commutator, ab = b(a(a,b))
    [a,b]   = (ba)\\(ab)            commutator, ab = (ba)[a,b]
    α(a,b,c) = a\\(((ab)c)/(bc))    ab.c = (a α).(bc)
    β(a,b,c) = ((cb)\\(c(ba)))/a    c.ba = cb.(β a)
    [a,b,c] = (a(bc))\\((ab)c)      ab.c = (a.bc)[a,b,c]
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InternalError, NotMoufang, NotNormal
from .loop import CayleyLoop, quotient

KINDS = ("alpha_beta", "mu")


# -- element operations ---------------------------------------------------------------


def comm_v(Q: CayleyLoop, a, b):
    L, t = Q.ldiv_table, Q.table
    return L[a, L[b, t[a, b]]]


def bcomm_v(Q: CayleyLoop, a, b):
    t = Q.table
    return Q.ldiv_table[t[b, a], t[a, b]]


def alpha_v(Q: CayleyLoop, a, b, c):
    t = Q.table
    return Q.ldiv_table[a, Q.rdiv_table[t[t[a, b], c], t[b, c]]]


def beta_v(Q: CayleyLoop, a, b, c):
    t = Q.table
    return Q.rdiv_table[Q.ldiv_table[t[c, b], t[c, t[b, a]]], a]


def bassoc_v(Q: CayleyLoop, a, b, c):
    t = Q.table
    return Q.ldiv_table[t[a, t[b, c]], t[t[a, b], c]]


def inv_v(Q: CayleyLoop, a):
    """``1/a``; equal to the two-sided inverse whenever one exists."""
    return Q.rdiv_table[Q.identity, a]


def commutator_paren(Q: CayleyLoop, a: int, b: int) -> int:
    """``(a,b)``, the solution of ``ab = b(a(a,b))``."""
    Q._check(a, b)
    return int(comm_v(Q, a, b))


def commutator_bracket(Q: CayleyLoop, a: int, b: int) -> int:
    """``[a,b]``, the solution of ``ab = (ba)[a,b]``."""
    Q._check(a, b)
    return int(bcomm_v(Q, a, b))


def assoc_alpha(Q: CayleyLoop, a: int, b: int, c: int) -> int:
    """``α(a,b,c)``, the solution x of ``ab.c = ax.bc``."""
    Q._check(a, b, c)
    return int(alpha_v(Q, a, b, c))


def assoc_beta(Q: CayleyLoop, a: int, b: int, c: int) -> int:
    """``β(a,b,c)``, the solution x of ``c.ba = cb.xa``."""
    Q._check(a, b, c)
    return int(beta_v(Q, a, b, c))


def assoc_bracket(Q: CayleyLoop, a: int, b: int, c: int) -> int:
    """``[a,b,c]``, the solution of ``ab.c = (a.bc)[a,b,c]``."""
    Q._check(a, b, c)
    return int(bassoc_v(Q, a, b, c))


def grids(n: int, k: int) -> tuple[np.ndarray, ...]:
    """``k`` broadcastable index arrays covering ``range(n)**k``."""
    ar = np.arange(n)
    return tuple(ar.reshape((1,) * i + (n,) + (1,) * (k - i - 1)) for i in range(k))


def associator_mask(Q: CayleyLoop) -> np.ndarray:
    """Boolean ``M[a,b,c]`` that is true iff ``(ab)c = a(bc)``."""

    def compute():
        t = Q.table
        a, b, c = grids(Q.order, 3)
        m = t[t[a, b], c] == t[a, t[b, c]]
        m.setflags(write=False)
        return m

    return Q.memo("assoc-mask", compute)


# -- subloops ------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subloop:
    """A subset of a loop closed under the three operations."""

    parent: CayleyLoop
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "_set", frozenset(self.members))

    def __contains__(self, x) -> bool:
        return int(x) in self._set

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subloop):
            return NotImplemented
        return self.members == other.members and self.parent == other.parent

    def __hash__(self) -> int:
        return hash(self.members)

    def __repr__(self) -> str:
        kind = type(self).__name__
        return f"{kind}({[self.parent.label(m) for m in self.members]})"

    def __le__(self, other: "Subloop") -> bool:
        return self._set <= other._set

    def __ge__(self, other: "Subloop") -> bool:
        return self._set >= other._set

    def __lt__(self, other: "Subloop") -> bool:
        return self._set < other._set

    def as_set(self) -> frozenset:
        return self._set

    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    @property
    def order(self) -> int:
        return len(self.members)

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def is_whole(self) -> bool:
        return len(self.members) == self.parent.order

    def labels(self) -> list[str]:
        return [self.parent.label(m) for m in self.members]


@dataclass(frozen=True, eq=False)
class NormalSubloop(Subloop):
    """A subloop whose normality has been checked against every inner generator."""

    verified: bool = True


def _closure_mask(Q: CayleyLoop, mask: np.ndarray) -> np.ndarray:
    mask = mask.copy()
    mask[Q.identity] = True
    while True:
        m = np.flatnonzero(mask)
        sub = np.ix_(m, m)
        grown = mask.copy()
        grown[Q.table[sub]] = True
        grown[Q.ldiv_table[sub]] = True
        grown[Q.rdiv_table[sub]] = True
        if np.array_equal(grown, mask):
            return mask
        mask = grown


def _mask(Q: CayleyLoop, S: Iterable[int]) -> np.ndarray:
    mask = np.zeros(Q.order, dtype=bool)
    items = [int(s) for s in S]
    Q._check(*items)
    mask[items] = True
    return mask


def subloop_generated(Q: CayleyLoop, S: Iterable[int] = ()) -> Subloop:
    """The least subloop containing ``S``."""
    mask = _closure_mask(Q, _mask(Q, S))
    return Subloop(Q, tuple(int(v) for v in np.flatnonzero(mask)))


def is_subloop(Q: CayleyLoop, S: Iterable[int]) -> bool:
    mask = _mask(Q, S)
    return bool(mask[Q.identity]) and np.array_equal(_closure_mask(Q, mask), mask)


def trivial_subloop(Q: CayleyLoop) -> NormalSubloop:
    return NormalSubloop(Q, (Q.identity,))


def whole(Q: CayleyLoop) -> NormalSubloop:
    return NormalSubloop(Q, tuple(range(Q.order)))


# -- normality ---------------------------------------------------------------------------


def translate_violation(Q: CayleyLoop, H: Iterable[int]) -> tuple[str, tuple] | None:
    """First failure of ``T(x)H = H``, ``L(x,y)H = H``, ``R(x,y)H = H``."""
    mask = _mask(Q, H)
    h = np.flatnonzero(mask)
    t, L, R = Q.table, Q.ldiv_table, Q.rdiv_table
    ar = np.arange(Q.order)
    img = L[ar[None, :], t[h[:, None], ar[None, :]]]
    bad = np.argwhere(~mask[img])
    if len(bad):
        i, j = bad[0]
        return "T(x)h", (int(h[i]), int(j))
    hh, x, y = h[:, None, None], ar[None, :, None], ar[None, None, :]
    for name, img in (
        ("L(x,y)h", L[t[x, y], t[x, t[y, hh]]]),
        ("R(x,y)h", R[t[t[hh, x], y], t[x, y]]),
    ):
        bad = np.argwhere(~mask[img])
        if len(bad):
            i, j, k = bad[0]
            return name, (int(h[i]), int(j), int(k))
    return None


def inclusion_violation(Q: CayleyLoop, H: Iterable[int]) -> tuple[str, tuple] | None:
    """First failure of ``α(H,Q,Q) ⊆ H``, ``β(H,Q,Q) ⊆ H``, ``(H,Q) ⊆ H``."""
    mask = _mask(Q, H)
    h = np.flatnonzero(mask)
    n = Q.order
    hh, x, y = h[:, None, None], np.arange(n)[None, :, None], np.arange(n)[None, None, :]
    for name, vals in (("alpha", alpha_v(Q, hh, x, y)), ("beta", beta_v(Q, hh, x, y))):
        bad = np.argwhere(~mask[vals])
        if len(bad):
            i, j, k = bad[0]
            return name, (int(h[i]), int(j), int(k))
    vals = comm_v(Q, h[:, None], np.arange(n)[None, :])
    bad = np.argwhere(~mask[vals])
    if len(bad):
        i, j = bad[0]
        return "comm", (int(h[i]), int(j))
    return None


def is_normal(Q: CayleyLoop, H: Iterable[int]) -> bool:
    H = list(H)
    return is_subloop(Q, H) and translate_violation(Q, H) is None


def as_normal(Q: CayleyLoop, H: Iterable[int]) -> NormalSubloop:
    """Re-verify normality and wrap; raises NotNormal with the failing translate."""
    members = tuple(sorted(set(int(h) for h in H)))
    if not is_subloop(Q, members):
        raise NotNormal("subset is not a subloop")
    bad = translate_violation(Q, members)
    if bad is not None:
        raise NotNormal(f"{bad[0]} leaves the subloop at {bad[1]}")
    return NormalSubloop(Q, members)


def _inner_generator_arrays(Q: CayleyLoop) -> np.ndarray:
    def compute():
        n = Q.order
        t, L, R = Q.table, Q.ldiv_table, Q.rdiv_table
        x, y, z = grids(n, 3)
        ar = np.arange(n)
        Ts = L[ar[:, None], t[ar[None, :], ar[:, None]]]
        Rs = R[t[t[z, x], y], t[x, y]].reshape(n * n, n)
        Ls = L[t[x, y], t[x, t[y, z]]].reshape(n * n, n)
        gens = np.unique(np.concatenate([Ts, Rs, Ls]), axis=0)
        gens.setflags(write=False)
        return gens

    return Q.memo("inner-gen-arrays", compute)


def normal_closure(Q: CayleyLoop, S: Iterable[int]) -> NormalSubloop:
    """Subloop generated by the orbit of ``S`` under the inner mapping group."""
    gens = _inner_generator_arrays(Q)
    orbit = _mask(Q, S)
    orbit[Q.identity] = True
    while True:
        m = np.flatnonzero(orbit)
        grown = orbit.copy()
        grown[gens[:, m]] = True
        if np.array_equal(grown, orbit):
            break
        orbit = grown
    mask = _closure_mask(Q, orbit)
    members = tuple(int(v) for v in np.flatnonzero(mask))
    bad = translate_violation(Q, members)
    if bad is not None:
        raise InternalError(f"subloop generated by an inner-mapping orbit is not normal: {bad}")
    bad = inclusion_violation(Q, members)
    if bad is not None:
        raise InternalError(f"normal closure fails the associator inclusions: {bad}")
    return NormalSubloop(Q, members)


# -- nuclei and centers -----------------------------------------------------------------


@dataclass(frozen=True)
class Nuclei:
    left: Subloop
    middle: Subloop
    right: Subloop
    nucleus: Subloop


def nuclei(Q: CayleyLoop) -> Nuclei:
    """Left, middle and right nuclei from the bracket associator, and their meet."""

    def compute():
        m = associator_mask(Q)
        left = m.all(axis=(1, 2))
        middle = m.all(axis=(0, 2))
        right = m.all(axis=(0, 1))
        both = left & middle & right
        parts = []
        for mask in (left, middle, right, both):
            members = tuple(int(v) for v in np.flatnonzero(mask))
            if not is_subloop(Q, members):
                raise InternalError("a nucleus failed to be a subloop")
            parts.append(Subloop(Q, members))
        return Nuclei(*parts)

    return Q.memo("nuclei", compute)


def _commuting_mask(Q: CayleyLoop) -> np.ndarray:
    t = Q.table
    return (t == t.T).all(axis=1)


def center(Q: CayleyLoop) -> NormalSubloop:
    """``Z(Q) = {a in N(Q) | ax = xa for all x}``, cross-checked against the
    relative-center definition and, where they apply, the Moufang and
    IP/A-loop shortcut characterizations."""

    def compute():
        from . import properties

        nuc = nuclei(Q).nucleus.mask()
        z = nuc & _commuting_mask(Q)
        members = tuple(int(v) for v in np.flatnonzero(z))
        alt = _relative_center_mask(Q, np.eye(1, Q.order, Q.identity, dtype=bool)[0])
        if not np.array_equal(alt, z):
            raise InternalError("center and relative center of {e} disagree")
        comm_free = (comm_v(Q, *grids(Q.order, 2)) == Q.identity).all(axis=1)
        shortcuts = []
        if properties.is_moufang(Q):
            shortcuts.append(("bracket associator", nuclei(Q).left.mask() & (bcomm_v(Q, *grids(Q.order, 2)) == Q.identity).all(axis=1)))
        if properties.is_ip(Q) or properties.is_aloop(Q):
            a, x, y = grids(Q.order, 3)
            shortcuts.append(("alpha", (alpha_v(Q, a, x, y) == Q.identity).all(axis=(1, 2)) & comm_free))
            shortcuts.append(("beta", (beta_v(Q, a, x, y) == Q.identity).all(axis=(1, 2)) & comm_free))
        for name, mask in shortcuts:
            if not np.array_equal(mask, z):
                raise InternalError(f"{name} characterization of the center disagrees")
        return as_normal(Q, members)

    return Q.memo("center", compute)


def _relative_center_mask(Q: CayleyLoop, hmask: np.ndarray) -> np.ndarray:
    a, x, y = grids(Q.order, 3)
    ok = hmask[alpha_v(Q, a, x, y)].all(axis=(1, 2))
    ok &= hmask[beta_v(Q, a, x, y)].all(axis=(1, 2))
    ok &= hmask[comm_v(Q, a[..., 0], x[..., 0])].all(axis=1)
    return ok


def relative_center(Q: CayleyLoop, H: Iterable[int]) -> NormalSubloop:
    """``Z_H(Q) = {a | α(a,Q,Q), β(a,Q,Q), (a,Q) ⊆ H}``."""
    H = as_normal(Q, H)
    mask = _relative_center_mask(Q, H.mask())
    members = tuple(int(v) for v in np.flatnonzero(mask))
    if not H.as_set() <= set(members):
        raise InternalError("relative center does not contain H")
    try:
        return as_normal(Q, members)
    except NotNormal as exc:
        raise InternalError(f"relative center is not normal: {exc}") from None


def ca_generators(Q: CayleyLoop, N: Iterable[int], kind: str = "alpha_beta") -> np.ndarray:
    """Sorted distinct values of the generating set of ``A^N(Q)``."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    nn = np.array(sorted(set(int(v) for v in N)))
    n = Q.order
    x, y = np.arange(n)[None, :, None], np.arange(n)[None, None, :]
    a = nn[:, None, None]
    if kind == "mu":
        from . import properties

        if not properties.is_moufang(Q):
            raise NotMoufang(f"{Q.name or 'loop'} is not Moufang")
        parts = [bassoc_v(Q, a, x, y), bcomm_v(Q, a[..., 0], x[..., 0])]
    else:
        parts = [alpha_v(Q, a, x, y), beta_v(Q, a, x, y), comm_v(Q, a[..., 0], x[..., 0])]
    return np.unique(np.concatenate([p.ravel() for p in parts]))


def ca_subloop(Q: CayleyLoop, N: Iterable[int], kind: str = "alpha_beta") -> NormalSubloop:
    """``A^N(Q)``: the subloop generated by ``α(N,Q,Q) ∪ β(N,Q,Q) ∪ (N,Q)``,
    or by ``[N,Q,Q] ∪ [N,Q]`` for ``kind='mu'`` on Moufang loops."""
    N = as_normal(Q, N)
    gens = ca_generators(Q, N, kind)
    sub = subloop_generated(Q, gens)
    if not sub.as_set() <= N.as_set():
        raise InternalError("A^N(Q) is not contained in N")
    try:
        return as_normal(Q, sub.members)
    except NotNormal as exc:
        raise InternalError(f"A^N(Q) is not normal: {exc}") from None


# -- enumeration of normal subloops ---------------------------------------------------

NORMAL_ENUM_CAP = 16


def normal_subloops(Q: CayleyLoop, cap: int = NORMAL_ENUM_CAP) -> list[NormalSubloop]:
    """Every normal subloop, by breadth-first growth of normal closures.

    Sorted by size, then members.  Limited to loops of order at most ``cap``.
    """
    if Q.order > cap:
        raise ValueError(f"normal subloop enumeration is limited to order {cap}")

    def compute():
        start = trivial_subloop(Q)
        found = {start.members: start}
        frontier = [start]
        while frontier:
            nxt = []
            for S in frontier:
                for g in range(Q.order):
                    if g in S:
                        continue
                    N = normal_closure(Q, S.members + (g,))
                    if N.members not in found:
                        found[N.members] = N
                        nxt.append(N)
            frontier = nxt
        return sorted(found.values(), key=lambda s: (len(s), s.members))

    return Q.memo(("normal-subloops", cap), compute)


def image_in_center(Q: CayleyLoop, N: Iterable[int], K: Iterable[int]) -> bool:
    """Whether ``NK/K`` lies in the center of ``Q/K``."""
    QK, proj = quotient(Q, K)
    Z = center(QK).as_set()
    return all(int(proj[n]) in Z for n in N)


def central_kernel_meet(Q: CayleyLoop, N: Iterable[int]) -> NormalSubloop:
    """Intersection of all normal ``K`` with ``NK/K`` central in ``Q/K``."""
    N = list(N)
    mask = np.ones(Q.order, dtype=bool)
    for K in normal_subloops(Q):
        if image_in_center(Q, N, K):
            mask &= K.mask()
    return as_normal(Q, np.flatnonzero(mask))
