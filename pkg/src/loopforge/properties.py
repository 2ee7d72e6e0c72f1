"""Classification predicates for finite loops.

Every predicate has a ``find_*`` companion that returns a witness tuple (or
None), so reports can say why a property fails.  Results are cached on the
loop.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .calculus import associator_mask, grids, subloop_generated
from .loop import CayleyLoop, find_nonassociative_triple
from .mappings import non_automorphic_generator

MOUFANG_IDENTITIES = (
    "x(y(xz)) = ((xy)x)z",
    "((xy)z)y = x(y(zy))",
    "(xy)(zx) = (x(yz))x",
)


def _first(mask: np.ndarray):
    bad = np.argwhere(~mask)
    return tuple(int(v) for v in bad[0]) if len(bad) else None


def moufang_witnesses(Q: CayleyLoop) -> list[tuple[int, int, int] | None]:
    """First failing ``(x, y, z)`` for each of the three Moufang identities."""

    def compute():
        t = Q.table
        x, y, z = grids(Q.order, 3)
        checks = (
            t[x, t[y, t[x, z]]] == t[t[t[x, y], x], z],
            t[t[t[x, y], z], y] == t[x, t[y, t[z, y]]],
            t[t[x, y], t[z, x]] == t[t[x, t[y, z]], x],
        )
        return [_first(c) for c in checks]

    return Q.memo("moufang-witnesses", compute)


def is_moufang(Q: CayleyLoop) -> bool:
    return all(w is None for w in moufang_witnesses(Q))


def find_moufang_failure(Q: CayleyLoop):
    for name, w in zip(MOUFANG_IDENTITIES, moufang_witnesses(Q)):
        if w is not None:
            return name, w
    return None


def is_group(Q: CayleyLoop) -> bool:
    return Q.memo("group", lambda: bool(associator_mask(Q).all()))


def find_nonassociative(Q: CayleyLoop):
    return find_nonassociative_triple(Q)


def find_noncommutative(Q: CayleyLoop):
    t = Q.table
    return _first(t == t.T)


def is_commutative(Q: CayleyLoop) -> bool:
    return find_noncommutative(Q) is None


def find_ip_failure(Q: CayleyLoop):
    """Witness against the inverse property: ``x^-1(xy) = y`` and ``(yx)x^-1 = y``.

    Returns ``("inverse", (x,))`` when ``1/x != x\\1``.
    """

    def compute():
        e = Q.identity
        left = Q.rdiv_table[e]
        right = Q.ldiv_table[:, e]
        bad = np.flatnonzero(left != right)
        if len(bad):
            return "two-sided inverse", (int(bad[0]),)
        t = Q.table
        x, y = grids(Q.order, 2)
        inv = left
        w = _first(t[inv[x], t[x, y]] == y)
        if w is not None:
            return "x^-1(xy) = y", w
        w = _first(t[t[y, x], inv[x]] == y)
        if w is not None:
            return "(yx)x^-1 = y", w
        return None

    return Q.memo("ip-failure", compute)


def is_ip(Q: CayleyLoop) -> bool:
    return find_ip_failure(Q) is None


def find_alternative_failure(Q: CayleyLoop):
    """Witness against ``x(xy) = (xx)y`` or ``(yx)x = y(xx)``."""
    t = Q.table
    x, y = grids(Q.order, 2)
    xx = t[x, x]
    w = _first(t[x, t[x, y]] == t[xx, y])
    if w is not None:
        return "x(xy) = (xx)y", w
    w = _first(t[t[y, x], x] == t[y, xx])
    if w is not None:
        return "(yx)x = y(xx)", w
    return None


def is_alternative(Q: CayleyLoop) -> bool:
    return Q.memo("alternative", lambda: find_alternative_failure(Q) is None)


def _associative_on(Q: CayleyLoop, members) -> bool:
    m = np.array(members)
    mask = associator_mask(Q)
    return bool(mask[np.ix_(m, m, m)].all())


def find_power_associative_failure(Q: CayleyLoop):
    """An element whose generated subloop is not a group."""
    for x in range(Q.order):
        if not _associative_on(Q, subloop_generated(Q, [x]).members):
            return (x,)
    return None


def is_power_associative(Q: CayleyLoop) -> bool:
    return Q.memo("power-assoc", lambda: find_power_associative_failure(Q) is None)


def find_diassociative_failure(Q: CayleyLoop):
    """A pair whose generated subloop is not a group."""

    def compute():
        checked: list[frozenset] = []
        for x, y in itertools.combinations_with_replacement(range(Q.order), 2):
            if any(x in s and y in s for s in checked):
                continue
            sub = subloop_generated(Q, [x, y])
            if not _associative_on(Q, sub.members):
                return (x, y)
            checked.append(sub.as_set())
        return None

    return Q.memo("diassoc-failure", compute)


def is_diassociative(Q: CayleyLoop) -> bool:
    return find_diassociative_failure(Q) is None


def find_aloop_failure(Q: CayleyLoop):
    """An inner-mapping generator that is not an automorphism, with a witness pair."""
    return Q.memo("aloop-failure", lambda: non_automorphic_generator(Q))


def is_aloop(Q: CayleyLoop) -> bool:
    return find_aloop_failure(Q) is None


def properties(Q: CayleyLoop) -> dict[str, bool]:
    """All classification flags, in a fixed order."""
    return {
        "quasigroup": True,
        "loop": True,
        "group": is_group(Q),
        "commutative": is_commutative(Q),
        "ip": is_ip(Q),
        "moufang": is_moufang(Q),
        "aloop": is_aloop(Q),
        "power_associative": is_power_associative(Q),
        "diassociative": is_diassociative(Q),
        "alternative": is_alternative(Q),
    }


def minimal_generating_set(Q: CayleyLoop, max_combos: int = 20000) -> list[int]:
    """A generating set of least size, found by search over subsets.

    Falls back to a greedy set when the search would exceed max_combos subsets.
    """
    gens: list[int] = []
    current = subloop_generated(Q, gens)
    for x in range(Q.order):
        if x not in current:
            gens.append(x)
            current = subloop_generated(Q, gens)
    pool = [x for x in range(Q.order) if x != Q.identity]
    for k in range(1, len(gens)):
        if math.comb(len(pool), k) > max_combos:
            break
        for combo in itertools.combinations(pool, k):
            if subloop_generated(Q, combo).is_whole():
                return list(combo)
    return gens
