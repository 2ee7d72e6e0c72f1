"""Built-in fixture loops and exhaustive enumeration of tiny loops."""

from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from .loop import CayleyLoop, chein_double, direct_product, trivial_loop

# Fano-plane triples (i, i+1, i+3 mod 7) on imaginary units 1..7:
# e_a e_b = e_c for each cyclic rotation of (a, b, c), and the reverse is negated.
OCTONION_TRIPLES = [(1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3)]
QUATERNION_TRIPLES = [(1, 2, 3)]


def cyclic(n: int) -> CayleyLoop:
    ar = np.arange(n)
    return CayleyLoop((ar[:, None] + ar[None, :]) % n, name=f"Z{n}")


def klein() -> CayleyLoop:
    K = direct_product(cyclic(2), cyclic(2))
    return CayleyLoop(K.table, name="V4")


def symmetric3() -> CayleyLoop:
    """S3 on permutations of {0,1,2} in lexicographic order; ``(pq)(i) = p(q(i))``."""
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]
    labels = ["".join(map(str, p)) for p in perms]
    return CayleyLoop(table, name="S3", labels=labels)


def dihedral(m: int) -> CayleyLoop:
    """Dihedral group of order ``2m``; ``r^k s^j`` has index ``k + m*j``."""
    n = 2 * m
    table = np.empty((n, n), dtype=np.int64)
    for a, i, b, j in itertools.product(range(m), range(2), range(m), range(2)):
        k = (a + (b if i == 0 else -b)) % m
        table[a + m * i, b + m * j] = k + m * ((i + j) % 2)
    labels = [f"r{k}" for k in range(m)] + [f"r{k}s" for k in range(m)]
    return CayleyLoop(table, name=f"D{m}", labels=labels)


def _sign_units(triples, units: int, name: str) -> CayleyLoop:
    """Loop of the units ``+-e_k`` of a Cayley-Dickson style algebra.

    ``e_0`` is the real unit; element ``2k`` is ``+e_k`` and ``2k+1`` is ``-e_k``.
    """
    prod = {}
    for a, b, c in triples:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            prod[x, y] = (1, z)
            prod[y, x] = (-1, z)
    n = 2 * units
    table = np.empty((n, n), dtype=np.int64)
    for p, q in itertools.product(range(n), repeat=2):
        i, si = divmod(p, 2)
        j, sj = divmod(q, 2)
        if i == 0:
            sign, k = 1, j
        elif j == 0:
            sign, k = 1, i
        elif i == j:
            sign, k = -1, 0
        else:
            sign, k = prod[i, j]
        if si ^ sj:
            sign = -sign
        table[p, q] = 2 * k + (sign < 0)
    labels = []
    for k in range(units):
        base = "1" if k == 0 else f"e{k}"
        labels += [base, "-" + base]
    return CayleyLoop(table, name=name, labels=labels)


def quaternion() -> CayleyLoop:
    return _sign_units(QUATERNION_TRIPLES, 4, "Q8")


def octonion() -> CayleyLoop:
    """The octonion loop O16 of units ``+-1, +-e1, ..., +-e7``."""
    return _sign_units(OCTONION_TRIPLES, 8, "O16")


def builtin_catalog() -> dict[str, CayleyLoop]:
    """Every fixture loop, keyed by name, in a fixed order."""
    loops = [trivial_loop()] + [cyclic(n) for n in range(2, 9)]
    S3 = symmetric3()
    M = chein_double(S3)
    loops += [klein(), S3, dihedral(4), quaternion(), M, octonion()]
    z2 = cyclic(2)
    for other in (cyclic(4), S3, M):
        P = direct_product(z2, other)
        loops.append(CayleyLoop(P.table, name=f"Z2x{other.name}", labels=P.labels))
    return {Q.name: Q for Q in loops}


# -- enumeration of tiny loops ----------------------------------------------------


def _latin_completions(grid: list[list[int]], n: int, start: int) -> Iterator[list[list[int]]]:
    cells = [(i, j) for i in range(n) for j in range(n) if grid[i][j] < 0]
    rows = [set(v for v in r if v >= 0) for r in grid]
    cols = [set(grid[i][j] for i in range(n) if grid[i][j] >= 0) for j in range(n)]

    def rec(k: int):
        if k == len(cells):
            yield [row[:] for row in grid]
            return
        i, j = cells[k]
        for v in range(n):
            if v in rows[i] or v in cols[j]:
                continue
            grid[i][j] = v
            rows[i].add(v)
            cols[j].add(v)
            yield from rec(k + 1)
            rows[i].discard(v)
            cols[j].discard(v)
            grid[i][j] = -1

    yield from rec(start)


def reduced_latin_squares(n: int) -> Iterator[list[list[int]]]:
    """Latin squares whose first row and column are ``0..n-1``.

    These are exactly the loop tables on ``0..n-1`` with identity 0.
    """
    if n > 5:
        raise ValueError("enumeration is limited to order 5")
    grid = [[-1] * n for _ in range(n)]
    grid[0] = list(range(n))
    for i in range(n):
        grid[i][0] = i
    yield from _latin_completions(grid, n, 0)


def latin_squares(n: int) -> Iterator[list[list[int]]]:
    """All Latin squares of order ``n`` (at most 4)."""
    if n > 4:
        raise ValueError("full Latin square enumeration is limited to order 4")
    yield from _latin_completions([[-1] * n for _ in range(n)], n, 0)


def enumerate_loops(max_order: int = 5) -> Iterator[CayleyLoop]:
    """Every loop on ``0..n-1`` with identity 0, for ``1 <= n <= max_order``."""
    for n in range(1, max_order + 1):
        for k, sq in enumerate(reduced_latin_squares(n)):
            yield CayleyLoop(sq, name=f"L{n}.{k}")
