"""Finite loops given by Cayley tables.

A loop of order ``n`` lives on the dense carrier ``0..n-1``.  Its identity may
sit at any index.  The two division tables are derived from the
multiplication table once, at construction, and are never inputs.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import (
    MalformedInput,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotLatin,
    NotNormal,
    NotPowerAssociative,
    SizeCap,
)

ORDER_CAP = 256


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _check_latin(table: np.ndarray) -> None:
    n = table.shape[0]
    for axis, lines in (("row", table), ("column", table.T)):
        for i, line in enumerate(lines):
            seen = np.full(n, -1)
            for j, v in enumerate(line):
                if seen[v] >= 0:
                    raise NotLatin(axis, i, int(v), (int(seen[v]), j))
                seen[v] = j


class CayleyLoop:
    """A validated finite loop.

    ``table[a, b]`` is ``a*b``; ``ldiv_table[a, b]`` is ``a\\b`` (the x with
    ``a*x = b``) and ``rdiv_table[a, b]`` is ``a/b`` (the x with ``x*b = a``).
    All three arrays are read-only.
    """

    def __init__(
        self,
        table,
        name: str | None = None,
        labels: Sequence[str] | None = None,
        cap: int = ORDER_CAP,
    ):
        try:
            t = np.array(table, dtype=np.int64)
        except (TypeError, ValueError, OverflowError) as exc:
            raise MalformedInput(f"table entries must be integers: {exc}") from None
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise MalformedInput(f"table must be a non-empty square, got shape {t.shape}")
        n = t.shape[0]
        if n > cap:
            raise SizeCap(f"order {n} exceeds the order cap {cap}")
        if t.min() < 0 or t.max() >= n:
            bad = np.argwhere((t < 0) | (t >= n))[0]
            raise MalformedInput(
                f"entry {t[tuple(bad)]} at row {bad[0]}, column {bad[1]} is outside [0, {n})"
            )
        _check_latin(t)

        ar = np.arange(n)
        ident = None
        for e in range(n):
            if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar):
                ident = e
                break
        if ident is None:
            raise NoIdentity("no element is a two-sided identity")

        ldiv = np.empty_like(t)
        rdiv = np.empty_like(t)
        for a in range(n):
            ldiv[a, t[a]] = ar
            rdiv[t[:, a], a] = ar

        self.order = n
        self.identity = ident
        self.table = _readonly(t)
        self.ldiv_table = _readonly(ldiv)
        self.rdiv_table = _readonly(rdiv)
        self.name = name
        if labels is not None and len(labels) != n:
            raise MalformedInput(f"expected {n} labels, got {len(labels)}")
        self.labels = tuple(labels) if labels is not None else None
        self._memo: dict = {}

    # -- basic operations ----------------------------------------------------

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    def __repr__(self) -> str:
        name = f" {self.name!r}" if self.name else ""
        return f"<CayleyLoop{name} order={self.order} identity={self.identity}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CayleyLoop):
            return NotImplemented
        return self.identity == other.identity and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.order, self.table.tobytes()))

    def _check(self, *xs: int) -> None:
        for x in xs:
            if not 0 <= x < self.order:
                raise IndexError(f"element {x} outside carrier of order {self.order}")

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.table[a, b])

    def ldiv(self, a: int, b: int) -> int:
        """The x with ``a*x = b``."""
        self._check(a, b)
        return int(self.ldiv_table[a, b])

    def rdiv(self, a: int, b: int) -> int:
        """The x with ``x*b = a``."""
        self._check(a, b)
        return int(self.rdiv_table[a, b])

    def left_inverse(self, a: int) -> int:
        return self.rdiv(self.identity, a)

    def right_inverse(self, a: int) -> int:
        return self.ldiv(a, self.identity)

    def inverse(self, a: int) -> int:
        """Two-sided inverse ``1/a``; raises NoInverse when ``1/a != a\\1``."""
        left = self.left_inverse(a)
        if left != self.right_inverse(a):
            raise NoInverse(f"element {self.label(a)} has no two-sided inverse")
        return left

    @property
    def inverses(self) -> np.ndarray:
        """Array of ``1/x`` for every x (left inverses)."""
        return self.rdiv_table[self.identity]

    def has_two_sided_inverses(self) -> bool:
        e = self.identity
        return bool(np.array_equal(self.rdiv_table[e], self.ldiv_table[:, e]))

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)

    def memo(self, key, compute):
        """Cache a derived, immutable property of this loop."""
        if key not in self._memo:
            self._memo[key] = compute()
        return self._memo[key]


# -- table documents -----------------------------------------------------------


def parse_table(text: str, name: str | None = None) -> CayleyLoop:
    """Parse the plain-text table format.

    The first line holds the order ``n``; the next ``n`` lines hold rows of
    ``n`` space-separated integers.  Lines starting with ``#`` are comments.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MalformedInput("empty table document")
    try:
        n = int(lines[0])
    except ValueError:
        raise MalformedInput(f"first line must be the order, got {lines[0]!r}") from None
    if n <= 0:
        raise MalformedInput(f"order must be positive, got {n}")
    rows = lines[1:]
    if len(rows) != n:
        raise MalformedInput(f"expected {n} rows, got {len(rows)}")
    table = []
    for i, row in enumerate(rows):
        fields = row.split()
        if len(fields) != n:
            raise MalformedInput(f"row {i} has {len(fields)} entries, expected {n}")
        try:
            table.append([int(f) for f in fields])
        except ValueError:
            raise MalformedInput(f"row {i} contains a non-integer entry: {row!r}") from None
    return CayleyLoop(table, name=name)


def serialize_table(Q: CayleyLoop) -> str:
    out = [str(Q.order)]
    out += [" ".join(str(int(v)) for v in row) for row in Q.table]
    if Q.name:
        out.append(f"# {Q.name}")
    return "\n".join(out) + "\n"


# -- powers ---------------------------------------------------------------------


def elem_pow(Q: CayleyLoop, a: int, k: int) -> int:
    """``a**k`` with ``a**k = a * a**(k-1)``; negative k uses ``1/a``.

    For ``k`` outside {0, 1} the cyclic subloop of ``a`` is checked to
    behave like a cyclic group, which is exactly the condition for every
    bracketing of the power to agree.
    """
    Q._check(a)
    if k == 0:
        return Q.identity
    if k == 1:
        return a
    if k < 0:
        a = Q.inverse(a)
        k = -k
        if k == 1:
            return a
    powers = Q.memo(("powers", a), lambda: _cyclic_powers(Q, a))
    return powers[(k - 1) % len(powers)]


def _cyclic_powers(Q: CayleyLoop, a: int) -> list[int]:
    t = Q.table
    powers = [a]
    while powers[-1] != Q.identity:
        powers.append(int(t[a, powers[-1]]))
        if len(powers) > Q.order:
            raise NotPowerAssociative(f"powers of {Q.label(a)} never return to the identity")
    m = len(powers)
    for i in range(m):
        for j in range(m):
            if t[powers[i], powers[j]] != powers[(i + j + 1) % m]:
                raise NotPowerAssociative(
                    f"a^{i + 1} * a^{j + 1} != a^{i + j + 2} for a = {Q.label(a)}"
                )
    return powers


# -- constructions ----------------------------------------------------------------


def find_nonassociative_triple(Q: CayleyLoop) -> tuple[int, int, int] | None:
    t = Q.table
    ar = np.arange(Q.order)
    left = t[t[:, :, None], ar[None, None, :]]
    right = t[ar[:, None, None], t[None, :, :]]
    bad = np.argwhere(left != right)
    if len(bad):
        return tuple(int(v) for v in bad[0])
    return None


def is_associative(Q: CayleyLoop) -> bool:
    return Q.memo("associative", lambda: find_nonassociative_triple(Q) is None)


def direct_product(Q1: CayleyLoop, Q2: CayleyLoop, cap: int = ORDER_CAP) -> CayleyLoop:
    """Componentwise product; the pair ``(i, j)`` gets index ``i*n2 + j``."""
    n1, n2 = Q1.order, Q2.order
    if n1 * n2 > cap:
        raise SizeCap(f"product order {n1 * n2} exceeds the order cap {cap}")
    t = Q1.table[:, None, :, None] * n2 + Q2.table[None, :, None, :]
    table = t.reshape(n1 * n2, n1 * n2)
    labels = None
    if Q1.labels or Q2.labels:
        labels = [f"({Q1.label(i)},{Q2.label(j)})" for i in range(n1) for j in range(n2)]
    name = f"{Q1.name or 'Q1'} x {Q2.name or 'Q2'}"
    return CayleyLoop(table, name=name, labels=labels, cap=cap)


def chein_double(G: CayleyLoop, cap: int = ORDER_CAP) -> CayleyLoop:
    """The Moufang loop M(G, 2) on ``G`` followed by a barred copy of ``G``.

    ``g*h = gh``, ``g*h' = (hg)'``, ``g'*h = (g h^-1)'``, ``g'*h' = h^-1 g``.
    """
    witness = find_nonassociative_triple(G)
    if witness is not None:
        raise NotAssociative(witness)
    n = G.order
    if 2 * n > cap:
        raise SizeCap(f"doubled order {2 * n} exceeds the order cap {cap}")
    t = G.table
    inv = G.inverses
    g = np.arange(n)[:, None]
    h = np.arange(n)[None, :]
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    table[:n, :n] = t[g, h]
    table[:n, n:] = n + t[h, g]
    table[n:, :n] = n + t[g, inv[h]]
    table[n:, n:] = t[inv[h], g]
    labels = [G.label(i) for i in range(n)] + [G.label(i) + "'" for i in range(n)]
    return CayleyLoop(table, name=f"M({G.name or 'G'},2)", labels=labels, cap=cap)


def quotient(Q: CayleyLoop, N: Iterable[int]) -> tuple[CayleyLoop, np.ndarray]:
    """The quotient loop ``Q/N`` and the projection array ``x -> coset(x)``.

    Cosets are numbered by their least member.  Every representative pair is
    checked to give the same coset product.
    """
    members = np.array(sorted(set(int(x) for x in N)), dtype=np.int64)
    if Q.identity not in members:
        raise NotNormal("subset does not contain the identity")
    n = Q.order
    proj = np.full(n, -1, dtype=np.int64)
    k = 0
    for x in range(n):
        if proj[x] >= 0:
            continue
        coset = Q.table[x, members]
        if (proj[coset] >= 0).any():
            raise NotNormal(f"left cosets overlap at representative {Q.label(x)}")
        proj[coset] = k
        k += 1
    qt = np.empty((k, k), dtype=np.int64)
    pm = proj[Q.table]
    qt[proj[:, None], proj[None, :]] = pm
    if not np.array_equal(qt[proj[:, None], proj[None, :]], pm):
        a, b = np.argwhere(qt[proj[:, None], proj[None, :]] != pm)[0]
        raise NotNormal(
            f"coset product depends on representatives (at {Q.label(int(a))}, {Q.label(int(b))})"
        )
    reps = [int(np.flatnonzero(proj == c)[0]) for c in range(k)]
    labels = None
    if Q.labels is not None:
        labels = [Q.label(r) + "N" if len(members) > 1 else Q.label(r) for r in reps]
    loop = CayleyLoop(qt, name=f"{Q.name or 'Q'}/N", labels=labels)
    if loop.identity != proj[Q.identity]:
        raise NotNormal("identity coset is not the quotient identity")
    return loop, _readonly(proj)


def restrict(Q: CayleyLoop, members: Iterable[int]) -> tuple[CayleyLoop, np.ndarray]:
    """The subloop on ``members`` as a standalone loop, plus its index map.

    ``index[i]`` is the element of ``Q`` that becomes element ``i``.
    """
    index = np.array(sorted(set(int(x) for x in members)), dtype=np.int64)
    pos = np.full(Q.order, -1, dtype=np.int64)
    pos[index] = np.arange(len(index))
    sub = pos[Q.table[np.ix_(index, index)]]
    if (sub < 0).any():
        raise ValueError("members are not closed under multiplication")
    labels = [Q.label(int(i)) for i in index] if Q.labels is not None else None
    return CayleyLoop(sub, name=f"sub({Q.name or 'Q'})", labels=labels), _readonly(index)


def trivial_loop() -> CayleyLoop:
    return CayleyLoop([[0]], name="1")
