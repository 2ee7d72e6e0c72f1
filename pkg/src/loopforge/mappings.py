"""Translations, permutation groups and the two standard groups of a loop.

Permutations are stored as tuples of images.  Composition follows the
convention of function application: ``(p * q)(x) = p(q(x))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import GroupCap, InternalError
from .loop import CayleyLoop

GROUP_CAP = 10**6


class Perm:
    """A bijection of ``0..n-1``."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        imgs = tuple(int(v) for v in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {imgs}")
        self.images = imgs
        self._hash = hash(imgs)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @classmethod
    def _trusted(cls, images: Sequence[int]) -> "Perm":
        p = cls.__new__(cls)
        p.images = tuple(int(v) for v in images)
        p._hash = hash(p.images)
        return p

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        im = self.images
        return Perm._trusted([im[v] for v in other.images])

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, v in enumerate(self.images):
            inv[v] = i
        return Perm._trusted(inv)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def fixes(self, x: int) -> bool:
        return self.images[x] == x

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Perm({list(self.images)})"


@dataclass(frozen=True)
class PermGroup:
    """A permutation group given by its full element list and tagged generators.

    ``elements`` is in breadth-first discovery order from the identity, each
    layer sorted lexicographically by images.
    """

    degree: int
    elements: tuple[Perm, ...]
    generators: tuple[tuple[Perm, str], ...]
    _index: frozenset = field(repr=False, compare=False, default=frozenset())

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in self._index

    def as_set(self) -> frozenset:
        return self._index

    def orbit(self, x: int) -> set[int]:
        return {p(x) for p in self.elements}

    def stabilizer(self, x: int) -> list[Perm]:
        return [p for p in self.elements if p.fixes(x)]


def close_group(
    gens: Sequence[Perm],
    tags: Sequence[str] | None = None,
    cap: int = GROUP_CAP,
    degree: int | None = None,
) -> PermGroup:
    """Breadth-first closure of ``gens`` under composition.

    For finite groups closure under composition already gives inverses.
    Raises GroupCap as soon as more than ``cap`` elements are found.
    """
    if tags is None:
        tags = [f"g{i}" for i in range(len(gens))]
    if len(tags) != len(gens):
        raise ValueError("one tag per generator is required")
    if not gens and degree is None:
        raise ValueError("degree is required when there are no generators")
    n = gens[0].degree if gens else degree
    if any(g.degree != n for g in gens):
        raise ValueError("generators must share one degree")

    dtype = np.uint8 if n <= 256 else np.uint16
    ident = np.arange(n, dtype=dtype)
    distinct = {}
    for g in gens:
        if not g.is_identity():
            distinct.setdefault(g.images, np.array(g.images, dtype=dtype))
    gen_rows = list(distinct.values())

    seen = {ident.tobytes()}
    found = [ident]
    frontier = ident[None, :]
    while len(frontier) and gen_rows:
        cand = np.concatenate([g[frontier] for g in gen_rows])
        cand = np.unique(cand, axis=0)  # lexicographic order
        new = []
        for row in cand:
            key = row.tobytes()
            if key not in seen:
                seen.add(key)
                new.append(row)
        if len(seen) > cap:
            raise GroupCap(f"group closure exceeded {cap} elements")
        found.extend(new)
        frontier = np.array(new, dtype=dtype).reshape(-1, n)

    elements = tuple(Perm._trusted(row.tolist()) for row in found)
    return PermGroup(
        degree=n,
        elements=elements,
        generators=tuple(zip(gens, tags)),
        _index=frozenset(elements),
    )


# -- translations and inner mappings ------------------------------------------------


def left_translation(Q: CayleyLoop, x: int) -> Perm:
    """``L(x): y -> xy``."""
    Q._check(x)
    return Perm._trusted(Q.table[x])


def right_translation(Q: CayleyLoop, x: int) -> Perm:
    """``R(x): y -> yx``."""
    Q._check(x)
    return Perm._trusted(Q.table[:, x])


def inner_T(Q: CayleyLoop, x: int) -> Perm:
    """``T(x): z -> x\\(zx)``."""
    Q._check(x)
    return Perm._trusted(Q.ldiv_table[x, Q.table[:, x]])


def inner_R(Q: CayleyLoop, x: int, y: int) -> Perm:
    """``R(x, y): z -> ((zx)y)/(xy)``."""
    Q._check(x, y)
    t = Q.table
    return Perm._trusted(Q.rdiv_table[t[t[:, x], y], t[x, y]])


def inner_L(Q: CayleyLoop, x: int, y: int) -> Perm:
    """``L(x, y): z -> (xy)\\(x(yz))``."""
    Q._check(x, y)
    t = Q.table
    return Perm._trusted(Q.ldiv_table[t[x, y], t[x, t[y]]])


def inner_generators(Q: CayleyLoop) -> list[tuple[Perm, str]]:
    """All ``T(x)``, ``R(x,y)``, ``L(x,y)`` with provenance tags, in that order."""
    gens = [(inner_T(Q, x), f"T({Q.label(x)})") for x in Q]
    for x in Q:
        for y in Q:
            gens.append((inner_R(Q, x, y), f"R({Q.label(x)},{Q.label(y)})"))
    for x in Q:
        for y in Q:
            gens.append((inner_L(Q, x, y), f"L({Q.label(x)},{Q.label(y)})"))
    return gens


def _dedupe(gens: list[tuple[Perm, str]]) -> list[tuple[Perm, str]]:
    out, seen = [], set()
    for p, tag in gens:
        if p not in seen:
            seen.add(p)
            out.append((p, tag))
    return out


def multiplication_group(Q: CayleyLoop, cap: int = GROUP_CAP) -> PermGroup:
    def compute():
        gens = [(left_translation(Q, x), f"L({Q.label(x)})") for x in Q]
        gens += [(right_translation(Q, x), f"R({Q.label(x)})") for x in Q]
        gens = _dedupe(gens)
        return close_group([g for g, _ in gens], [t for _, t in gens], cap=cap, degree=Q.order)

    return Q.memo(("mlt", cap), compute)


def inner_mapping_group(Q: CayleyLoop, cap: int = GROUP_CAP, verify: bool = True) -> PermGroup:
    """The group generated by every ``T(x)``, ``R(x,y)``, ``L(x,y)``.

    With ``verify`` the result is compared, element for element, with the
    stabilizer of the identity in the multiplication group.
    """

    def compute():
        gens = _dedupe(inner_generators(Q))
        return close_group([g for g, _ in gens], [t for _, t in gens], cap=cap, degree=Q.order)

    inn = Q.memo(("inn", cap), compute)
    if verify:
        Q.memo(("inn-verified", cap), lambda: _verify_stabilizer(Q, inn, cap))
    return inn


def _verify_stabilizer(Q: CayleyLoop, inn: PermGroup, cap: int) -> bool:
    e = Q.identity
    for p, tag in inn.generators:
        if not p.fixes(e):
            raise InternalError(f"inner generator {tag} moves the identity")
    stab = frozenset(multiplication_group(Q, cap).stabilizer(e))
    if stab != inn.as_set():
        raise InternalError(
            f"inner mapping group has {inn.order} elements but the identity "
            f"stabilizer in the multiplication group has {len(stab)}"
        )
    return True


def is_automorphism(Q: CayleyLoop, p: Perm) -> bool:
    """True iff ``p(xy) = p(x)p(y)`` for all x, y."""
    if p.degree != Q.order:
        raise ValueError("degree mismatch")
    im = np.array(p.images)
    t = Q.table
    return bool(np.array_equal(im[t], t[im[:, None], im[None, :]]))


def non_automorphic_generator(Q: CayleyLoop) -> tuple[str, tuple[int, int]] | None:
    """First inner generator that is not an automorphism, with a witness pair."""
    t = Q.table
    for p, tag in inner_mapping_group(Q, verify=False).generators:
        im = np.array(p.images)
        bad = np.argwhere(im[t] != t[im[:, None], im[None, :]])
        if len(bad):
            return tag, (int(bad[0][0]), int(bad[0][1]))
    return None
