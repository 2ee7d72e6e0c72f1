"""Terms over ``*``, ``/``, ``\\`` and ``1``: parsing, evaluation and identity checks.

A term doubles as a word and as an identity ``t = 1``.  Commutator and
associator macros expand to plain trees using the solved forms of
:mod:`loopforge.calculus`, and pattern matchers recover them for printing.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, MissingVariable, TermSyntaxError, WeightCap
from .loop import CayleyLoop

DEFAULT_BUDGET = 10**7
WEIGHT_CAP = 6
CHUNK = 1 << 16
WORD_KINDS = ("alpha_beta", "mu", "alpha", "beta")


def default_budget() -> int:
    raw = os.environ.get("LOOPFORGE_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


# -- term trees ----------------------------------------------------------------------


class Term:
    __slots__ = ("_hash", "_vars", "_size")

    children: tuple["Term", ...] = ()

    def vars(self) -> frozenset[int]:
        return self._vars

    @property
    def size(self) -> int:
        return self._size

    def __str__(self) -> str:
        return print_term(self)


class Var(Term):
    __slots__ = ("index",)

    def __init__(self, index: int):
        if index < 0:
            raise ValueError("variable indices are non-negative")
        self.index = int(index)
        self._hash = hash(("x", self.index))
        self._vars = frozenset((self.index,))
        self._size = 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Var) and other.index == self.index

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Var({self.index})"


class _One(Term):
    __slots__ = ()

    def __init__(self):
        self._hash = hash("1")
        self._vars = frozenset()
        self._size = 1

    def __eq__(self, other) -> bool:
        return isinstance(other, _One)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "One"


One = _One()


class _Binary(Term):
    __slots__ = ("left", "right")
    symbol = "?"

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self._hash = hash((self.symbol, left._hash, right._hash))
        self._vars = left._vars | right._vars
        self._size = 1 + left._size + right._size

    @property
    def children(self) -> tuple[Term, Term]:
        return (self.left, self.right)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            type(other) is type(self)
            and other._hash == self._hash
            and other.left == self.left
            and other.right == self.right
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Mul(_Binary):
    __slots__ = ()
    symbol = "*"


class LDiv(_Binary):
    """``left \\ right``."""

    __slots__ = ()
    symbol = "\\"


class RDiv(_Binary):
    """``left / right``."""

    __slots__ = ()
    symbol = "/"


def x(i: int) -> Var:
    return Var(i)


# -- macros --------------------------------------------------------------------------


def inv(u: Term) -> Term:
    return RDiv(One, u)


def comm(u: Term, v: Term) -> Term:
    """``(u,v) = u\\(v\\(uv))``."""
    return LDiv(u, LDiv(v, Mul(u, v)))


def bcomm(u: Term, v: Term) -> Term:
    """``[u,v] = (vu)\\(uv)``."""
    return LDiv(Mul(v, u), Mul(u, v))


def alpha(u: Term, v: Term, w: Term) -> Term:
    """``α(u,v,w) = u\\(((uv)w)/(vw))``."""
    return LDiv(u, RDiv(Mul(Mul(u, v), w), Mul(v, w)))


def beta(u: Term, v: Term, w: Term) -> Term:
    """``β(u,v,w) = ((wv)\\(w(vu)))/u``."""
    return RDiv(LDiv(Mul(w, v), Mul(w, Mul(v, u))), u)


def bassoc(u: Term, v: Term, w: Term) -> Term:
    """``[u,v,w] = (u(vw))\\((uv)w)``."""
    return LDiv(Mul(u, Mul(v, w)), Mul(Mul(u, v), w))


MACROS = {
    "inv": (1, inv),
    "comm": (2, comm),
    "bcomm": (2, bcomm),
    "alpha": (3, alpha),
    "beta": (3, beta),
    "bassoc": (3, bassoc),
}


def match_inv(t: Term):
    if isinstance(t, RDiv) and t.left == One:
        return (t.right,)
    return None


def match_comm(t: Term):
    if isinstance(t, LDiv) and isinstance(t.right, LDiv):
        u, v = t.left, t.right.left
        if t == comm(u, v):
            return (u, v)
    return None


def match_bcomm(t: Term):
    if isinstance(t, LDiv) and isinstance(t.right, Mul):
        u, v = t.right.left, t.right.right
        if t == bcomm(u, v):
            return (u, v)
    return None


def match_alpha(t: Term):
    if (
        isinstance(t, LDiv)
        and isinstance(t.right, RDiv)
        and isinstance(t.right.right, Mul)
    ):
        u = t.left
        v, w = t.right.right.left, t.right.right.right
        if t == alpha(u, v, w):
            return (u, v, w)
    return None


def match_beta(t: Term):
    if isinstance(t, RDiv) and isinstance(t.left, LDiv) and isinstance(t.left.left, Mul):
        u = t.right
        w, v = t.left.left.left, t.left.left.right
        if t == beta(u, v, w):
            return (u, v, w)
    return None


def match_bassoc(t: Term):
    if isinstance(t, LDiv) and isinstance(t.right, Mul) and isinstance(t.right.left, Mul):
        u, v = t.right.left.left, t.right.left.right
        w = t.right.right
        if t == bassoc(u, v, w):
            return (u, v, w)
    return None


_MATCHERS = (
    ("inv", match_inv),
    ("alpha", match_alpha),
    ("beta", match_beta),
    ("bassoc", match_bassoc),
    ("comm", match_comm),
    ("bcomm", match_bcomm),
)


# -- printing and parsing ------------------------------------------------------------------


def print_term(t: Term, macros: bool = False) -> str:
    """S-expression form; with ``macros`` recognised macro shapes are folded."""
    if isinstance(t, Var):
        return f"x{t.index}"
    if t == One:
        return "1"
    if macros:
        for name, match in _MATCHERS:
            args = match(t)
            if args is not None:
                return "(" + " ".join([name] + [print_term(a, True) for a in args]) + ")"
    return f"({t.symbol} {print_term(t.left, macros)} {print_term(t.right, macros)})"


_TOKEN = re.compile(r"\s*(?:(x\d+)|(1)|(\()|(\))|(\[)|(\])|(,)|(=)|([*/\\])|([a-z]+))")
_BINARY = {"*": Mul, "/": RDiv, "\\": LDiv}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    kinds = ("var", "one", "lp", "rp", "lb", "rb", "comma", "eq", "op", "name")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise TermSyntaxError(f"unexpected character {text[bad]!r}", bad)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                tokens.append((kind, val, start))
                break
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str | None = None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise TermSyntaxError(f"expected {kind}, found {what}", tok[2])
        self.i += 1
        return tok

    def term(self) -> Term:
        kind, val, pos = self.peek()
        if kind == "var":
            self.take()
            return Var(int(val[1:]))
        if kind == "one":
            self.take()
            return One
        if kind == "lp":
            self.take()
            head = self.take()
            if head[0] == "op":
                a = self.term()
                b = self.term()
                self.take("rp")
                return _BINARY[head[1]](a, b)
            if head[0] == "name" and head[1] in MACROS:
                arity, build = MACROS[head[1]]
                args = [self.term() for _ in range(arity)]
                self.take("rp")
                return build(*args)
            what = "end of input" if head[0] == "end" else repr(head[1])
            raise TermSyntaxError(f"unknown operator {what}", head[2])
        if kind == "lb":
            self.take()
            args = [self.term()]
            while self.peek()[0] == "comma":
                self.take()
                args.append(self.term())
            close = self.take("rb")
            if len(args) == 2:
                return bcomm(*args)
            if len(args) == 3:
                return bassoc(*args)
            raise TermSyntaxError("brackets take two or three arguments", close[2])
        what = "end of input" if kind == "end" else repr(val)
        raise TermSyntaxError(f"expected a term, found {what}", pos)


def parse_term(text: str) -> Term:
    """Parse the S-expression grammar.

    Also accepted: ``[u,v]`` and ``[u,v,w]`` for the bracket commutator and
    associator, and a top-level ``lhs = rhs`` which becomes ``lhs \\ rhs``
    (the identity ``lhs\\rhs = 1`` holds exactly when ``lhs = rhs`` does).
    """
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] == "eq":
        p.take()
        t = LDiv(t, p.term())
    p.take("end")
    return t


# -- structural helpers ----------------------------------------------------------------


def postorder(t: Term) -> list[Term]:
    """Distinct subterms, children before parents."""
    seen: set[Term] = set()
    out: list[Term] = []
    stack: list[tuple[Term, bool]] = [(t, False)]
    while stack:
        node, done = stack.pop()
        if done:
            if node not in seen:
                seen.add(node)
                out.append(node)
            continue
        if node in seen:
            continue
        stack.append((node, True))
        for c in reversed(node.children):
            if c not in seen:
                stack.append((c, False))
    return out


def occurrence_counts(t: Term) -> dict[Term, int]:
    """Number of occurrences of every subterm in the fully expanded tree of ``t``."""
    order = postorder(t)
    counts = {s: 0 for s in order}
    counts[t] = 1
    for node in reversed(order):
        for c in node.children:
            counts[c] += counts[node]
    return counts


def substitute(t: Term, mapping: Mapping[Term, Term]) -> Term:
    """Replace every occurrence of each key (outermost first)."""
    memo: dict[Term, Term] = {}

    def rec(s: Term) -> Term:
        if s in mapping:
            return mapping[s]
        if not s.children:
            return s
        if s in memo:
            return memo[s]
        left, right = rec(s.left), rec(s.right)
        r = s if (left is s.left and right is s.right) else type(s)(left, right)
        memo[s] = r
        return r

    return rec(t)


def rename(t: Term, mapping: Mapping[int, int]) -> Term:
    return substitute(t, {Var(a): Var(b) for a, b in mapping.items()})


# -- evaluation ------------------------------------------------------------------------------


def evaluate_arrays(Q: CayleyLoop, t: Term, env: Mapping[int, np.ndarray]) -> np.ndarray:
    """Evaluate ``t`` with each variable bound to a (broadcastable) index array."""
    tables = {Mul: Q.table, LDiv: Q.ldiv_table, RDiv: Q.rdiv_table}
    memo: dict[Term, np.ndarray] = {}
    for s in postorder(t):
        if isinstance(s, Var):
            if s.index not in env:
                raise MissingVariable(s.index)
            memo[s] = np.asarray(env[s.index])
        elif s == One:
            memo[s] = np.asarray(Q.identity)
        else:
            memo[s] = tables[type(s)][memo[s.left], memo[s.right]]
    return memo[t]


def evaluate(Q: CayleyLoop, t: Term, assignment: Mapping[int, int] | Sequence[int] = ()) -> int:
    """Value of ``t`` under an assignment (a mapping, or a sequence indexed by variable)."""
    if not isinstance(assignment, Mapping):
        assignment = dict(enumerate(assignment))
    env = {}
    for v in t.vars():
        if v not in assignment:
            raise MissingVariable(v)
        Q._check(int(assignment[v]))
        env[v] = int(assignment[v])
    return int(evaluate_arrays(Q, t, env))


def _domains(Q: CayleyLoop, t: Term, domains: Mapping[int, Iterable[int]] | None):
    variables = sorted(t.vars())
    out = {}
    for v in variables:
        if domains is not None and v in domains:
            d = np.array(sorted(set(int(a) for a in domains[v])), dtype=np.int64)
            Q._check(*d.tolist())
        else:
            d = np.arange(Q.order, dtype=np.int64)
        out[v] = d
    return variables, out


def _decode(start: int, stop: int, sizes: Sequence[int]) -> list[np.ndarray]:
    """Mixed-radix digits of ``start..stop-1``, most significant first."""
    idx = np.arange(start, stop, dtype=np.int64)
    digits = []
    for size in reversed(sizes):
        digits.append(idx % size)
        idx //= size
    return digits[::-1]


def assignments(Q: CayleyLoop, t: Term, domains=None, chunk: int = CHUNK) -> Iterator[dict[int, np.ndarray]]:
    """All assignments of ``vars(t)`` in lexicographic order, in chunks of arrays."""
    variables, doms = _domains(Q, t, domains)
    sizes = [len(doms[v]) for v in variables]
    total = math.prod(sizes)
    for start in range(0, total, chunk):
        digits = _decode(start, min(total, start + chunk), sizes)
        yield {v: doms[v][d] for v, d in zip(variables, digits)}


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking ``t = 1`` on one loop.

    ``status`` is ``holds`` (exhaustive), ``fails`` (with a witness) or
    ``not_refuted`` (sampled; never a proof).
    """

    status: str
    cases: int
    total: int
    witness: dict[int, int] | None = None
    value: int | None = None
    seed: int | None = None

    @property
    def exhaustive(self) -> bool:
        return self.seed is None

    @property
    def ok(self) -> bool:
        return self.status != "fails"

    def describe(self) -> str:
        if self.status == "holds":
            return f"holds (exhaustive, {self.cases} cases)"
        if self.status == "not_refuted":
            return f"not refuted (sampled, {self.cases} of {self.total} cases, seed {self.seed})"
        w = ", ".join(f"x{k}={v}" for k, v in sorted(self.witness.items()))
        return f"fails at {w} (value {self.value})"


def holds_identity(
    Q: CayleyLoop,
    t: Term,
    budget: int | None = None,
    seed: int = 0,
    domains: Mapping[int, Iterable[int]] | None = None,
) -> Verdict:
    """Check ``t = 1`` over every assignment, or over ``budget`` sampled ones.

    The exhaustive witness is the lexicographically least failing assignment.
    """
    budget = default_budget() if budget is None else budget
    variables, doms = _domains(Q, t, domains)
    sizes = [len(doms[v]) for v in variables]
    total = math.prod(sizes)
    e = Q.identity

    if total <= budget:
        for env in assignments(Q, t, domains):
            val = np.broadcast_to(evaluate_arrays(Q, t, env), np.shape(next(iter(env.values()), 0)))
            bad = np.flatnonzero(val != e)
            if len(bad):
                k = int(bad[0])
                witness = {v: int(env[v][k]) for v in variables}
                return Verdict("fails", total, total, witness, int(val.flat[k]))
        return Verdict("holds", total, total)

    rng = np.random.default_rng(seed)
    done = 0
    while done < budget:
        m = min(CHUNK, budget - done)
        env = {v: doms[v][rng.integers(0, len(doms[v]), size=m)] for v in variables}
        val = evaluate_arrays(Q, t, env)
        bad = np.flatnonzero(val != e)
        if len(bad):
            rows = sorted(tuple(int(env[v][k]) for v in variables) for k in bad)
            witness = dict(zip(variables, rows[0]))
            return Verdict("fails", done + m, total, witness, evaluate(Q, t, witness), seed)
        done += m
    return Verdict("not_refuted", done, total, seed=seed)


def values_equal(
    Q: CayleyLoop, s: Term, t: Term, budget: int | None = None, domains=None
) -> dict[int, int] | None:
    """Exhaustively compare two terms; return the least assignment where they differ."""
    budget = default_budget() if budget is None else budget
    joint = Mul(s, t)
    variables, doms = _domains(Q, joint, domains)
    total = math.prod(len(doms[v]) for v in variables)
    if total > budget:
        raise BudgetExceeded(f"{total} assignments exceed the budget {budget}")
    for env in assignments(Q, joint, domains):
        shape = np.shape(next(iter(env.values()), 0))
        a = np.broadcast_to(evaluate_arrays(Q, s, env), shape)
        b = np.broadcast_to(evaluate_arrays(Q, t, env), shape)
        bad = np.flatnonzero(a != b)
        if len(bad):
            k = int(bad[0])
            return {v: int(env[v][k]) for v in variables}
    return None


def _abstraction(t: Term) -> Term | None:
    """A strict subterm whose variables occur in ``t`` only inside its occurrences.

    Prefers the most variables, then the largest subterm.
    """
    counts = occurrence_counts(t)
    var_counts = {s.index: c for s, c in counts.items() if isinstance(s, Var)}
    best, key = None, None
    for s, c in counts.items():
        if s is t or s == t or len(s.vars()) < 2:
            continue
        inner = occurrence_counts(s)
        if all(var_counts[v] == c * inner[Var(v)] for v in s.vars()):
            k = (len(s.vars()), s.size)
            if key is None or k > key:
                best, key = s, k
    return best


def value_set(
    Q: CayleyLoop,
    t: Term,
    domains: Mapping[int, Iterable[int]] | None = None,
    budget: int | None = None,
) -> np.ndarray:
    """Sorted array of every value ``t`` takes over all assignments.

    A subterm whose variables appear nowhere else is first replaced by a
    fresh variable ranging over its own value set, which keeps nested
    commutator-associator words cheap to enumerate exactly.
    """
    budget = default_budget() if budget is None else budget
    variables, doms = _domains(Q, t, domains)
    s = _abstraction(t)
    if s is not None:
        sub_doms = {v: doms[v] for v in s.vars()}
        image = value_set(Q, s, sub_doms, budget)
        fresh = Var(max(variables) + 1)
        t2 = substitute(t, {s: fresh})
        doms2 = {v: d for v, d in doms.items() if v not in s.vars()}
        doms2[fresh.index] = image
        return value_set(Q, t2, doms2, budget)
    total = math.prod(len(doms[v]) for v in variables)
    if total > budget:
        raise BudgetExceeded(f"{total} assignments exceed the budget {budget}")
    seen = np.zeros(Q.order, dtype=bool)
    if not variables:
        seen[int(evaluate_arrays(Q, t, {}))] = True
    for env in assignments(Q, t, doms) if variables else ():
        seen[evaluate_arrays(Q, t, env)] = True
    return np.flatnonzero(seen)


# -- word sets ---------------------------------------------------------------------------------


def gen_weight_words(kind: str, weight: int, with_commutators: bool = False) -> list[Term]:
    """Canonical commutator-associator words of a given weight.

    Each step wraps a word ``w`` with the next unused variables: ``α(w,x_k,x_k+1)``,
    ``β(w,x_k,x_k+1)`` and ``(w,x_k)`` for ``alpha_beta``; ``[w,x_k,x_k+1]`` and
    ``[w,x_k]`` for ``mu``; only ``α`` (or ``β``) for ``alpha`` (``beta``).  With
    ``with_commutators`` the ``alpha``/``beta`` kinds also nest ``(w,x_k)``.
    """
    if kind not in WORD_KINDS:
        raise ValueError(f"kind must be one of {WORD_KINDS}, got {kind!r}")
    if weight < 1:
        raise ValueError("weight must be at least 1")
    if weight > WEIGHT_CAP:
        raise WeightCap(f"weight {weight} exceeds the cap {WEIGHT_CAP}")

    if kind == "alpha_beta":
        steps = [(alpha, 2), (beta, 2), (comm, 1)]
    elif kind == "mu":
        steps = [(bassoc, 2), (bcomm, 1)]
    else:
        steps = [(alpha if kind == "alpha" else beta, 2)]
        if with_commutators:
            steps.append((comm, 1))

    def wrap(build, arity, w, k):
        return build(w, *[Var(k + j) for j in range(arity)]), k + arity

    words = [wrap(b, a, Var(0), 1) for b, a in steps]
    for _ in range(weight - 1):
        words = [wrap(b, a, w, k) for w, k in words for b, a in steps]
    return [w for w, _ in words]


def basis_for_class(kind: str, n: int) -> list[Term]:
    """Identities ``w = 1`` stating central nilpotency of class at most ``n``.

    For ``alpha``/``beta`` the commutator-associator words of that type are
    used, so the pure associator word of weight ``n`` is the first entry.
    """
    return gen_weight_words(kind, n, with_commutators=kind in ("alpha", "beta"))


# -- endomorphisms and word decomposition -------------------------------------------------


def delta(i: int, t: Term) -> Term:
    """Substitute ``1`` for ``x_i`` (no simplification)."""
    return substitute(t, {Var(i): One})


def gamma(i: int, t: Term) -> Term:
    """``t * (delta_i t)^-1``."""
    return Mul(t, inv(delta(i, t)))


def is_simple_associator(t: Term, kind: str = "mu") -> bool:
    """Generators, their inverses, and associators of simple associators.

    ``kind='mu'`` uses ``[u,v,w]``; ``alpha_beta`` uses ``α`` and ``β``.
    """
    if isinstance(t, Var):
        return True
    args = match_inv(t)
    if args is not None and isinstance(args[0], Var):
        return True
    matchers = (match_bassoc,) if kind == "mu" else (match_alpha, match_beta)
    for match in matchers:
        args = match(t)
        if args is not None and all(is_simple_associator(a, kind) for a in args):
            return True
    return False


def involves(t: Term, i: int) -> bool:
    """Whether ``t`` involves ``x_i``: it is ``x_i`` or ``x_i^-1``, or an
    associator argument involves it.  For other terms this is variable
    occurrence."""
    if isinstance(t, Var):
        return t.index == i
    args = match_inv(t)
    if args is not None and isinstance(args[0], Var):
        return args[0].index == i
    for match in (match_bassoc, match_alpha, match_beta):
        args = match(t)
        if args is not None:
            return any(involves(a, i) for a in args)
    return i in t.vars()


@dataclass(frozen=True)
class Decomposition:
    """``w = (...((u v_0) v_1)...) v_t`` with ``u = γ_t ... γ_1 γ_0 w``."""

    word: Term
    t: int
    u: Term
    v: tuple[Term, ...]
    corrections: tuple[Term, ...] = field(repr=False)

    def reconstruction(self) -> Term:
        r = self.u
        for vi in self.v:
            r = Mul(r, vi)
        return r


def decompose_5_2(w: Term, t: int) -> Decomposition:
    """Peel off ``γ_0, ..., γ_t`` and record the correction factors.

    ``u_{-1} = w``, ``u_i = u_{i-1} * w_i`` with ``w_i = (δ_i u_{i-1})^-1``;
    then ``v_j = w_{t-j}^-1``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    extra = [v for v in w.vars() if v > t]
    if extra:
        raise ValueError(f"word uses variables {sorted(extra)} beyond x{t}")
    u = w
    ws = []
    for i in range(t + 1):
        wi = inv(delta(i, u))
        ws.append(wi)
        u = Mul(u, wi)
    v = tuple(inv(ws[t - j]) for j in range(t + 1))
    return Decomposition(w, t, u, v, tuple(ws))


# -- identity consequence on finite models -------------------------------------------------


@dataclass(frozen=True)
class Consequence:
    status: str  # "refuted" or "not_refuted"
    loop: str | None = None
    witness: dict[int, int] | None = None
    skipped: tuple[str, ...] = ()


def consequence_matrix(
    candidates: Sequence[Term],
    catalog: Sequence[CayleyLoop],
    premises: Sequence[Sequence[Term]] | None = None,
    budget: int | None = None,
) -> list[list[Consequence]]:
    """``matrix[i][j]``: is candidate ``i`` refuted as a consequence of premise set ``j``?

    A loop refutes when every premise holds on it exhaustively and the
    candidate fails.  Loops where a premise could only be sampled are listed
    as skipped.  Default premise sets leave out one candidate each.
    """
    if premises is None:
        premises = [[c for k, c in enumerate(candidates) if k != j] for j in range(len(candidates))]
    cache: dict[tuple[int, Term], Verdict] = {}

    def verdict(li: int, term: Term) -> Verdict:
        key = (li, term)
        if key not in cache:
            cache[key] = holds_identity(catalog[li], term, budget)
        return cache[key]

    matrix = []
    for u in candidates:
        row = []
        for M in premises:
            cell = Consequence("not_refuted")
            skipped = []
            for li, Q in enumerate(catalog):
                pv = [verdict(li, m) for m in M]
                if any(v.status == "fails" for v in pv):
                    continue
                if any(v.status != "holds" for v in pv):
                    skipped.append(Q.name or str(li))
                    continue
                uv = verdict(li, u)
                if uv.status == "fails":
                    cell = Consequence("refuted", Q.name or str(li), uv.witness)
                    break
            if cell.status == "not_refuted":
                cell = Consequence("not_refuted", skipped=tuple(skipped))
            row.append(cell)
        matrix.append(row)
    return matrix


# -- random words ------------------------------------------------------------------------------


def random_term(rng: np.random.Generator, n_vars: int = 3, max_depth: int = 4) -> Term:
    """A random term over ``x_0..x_{n_vars-1}``, ``1`` and the three operations."""
    ops = (Mul, LDiv, RDiv)

    def build(depth: int) -> Term:
        if depth == 0 or rng.random() < 0.25:
            k = int(rng.integers(0, n_vars + 1))
            return One if k == n_vars else Var(k)
        op = ops[int(rng.integers(0, 3))]
        return op(build(depth - 1), build(depth - 1))

    return build(max_depth)
