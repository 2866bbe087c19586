"""Brute-force finite-trace LTL semantics, used as ground truth.

Deliberately independent of the rule engine and its evaluation tables:
everything here is evaluated by direct recursion over the trace.  Strong
next is false and weak next true when no next cell exists; eventually and
always quantify over the remaining cells directly (not via until).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ltl import (
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    NegAtom,
    Next,
    Not,
    Or,
    TrueConst,
    Until,
    WeakNext,
    format_formula,
)
from .traces import Trace


def oracle_eval(f: Formula, u: Trace, i: int) -> bool:
    """FLTL value of f at position i of u.  Not nodes are evaluated as the
    boolean complement of their operand."""
    if not 0 <= i < len(u):
        raise IndexError(f"position {i} outside trace of length {len(u)}")
    memo: dict[tuple[int, int], bool] = {}

    def ev(g: Formula, j: int) -> bool:
        key = (id(g), j)
        hit = memo.get(key)
        if hit is not None:
            return hit
        val = _ev(g, j)
        memo[key] = val
        return val

    def _ev(g: Formula, j: int) -> bool:
        if isinstance(g, TrueConst):
            return True
        if isinstance(g, Atom):
            return g.name in u[j]
        if isinstance(g, NegAtom):
            return g.name not in u[j]
        if isinstance(g, Not):
            return not ev(g.sub, j)
        if isinstance(g, Or):
            return ev(g.left, j) or ev(g.right, j)
        if isinstance(g, And):
            return ev(g.left, j) and ev(g.right, j)
        if isinstance(g, Next):
            return j + 1 < len(u) and ev(g.sub, j + 1)
        if isinstance(g, WeakNext):
            return j + 1 >= len(u) or ev(g.sub, j + 1)
        if isinstance(g, Eventually):
            return any(ev(g.sub, k) for k in range(j, len(u)))
        if isinstance(g, Always):
            return all(ev(g.sub, k) for k in range(j, len(u)))
        assert isinstance(g, Until)
        for k in range(j, len(u)):
            if ev(g.right, k):
                return True
            if not ev(g.left, k):
                return False
        return False

    return ev(f, i)


# ---------------------------------------------------------------------------
# judgements: the shape a monitor state maps onto


@dataclass(frozen=True)
class Judgement:
    pass


@dataclass(frozen=True)
class JTop(Judgement):
    def __str__(self) -> str:
        return "⊤"


@dataclass(frozen=True)
class JBottom(Judgement):
    def __str__(self) -> str:
        return "⊥"


@dataclass(frozen=True)
class JLeaf(Judgement):
    formula: Formula
    index: int

    def __str__(self) -> str:
        return f"[u,{self.index} ⊨ {format_formula(self.formula)}]"


@dataclass(frozen=True)
class JOr(Judgement):
    left: Judgement
    right: Judgement

    def __str__(self) -> str:
        return f"{self.left} ⊔ {self.right}"


@dataclass(frozen=True)
class JAnd(Judgement):
    left: Judgement
    right: Judgement

    def __str__(self) -> str:
        def wrap(j: Judgement) -> str:
            return f"({j})" if isinstance(j, JOr) else str(j)

        return f"{wrap(self.left)} ⊓ {wrap(self.right)}"


TOP = JTop()
BOTTOM = JBottom()


def eval_judgement(j: Judgement, u: Trace) -> bool:
    if isinstance(j, JTop):
        return True
    if isinstance(j, JBottom):
        return False
    if isinstance(j, JLeaf):
        if not 0 <= j.index < len(u):
            raise IndexError(f"judgement index {j.index} outside trace of length {len(u)}")
        return oracle_eval(j.formula, u, j.index)
    if isinstance(j, JOr):
        return eval_judgement(j.left, u) or eval_judgement(j.right, u)
    assert isinstance(j, JAnd)
    return eval_judgement(j.left, u) and eval_judgement(j.right, u)


# ---------------------------------------------------------------------------
# formula corpora for differential testing

_UNARY_CTORS = (Next, WeakNext, Eventually, Always)
_BINARY_CTORS = (Or, And, Until)


def leaf_formulas(atoms: list[str]) -> list[Formula]:
    out: list[Formula] = [TrueConst()]
    out.extend(Atom(a) for a in atoms)
    out.extend(NegAtom(a) for a in atoms)
    return out


def enumerate_formulas(max_depth: int, atoms: list[str]) -> list[Formula]:
    """All structurally distinct NNF formulae up to the given operator
    nesting depth, in a deterministic order."""
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    layer = leaf_formulas(atoms)
    for _ in range(max_depth):
        nxt = list(leaf_formulas(atoms))
        for ctor in _UNARY_CTORS:
            nxt.extend(ctor(f) for f in layer)
        for ctor in _BINARY_CTORS:
            nxt.extend(ctor(f, g) for f in layer for g in layer)
        layer = list(dict.fromkeys(nxt))
    return layer


def random_formula(
    max_depth: int,
    atoms: list[str],
    seed: int | random.Random,
    operators: tuple[type, ...] = _UNARY_CTORS + _BINARY_CTORS,
) -> Formula:
    """Seeded random NNF formula with operator nesting depth <= max_depth."""
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    leaves = leaf_formulas(atoms)

    def gen(depth: int) -> Formula:
        if depth == 0 or rng.random() < 0.2:
            return rng.choice(leaves)
        ctor = rng.choice(operators)
        if ctor in _BINARY_CTORS:
            return ctor(gen(depth - 1), gen(depth - 1))
        return ctor(gen(depth - 1))

    return gen(max_depth)
