"""Compilation of an NNF formula into an evaluation/reactivation rule system.

The compiler walks subformulae in post-order.  Every subformula contributes
the rules of its main operator's evaluation table (plus end-of-trace rules
for the temporal operators), a reactivation rule binding each undecided
value to the rule names active in the next cell, and its slice of the
initial state.  The root additionally gains the two terminal rules.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import truth
from .ltl import (
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    NegAtom,
    Next,
    Or,
    SubformulaIndex,
    TrueConst,
    Until,
    WeakNext,
    subformulas,
)
from .truth import FALSE, TRUE, UND, UND_A, UND_B, UND_L, UND_M, UND_R, EvalMode, TruthValue

_CLASSES = ("T", "?", "F")
_REP = {"T": TRUE, "?": UND, "F": FALSE}

_KIND_OF = {
    TrueConst: "true",
    Atom: "atom",
    NegAtom: "negatom",
    Or: "or",
    And: "and",
    Until: "until",
    Next: "next",
    WeakNext: "weaknext",
    Eventually: "eventually",
    Always: "always",
}


@dataclass(frozen=True)
class RuleName:
    fid: int
    mode: EvalMode = EvalMode.PLAIN

    def render(self, index: SubformulaIndex) -> str:
        return f"R[{index.text(self.fid)}]{self.mode.value}"


@dataclass(frozen=True)
class ValueCond:
    """Antecedent literal [f]T / [f]F / [f]?; a ``?`` condition matches an
    undecided value regardless of its annotation."""

    fid: int
    klass: str


@dataclass(frozen=True)
class ObsCond:
    atom: str
    present: bool


@dataclass(frozen=True)
class EndCond:
    pass


Condition = ValueCond | ObsCond | EndCond


@dataclass(frozen=True)
class EvaluationRule:
    guard: RuleName | None
    conditions: tuple[Condition, ...]
    output_fid: int | None = None
    output_value: TruthValue | None = None
    terminal: str | None = None  # "SUCCESS" | "FAILURE"

    def render(self, index: SubformulaIndex) -> str:
        parts = []
        if self.guard is not None:
            parts.append(self.guard.render(index))
        for cond in self.conditions:
            if isinstance(cond, ValueCond):
                parts.append(f"[{index.text(cond.fid)}]{cond.klass}")
            elif isinstance(cond, ObsCond):
                parts.append(f"{cond.atom} observed" if cond.present else f"{cond.atom} not observed")
            else:
                parts.append("[END]")
        rhs = self.terminal if self.terminal else f"[{index.text(self.output_fid)}]{self.output_value}"
        return ", ".join(parts) + " -> " + rhs


@dataclass(frozen=True)
class ReactivationRule:
    trigger_fid: int
    trigger_value: TruthValue
    consequents: tuple[RuleName, ...]

    def render(self, index: SubformulaIndex) -> str:
        lhs = f"[{index.text(self.trigger_fid)}]{self.trigger_value}"
        return lhs + " -> " + ", ".join(r.render(index) for r in self.consequents)


@dataclass(frozen=True)
class NodeInfo:
    kind: str
    atom: str | None = None
    left: int | None = None
    right: int | None = None


@dataclass(frozen=True)
class RuleSystem:
    index: SubformulaIndex
    nodes: tuple[NodeInfo, ...]
    eval_rules: tuple[EvaluationRule, ...]
    react_rules: tuple[ReactivationRule, ...]
    init_sets: tuple[tuple[RuleName, ...], ...]  # Algorithm-level S per subformula
    root: int

    @property
    def initial(self) -> tuple[RuleName, ...]:
        return self.init_sets[self.root]

    def formula_text(self, fid: int) -> str:
        return self.index.text(fid)


def _merge(*name_groups: tuple[RuleName, ...]) -> tuple[RuleName, ...]:
    seen: dict[RuleName, None] = {}
    for group in name_groups:
        for name in group:
            seen.setdefault(name)
    return tuple(sorted(seen, key=lambda r: (r.fid, r.mode.value)))


def _node_info(f: Formula, index: SubformulaIndex) -> NodeInfo:
    kind = _KIND_OF[type(f)]
    if isinstance(f, (Atom, NegAtom)):
        return NodeInfo(kind, atom=f.name)
    if isinstance(f, (Or, And, Until)):
        return NodeInfo(kind, left=index.id_of(f.left), right=index.id_of(f.right))
    if isinstance(f, (Next, WeakNext, Eventually, Always)):
        return NodeInfo(kind, left=index.id_of(f.sub))
    return NodeInfo(kind)


def _binary_rules(op: str, fid: int, left: int, right: int) -> list[EvaluationRule]:
    rules = []
    if op == "until":
        guard_a = RuleName(fid, EvalMode.A)
        rules.append(EvaluationRule(guard_a, (ValueCond(right, "T"),), fid, TRUE))
        for lk, rk in (("T", "?"), ("T", "F"), ("?", "?"), ("?", "F"), ("F", "?"), ("F", "F")):
            out = truth.eval_binary(op, EvalMode.A, _REP[lk], _REP[rk])
            rules.append(EvaluationRule(guard_a, (ValueCond(left, lk), ValueCond(right, rk)), fid, out))
        guard_b = RuleName(fid, EvalMode.B)
        for lk in _CLASSES:
            out = truth.eval_binary(op, EvalMode.B, _REP[lk], None)
            rules.append(EvaluationRule(guard_b, (ValueCond(left, lk),), fid, out))
    else:
        guard_b = RuleName(fid, EvalMode.B)
        for lk in _CLASSES:
            for rk in _CLASSES:
                out = truth.eval_binary(op, EvalMode.B, _REP[lk], _REP[rk])
                rules.append(EvaluationRule(guard_b, (ValueCond(left, lk), ValueCond(right, rk)), fid, out))
    for mode, operand in ((EvalMode.L, left), (EvalMode.R, right)):
        guard = RuleName(fid, mode)
        for k in _CLASSES:
            args = (_REP[k], None) if mode is EvalMode.L else (None, _REP[k])
            out = truth.eval_binary(op, mode, *args)
            rules.append(EvaluationRule(guard, (ValueCond(operand, k),), fid, out))
    return rules


def _unary_rules(op: str, fid: int, sub: int) -> list[EvaluationRule]:
    rules = []
    guard = RuleName(fid)
    if op in ("eventually", "always"):
        for k in _CLASSES:
            out = truth.eval_unary(op, EvalMode.PLAIN, _REP[k], at_end=False)
            rules.append(EvaluationRule(guard, (ValueCond(sub, k),), fid, out))
        forced = truth.eval_unary(op, EvalMode.PLAIN, UND, at_end=True)
        rules.append(EvaluationRule(None, (ValueCond(fid, "?"), EndCond()), fid, forced))
    else:
        rules.append(EvaluationRule(guard, (), fid, truth.eval_unary(op, EvalMode.PLAIN, UND, at_end=False)))
        forced = truth.eval_unary(op, EvalMode.PLAIN, UND, at_end=True)
        rules.append(EvaluationRule(None, (ValueCond(fid, "?"), EndCond()), fid, forced))
        guard_m = RuleName(fid, EvalMode.M)
        for k in _CLASSES:
            out = truth.eval_unary(op, EvalMode.M, _REP[k], at_end=False)
            rules.append(EvaluationRule(guard_m, (ValueCond(sub, k),), fid, out))
    return rules


def _assert_exclusive(rules: list[EvaluationRule]) -> None:
    by_guard: dict[RuleName, list[EvaluationRule]] = {}
    for rule in rules:
        if rule.guard is not None:
            by_guard.setdefault(rule.guard, []).append(rule)
    for guard, group in by_guard.items():
        maps = [_cond_map(rule) for rule in group]
        for i, conds_a in enumerate(maps):
            if conds_a is None:
                continue
            for conds_b in maps[i + 1 :]:
                if conds_b is None:
                    continue
                # two rules overlap iff every condition they share agrees
                if all(conds_a[k] == conds_b[k] for k in conds_a.keys() & conds_b.keys()):
                    raise AssertionError(f"rules for guard {guard} are not mutually exclusive")


def _cond_map(rule: EvaluationRule) -> dict[object, object] | None:
    """Condition set as requirement map; None when the rule is unsatisfiable
    (duplicate operands demanding different values, e.g. within `a U a`)."""
    out: dict[object, object] = {}
    for cond in rule.conditions:
        if isinstance(cond, ValueCond):
            key, req = ("value", cond.fid), cond.klass
        elif isinstance(cond, ObsCond):
            key, req = ("obs", cond.atom), cond.present
        else:
            continue
        if key in out and out[key] != req:
            return None
        out[key] = req
    return out


def compile_formula(f: Formula) -> RuleSystem:
    """Build the rule system for an NNF formula (Algorithm-faithful artifact)."""
    index = subformulas(f)
    nodes = tuple(_node_info(g, index) for g in index.formulas)
    eval_rules: list[EvaluationRule] = []
    react_rules: list[ReactivationRule] = []
    init_sets: list[tuple[RuleName, ...]] = []

    for fid, node in enumerate(nodes):
        own = (RuleName(fid),)
        if node.kind == "true":
            eval_rules.append(EvaluationRule(RuleName(fid), (), fid, TRUE))
            init_sets.append(own)
        elif node.kind in ("atom", "negatom"):
            observed = TRUE if node.kind == "atom" else FALSE
            missing = FALSE if node.kind == "atom" else TRUE
            eval_rules.append(EvaluationRule(RuleName(fid), (ObsCond(node.atom, True),), fid, observed))
            eval_rules.append(EvaluationRule(RuleName(fid), (ObsCond(node.atom, False),), fid, missing))
            init_sets.append(own)
        elif node.kind in ("or", "and"):
            eval_rules.extend(_binary_rules(node.kind, fid, node.left, node.right))
            for und in (UND_B, UND_L, UND_R):
                react_rules.append(ReactivationRule(fid, und, (RuleName(fid, und.mode),)))
            init_sets.append(_merge(init_sets[node.left], init_sets[node.right], (RuleName(fid, EvalMode.B),)))
        elif node.kind == "until":
            eval_rules.extend(_binary_rules(node.kind, fid, node.left, node.right))
            respawn = _merge(init_sets[node.left], init_sets[node.right])
            for und in (UND_A, UND_B, UND_L, UND_R):
                react_rules.append(ReactivationRule(fid, und, _merge(respawn, (RuleName(fid, und.mode),))))
            init_sets.append(_merge(respawn, (RuleName(fid, EvalMode.A),)))
        elif node.kind in ("eventually", "always"):
            eval_rules.extend(_unary_rules(node.kind, fid, node.left))
            react_rules.append(ReactivationRule(fid, UND, _merge(init_sets[node.left], own)))
            init_sets.append(_merge(init_sets[node.left], own))
        else:  # next / weaknext
            eval_rules.extend(_unary_rules(node.kind, fid, node.left))
            cont = (RuleName(fid, EvalMode.M),)
            react_rules.append(ReactivationRule(fid, UND, _merge(init_sets[node.left], cont)))
            react_rules.append(ReactivationRule(fid, UND_M, cont))
            init_sets.append(own)

    root = index.root
    eval_rules.append(EvaluationRule(None, (ValueCond(root, "T"),), terminal="SUCCESS"))
    eval_rules.append(EvaluationRule(None, (ValueCond(root, "F"),), terminal="FAILURE"))
    _assert_exclusive(eval_rules)
    return RuleSystem(index, nodes, tuple(eval_rules), tuple(react_rules), tuple(init_sets), root)


def rule_count_bound(f: Formula) -> int:
    """Upper bound on evaluation-rule count: 16 per distinct subformula
    (the until worst case) plus the two terminal rules."""
    return 16 * len(subformulas(f)) + 2


def dump_rules(sys: RuleSystem) -> str:
    """Deterministic text listing: evaluation rules in firing order, then
    reactivation rules, then the initial state."""
    lines = ["EVALUATION RULES"]
    lines.extend("  " + r.render(sys.index) for r in sys.eval_rules)
    lines.append("REACTIVATION RULES")
    lines.extend("  " + r.render(sys.index) for r in sys.react_rules)
    lines.append("INITIAL STATE")
    lines.append("  " + ", ".join(r.render(sys.index) for r in sys.initial))
    return "\n".join(lines)


def dump_rules_json(sys: RuleSystem) -> str:
    """Machine-readable listing with stable field order."""

    def cond_dict(cond: Condition) -> dict:
        if isinstance(cond, ValueCond):
            return {"type": "value", "formula": sys.formula_text(cond.fid), "value": cond.klass}
        if isinstance(cond, ObsCond):
            return {"type": "observation", "atom": cond.atom, "present": cond.present}
        return {"type": "end"}

    rules = []
    for rule in sys.eval_rules:
        record = {
            "guard": rule.guard.render(sys.index) if rule.guard else None,
            "conditions": [cond_dict(c) for c in rule.conditions],
        }
        if rule.terminal:
            record["output"] = {"terminal": rule.terminal}
        else:
            record["output"] = {"formula": sys.formula_text(rule.output_fid), "value": str(rule.output_value)}
        rules.append(record)
    reacts = [
        {
            "trigger": {"formula": sys.formula_text(r.trigger_fid), "value": str(r.trigger_value)},
            "activates": [name.render(sys.index) for name in r.consequents],
        }
        for r in sys.react_rules
    ]
    doc = {
        "formula": sys.formula_text(sys.root),
        "rules": rules,
        "reactivations": reacts,
        "initial": [name.render(sys.index) for name in sys.initial],
    }
    return json.dumps(doc, indent=2)
