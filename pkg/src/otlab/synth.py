"""Search for IT functions over the basic Ins(p, c) / Del(p) signatures.

A strategy assigns one of four shift actions to each of the 14 transform
cases. A pair of concurrent operations only ever touches one case and its
mirror, so TP1 can be searched group by group; the surviving strategies are
then checked for TP2.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .core import Operation, delete, ins, nop
from .transform import ITFunction, TransformCase, case_of
from .verify import OperationDomain, TP2Witness, check_tp2, enumerate_operations, tp1_witness

C = TransformCase


class ShiftAction(enum.Enum):
    MAKE_NOP = "Nop"
    SHIFT_MINUS = "-1"
    KEEP = "0"
    SHIFT_PLUS = "+1"

    def apply(self, op: Operation) -> Operation:
        if self is ShiftAction.MAKE_NOP:
            return nop()
        return op.moved({"-1": -1, "0": 0, "+1": 1}[self.value])


A = ShiftAction
CASES = tuple(TransformCase)


@dataclass(frozen=True)
class CaseGroup:
    """Cases linked by swapping the arguments of a pair."""

    name: str
    cases: tuple[TransformCase, ...]


GROUPS = (
    CaseGroup("ins/ins p1<p2", (C.II_LT, C.II_GT)),
    CaseGroup("ins/ins p1=p2 c1!=c2", (C.II_EQ_CLT, C.II_EQ_CGT)),
    CaseGroup("ins/ins p1=p2 c1=c2", (C.II_EQ_CEQ,)),
    CaseGroup("del/del p1<p2", (C.DD_LT, C.DD_GT)),
    CaseGroup("del/del p1=p2", (C.DD_EQ,)),
    CaseGroup("ins/del p1<p2", (C.ID_LT, C.DI_GT)),
    CaseGroup("ins/del p1=p2", (C.ID_EQ, C.DI_EQ)),
    CaseGroup("del/ins p1<p2", (C.DI_LT, C.ID_GT)),
)
GROUP_OF = {case: g for g in GROUPS for case in g.cases}


@dataclass(frozen=True)
class ITStrategy:
    """Total map from transform case to shift action."""

    actions: tuple[ShiftAction, ...]

    @classmethod
    def from_mapping(cls, mapping: dict) -> "ITStrategy":
        missing = [c for c in CASES if c not in mapping]
        if missing:
            raise ValueError(f"strategy misses cases {[c.value for c in missing]}")
        return cls(tuple(mapping[c] for c in CASES))

    def action(self, case: TransformCase) -> ShiftAction:
        return self.actions[CASES.index(case)]

    def as_mapping(self) -> dict:
        return dict(zip(CASES, self.actions))

    def restricted(self, group: CaseGroup) -> tuple[ShiftAction, ...]:
        return tuple(self.action(c) for c in group.cases)

    def to_dict(self) -> dict:
        return {c.value: a.value for c, a in zip(CASES, self.actions)}


def _case_rule(mapping: dict):
    def rule(o1: Operation, o2: Operation) -> Operation:
        return mapping[case_of(o1, o2)].apply(o1)

    return rule


def strategy_as_it(s: ITStrategy | dict, name: str = "strategy") -> ITFunction:
    mapping = s.as_mapping() if isinstance(s, ITStrategy) else dict(s)
    return ITFunction(name, "plain", _case_rule(mapping))


@dataclass
class CaseConstraintSet:
    """Admissible joint assignments per case group, with the bounds used."""

    domain: OperationDomain
    admissible: dict[str, list[tuple[ShiftAction, ...]]]

    def group(self, name: str) -> CaseGroup:
        return next(g for g in GROUPS if g.name == name)

    def admits(self, s: ITStrategy) -> bool:
        return all(s.restricted(g) in self.admissible[g.name] for g in GROUPS)

    def strategies(self):
        """Every total strategy built from admissible group assignments."""
        choices = [self.admissible[g.name] for g in GROUPS]
        for combo in itertools.product(*choices):
            mapping = {}
            for g, assignment in zip(GROUPS, combo):
                mapping.update(zip(g.cases, assignment))
            yield ITStrategy.from_mapping(mapping)

    def count(self) -> int:
        n = 1
        for g in GROUPS:
            n *= len(self.admissible[g.name])
        return n

    def to_dict(self) -> dict:
        return {
            name: [[a.value for a in assignment] for assignment in assignments]
            for name, assignments in self.admissible.items()
        }


def _pairs_by_group(dom: OperationDomain) -> dict[str, list[tuple[Operation, Operation]]]:
    ops = enumerate_operations(dom, "plain")
    by_group: dict[str, list] = {g.name: [] for g in GROUPS}
    for o1, o2 in itertools.product(ops, repeat=2):
        by_group[GROUP_OF[case_of(o1, o2)].name].append((o1, o2))
    return by_group


def synthesize_tp1(dom: OperationDomain | None = None) -> CaseConstraintSet:
    """Find, per case group, every joint shift assignment under which all
    domain pairs hitting the group satisfy TP1 on the probe."""
    dom = dom or OperationDomain()
    pairs = _pairs_by_group(dom)
    admissible = {}
    for g in GROUPS:
        found = []
        for assignment in itertools.product(list(ShiftAction), repeat=len(g.cases)):
            it = strategy_as_it(dict(zip(g.cases, assignment)))
            if all(tp1_witness(it, o1, o2, dom.probe) is None for o1, o2 in pairs[g.name]):
                found.append(assignment)
        admissible[g.name] = found
    return CaseConstraintSet(dom, admissible)


def strategy_holds_tp1(s: ITStrategy, dom: OperationDomain) -> bool:
    """Brute-force TP1 over every domain pair for a whole strategy."""
    it = strategy_as_it(s)
    ops = enumerate_operations(dom, "plain")
    return all(tp1_witness(it, o1, o2, dom.probe) is None for o1, o2 in itertools.product(ops, repeat=2))


def coherence_filter(cs: CaseConstraintSet) -> list[ITStrategy]:
    """Drop assignments that make two sites delete two symbols for one
    concurrent identical deletion, then expand to full strategies."""
    kept = dict(cs.admissible)
    kept["del/del p1=p2"] = [a for a in kept["del/del p1=p2"] if a == (A.MAKE_NOP,)]
    return list(CaseConstraintSet(cs.domain, kept).strategies())


@dataclass(frozen=True)
class SymbolicScenario:
    """Concurrent ``(Del(p), Ins(., c2), Ins(., c3))`` triple with positions
    given as offsets from the free position ``p``."""

    name: str
    ins2_offset: int
    ins3_offset: int

    def instantiate(self, p: int, c2: str, c3: str) -> tuple[Operation, Operation, Operation]:
        return delete(p), ins(p + self.ins2_offset, c2), ins(p + self.ins3_offset, c3)

    def matches(self, o1: Operation, o2: Operation, o3: Operation) -> bool:
        if not (o1.is_del and o2.is_ins and o3.is_ins):
            return False
        p = o1.pos
        return o2.pos == p + self.ins2_offset and o3.pos == p + self.ins3_offset


SCENARIO_1 = SymbolicScenario("scenario-1", 0, 1)
SCENARIO_2 = SymbolicScenario("scenario-2", 1, 0)


def classify_witness(w: TP2Witness) -> str:
    """Name the blocking scenario a TP2 witness instantiates.

    TP2 is symmetric in its first two operations, so both orders are tried.
    """
    for sc in (SCENARIO_1, SCENARIO_2):
        if sc.matches(w.o1, w.o2, w.o3) or sc.matches(w.o2, w.o1, w.o3):
            return sc.name
    return "other"


@dataclass
class ChainResult:
    """How one blocking scenario constrains the equal-position insert case."""

    scenario: str
    conflict_case: TransformCase
    required: Operation
    satisfying: frozenset


def conflict_chain(s: ITStrategy, sc: SymbolicScenario, p: int, c2: str, c3: str) -> ChainResult:
    """Evaluate the TP2 chain of ``sc`` under ``s``.

    One side, IT(IT(o3, o2), IT(o1, o2)), never reaches an equal-position
    insert pair; its result is what the other side's final step
    IT(IT(o3, o1), IT(o2, o1)) must produce. Returns every shift action that
    would do so if placed on the case of that final step.
    """
    it = strategy_as_it(s)
    o1, o2, o3 = sc.instantiate(p, c2, c3)
    required = it(it(o3, o2), it(o1, o2))
    o31, o21 = it(o3, o1), it(o2, o1)
    case = case_of(o31, o21)
    ok = frozenset(a for a in ShiftAction if a.apply(o31) == required)
    return ChainResult(sc.name, case, required, ok)


def contradiction_core(s: ITStrategy, p: int = 1, chars=("x", "y")) -> dict:
    """For every character relation, check that no single shift action on the
    conflict case satisfies both scenario chains."""
    lo, hi = sorted(chars)
    out = {}
    for label, (c2, c3) in {"c3<c2": (hi, lo), "c3=c2": (lo, lo), "c3>c2": (lo, hi)}.items():
        r1 = conflict_chain(s, SCENARIO_1, p, c2, c3)
        r2 = conflict_chain(s, SCENARIO_2, p, c2, c3)
        out[label] = {
            "case": r1.conflict_case,
            "scenario-1": r1,
            "scenario-2": r2,
            "joint": r1.satisfying & r2.satisfying,
        }
    return out


@dataclass
class StrategyTP2:
    strategy: ITStrategy
    holds: bool
    checked: int
    witness_count: int
    minimal: TP2Witness | None
    minimal_by_class: dict[str, TP2Witness]
    classification: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy.to_dict(),
            "holds": self.holds,
            "checked": self.checked,
            "witness_count": self.witness_count,
            "minimal_witness": self.minimal.to_dict() if self.minimal else None,
            "minimal_by_class": {k: w.to_dict() for k, w in self.minimal_by_class.items()},
            "classification": self.classification,
        }


@dataclass
class ImpossibilityReport:
    domain: OperationDomain
    results: list[StrategyTP2] = field(default_factory=list)

    @property
    def all_fail(self) -> bool:
        return all(not r.holds for r in self.results)

    def classes_seen(self) -> set[str]:
        return {k for r in self.results for k, n in r.classification.items() if n}


def prove_impossibility(strategies: list[ITStrategy], dom: OperationDomain | None = None) -> ImpossibilityReport:
    """Run TP2 on each strategy and keep the least witness overall and per
    blocking scenario."""
    dom = dom or OperationDomain()
    report = ImpossibilityReport(dom)
    for i, s in enumerate(strategies):
        verdict = check_tp2(strategy_as_it(s, f"synth:{i}"), dom)
        counts = {"scenario-1": 0, "scenario-2": 0, "other": 0}
        by_class: dict[str, TP2Witness] = {}
        for w in verdict.witnesses:
            label = classify_witness(w)
            counts[label] += 1
            by_class.setdefault(label, w)
        report.results.append(
            StrategyTP2(
                strategy=s,
                holds=verdict.holds,
                checked=verdict.checked,
                witness_count=len(verdict.witnesses),
                minimal=verdict.witnesses[0] if verdict.witnesses else None,
                minimal_by_class=by_class,
                classification=counts,
            )
        )
    return report


def _sym(op_kind: str, idx: int, delta) -> str:
    if delta is None:
        return "Nop()"
    shift = {-1: "-1", 0: "", 1: "+1"}[delta]
    if op_kind == "ins":
        return f"Ins(p{idx}{shift},c{idx})"
    return f"Del(p{idx}{shift})"


_DELTA = {A.MAKE_NOP: None, A.SHIFT_MINUS: -1, A.KEEP: 0, A.SHIFT_PLUS: 1}
_GROUP_ROWS = {
    # group -> (kind of o1, kind of o2, condition, case of IT(o1,o2), case of IT(o2,o1))
    "ins/ins p1<p2": ("ins", "ins", "p1<p2", C.II_LT, C.II_GT),
    "ins/ins p1=p2 c1!=c2": ("ins", "ins", "p1=p2 & c1<c2", C.II_EQ_CLT, C.II_EQ_CGT),
    "ins/ins p1=p2 c1=c2": ("ins", "ins", "p1=p2 & c1=c2", C.II_EQ_CEQ, C.II_EQ_CEQ),
    "del/del p1<p2": ("del", "del", "p1<p2", C.DD_LT, C.DD_GT),
    "del/del p1=p2": ("del", "del", "p1=p2", C.DD_EQ, C.DD_EQ),
    "ins/del p1<p2": ("ins", "del", "p1<p2", C.ID_LT, C.DI_GT),
    "ins/del p1=p2": ("ins", "del", "p1=p2", C.ID_EQ, C.DI_EQ),
    "del/ins p1<p2": ("del", "ins", "p1<p2", C.DI_LT, C.ID_GT),
}


def table_rows(cs: CaseConstraintSet) -> list[tuple[str, str, str, str, str]]:
    """Render the admissible sets as rows ``(o1, o2, condition, IT(o1,o2), IT(o2,o1))``."""
    rows = []
    for g in GROUPS:
        k1, k2, cond, case12, case21 = _GROUP_ROWS[g.name]
        for assignment in cs.admissible[g.name]:
            m = dict(zip(g.cases, assignment))
            rows.append((
                _sym(k1, 1, 0),
                _sym(k2, 2, 0),
                cond,
                _sym(k1, 1, _DELTA[m[case12]]),
                _sym(k2, 2, _DELTA[m[case21]]),
            ))
    return rows
