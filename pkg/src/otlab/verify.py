"""Exhaustive bounded checking of TP1 and TP2.

TP1 compares the two execution orders of a concurrent pair as states on a
probe document of pairwise-distinct symbols. TP2 compares the two ways of
transforming a third operation as operations. Every failing tuple is kept.
"""
from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from typing import Iterable

from .core import Failed, Operation, OutOfRange, apply_sequence, delete, ins, outcome
from .transform import ITFunction, transform_along

_PROBE_POOL = string.ascii_uppercase + string.digits + string.ascii_lowercase
_KEY_FIELD = {"ellis": "pr", "ressel": "site"}


@dataclass(frozen=True)
class OperationDomain:
    """Bounds for the exhaustive checks.

    Fresh operations are ``Ins(p, c)`` and ``Del(p)`` for ``0 <= p <= max_pos``
    and ``c`` in ``alphabet``. With ``depth > 0`` the domain also holds fresh
    operations transformed along valid fresh sequences of up to ``depth``
    operations, as long as the result stays within ``max_pos``.
    """

    max_pos: int = 3
    alphabet: str = "abc"
    probe: str | None = None
    depth: int = 0

    def __post_init__(self):
        if self.max_pos < 0 or self.depth < 0:
            raise ValueError("max_pos and depth must be non-negative")
        if not self.alphabet or len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet must be non-empty with distinct symbols")
        object.__setattr__(self, "alphabet", "".join(sorted(self.alphabet)))
        if self.probe is None:
            pool = [c for c in _PROBE_POOL if c not in self.alphabet]
            object.__setattr__(self, "probe", "".join(pool[: self.max_pos + 3]))
        probe = self.probe
        if len(probe) < self.max_pos + 2:
            raise ValueError(f"probe needs at least {self.max_pos + 2} symbols")
        if len(set(probe)) != len(probe):
            raise ValueError("probe symbols must be pairwise distinct")
        if set(probe) & set(self.alphabet):
            raise ValueError("probe symbols must be disjoint from the insert alphabet")

    def describe(self) -> dict:
        return {
            "max_pos": self.max_pos,
            "alphabet": self.alphabet,
            "probe": self.probe,
            "depth": self.depth,
        }


def fresh_extension(op: Operation, family: str) -> Operation:
    if not op.is_ins:
        return op
    if family == "suleiman":
        return op.with_ext(av=frozenset(), ap=frozenset())
    if family == "imine":
        return op.with_ext(ip=op.pos)
    return op


def _fresh(dom: OperationDomain, family: str) -> list[Operation]:
    ops = [delete(p) for p in range(dom.max_pos + 1)]
    ops += [ins(p, c) for p in range(dom.max_pos + 1) for c in dom.alphabet]
    return [fresh_extension(o, family) for o in ops]


def _with_keys(ops: tuple[Operation, ...], keys: Iterable[int], family: str) -> tuple[Operation, ...]:
    name = _KEY_FIELD.get(family)
    if name is None:
        return ops
    return tuple(o.with_ext(**{name: k}) if o.is_ins else o for o, k in zip(ops, keys))


def keyings(ops: tuple[Operation, ...], family: str) -> list[tuple[Operation, ...]]:
    """Every relative ordering of priorities / site ids over the insert slots.

    Families without such a key get the tuple back unchanged.
    """
    if family not in _KEY_FIELD:
        return [ops]
    seen = set()
    out = []
    for perm in itertools.permutations(range(1, len(ops) + 1)):
        proj = tuple(k if o.is_ins else None for o, k in zip(ops, perm))
        # only the relative order among insert slots matters
        ranks = tuple(sorted(k for k in proj if k is not None))
        norm = tuple(None if k is None else ranks.index(k) for k in proj)
        if norm in seen:
            continue
        seen.add(norm)
        out.append(_with_keys(ops, perm, family))
    return out


def _strip_key(op: Operation, family: str) -> Operation:
    name = _KEY_FIELD.get(family)
    return op.with_ext(**{name: None}) if name else op


def _derived(dom: OperationDomain, it: ITFunction, fresh: list[Operation]) -> set[Operation]:
    family = it.family
    out: set[Operation] = set()
    for n in range(1, dom.depth + 1):
        for seq in itertools.product(fresh, repeat=n):
            try:
                apply_sequence(seq, dom.probe)
            except OutOfRange:
                continue
            seq = _with_keys(seq, range(1, n + 1), family)
            for o in fresh:
                # the transformed operation ranks below and above the sequence
                for k in ((0, n + 1) if family in _KEY_FIELD else (None,)):
                    start = _with_keys((o,), (k,), family)[0] if k is not None else o
                    try:
                        r = transform_along(it, start, seq)
                    except ValueError:
                        continue
                    if r.is_nop or not 0 <= r.pos <= dom.max_pos:
                        continue
                    out.add(_strip_key(r, family))
    return out


def enumerate_operations(dom: OperationDomain, it: ITFunction | str) -> list[Operation]:
    """Domain operations for an IT function (or a bare family name).

    Ellis priorities and Ressel site ids are left unset here; the checkers
    assign them per operand slot. Derived operations need the IT function
    itself, so ``depth > 0`` requires passing one.
    """
    family = it if isinstance(it, str) else it.family
    fresh = _fresh(dom, family)
    ops = set(fresh)
    if dom.depth > 0:
        if isinstance(it, str):
            raise ValueError("depth > 0 needs an IT function to derive operations")
        ops |= _derived(dom, it, fresh)
    return sorted(ops, key=Operation.sort_key)


def _key(ops) -> tuple:
    return tuple(o.sort_key() for o in ops)


@dataclass(frozen=True)
class TP1Witness:
    o1: Operation
    o2: Operation
    o21: Operation
    o12: Operation
    state1: str | Failed
    state2: str | Failed

    @property
    def pair(self) -> tuple[Operation, Operation]:
        return self.o1, self.o2

    def sort_key(self) -> tuple:
        return _key(self.pair)

    def recheck(self, it: ITFunction, probe: str) -> bool:
        """True iff the pair still violates TP1 when evaluated from scratch."""
        return tp1_witness(it, self.o1, self.o2, probe) is not None

    def __str__(self) -> str:
        return (
            f"({self.o1}, {self.o2}): [{self.o1}; {self.o21}] -> {self.state1}"
            f" vs [{self.o2}; {self.o12}] -> {self.state2}"
        )

    def to_dict(self) -> dict:
        return {
            "o1": str(self.o1),
            "o2": str(self.o2),
            "it_o2_o1": str(self.o21),
            "it_o1_o2": str(self.o12),
            "state1": str(self.state1),
            "state2": str(self.state2),
        }


@dataclass(frozen=True)
class TP2Witness:
    o1: Operation
    o2: Operation
    o3: Operation
    o21: Operation
    o12: Operation
    via1: Operation
    via2: Operation

    @property
    def triple(self) -> tuple[Operation, Operation, Operation]:
        return self.o1, self.o2, self.o3

    def sort_key(self) -> tuple:
        return _key(self.triple)

    def recheck(self, it: ITFunction) -> bool:
        return tp2_witness(it, self.o1, self.o2, self.o3) is not None

    def __str__(self) -> str:
        return (
            f"({self.o1}, {self.o2}, {self.o3}): IT*(o3,[{self.o1}; {self.o21}]) = {self.via1}"
            f" vs IT*(o3,[{self.o2}; {self.o12}]) = {self.via2}"
        )

    def to_dict(self) -> dict:
        return {
            "o1": str(self.o1),
            "o2": str(self.o2),
            "o3": str(self.o3),
            "it_o2_o1": str(self.o21),
            "it_o1_o2": str(self.o12),
            "via_o1": str(self.via1),
            "via_o2": str(self.via2),
        }


def tp1_witness(it: ITFunction, o1: Operation, o2: Operation, probe: str) -> TP1Witness | None:
    """Evaluate TP1 on one pair; an out-of-range application always fails."""
    o21 = it(o2, o1)
    o12 = it(o1, o2)
    s1 = outcome([o1, o21], probe)
    s2 = outcome([o2, o12], probe)
    if isinstance(s1, Failed) or isinstance(s2, Failed) or s1 != s2:
        return TP1Witness(o1, o2, o21, o12, s1, s2)
    return None


def tp2_witness(it: ITFunction, o1: Operation, o2: Operation, o3: Operation) -> TP2Witness | None:
    o21 = it(o2, o1)
    o12 = it(o1, o2)
    via1 = transform_along(it, o3, [o1, o21])
    via2 = transform_along(it, o3, [o2, o12])
    if via1 != via2:
        return TP2Witness(o1, o2, o3, o21, o12, via1, via2)
    return None


@dataclass
class Verdict:
    """Result of an exhaustive check: ``holds`` iff no witness was found."""

    prop: str
    it_name: str
    domain: OperationDomain
    checked: int
    witnesses: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.witnesses

    def to_dict(self) -> dict:
        return {
            "property": self.prop,
            "it": self.it_name,
            "domain": self.domain.describe(),
            "checked": self.checked,
            "holds": self.holds,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


def check_tp1(it: ITFunction, dom: OperationDomain | None = None) -> Verdict:
    dom = dom or OperationDomain()
    ops = enumerate_operations(dom, it)
    witnesses = []
    checked = 0
    for pair in itertools.product(ops, repeat=2):
        for o1, o2 in keyings(pair, it.family):
            checked += 1
            w = tp1_witness(it, o1, o2, dom.probe)
            if w is not None:
                witnesses.append(w)
    witnesses.sort(key=TP1Witness.sort_key)
    return Verdict("TP1", it.name, dom, checked, witnesses)


def check_tp2(it: ITFunction, dom: OperationDomain | None = None) -> Verdict:
    dom = dom or OperationDomain()
    ops = enumerate_operations(dom, it)
    witnesses = []
    checked = 0
    for triple in itertools.product(ops, repeat=3):
        for o1, o2, o3 in keyings(triple, it.family):
            checked += 1
            w = tp2_witness(it, o1, o2, o3)
            if w is not None:
                witnesses.append(w)
    witnesses.sort(key=TP2Witness.sort_key)
    return Verdict("TP2", it.name, dom, checked, witnesses)
