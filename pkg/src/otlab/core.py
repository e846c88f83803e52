"""Replicated string model: operations, their effect on a document, and
sequence equivalence.

Documents are plain ``str`` values, so every operation is value-to-value.
Positions are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

INS = "ins"
DEL = "del"
NOP = "nop"

_KIND_RANK = {DEL: 0, INS: 1, NOP: 2}


class OutOfRange(Exception):
    """An operation addressed a position that does not exist in the document."""

    def __init__(self, op: "Operation", length: int, index: int | None = None):
        self.op = op
        self.length = length
        self.index = index
        where = "" if index is None else f" (sequence index {index})"
        super().__init__(f"{op} out of range for length {length}{where}")

    def at(self, index: int) -> "OutOfRange":
        return OutOfRange(self.op, self.length, index)


@dataclass(frozen=True)
class Operation:
    """A primitive edit plus the optional fields each IT family relies on.

    ``pr`` is Ellis's priority, ``site`` Ressel's issuer id, ``av``/``ap``
    Suleiman's sets of deletions before/after the insertion point, and ``ip``
    Imine's original insertion position. Fields a family does not use stay
    ``None``. Equality is structural over every field.
    """

    kind: str
    pos: int | None = None
    char: str | None = None
    pr: int | None = None
    site: int | None = None
    av: frozenset | None = None
    ap: frozenset | None = None
    ip: int | None = None

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown operation kind {self.kind!r}")
        if self.kind == NOP and (self.pos is not None or self.char is not None):
            raise ValueError("Nop carries no position or character")
        if self.kind == DEL and self.char is not None:
            raise ValueError("Del carries no character")
        if self.kind != NOP and self.pos is None:
            raise ValueError(f"{self.kind} requires a position")
        if self.kind == INS and self.char is None:
            raise ValueError("Ins requires a character")

    @property
    def is_ins(self) -> bool:
        return self.kind == INS

    @property
    def is_del(self) -> bool:
        return self.kind == DEL

    @property
    def is_nop(self) -> bool:
        return self.kind == NOP

    def moved(self, delta: int) -> "Operation":
        return replace(self, pos=self.pos + delta)

    def with_ext(self, **fields) -> "Operation":
        return replace(self, **fields)

    def bare(self) -> "Operation":
        """Same edit with every extension field dropped."""
        return Operation(self.kind, self.pos, self.char)

    def sort_key(self) -> tuple:
        # Del < Ins < Nop, then position, char, extension fields.
        def opt(v):
            return (0,) if v is None else (1, v)

        def opset(s):
            return (0,) if s is None else (1, tuple(sorted(o.sort_key() for o in s)))

        return (
            _KIND_RANK[self.kind],
            -1 if self.pos is None else self.pos,
            self.char or "",
            opt(self.pr),
            opt(self.site),
            opset(self.av),
            opset(self.ap),
            opt(self.ip),
        )

    def __str__(self) -> str:
        if self.kind == NOP:
            return "Nop()"
        if self.kind == DEL:
            return f"Del({self.pos})"
        args = [str(self.pos), self.char]
        if self.pr is not None:
            args.append(f"pr={self.pr}")
        if self.site is not None:
            args.append(f"u={self.site}")
        if self.av is not None or self.ap is not None:
            args.append(_fmt_set(self.av))
            args.append(_fmt_set(self.ap))
        if self.ip is not None:
            args.append(f"ip={self.ip}")
        return f"Ins({','.join(args)})"


def _fmt_set(ops: frozenset | None) -> str:
    if not ops:
        return "{}"
    return "{" + ",".join(str(o) for o in sorted(ops, key=Operation.sort_key)) + "}"


def ins(pos: int, char: str, **ext) -> Operation:
    return Operation(INS, pos, char, **ext)


def delete(pos: int) -> Operation:
    return Operation(DEL, pos)


def nop() -> Operation:
    return Operation(NOP)


def apply(op: Operation, doc: str) -> str:
    """Return the document obtained by executing ``op`` on ``doc``.

    Raises OutOfRange instead of clamping, so a mis-transformed operation
    shows up as an error rather than a silently different edit.
    """
    if op.kind == NOP:
        return doc
    p = op.pos
    if op.kind == INS:
        if not 0 <= p <= len(doc):
            raise OutOfRange(op, len(doc))
        return doc[:p] + op.char + doc[p:]
    if not 0 <= p < len(doc):
        raise OutOfRange(op, len(doc))
    return doc[:p] + doc[p + 1:]


def apply_sequence(seq: Iterable[Operation], doc: str) -> str:
    for i, op in enumerate(seq):
        try:
            doc = apply(op, doc)
        except OutOfRange as exc:
            raise exc.at(i) from None
    return doc


@dataclass(frozen=True)
class Failed:
    """Outcome of a sequence that hit OutOfRange at ``index``."""

    index: int
    op: Operation = field(compare=False)

    def __str__(self) -> str:
        return f"<error: {self.op} at index {self.index}>"


def outcome(seq: Sequence[Operation], doc: str) -> str | Failed:
    """Final document, or a Failed marker naming the offending operation."""
    try:
        return apply_sequence(seq, doc)
    except OutOfRange as exc:
        return Failed(exc.index, exc.op)


def sequences_equivalent(s1: Sequence[Operation], s2: Sequence[Operation], probe: str) -> bool:
    return outcome(s1, probe) == outcome(s2, probe)
