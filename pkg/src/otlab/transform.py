"""Inclusive transformation (IT) functions for Ins/Del/Nop.

Each published function is a closed case analysis over the kinds of its two
arguments; ``ITFunction`` adds the Nop conventions shared by all of them.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable

from .core import Operation, nop


class MissingExtension(Exception):
    """An insert lacks the extension field its IT family needs."""


class TransformCase(enum.Enum):
    """The 14 ways two non-Nop operations can relate (first vs second)."""

    II_LT = "ins/ins p1<p2"
    II_GT = "ins/ins p1>p2"
    II_EQ_CLT = "ins/ins p1=p2 c1<c2"
    II_EQ_CGT = "ins/ins p1=p2 c1>c2"
    II_EQ_CEQ = "ins/ins p1=p2 c1=c2"
    ID_LT = "ins/del p1<p2"
    ID_GT = "ins/del p1>p2"
    ID_EQ = "ins/del p1=p2"
    DI_LT = "del/ins p1<p2"
    DI_GT = "del/ins p1>p2"
    DI_EQ = "del/ins p1=p2"
    DD_LT = "del/del p1<p2"
    DD_GT = "del/del p1>p2"
    DD_EQ = "del/del p1=p2"

    @property
    def mirror(self) -> "TransformCase":
        """The case hit by the same pair with arguments swapped."""
        return _MIRROR[self]


_MIRROR = {
    TransformCase.II_LT: TransformCase.II_GT,
    TransformCase.II_EQ_CLT: TransformCase.II_EQ_CGT,
    TransformCase.II_EQ_CEQ: TransformCase.II_EQ_CEQ,
    TransformCase.ID_LT: TransformCase.DI_GT,
    TransformCase.ID_GT: TransformCase.DI_LT,
    TransformCase.ID_EQ: TransformCase.DI_EQ,
    TransformCase.DD_LT: TransformCase.DD_GT,
    TransformCase.DD_EQ: TransformCase.DD_EQ,
}
_MIRROR.update({v: k for k, v in list(_MIRROR.items())})


def _rel(a, b) -> int:
    return (a > b) - (a < b)


def case_of(o1: Operation, o2: Operation) -> TransformCase:
    if o1.is_nop or o2.is_nop:
        raise ValueError("Nop pairs have no transform case")
    r = _rel(o1.pos, o2.pos)
    key = (o1.kind, o2.kind)
    if key == ("ins", "ins"):
        if r < 0:
            return TransformCase.II_LT
        if r > 0:
            return TransformCase.II_GT
        c = _rel(o1.char, o2.char)
        return (TransformCase.II_EQ_CEQ, TransformCase.II_EQ_CGT, TransformCase.II_EQ_CLT)[c]
    table = {
        ("ins", "del"): (TransformCase.ID_EQ, TransformCase.ID_GT, TransformCase.ID_LT),
        ("del", "ins"): (TransformCase.DI_EQ, TransformCase.DI_GT, TransformCase.DI_LT),
        ("del", "del"): (TransformCase.DD_EQ, TransformCase.DD_GT, TransformCase.DD_LT),
    }
    return table[key][r]


@dataclass(frozen=True)
class ITFunction:
    """A named IT function.

    ``family`` tells scenario and domain generators which extension fields to
    attach to fresh inserts: ``plain``, ``ellis`` (pr), ``ressel`` (site),
    ``suleiman`` (av/ap) or ``imine`` (ip).
    """

    name: str
    family: str
    rule: Callable[[Operation, Operation], Operation]

    def __call__(self, o1: Operation, o2: Operation) -> Operation:
        if o1.is_nop:
            return o1
        if o2.is_nop:
            return o1
        return self.rule(o1, o2)

    def __repr__(self) -> str:
        return f"ITFunction({self.name!r})"


def transform_along(it: ITFunction, op: Operation, seq: Iterable[Operation]) -> Operation:
    """IT*: fold ``it`` over ``seq`` starting from ``op``."""
    return reduce(it, seq, op)


def _need(field: str, *ops: Operation) -> None:
    for o in ops:
        if o.is_ins and getattr(o, field) is None:
            raise MissingExtension(f"{o} has no {field!r} field")


def _del_rules(o1: Operation, o2: Operation) -> Operation:
    # Del against Ins / Del is identical in all five published functions.
    p1, p2 = o1.pos, o2.pos
    if o2.is_ins:
        return o1 if p1 < p2 else o1.moved(+1)
    if p1 < p2:
        return o1
    if p1 > p2:
        return o1.moved(-1)
    return nop()


def _ellis(o1: Operation, o2: Operation) -> Operation:
    _need("pr", o1, o2)
    p1, p2 = o1.pos, o2.pos
    if o1.is_del:
        return _del_rules(o1, o2)
    if o2.is_del:
        return o1 if p1 < p2 else o1.moved(-1)
    if p1 < p2:
        return o1
    if p1 > p2:
        return o1.moved(+1)
    if o1.char == o2.char:
        return nop()
    if o1.pr < o2.pr:
        return o1
    if o1.pr > o2.pr:
        return o1.moved(+1)
    raise ValueError(f"concurrent inserts {o1}, {o2} share a priority")


def _ressel(o1: Operation, o2: Operation) -> Operation:
    _need("site", o1, o2)
    p1, p2 = o1.pos, o2.pos
    if o1.is_del:
        return _del_rules(o1, o2)
    if o2.is_del:
        return o1 if p1 <= p2 else o1.moved(-1)
    if p1 < p2 or (p1 == p2 and o1.site < o2.site):
        return o1
    if p1 == p2 and o1.site == o2.site:
        raise ValueError(f"concurrent inserts {o1}, {o2} share a site id")
    return o1.moved(+1)


def _sun(o1: Operation, o2: Operation) -> Operation:
    p1, p2 = o1.pos, o2.pos
    if o1.is_del:
        return _del_rules(o1, o2)
    if o2.is_del:
        return o1 if p1 <= p2 else o1.moved(-1)
    return o1 if p1 < p2 else o1.moved(+1)


def _suleiman(o1: Operation, o2: Operation) -> Operation:
    _need("av", o1, o2)
    _need("ap", o1, o2)
    p1, p2 = o1.pos, o2.pos
    if o1.is_del:
        return _del_rules(o1, o2)
    if o2.is_del:
        if p1 <= p2:
            return o1.with_ext(ap=o1.ap | {o2})
        return o1.with_ext(pos=p1 - 1, av=o1.av | {o2})
    if p1 < p2:
        return o1
    if p1 > p2:
        return o1.moved(+1)
    # When both intersections are non-empty the shift wins; this is the
    # resolution the published counterexample exhibits.
    if o1.av & o2.ap:
        return o1.moved(+1)
    if o1.ap & o2.av:
        return o1
    if o1.char > o2.char:
        return o1
    if o1.char < o2.char:
        return o1.moved(+1)
    return nop()


def _imine(o1: Operation, o2: Operation) -> Operation:
    _need("ip", o1, o2)
    p1, p2 = o1.pos, o2.pos
    if o1.is_del:
        return _del_rules(o1, o2)
    if o2.is_del:
        return o1 if p1 <= p2 else o1.moved(-1)
    if p1 < p2:
        return o1
    if p1 > p2:
        return o1.moved(+1)
    if o1.ip != o2.ip:
        return o1 if o1.ip < o2.ip else o1.moved(+1)
    if o1.char < o2.char:
        return o1
    if o1.char > o2.char:
        return o1.moved(+1)
    return nop()


def _identity(o1: Operation, o2: Operation) -> Operation:
    return o1


ellis_it = ITFunction("ellis", "ellis", _ellis)
ressel_it = ITFunction("ressel", "ressel", _ressel)
sun_it = ITFunction("sun", "plain", _sun)
suleiman_it = ITFunction("suleiman", "suleiman", _suleiman)
imine_it = ITFunction("imine", "imine", _imine)
identity_it = ITFunction("identity", "plain", _identity)

PUBLISHED = (ellis_it, ressel_it, sun_it, suleiman_it, imine_it)
CATALOG = {it.name: it for it in PUBLISHED + (identity_it,)}
