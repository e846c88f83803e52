"""Vector clocks and the decentralized integration procedure.

Sites are numbered from 1; a clock is a tuple whose entry ``k - 1`` counts the
operations from site ``k`` executed locally. Replicas are immutable and every
transition returns a new one.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .core import Operation, OutOfRange, apply
from .transform import ITFunction, transform_along

VectorClock = tuple


class LengthMismatch(ValueError):
    pass


class NotReady(Exception):
    """The receiving clock does not dominate the operation's stamp."""


def dominates(v1: VectorClock, v2: VectorClock) -> bool:
    if len(v1) != len(v2):
        raise LengthMismatch(f"clock lengths differ: {len(v1)} vs {len(v2)}")
    return all(a >= b for a, b in zip(v1, v2))


def bump(clock: VectorClock, site: int) -> VectorClock:
    return clock[: site - 1] + (clock[site - 1] + 1,) + clock[site:]


@dataclass(frozen=True)
class StampedOperation:
    """An operation as broadcast: original form, origin site, and the origin's
    clock copied before its own entry was incremented."""

    op: Operation
    origin: int
    stamp: VectorClock

    @property
    def seq_no(self) -> int:
        return self.stamp[self.origin - 1]

    def __str__(self) -> str:
        return f"{self.op}@{self.origin}{list(self.stamp)}"


def causally_depends(a: StampedOperation, b: StampedOperation) -> bool:
    """True iff ``a`` happened before ``b``."""
    i = a.origin - 1
    return a.stamp[i] < b.stamp[i]


def concurrent(a: StampedOperation, b: StampedOperation) -> bool:
    # an operation is never concurrent with itself
    if a.origin == b.origin and a.seq_no == b.seq_no:
        return False
    return not causally_depends(a, b) and not causally_depends(b, a)


@dataclass(frozen=True)
class HistoryEntry:
    """A stamped operation together with the form actually executed."""

    source: StampedOperation
    executed: Operation


@dataclass(frozen=True)
class SiteReplica:
    id: int
    doc: str
    clock: VectorClock
    history: tuple = ()
    pending: tuple = ()
    error: str | None = None

    @classmethod
    def fresh(cls, site: int, n_sites: int, doc: str) -> "SiteReplica":
        return cls(site, doc, (0,) * n_sites)

    @property
    def poisoned(self) -> bool:
        return self.error is not None

    def executed_ops(self) -> list[Operation]:
        return [h.executed for h in self.history]


def generate_local(site: SiteReplica, op: Operation) -> tuple[SiteReplica, StampedOperation]:
    doc = apply(op, site.doc)
    stamped = StampedOperation(op, site.id, site.clock)
    new = replace(
        site,
        doc=doc,
        clock=bump(site.clock, site.id),
        history=site.history + (HistoryEntry(stamped, op),),
    )
    return new, stamped


def is_ready(site: SiteReplica, rop: StampedOperation) -> bool:
    return dominates(site.clock, rop.stamp)


def integrate_remote(site: SiteReplica, it: ITFunction, rop: StampedOperation) -> SiteReplica:
    """Run the three integration steps for a causally ready remote operation.

    The history is stably partitioned into the entries that happened before
    ``rop`` and those concurrent with it; ``rop`` is transformed along the
    concurrent part, executed, and appended. An OutOfRange while executing
    poisons the replica instead of propagating.
    """
    if not is_ready(site, rop):
        raise NotReady(f"site {site.id} clock {list(site.clock)} does not dominate {rop}")
    if site.clock[rop.origin - 1] != rop.seq_no:
        raise ValueError(f"site {site.id} already executed {rop}")
    if site.poisoned:
        return site
    before = tuple(h for h in site.history if causally_depends(h.source, rop))
    conc = tuple(h for h in site.history if not causally_depends(h.source, rop))
    try:
        op = transform_along(it, rop.op, (h.executed for h in conc))
        doc = apply(op, site.doc)
    except OutOfRange as exc:
        return replace(site, error=f"integrating {rop}: {exc}")
    return replace(
        site,
        doc=doc,
        clock=bump(site.clock, rop.origin),
        history=before + conc + (HistoryEntry(rop, op),),
    )


def receive(site: SiteReplica, rop: StampedOperation) -> SiteReplica:
    """Queue a remote operation; call pump_pending to integrate it."""
    return replace(site, pending=site.pending + (rop,))


def pump_pending(site: SiteReplica, it: ITFunction) -> SiteReplica:
    """Integrate ready pending operations until none is ready.

    Among simultaneously ready operations the lowest origin wins, then the
    earliest arrival.
    """
    while not site.poisoned:
        ready = [
            (rop.origin, i) for i, rop in enumerate(site.pending) if is_ready(site, rop)
        ]
        if not ready:
            break
        _, i = min(ready)
        rop = site.pending[i]
        site = replace(site, pending=site.pending[:i] + site.pending[i + 1:])
        site = integrate_remote(site, it, rop)
    return site
