"""Scripted multi-site sessions.

A scenario is a global list of events: ``Generate`` executes a fresh local
operation at a site, ``Deliver`` hands a previously generated operation to
another site, which integrates it as soon as it is causally ready.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import DEL, INS, NOP, Operation, OutOfRange, delete, ins
from .replication import (
    HistoryEntry,
    SiteReplica,
    StampedOperation,
    dominates,
    generate_local,
    pump_pending,
    receive,
)
from .transform import CATALOG, ITFunction


class MalformedScenario(ValueError):
    pass


class ExplosionGuard(RuntimeError):
    """Too many delivery interleavings to enumerate."""


@dataclass(frozen=True)
class Generate:
    site: int
    op: Operation


@dataclass(frozen=True)
class Deliver:
    site: int
    ref: int


@dataclass(frozen=True)
class Scenario:
    name: str
    sites: int
    initial: str
    events: tuple
    it_family: str = "sun"
    mode: str = "scripted"

    def generated(self) -> list[int]:
        return [i for i, e in enumerate(self.events) if isinstance(e, Generate)]


@dataclass
class RunOutcome:
    docs: dict[int, str]
    histories: dict[int, tuple[HistoryEntry, ...]]
    converged: bool
    divergence: tuple[int, int, str, str] | None = None
    errors: dict[int, str] = field(default_factory=dict)
    unintegrated: dict[int, int] = field(default_factory=dict)
    order: tuple = ()

    def summary(self) -> str:
        parts = [f"site{s}={d!r}" for s, d in sorted(self.docs.items())]
        parts.append(f"converged={str(self.converged).lower()}")
        return " ".join(parts)


def assign_extensions(op: Operation, site: int, family: str) -> Operation:
    """Attach the fields a family expects on a freshly generated insert."""
    if not op.is_ins:
        return op
    if family == "ellis":
        return op.with_ext(pr=site)
    if family == "ressel":
        return op.with_ext(site=site)
    if family == "suleiman":
        return op.with_ext(av=frozenset(), ap=frozenset())
    if family == "imine":
        return op.with_ext(ip=op.pos)
    return op


def validate(sc: Scenario) -> None:
    if sc.sites < 1:
        raise MalformedScenario("a scenario needs at least one site")
    if sc.mode not in ("scripted", "all-orders"):
        raise MalformedScenario(f"unknown mode {sc.mode!r}")
    delivered: dict[int, list[int]] = {}
    for i, ev in enumerate(sc.events):
        if not 1 <= ev.site <= sc.sites:
            raise MalformedScenario(f"event {i}: site {ev.site} outside 1..{sc.sites}")
        if isinstance(ev, Generate):
            delivered[i] = []
        elif isinstance(ev, Deliver):
            if ev.ref not in delivered or ev.ref >= i:
                raise MalformedScenario(f"event {i}: ref {ev.ref} is not a prior generate event")
            if sc.events[ev.ref].site == ev.site:
                raise MalformedScenario(f"event {i}: delivers an operation to its own site")
            delivered[ev.ref].append(ev.site)
        else:
            raise MalformedScenario(f"event {i}: unknown event {ev!r}")
    if sc.mode == "scripted":
        for ref, targets in delivered.items():
            origin = sc.events[ref].site
            expected = sorted(s for s in range(1, sc.sites + 1) if s != origin)
            if sorted(targets) != expected:
                raise MalformedScenario(
                    f"operation of event {ref} must reach sites {expected} exactly once, got {sorted(targets)}"
                )


def _execute(sc: Scenario, it: ITFunction, events) -> tuple[dict[int, SiteReplica], dict[int, StampedOperation]]:
    replicas = {s: SiteReplica.fresh(s, sc.sites, sc.initial) for s in range(1, sc.sites + 1)}
    stamped: dict[int, StampedOperation] = {}
    for i, ev in events:
        site = replicas[ev.site]
        if isinstance(ev, Generate):
            op = assign_extensions(ev.op, ev.site, it.family)
            try:
                site, stamped[i] = generate_local(site, op)
            except OutOfRange as exc:
                raise MalformedScenario(f"event {i}: {exc}") from None
        else:
            site = pump_pending(receive(site, stamped[ev.ref]), it)
        replicas[ev.site] = site
    return replicas, stamped


def _outcome(replicas: dict[int, SiteReplica], order=()) -> RunOutcome:
    docs = {s: r.doc for s, r in replicas.items()}
    errors = {s: r.error for s, r in replicas.items() if r.poisoned}
    waiting = {s: len(r.pending) for s, r in replicas.items() if r.pending}
    divergence = None
    sites = sorted(docs)
    for a, b in itertools.combinations(sites, 2):
        if docs[a] != docs[b]:
            divergence = (a, b, docs[a], docs[b])
            break
    return RunOutcome(
        docs=docs,
        histories={s: r.history for s, r in replicas.items()},
        converged=divergence is None and not errors and not waiting,
        divergence=divergence,
        errors=errors,
        unintegrated=waiting,
        order=order,
    )


def resolve_it(sc: Scenario, it: ITFunction | None) -> ITFunction:
    if it is not None:
        return it
    try:
        return CATALOG[sc.it_family]
    except KeyError:
        raise MalformedScenario(f"unknown IT family {sc.it_family!r}") from None


def run_scenario(sc: Scenario, it: ITFunction | None = None) -> RunOutcome:
    validate(sc)
    if sc.mode != "scripted":
        raise MalformedScenario("run_scenario needs a scripted scenario; use run_all_orders")
    it = resolve_it(sc, it)
    replicas, _ = _execute(sc, it, enumerate(sc.events))
    return _outcome(replicas)


def _free_deliveries(sc: Scenario) -> dict[int, list[int]]:
    """Per site, the deliveries scripted after the site's last local
    generation; only these may be reordered without changing what any
    operation was generated against."""
    last_gen = {s: -1 for s in range(1, sc.sites + 1)}
    for i, ev in enumerate(sc.events):
        if isinstance(ev, Generate):
            last_gen[ev.site] = i
    free: dict[int, list[int]] = {s: [] for s in last_gen}
    for i, ev in enumerate(sc.events):
        if isinstance(ev, Deliver) and i > last_gen[ev.site]:
            free[ev.site].append(i)
    return free


def _causal_orders(clock, deliveries, stamped_of, limit):
    """All delivery orders in which every operation is ready on arrival,
    in lexicographic order of event indices."""
    out = []

    def walk(clock, left, acc):
        if len(out) > limit:
            raise ExplosionGuard(f"more than {limit} delivery orders")
        if not left:
            out.append(tuple(acc))
            return
        for ev_index in left:
            rop = stamped_of(ev_index)
            if dominates(clock, rop.stamp):
                k = rop.origin - 1
                nxt = clock[:k] + (clock[k] + 1,) + clock[k + 1:]
                walk(nxt, [e for e in left if e != ev_index], acc + [ev_index])

    walk(clock, sorted(deliveries), [])
    return out


def run_all_orders(
    sc: Scenario, it: ITFunction | None = None, max_ops: int = 10, cap: int = 5000
) -> list[RunOutcome]:
    """Run every combination of causally admissible per-site delivery orders.

    Generation contexts stay as scripted; each site's deliveries after its
    last local generation are permuted. Outcomes come in lexicographic order
    of (site 1 order, site 2 order, ...).
    """
    validate(sc)
    it = resolve_it(sc, it)
    if len(sc.generated()) > max_ops:
        raise ExplosionGuard(f"{len(sc.generated())} operations exceeds the limit of {max_ops}")
    free = _free_deliveries(sc)
    free_set = {i for idxs in free.values() for i in idxs}
    base = [(i, ev) for i, ev in enumerate(sc.events) if i not in free_set]
    replicas, stamped = _execute(sc, it, base)

    per_site = []
    for s in sorted(free):
        orders = _causal_orders(
            replicas[s].clock, free[s], lambda i: stamped[sc.events[i].ref], cap
        )
        per_site.append(orders)
    total = 1
    for orders in per_site:
        total *= max(len(orders), 1)
    if total > cap:
        raise ExplosionGuard(f"{total} interleavings exceeds the cap of {cap}")

    outcomes = []
    for combo in itertools.product(*per_site):
        events = list(base)
        for order in combo:
            events.extend((i, sc.events[i]) for i in order)
        reps, _ = _execute(sc, it, events)
        outcomes.append(_outcome(reps, order=combo))
    return outcomes


def _script(name: str, sites: int, initial: str, it_family: str, steps) -> Scenario:
    """Build a scenario from ``("gen", site, op, label)`` and
    ``("dlv", site, label, ...)`` steps."""
    events = []
    labels: dict[str, int] = {}
    for step in steps:
        if step[0] == "gen":
            _, site, op, label = step
            labels[label] = len(events)
            events.append(Generate(site, op))
        else:
            _, site, *refs = step
            events.extend(Deliver(site, labels[r]) for r in refs)
    return Scenario(name, sites, initial, tuple(events), it_family)


def _three_site(name: str, it_family: str, o1, o2, o3) -> Scenario:
    return _script(name, 3, "abcd", it_family, [
        ("gen", 1, o1, "o1"),
        ("gen", 2, o2, "o2"),
        ("gen", 3, o3, "o3"),
        ("dlv", 1, "o2", "o3"),
        ("dlv", 2, "o1", "o3"),
        ("dlv", 3, "o1", "o2"),
    ])


def builtin_scenarios() -> dict[str, Scenario]:
    two_site = lambda name, fam, doc, o1, o2: _script(name, 2, doc, fam, [
        ("gen", 1, o1, "o1"),
        ("gen", 2, o2, "o2"),
        ("dlv", 1, "o2"),
        ("dlv", 2, "o1"),
    ])
    scenarios = [
        two_site("fig1-naive", "identity", "efecte", ins(1, "f"), delete(5)),
        two_site("fig2-transformed", "sun", "efecte", ins(1, "f"), delete(5)),
        two_site("ellis-tp1", "ellis", "efecte", ins(1, "f"), delete(1)),
        two_site("sun-tp1", "sun", "efct", ins(1, "f"), ins(1, "e")),
        _script("suleiman-tp1", 4, "eftte", "suleiman", [
            ("gen", 1, ins(3, "f"), "o1"),
            ("gen", 2, ins(2, "c"), "o2"),
            ("gen", 3, delete(2), "o3"),
            ("gen", 3, ins(2, "e"), "o4"),
            ("gen", 3, delete(2), "o5"),
            ("dlv", 4, "o3", "o4", "o5"),
            ("dlv", 3, "o1", "o2"),
            ("dlv", 4, "o2", "o1"),
            ("dlv", 1, "o2", "o3", "o4", "o5"),
            ("dlv", 2, "o1", "o3", "o4", "o5"),
        ]),
        _three_site("ressel-tp2", "ressel", delete(1), ins(2, "c"), ins(1, "e")),
        _script("imine-tp2", 4, "eefft", "imine", [
            ("gen", 1, delete(2), "o1"),
            ("gen", 2, delete(1), "o0"),
            ("gen", 2, ins(2, "c"), "o2"),
            ("gen", 3, ins(2, "e"), "o3"),
            ("dlv", 2, "o1", "o3"),
            ("dlv", 4, "o0", "o1", "o2", "o3"),
            ("dlv", 1, "o0", "o2", "o3"),
            ("dlv", 3, "o0", "o1", "o2"),
        ]),
        _three_site("scenario-1", "ellis", delete(1), ins(1, "x"), ins(2, "y")),
        _three_site("scenario-2", "ressel", delete(1), ins(2, "x"), ins(1, "y")),
    ]
    return {sc.name: sc for sc in scenarios}


def op_to_dict(op: Operation) -> dict:
    d = {"kind": op.kind}
    if op.pos is not None:
        d["pos"] = op.pos
    if op.char is not None:
        d["char"] = op.char
    return d


def op_from_dict(d: dict) -> Operation:
    kind = d.get("kind")
    if kind == INS:
        if not isinstance(d["char"], str) or len(d["char"]) != 1:
            raise MalformedScenario(f"insert needs a single character, got {d['char']!r}")
        return ins(int(d["pos"]), d["char"])
    if kind == DEL:
        return delete(int(d["pos"]))
    if kind == NOP:
        return Operation(NOP)
    raise MalformedScenario(f"unknown operation kind {kind!r}")


def scenario_to_dict(sc: Scenario) -> dict:
    events = []
    for ev in sc.events:
        if isinstance(ev, Generate):
            events.append({"type": "generate", "site": ev.site, "op": op_to_dict(ev.op.bare())})
        else:
            events.append({"type": "deliver", "site": ev.site, "ref": ev.ref})
    d = {
        "name": sc.name,
        "sites": sc.sites,
        "initial": sc.initial,
        "it_family": sc.it_family,
        "events": events,
    }
    if sc.mode != "scripted":
        d["mode"] = sc.mode
    return d


def scenario_from_dict(d: dict) -> Scenario:
    """Build and validate a scenario from its JSON object form."""
    try:
        events = []
        for i, e in enumerate(d["events"]):
            if e["type"] == "generate":
                events.append(Generate(int(e["site"]), op_from_dict(e["op"])))
            elif e["type"] == "deliver":
                events.append(Deliver(int(e["site"]), int(e["ref"])))
            else:
                raise MalformedScenario(f"event {i}: unknown type {e['type']!r}")
        sc = Scenario(
            name=str(d["name"]),
            sites=int(d["sites"]),
            initial=str(d["initial"]),
            events=tuple(events),
            it_family=str(d.get("it_family", "sun")),
            mode=str(d.get("mode", "scripted")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedScenario):
            raise
        raise MalformedScenario(f"bad scenario object: {exc!r}") from None
    validate(sc)
    return sc
