import random

import pytest

from otlab.core import Failed, delete, ins, nop
from otlab.synth import (
    GROUPS,
    SCENARIO_1,
    SCENARIO_2,
    ITStrategy,
    ShiftAction as A,
    classify_witness,
    coherence_filter,
    conflict_chain,
    contradiction_core,
    prove_impossibility,
    strategy_as_it,
    strategy_holds_tp1,
    synthesize_tp1,
    table_rows,
)
from otlab.transform import CATALOG, TransformCase as C
from otlab.verify import OperationDomain, TP2Witness, check_tp1, tp1_witness, tp2_witness

DOM = OperationDomain()
CS = synthesize_tp1(DOM)
COHERENT = coherence_filter(CS)


def test_shift_actions():
    assert A.MAKE_NOP.apply(ins(2, "x")) == nop()
    assert A.SHIFT_MINUS.apply(delete(2)) == delete(1)
    assert A.KEEP.apply(ins(2, "x")) == ins(2, "x")
    assert A.SHIFT_PLUS.apply(ins(2, "x")) == ins(3, "x")


def test_groups_partition_the_cases():
    cases = [c for g in GROUPS for c in g.cases]
    assert sorted(cases, key=lambda c: c.value) == sorted(C, key=lambda c: c.value)
    for g in GROUPS:
        assert {c.mirror for c in g.cases} == set(g.cases)


def test_strategy_requires_every_case():
    with pytest.raises(ValueError):
        ITStrategy.from_mapping({C.II_LT: A.KEEP})


def test_strategy_reproduces_sun_minus_tie_break():
    sun_like = {c: A.KEEP for c in C}
    sun_like.update({C.II_GT: A.SHIFT_PLUS, C.II_EQ_CLT: A.SHIFT_PLUS, C.II_EQ_CGT: A.SHIFT_PLUS,
                     C.II_EQ_CEQ: A.SHIFT_PLUS, C.ID_GT: A.SHIFT_MINUS, C.DI_GT: A.SHIFT_PLUS,
                     C.DI_EQ: A.SHIFT_PLUS, C.DD_GT: A.SHIFT_MINUS, C.DD_EQ: A.MAKE_NOP})
    it = strategy_as_it(ITStrategy.from_mapping(sun_like))
    ops = [ins(p, c) for p in range(3) for c in "ab"] + [delete(p) for p in range(3)]
    for o1 in ops:
        for o2 in ops:
            assert it(o1, o2) == CATALOG["sun"](o1, o2)


def test_groups_with_unique_assignment():
    for name in ("ins/ins p1<p2", "del/del p1<p2", "ins/del p1<p2", "ins/del p1=p2", "del/ins p1<p2"):
        assert len(CS.admissible[name]) == 1
    assert CS.admissible["ins/ins p1<p2"] == [(A.KEEP, A.SHIFT_PLUS)]


def test_equal_position_insert_groups():
    assert set(CS.admissible["ins/ins p1=p2 c1!=c2"]) == {(A.KEEP, A.SHIFT_PLUS), (A.SHIFT_PLUS, A.KEEP)}
    assert set(CS.admissible["ins/ins p1=p2 c1=c2"]) == {(A.MAKE_NOP,), (A.KEEP,), (A.SHIFT_PLUS,)}


def test_equal_position_deletes():
    got = set(CS.admissible["del/del p1=p2"])
    assert {(A.MAKE_NOP,), (A.KEEP,), (A.SHIFT_PLUS,)} <= got
    # Del(p-1) on both sides is rejected only through the p = 0 boundary
    if (A.SHIFT_MINUS,) not in got:
        it = strategy_as_it({C.DD_EQ: A.SHIFT_MINUS})
        w = tp1_witness(it, delete(0), delete(0), DOM.probe)
        assert isinstance(w.state1, Failed)
        assert tp1_witness(it, delete(2), delete(2), DOM.probe) is None


def test_constraint_set_independent_of_probe():
    other = synthesize_tp1(OperationDomain(probe="UVWXYZ"))
    assert other.admissible == CS.admissible


def test_coherent_strategies():
    assert len(COHERENT) == 6
    assert len(set(COHERENT)) == 6
    for s in COHERENT:
        assert s.action(C.DD_EQ) is A.MAKE_NOP
        assert CS.admits(s)
        assert check_tp1(strategy_as_it(s), DOM).holds


def test_per_group_decomposition_agrees_with_brute_force():
    rng = random.Random(7)
    actions = list(A)
    small = OperationDomain(2, "ab")
    cs = synthesize_tp1(small)
    agree = 0
    for _ in range(1000):
        mapping = {}
        for g in GROUPS:
            if rng.random() < 0.8:
                mapping.update(zip(g.cases, rng.choice(cs.admissible[g.name])))
            else:
                mapping.update({c: rng.choice(actions) for c in g.cases})
        s = ITStrategy.from_mapping(mapping)
        assert cs.admits(s) == strategy_holds_tp1(s, small)
        agree += 1
    assert agree == 1000


def _witness(o1, o2, o3):
    return TP2Witness(o1, o2, o3, o2, o1, o3, o3)


def test_classify_witness_examples():
    assert classify_witness(_witness(delete(1), ins(1, "x"), ins(2, "y"))) == "scenario-1"
    assert classify_witness(_witness(delete(1), ins(2, "x"), ins(1, "y"))) == "scenario-2"
    assert classify_witness(_witness(delete(0), delete(1), ins(3, "z"))) == "other"
    # the first two operations may come in either order
    assert classify_witness(_witness(ins(2, "x"), delete(1), ins(1, "y"))) == "scenario-2"


def test_symbolic_scenarios_instantiate():
    assert SCENARIO_1.instantiate(1, "x", "y") == (delete(1), ins(1, "x"), ins(2, "y"))
    assert SCENARIO_2.instantiate(1, "x", "y") == (delete(1), ins(2, "x"), ins(1, "y"))


@pytest.mark.parametrize("index", range(6))
def test_contradiction_core(index):
    s = COHERENT[index]
    for label, row in contradiction_core(s).items():
        r1, r2 = row["scenario-1"], row["scenario-2"]
        assert r1.required == ins(2, r1.required.char)  # p + 1
        assert r2.required == ins(1, r2.required.char)  # p
        assert r1.satisfying == {A.SHIFT_PLUS}
        assert r2.satisfying == {A.KEEP}
        assert not row["joint"]


@pytest.mark.parametrize("index", range(6))
def test_conflict_resolution_predicts_blocking_scenario(index):
    s = COHERENT[index]
    it = strategy_as_it(s)
    for c2, c3 in (("y", "x"), ("x", "x"), ("x", "y")):
        r = conflict_chain(s, SCENARIO_1, 1, c2, c3)
        action = s.action(r.conflict_case)
        if action is A.KEEP:
            assert tp2_witness(it, *SCENARIO_1.instantiate(1, c2, c3)) is not None
        if action is A.SHIFT_PLUS:
            assert tp2_witness(it, *SCENARIO_2.instantiate(1, c2, c3)) is not None


def test_impossibility_report():
    rep = prove_impossibility(COHERENT, DOM)
    assert rep.all_fail
    assert rep.classes_seen() >= {"scenario-1", "scenario-2"}
    for r in rep.results:
        assert not r.holds and r.minimal is not None
        assert r.minimal.sort_key() <= min(w.sort_key() for w in r.minimal_by_class.values())
        assert sum(r.classification.values()) == r.witness_count
        d = r.to_dict()
        assert d["minimal_witness"]["o1"] == str(r.minimal.o1)


def test_table_rows_cover_each_assignment():
    rows = table_rows(CS)
    assert len(rows) == sum(len(v) for v in CS.admissible.values())
    assert ("Ins(p1,c1)", "Ins(p2,c2)", "p1<p2", "Ins(p1,c1)", "Ins(p2+1,c2)") in rows
    assert ("Del(p1)", "Del(p2)", "p1=p2", "Nop()", "Nop()") in rows
