import pytest

from otlab.core import Failed, delete, ins
from otlab.transform import (
    PUBLISHED,
    ellis_it,
    identity_it,
    imine_it,
    ressel_it,
    suleiman_it,
    sun_it,
)
from otlab.verify import (
    OperationDomain,
    check_tp1,
    check_tp2,
    enumerate_operations,
    keyings,
    tp1_witness,
    tp2_witness,
)

D = frozenset({delete(2)})


def test_domain_defaults_and_probe():
    dom = OperationDomain()
    assert dom.alphabet == "abc"
    assert len(dom.probe) == dom.max_pos + 3
    assert len(set(dom.probe)) == len(dom.probe)
    assert not set(dom.probe) & set(dom.alphabet)


@pytest.mark.parametrize("kwargs", [
    {"max_pos": -1},
    {"alphabet": ""},
    {"alphabet": "aa"},
    {"probe": "AB"},
    {"probe": "AABCD"},
    {"probe": "aBCDE"},
])
def test_domain_validation(kwargs):
    with pytest.raises(ValueError):
        OperationDomain(**kwargs)


def test_fresh_domain_size():
    ops = enumerate_operations(OperationDomain(), sun_it)
    assert len(ops) == 4 + 4 * 3
    assert ops[0] == delete(0)


def test_depth_needs_a_function():
    with pytest.raises(ValueError):
        enumerate_operations(OperationDomain(depth=1), "suleiman")


def test_derived_suleiman_operations_carry_sets():
    ops = enumerate_operations(OperationDomain(2, "c", depth=1), suleiman_it)
    assert ins(0, "c", av=frozenset({delete(0)}), ap=frozenset()) in ops
    assert all(0 <= o.pos <= 2 for o in ops)


def test_keyings_orders_insert_slots():
    ks = keyings((ins(1, "a"), ins(1, "b")), "ellis")
    assert {(a.pr < b.pr) for a, b in ks} == {True, False}
    assert keyings((delete(0), ins(1, "a")), "ressel") == [(delete(0), ins(1, "a", site=2))]
    assert keyings((ins(0, "a"),), "plain") == [(ins(0, "a"),)]


def test_tp1_witness_on_fig6_pair():
    w = tp1_witness(ellis_it, ins(1, "f", pr=1), delete(1), "efecte")
    assert (w.state1, w.state2) == ("efecte", "feecte")


def test_tp1_out_of_range_counts_as_failure():
    w = tp1_witness(ellis_it, ins(0, "f", pr=1), delete(0), "ABCD")
    assert isinstance(w.state1, Failed) or isinstance(w.state2, Failed)


def test_identity_fails_tp1_but_trivially_keeps_tp2():
    assert not check_tp1(identity_it).holds
    assert check_tp2(identity_it).holds


def test_published_tp1_verdicts():
    dom = OperationDomain(3, "cef")
    assert not check_tp1(ellis_it, dom).holds
    assert not check_tp1(sun_it, dom).holds
    assert check_tp1(ressel_it, dom).holds
    assert check_tp1(suleiman_it, dom).holds
    assert check_tp1(imine_it, dom).holds


def test_ellis_witness_includes_fig6_pair():
    v = check_tp1(ellis_it, OperationDomain(3, "f"))
    assert (ins(1, "f", pr=1), delete(1)) in [w.pair for w in v.witnesses]


def test_sun_has_equal_position_insert_witness():
    v = check_tp1(sun_it, OperationDomain(3, "ef"))
    assert (ins(1, "e"), ins(1, "f")) in [w.pair for w in v.witnesses]


def test_sun_fig2_style_pair_satisfies_tp1():
    # an insert against a delete at the same position converges under Sun
    assert tp1_witness(sun_it, ins(1, "f"), delete(1), "ABCDEF") is None


def test_suleiman_breaks_tp1_on_derived_inserts():
    v = check_tp1(suleiman_it, OperationDomain(3, "cf", depth=2))
    assert not v.holds
    pairs = [w.pair for w in v.witnesses]
    assert (ins(2, "c", av=D, ap=D), ins(2, "f", av=D, ap=D)) in pairs


def test_ressel_tp2_fig9_triple():
    v = check_tp2(ressel_it, OperationDomain(3, "ce"))
    triples = {w.triple: w for w in v.witnesses}
    w = triples[(delete(1), ins(2, "c", site=2), ins(1, "e", site=3))]
    assert (w.via1, w.via2) == (ins(2, "e", site=3), ins(1, "e", site=3))


def test_imine_tp2_holds_fresh_fails_derived():
    assert check_tp2(imine_it, OperationDomain(2, "ce")).holds
    v = check_tp2(imine_it, OperationDomain(3, "ce", depth=1))
    triples = {w.triple: w for w in v.witnesses}
    w = triples[(delete(1), ins(2, "c", ip=2), ins(1, "e", ip=2))]
    assert {w.via1, w.via2} == {ins(2, "e", ip=2), ins(1, "e", ip=2)}


def test_imine_tp2_fails_at_depth_three():
    assert not check_tp2(imine_it, OperationDomain(2, "ce", depth=3)).holds


@pytest.mark.parametrize("it", PUBLISHED + (identity_it,), ids=lambda it: it.name)
def test_witnesses_recheck_and_are_sorted(it):
    dom = OperationDomain(2, "ab")
    v1, v2 = check_tp1(it, dom), check_tp2(it, dom)
    assert all(w.recheck(it, dom.probe) for w in v1.witnesses)
    assert all(w.recheck(it) for w in v2.witnesses)
    keys = [w.sort_key() for w in v2.witnesses]
    assert keys == sorted(keys)


def test_tp1_independent_of_probe_symbols():
    a = check_tp1(sun_it, OperationDomain(2, "ab", probe="ABCD"))
    b = check_tp1(sun_it, OperationDomain(2, "ab", probe="WXYZ"))
    assert [w.pair for w in a.witnesses] == [w.pair for w in b.witnesses]


def test_tp2_witness_none_when_equal():
    assert tp2_witness(sun_it, delete(0), delete(2), delete(3)) is None


def test_verdict_dict():
    d = check_tp1(sun_it, OperationDomain(1, "a")).to_dict()
    assert d["property"] == "TP1" and d["it"] == "sun" and d["domain"]["max_pos"] == 1
