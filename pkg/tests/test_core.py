import pytest
from hypothesis import given, strategies as st

from otlab.core import (
    Failed,
    Operation,
    OutOfRange,
    apply,
    apply_sequence,
    delete,
    ins,
    nop,
    outcome,
    sequences_equivalent,
)


def test_insert_and_delete_on_efecte():
    assert apply(ins(1, "f"), "efecte") == "effecte"
    assert apply(delete(5), "efecte") == "efect"
    assert apply(nop(), "efecte") == "efecte"


def test_insert_at_end_is_allowed():
    assert apply(ins(6, "x"), "efecte") == "efectex"


@pytest.mark.parametrize("op", [delete(6), delete(-1), ins(7, "x"), ins(-1, "x")])
def test_out_of_range_is_reported_not_clamped(op):
    with pytest.raises(OutOfRange):
        apply(op, "efecte")


def test_apply_sequence_reports_offending_index():
    with pytest.raises(OutOfRange) as info:
        apply_sequence([delete(0), delete(0), delete(5)], "abc")
    assert info.value.index == 2


def test_outcome_failed_compares_by_index():
    a = outcome([delete(9)], "abc")
    b = outcome([ins(9, "x")], "abc")
    assert a == b == Failed(0, delete(9))
    assert outcome([nop(), delete(9)], "abc") != a


def test_sequences_equivalent():
    assert sequences_equivalent([ins(0, "x"), delete(1)], [delete(0), ins(0, "x")], "ABC")
    assert not sequences_equivalent([ins(0, "x")], [ins(1, "x")], "ABC")


def test_malformed_operations_rejected():
    with pytest.raises(ValueError):
        Operation("ins", 1)
    with pytest.raises(ValueError):
        Operation("del")
    with pytest.raises(ValueError):
        Operation("nop", 0)
    with pytest.raises(ValueError):
        Operation("move", 0)


def test_rendering():
    assert str(ins(1, "f", pr=1)) == "Ins(1,f,pr=1)"
    assert str(ins(2, "c", ip=2)) == "Ins(2,c,ip=2)"
    assert str(ins(2, "f", av=frozenset({delete(2)}), ap=frozenset({delete(2)}))) == "Ins(2,f,{Del(2)},{Del(2)})"
    assert str(delete(5)) == "Del(5)"
    assert str(nop()) == "Nop()"


def test_sort_key_puts_deletes_first():
    ops = [nop(), ins(0, "a"), delete(3), delete(0)]
    assert sorted(ops, key=Operation.sort_key) == [delete(0), delete(3), ins(0, "a"), nop()]


docs = st.text(alphabet="abcdef", max_size=8)


@given(docs, st.data())
def test_insert_then_delete_restores(doc, data):
    p = data.draw(st.integers(0, len(doc)))
    assert apply(delete(p), apply(ins(p, "z"), doc)) == doc


@given(docs, st.data())
def test_lengths(doc, data):
    p = data.draw(st.integers(0, len(doc)))
    assert len(apply(ins(p, "z"), doc)) == len(doc) + 1
    if doc:
        q = data.draw(st.integers(0, len(doc) - 1))
        assert len(apply(delete(q), doc)) == len(doc) - 1
