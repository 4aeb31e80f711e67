import logging

import pytest
from t_helpers import ints, random_strings

from holdring.actions.catalog import binary_binding, catalog, get_binding, pseudo_binding
from holdring.actions.digits import Digit, DigitString
from holdring.actions.embed import (
    SystemBinding,
    binding_from_json,
    binding_to_json,
    check_hold_identity,
    decode,
    derive_binding,
    div_by_X_exact,
    encode,
    encode_text,
    eval_sigma,
    residue_digit,
    tau,
)
from holdring.actions.helpers import InvalidSystem, NonTerminating
from holdring.actions.ring import OrderSpec
from holdring.actions.system import NumberSystem

logger = logging.getLogger(__name__)


def test_eval_sigma():
    neg2 = get_binding("neg2")
    gaussian = get_binding("gaussian")
    assert eval_sigma(DigitString.empty(1), neg2).is_zero()
    assert eval_sigma(ints([1, 1, 1], 1), neg2) == neg2.order.element(3)
    assert eval_sigma(ints([1, 1], 1), gaussian) == gaussian.order.element(0, 1)
    with pytest.raises(ValueError):
        eval_sigma(ints([1], 2), neg2)


def test_residue_digit_and_division():
    bal3 = get_binding("bal3")
    gaussian = get_binding("gaussian")
    assert residue_digit(bal3.order.zero(), bal3).is_zero()
    assert residue_digit(bal3.order.element(5), bal3) == Digit.minus_one(2)
    assert residue_digit(gaussian.order.element(0, 1), gaussian) == Digit.one(1)

    neg2 = get_binding("neg2")
    assert div_by_X_exact(neg2.order.element(6), neg2) == neg2.order.element(-3)
    sqrt3 = get_binding("sqrt-3")
    assert div_by_X_exact(sqrt3.order.element(-3, 1), sqrt3) == sqrt3.order.element(1, 1)
    sqrt7 = get_binding("sqrt-7")
    assert div_by_X_exact(sqrt7.order.element(2), sqrt7) == sqrt7.order.element(-1, -1)

    digit, rest = tau(neg2.order.element(5), neg2)
    assert digit == Digit.one(1)
    assert rest == neg2.order.element(-2)


def test_encode_examples():
    neg2 = get_binding("neg2")
    bal3 = get_binding("bal3")
    assert encode(neg2.order.element(5), neg2) == ints([1, 0, 1], 1)
    assert encode(neg2.order.element(-2), neg2) == ints([0, 1], 1)
    assert encode(neg2.order.element(85), neg2).degree == 6
    assert encode(neg2.order.zero(), neg2).is_zero()
    assert encode(bal3.order.element(2), bal3) == ints([-1, 1], 2)
    mu4 = get_binding("mu4")
    assert encode_text("1+2*w", mu4) == DigitString(4, (None, 0))


def test_encode_without_expansion():
    pseudo = pseudo_binding()
    with pytest.raises(NonTerminating):
        encode(pseudo.order.element(5), pseudo)
    binary = binary_binding()
    with pytest.raises(NonTerminating):
        encode(binary.order.element(-1), binary)
    neg2 = get_binding("neg2")
    with pytest.raises(NonTerminating):
        encode(neg2.order.element(85), neg2, cap=3)


def test_hold_identity_of_catalog():
    for bind in catalog():
        assert check_hold_identity(bind) == []
    assert check_hold_identity(pseudo_binding()) == []


@pytest.mark.parametrize("count", [40, pytest.param(1000, marks=pytest.mark.slow)])
def test_round_trip(count: int):
    for bind in catalog():
        max_degree = {1: 10, 2: 8}.get(bind.n, 5)
        for s in random_strings(bind.n, count, max_degree, seed=bind.n + count):
            value = eval_sigma(s, bind)
            assert encode(value, bind) == s
            assert encode_text(str(value), bind) == s, bind.name
            assert decode(str(s), bind) == value


def test_decode():
    neg2 = get_binding("neg2")
    assert decode("1,0,1", neg2) == neg2.order.element(5)
    assert decode("", neg2).is_zero()
    f2 = get_binding("f2")
    assert str(decode("1,1", f2)) == "1+X"
    assert encode_text("1", f2) == ints([1], 1)
    assert encode_text("X", f2) == ints([0, 1], 1)
    f4 = get_binding("f4")
    assert str(decode("w^1,w^0", f4)) == "2+X"
    with pytest.raises(ValueError):
        encode_text("1+2*w", f2)
    with pytest.raises(ValueError):
        encode_text("2", f2)


def test_derive_binding():
    for name in ("gaussian", "sqrt-11", "one-plus-sqrt-2", "mu6"):
        bind = get_binding(name)
        derived = derive_binding(bind.order, bind.x, bind.n, bind.root, name)
        assert derived.system.hold == bind.system.hold
        derived.check()
    integers = OrderSpec.integers()
    with pytest.raises(InvalidSystem):
        # two digits cannot cover the residues modulo 5
        derive_binding(integers, integers.element(5), 1, integers.one(), "base5")


def test_binding_checks():
    integers = OrderSpec.integers()
    wrong = SystemBinding(
        NumberSystem.from_holds("wrong", 1, {0: ints([0, 0, 1], 1)}), integers, integers.element(-2), integers.one()
    )
    with pytest.raises(InvalidSystem):
        wrong.check()
    five = SystemBinding(get_binding("neg2").system, integers, integers.element(5), integers.one())
    with pytest.raises(InvalidSystem):
        five.check()


def test_binding_json():
    for bind in catalog():
        if not bind.is_quadratic():
            continue
        loaded = binding_from_json(binding_to_json(bind))
        assert loaded.system == bind.system
        assert loaded.x == bind.x
        assert loaded.root == bind.root
    record = binding_to_json(get_binding("bal3"))
    del record["realization"]
    with pytest.raises(InvalidSystem):
        binding_from_json(record)
