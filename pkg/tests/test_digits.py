import logging

import pytest
from t_helpers import ints

from holdring.actions.catalog import get_binding
from holdring.actions.digits import (
    MINUS_INFINITY,
    Digit,
    DigitString,
    alphabet,
    digit_from_json,
    digit_mul,
    digit_to_json,
    format_digits,
    parse_digit,
    parse_digits,
    scale_string,
)
from holdring.actions.helpers import InvalidSystem
from holdring.actions.system import (
    NumberSystem,
    extend_by_root,
    hold_pair,
    system_from_json,
    system_to_json,
    twist,
)

logger = logging.getLogger(__name__)


def test_digit_mul():
    assert digit_mul(Digit(4, 1), Digit(4, 1)) == Digit(4, 2)
    assert digit_mul(Digit.zero(3), Digit(3, 1)).is_zero()
    assert Digit(3, 1) * Digit(3, 2) == Digit.one(3)
    assert Digit(6, 5).inverse() == Digit(6, 1)
    assert Digit.minus_one(2) == Digit(2, 1)
    with pytest.raises(ValueError):
        Digit.minus_one(3)
    with pytest.raises(ValueError):
        digit_mul(Digit(2, 1), Digit(3, 1))
    assert len(alphabet(4)) == 5
    assert alphabet(4)[0].is_zero()


def test_digit_strings():
    s = DigitString(2, (0, None, 1, None, None))
    assert len(s) == 3
    assert s.degree == 2
    assert s[7].is_zero()
    assert DigitString.empty(5).degree == MINUS_INFINITY
    assert s.shift(2).exponents == (None, None, 0, None, 1)
    assert s.shift(-1).exponents == (None, 1)
    assert s.truncate(2).exponents == (0,)
    assert s.truncate(0).is_zero()
    assert list(s.nonzero()) == [(0, 0), (2, 1)]
    assert s.to_ints() == [1, 0, -1]


def test_text_syntax():
    assert parse_digits("1,0,-1", 2) == DigitString(2, (0, None, 1))
    assert format_digits(parse_digits("1,0,-1", 2)) == "1,0,-1"
    assert parse_digits("w^2, 0, 1", 3).exponents == (2, None, 0)
    assert format_digits(parse_digits("w^2,0,w", 3)) == "w^2,0,w^1"
    assert format_digits(parse_digits("1,w,0,w^0", 3)) == "w^0,w^1,0,w^0"
    assert str(Digit.one(4)) == "w^0"
    assert str(Digit.one(2)) == "1"
    assert [digit_to_json(d) for d in parse_digits("1,0,w^3", 6)] == ["w^0", "0", "w^3"]
    assert [digit_to_json(d) for d in parse_digits("1,0,-1", 2)] == [1, 0, -1]
    assert digit_from_json("w^0", 3) == Digit.one(3)
    assert parse_digits("1,0,0", 1) == ints([1], 1)
    assert parse_digits("", 4).is_zero()
    assert format_digits(DigitString.empty(1)) == ""
    assert parse_digit("w^7", 6) == Digit(6, 1)
    with pytest.raises(ValueError):
        parse_digit("2", 1)
    with pytest.raises(ValueError):
        parse_digits("1,-1", 1)
    with pytest.raises(ValueError):
        parse_digit("w^x", 3)


def test_scale_string():
    assert scale_string(Digit.zero(3), parse_digits("1,w", 3)).is_zero()
    assert scale_string(Digit.minus_one(2), ints([-1, 1], 2)) == ints([1, -1], 2)
    assert scale_string(Digit(3, 1), parse_digits("w^2,1", 3)) == parse_digits("1,w", 3)


def test_hold_pair():
    bal3 = get_binding("bal3").system
    neg2 = get_binding("neg2").system

    low, carry = hold_pair(Digit.one(2), Digit.one(2), bal3)
    assert low == Digit.minus_one(2)
    assert carry == ints([1], 2)

    low, carry = hold_pair(Digit.one(1), Digit.one(1), neg2)
    assert low.is_zero()
    assert carry == ints([1, 1], 1)

    for eta in alphabet(2):
        low, carry = hold_pair(Digit.zero(2), eta, bal3)
        assert low == eta
        assert carry.is_zero()

    low, carry = hold_pair(Digit.one(2), Digit.minus_one(2), bal3)
    assert low.is_zero()
    assert carry.is_zero()

    mu6 = get_binding("mu6").system
    for xi in alphabet(6):
        for eta in alphabet(6):
            assert hold_pair(xi, eta, mu6) == hold_pair(eta, xi, mu6)


def test_system_checks():
    with pytest.raises(InvalidSystem):
        # n+1 = 6
        NumberSystem.from_holds("six", 5, {k: parse_digits("1", 5) for k in range(5)}).check()
    with pytest.raises(InvalidSystem):
        NumberSystem.from_holds("minus", 2, {0: ints([-1, 1], 2), 1: ints([1], 2)}).check()
    with pytest.raises(InvalidSystem):
        NumberSystem.from_holds("constant", 2, {0: ints([1, 1], 2), 1: ints([], 2)}).check()
    with pytest.raises(InvalidSystem):
        NumberSystem.bare("bare", 1).check()
    with pytest.raises(InvalidSystem):
        NumberSystem.from_holds("mixed", 2, {0: ints([0, 1, 1], 1)})
    get_binding("mu4").system.check()


def test_twist_and_extend_by_root():
    bal3 = get_binding("bal3").system
    neg2 = get_binding("neg2").system

    assert extend_by_root(bal3, 1) == bal3

    # X^2 = -3 over the balanced ternary digits
    root_of_minus_3 = extend_by_root(bal3, 2, twist_by=Digit.minus_one(2))
    assert root_of_minus_3.hold == get_binding("sqrt-3").system.hold
    assert abs(root_of_minus_3.embedding - 3**0.5 * 1j) < 1e-12
    root_of_minus_3.check()

    root_of_minus_2 = extend_by_root(neg2, 2)
    assert root_of_minus_2.hold == get_binding("sqrt-2").system.hold
    assert abs(root_of_minus_2.embedding - 2**0.5 * 1j) < 1e-12

    twisted = twist(bal3, Digit.minus_one(2))
    assert twisted.hold[0] == ints([-1, -1], 2)
    assert twisted.hold[1].is_zero()
    with pytest.raises(ValueError):
        twist(bal3, Digit.zero(2))


def test_system_json():
    for name in ("neg2", "bal3", "mu4"):
        sys = get_binding(name).system
        record = system_to_json(sys)
        assert system_from_json(record) == sys
    with pytest.raises(InvalidSystem):
        system_from_json({"name": "broken", "n": 2})
    record = system_to_json(get_binding("mu6").system)
    assert record["hold"]["0"] == ["w^2", "w^0"]
    assert "1" not in {token for tokens in record["hold"].values() for token in tokens}
