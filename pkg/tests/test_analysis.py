import logging
import math
from fractions import Fraction

import pytest
from t_helpers import ints

from holdring.actions.analysis import (
    INVALID,
    VALID,
    absorbing_witnesses,
    attractor_test,
    check_bounds,
    contraction_radii,
    cumulative_range,
    degree_bound,
    degree_range,
    degree_table,
    growth_of_plus_one,
    j_bound,
    j_by_recurrence,
    negabinary_values,
    plus_one_growth,
    search_quadratic,
)
from holdring.actions.catalog import binary_binding, catalog, get_binding, pseudo_binding
from holdring.actions.embed import encode
from holdring.actions.helpers import InvalidSystem, TooLarge

logger = logging.getLogger(__name__)

TABLE_ROWS = [(0, 0, 1), (1, -2, -1), (2, 2, 5), (3, -10, -3), (4, 6, 21), (5, -42, -11), (6, 22, 85)]


def test_attractor_verdicts():
    report = attractor_test(get_binding("neg2"), 100, progress=False)
    assert report.verdict == VALID
    assert report.consistency
    assert report.witness_failures == []

    report = attractor_test(binary_binding(), 20, progress=False)
    assert report.verdict == INVALID
    assert ["-1"] in report.attractor_cycles
    assert "-1" in report.witness_failures

    report = attractor_test(pseudo_binding(), 10, progress=False)
    assert report.verdict == INVALID
    assert report.consistency
    assert "5" in report.witness_failures
    assert ["2+1*w"] in report.attractor_cycles
    assert report.summary().startswith("pseudo: invalid")

    with pytest.raises(InvalidSystem):
        attractor_test(get_binding("f3"), 5, progress=False)
    with pytest.raises(ValueError):
        attractor_test(get_binding("neg2"), 0, progress=False)
    with pytest.raises(TooLarge):
        attractor_test(get_binding("gaussian"), 5000, progress=False)


def test_catalog_systems_are_valid():
    for bind in catalog():
        if not bind.is_quadratic():
            continue
        report = attractor_test(bind, 8, progress=False)
        assert report.verdict == VALID, report.summary()


def test_absorbing_region():
    neg2 = get_binding("neg2")
    assert contraction_radii(neg2)[0] == pytest.approx(1.0)
    assert absorbing_witnesses(neg2) == [neg2.order.element(v) for v in (-1, 0, 1)]
    gaussian = get_binding("gaussian")
    points = absorbing_witnesses(gaussian)
    assert gaussian.order.zero() in points
    radius = contraction_radii(gaussian)[0]
    assert all(abs(z.complex()) <= radius for z in points)


def _summary(results):
    return [(r.field_key, r.order.t if r.order.rank == 2 else r.x.a) for r in results]


def test_search_one_digit():
    results = search_quadratic(1, bound=8, progress=False)
    # Q(sqrt(-7)): (-1+sqrt(-7))/2, Q(sqrt(-2)): sqrt(-2), Q(i): -1+i, Q: -2
    assert _summary(results) == [(-7, -1), (-2, 0), (-1, -2), (1, -2)]
    assert results[2].x.complex() == pytest.approx(-1 + 1j)
    assert str(results[0].binding.system.hold[0]) == "0,1,0,1"


def test_search_two_digits():
    results = search_quadratic(2, bound=8, progress=False)
    # Q(sqrt(-11)): (1+sqrt(-11))/2, Q(sqrt(-3)): sqrt(-3), Q(sqrt(-2)): 1+sqrt(-2), Q: 3
    assert _summary(results) == [(-11, 1), (-3, 0), (-2, 2), (1, 3)]
    everything = search_quadratic(2, bound=8, canonical=False, progress=False)
    assert not any(r.order.rank == 2 and abs(r.order.t) == 3 for r in everything)
    assert len(everything) >= len(results)
    assert all(r.to_json()["field"] for r in everything)


def test_j_values():
    assert [j_by_recurrence(n) for n in range(9)] == [0, 0, 1, -2, 5, -10, 21, -42, 85]
    for n in range(40):
        assert j_bound(n) == Fraction(j_by_recurrence(n))
    assert cumulative_range(4) == (-10, 21)


def test_degree_table():
    assert degree_table(6) == TABLE_ROWS
    for d in range(12):
        assert degree_range(d) == degree_table(11)[d][1:]
    assert negabinary_values(3).size == 16
    with pytest.raises(TooLarge):
        negabinary_values(30)


def test_degree_bound():
    neg2 = get_binding("neg2")
    assert encode(neg2.order.element(85), neg2).degree == 6
    assert degree_bound(85) == pytest.approx(math.log2(257) + 1)
    assert encode(neg2.order.element(1), neg2).degree == 0

    report = check_bounds(10**3, 10)
    assert report.passed
    assert report.checked == 2000
    assert report.violations == []
    assert report.cumulative[4][:3] == (4, -10, 21)
    assert report.to_json()["passed"]


def test_plus_one_examples():
    sqrt11 = get_binding("sqrt-11")
    result, growth = growth_of_plus_one(ints([1], 2), sqrt11)
    assert result == ints([-1, 1, -1], 2)
    assert growth == 2
    result, growth = growth_of_plus_one(ints([-1], 2), sqrt11)
    assert result.is_zero()
    assert growth == float("-inf")
    _, growth = growth_of_plus_one(ints([1], 2), get_binding("one-plus-sqrt-2"))
    assert growth == 3


@pytest.mark.parametrize("name,limit", [("sqrt-11", 2), ("one-plus-sqrt-2", 3), ("neg2", 2)])
def test_plus_one_growth(name: str, limit: int):
    report = plus_one_growth(get_binding(name), 400, 12, seed=2, limit=limit)
    assert report.trials == 400
    assert report.max_growth <= limit
    assert report.bound_violations == []
    assert report.side_violations == []
    assert sum(report.growth_counts.values()) == 400


@pytest.mark.slow
@pytest.mark.parametrize(
    "n,expected",
    [(1, [(-7, -1), (-2, 0), (-1, -2), (1, -2)]), (2, [(-11, 1), (-3, 0), (-2, 2), (1, 3)])],
)
def test_search_at_full_bound(n: int, expected):
    results = search_quadratic(n, bound=60, progress=False)
    assert _summary(results) == expected
    for result in results:
        assert attractor_test(result.binding, 6, progress=False).verdict == VALID


@pytest.mark.slow
@pytest.mark.parametrize("name,limit", [("sqrt-11", 2), ("one-plus-sqrt-2", 3)])
def test_plus_one_growth_full(name: str, limit: int):
    report = plus_one_growth(get_binding(name), 10**4, 12, seed=7, limit=limit)
    assert report.max_growth <= limit
    assert report.bound_violations == []
    assert report.side_violations == []
    assert sum(report.growth_counts.values()) == 10**4


@pytest.mark.slow
def test_degree_bound_full():
    report = check_bounds(10**4, 12)
    assert report.passed
    assert report.checked == 20000
    assert report.violations == []
    assert [row[:3] for row in report.cumulative] == [(d, *cumulative_range(d)) for d in range(13)]
    assert all(exact for *_, exact in report.cumulative)


@pytest.mark.slow
def test_verdicts_do_not_change_with_bound():
    bindings = [bind for bind in catalog() if bind.is_quadratic()] + [binary_binding(), pseudo_binding()]
    for bind in bindings:
        verdicts = {attractor_test(bind, bound, progress=False).verdict for bound in (6, 12, 24)}
        assert len(verdicts) == 1, bind.name
        expected = INVALID if bind.name in ("binary", "pseudo") else VALID
        assert verdicts == {expected}, bind.name
