"""Validation of bindings by finite-attractor iteration, the search for quadratic generators and
the negabinary degree tables and bounds."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from time import perf_counter
from typing import Dict, List, Optional, Set, Tuple

import numpy as np
from tqdm import tqdm

from .carry import add
from .catalog import get_binding
from .digits import DigitString, alphabet
from .embed import SystemBinding, check_hold_identity, derive_binding, encode, encode_cap, tau
from .helpers import InvalidSystem, NoResidueDigit, TooLarge, count_str, timespan_str
from .quotients import ENUMERATION_LIMIT
from .ring import OrderSpec, QuadraticInt, format_element
from .system import NumberSystem

logger = logging.getLogger(__name__)

VALID = "valid"
INVALID = "invalid"
INCONCLUSIVE = "inconclusive"

# Slack on the absorbing radius so that float rounding never drops a lattice point.
RADIUS_TOLERANCE = 1e-9


@dataclass
class ValidationReport:
    system: str
    consistency: bool
    witness_failures: List[str] = field(default_factory=list)
    attractor_cycles: List[List[str]] = field(default_factory=list)
    verdict: str = INCONCLUSIVE
    witnesses: int = 0
    hold_failures: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "consistency": self.consistency,
            "hold_failures": self.hold_failures,
            "witness_failures": self.witness_failures,
            "attractor_cycles": self.attractor_cycles,
            "witnesses": self.witnesses,
            "verdict": self.verdict,
        }

    def summary(self) -> str:
        lines = [f"{self.system}: {self.verdict} ({count_str(self.witnesses)} witnesses)"]
        if not self.consistency:
            lines.append(f"\thold identity fails for: {', '.join(self.hold_failures)}")
        for failure in self.witness_failures[:10]:
            lines.append(f"\tno expansion: {failure}")
        for cycle in self.attractor_cycles[:10]:
            lines.append(f"\tcycle: {' -> '.join(cycle)}")
        return "\n".join(lines)


def _require_order(bind: SystemBinding) -> OrderSpec:
    if not isinstance(bind.order, OrderSpec):
        raise InvalidSystem(f"System '{bind.name}' is realized in {bind.order}, not in a quadratic order.")
    return bind.order


def contraction_radii(bind: SystemBinding) -> Optional[Tuple[float, ...]]:
    """Per embedding, D / (|X| - 1) with D the largest digit modulus; None unless |X| > 1 everywhere."""
    x_values = bind.x.embeddings()
    if any(abs(v) <= 1.0 for v in x_values):
        return None
    digit_values = [bind.iota(alpha).embeddings() for alpha in alphabet(bind.n)]
    radii = []
    for i, xv in enumerate(x_values):
        largest = max(abs(values[i]) for values in digit_values)
        radii.append(largest / (abs(xv) - 1.0) + RADIUS_TOLERANCE)
    return tuple(radii)


def absorbing_witnesses(bind: SystemBinding) -> List[QuadraticInt]:
    """Lattice points inside the absorbing region of z -> (z - digit) / X.  Every cycle of the
    iteration lies in this region and every orbit enters it."""
    order = _require_order(bind)
    radii = contraction_radii(bind)
    if radii is None:
        return []
    if order.rank == 1:
        r = int(math.floor(radii[0]))
        return [order.element(a) for a in range(-r, r + 1)]
    w1, w2 = order.omega_embeddings
    b_max = int(math.ceil((radii[0] + radii[1]) / abs(w1 - w2)))
    points = []
    for b in range(-b_max, b_max + 1):
        centre = -b * w1.real
        for a in range(int(math.floor(centre - radii[0])), int(math.ceil(centre + radii[0])) + 1):
            z = order.element(a, b)
            if all(abs(v) <= r for v, r in zip(z.embeddings(), radii)):
                points.append(z)
    return points


def box_witnesses(order: OrderSpec, bound: int) -> List[QuadraticInt]:
    if order.rank == 1:
        return [order.element(a) for a in range(-bound, bound + 1)]
    return [order.element(a, b) for b in range(-bound, bound + 1) for a in range(-bound, bound + 1)]


def digits_incongruent(bind: SystemBinding) -> bool:
    values = [bind.iota(alpha) for alpha in alphabet(bind.n)]
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if (values[i] - values[j]).divisible_by(bind.x):
                return False
    return True


def attractor_test(bind: SystemBinding, bound: int, progress: bool = True) -> ValidationReport:
    """Iterate z -> (z - digit(z)) / X from every witness; valid iff all orbits reach 0."""
    order = _require_order(bind)
    if bound < 1:
        raise ValueError(f"Witness bound must be at least 1, got {bound}.")
    box_size = (2 * bound + 1) ** order.rank
    if box_size > ENUMERATION_LIMIT:
        raise TooLarge(f"A witness box of {count_str(box_size)} points exceeds {count_str(ENUMERATION_LIMIT)}.")
    hold_failures = [] if bind.system.is_bare() else [str(xi) for xi in check_hold_identity(bind)]
    report = ValidationReport(bind.name, consistency=not hold_failures, hold_failures=hold_failures)

    if order.residue_count(bind.x) != bind.n + 1 or not digits_incongruent(bind):
        report.witness_failures.append(
            f"digits do not form a residue system modulo X (|N(X)| = {order.residue_count(bind.x)})"
        )
        report.verdict = INVALID
        return report

    witnesses = box_witnesses(order, bound)
    absorbing = absorbing_witnesses(bind)
    witnesses += absorbing
    report.witnesses = len(witnesses)
    logger.debug(f"{bind.name}: {len(absorbing)} absorbing witnesses, {box_size} box witnesses.")

    good: Set[QuadraticInt] = {order.zero()}
    bad: Set[QuadraticInt] = set()
    undecided = 0
    started = perf_counter()
    for z in tqdm(witnesses, disable=not progress, desc=bind.name):
        if z in good:
            continue
        if z in bad:
            report.witness_failures.append(format_element(z))
            continue
        path: List[QuadraticInt] = []
        on_path: Dict[QuadraticInt, int] = {}
        current = z
        steps = encode_cap(z, bind) + len(absorbing)
        outcome: Optional[bool] = None
        while outcome is None:
            if current in good:
                outcome = True
            elif current in bad:
                outcome = False
            elif current in on_path:
                cycle = path[on_path[current] :]
                report.attractor_cycles.append([format_element(c) for c in cycle])
                logger.debug(f"{bind.name}: cycle of length {len(cycle)} through {format_element(current)}.")
                outcome = False
            elif len(path) >= steps:
                undecided += 1
                break
            else:
                on_path[current] = len(path)
                path.append(current)
                try:
                    _, current = tau(current, bind)
                except NoResidueDigit:
                    outcome = False
        if outcome is True:
            good.update(path)
        elif outcome is False:
            bad.update(path)
            report.witness_failures.append(format_element(z))
    logger.debug(
        f"{bind.name}: {count_str(len(good))} elements reach 0, {count_str(len(bad))} do not"
        f" ({timespan_str(perf_counter() - started)})."
    )

    if report.attractor_cycles or report.witness_failures or not report.consistency:
        report.verdict = INVALID
    elif undecided or contraction_radii(bind) is None:
        report.verdict = INCONCLUSIVE
    else:
        report.verdict = VALID
    return report


@dataclass
class SearchResult:
    binding: SystemBinding

    @property
    def order(self) -> OrderSpec:
        return self.binding.order

    @property
    def x(self) -> QuadraticInt:
        return self.binding.x

    @property
    def field_key(self) -> int:
        return self.order.field_key

    @property
    def hold_degree(self) -> int:
        return max(len(h) - 1 for h in self.binding.system.hold if h is not None)

    def field_name(self) -> str:
        return "Q" if self.field_key == 1 else f"Q(sqrt({self.field_key}))"

    def describe(self) -> str:
        value = self.x.complex()
        return (
            f"{self.field_name():<14} X = {format_element(self.x):<6} in {self.order}"
            f"  ({value.real:+.4f}{value.imag:+.4f}i)  hold(1) = [{self.binding.system.hold[0]}]"
        )

    def to_json(self) -> dict:
        value = self.x.complex()
        return {
            "field": self.field_name(),
            "order": {"t": self.order.t, "c": self.order.c, "rank": self.order.rank},
            "x": [self.x.a, self.x.b],
            "x_complex": [value.real, value.imag],
            "hold": {str(k): str(h) for k, h in enumerate(self.binding.system.hold)},
        }


def quadratic_candidates(n: int) -> List[Tuple[OrderSpec, QuadraticInt, QuadraticInt]]:
    """(order, X, root of unity) for X a root of x^2 - b x + (n+1) with negative discriminant,
    plus the rational generators +-(n+1)."""
    if n not in (1, 2):
        raise ValueError(f"The quadratic search covers n = 1 and n = 2 only, got {n}.")
    c = n + 1
    root = -1 if n == 2 else 1
    candidates = []
    b_max = math.isqrt(4 * c - 1)
    for b in range(-b_max, b_max + 1):
        order = OrderSpec(b, c, 2, f"Z[w], w^2 = {b}*w - {c}")
        candidates.append((order, order.omega(), order.element(root)))
    integers = OrderSpec.integers()
    for sign in (-1, 1):
        candidates.append((integers, integers.element(sign * c), integers.element(root)))
    return candidates


def search_quadratic(
    n: int, bound: int = 60, canonical: bool = True, progress: bool = True
) -> List[SearchResult]:
    """Generators of quadratic orders (and of Z) for digits mu_{n,+}, validated by attractor_test.
    With canonical=True one generator is kept per field: Im X >= 0, the shortest hold, then the
    largest real part."""
    started = perf_counter()
    validated: List[SearchResult] = []
    candidates = quadratic_candidates(n)
    logger.info(f"Testing {len(candidates)} candidate generators for n={n} at witness bound {bound}...")
    for order, x, root in candidates:
        name = f"X={format_element(x)} in {order}"
        bare = SystemBinding(NumberSystem.bare(name, n, x.complex()), order, x, root)
        report = attractor_test(bare, bound, progress=progress)
        logger.info(f"\t{name}: {report.verdict}")
        if report.verdict != VALID:
            continue
        validated.append(SearchResult(derive_binding(order, x, n, root, name)))
    logger.info(f"Search finished in {timespan_str(perf_counter() - started)}.")
    if not canonical:
        return validated

    by_field: Dict[int, List[SearchResult]] = {}
    for result in validated:
        if result.x.complex().imag < -RADIUS_TOLERANCE:
            continue
        by_field.setdefault(result.field_key, []).append(result)
    chosen = []
    for key in sorted(by_field):
        ranked = sorted(by_field[key], key=lambda r: (r.hold_degree, -r.x.complex().real))
        chosen.append(ranked[0])
    return chosen


def j_bound(n: int) -> Fraction:
    """(1/3)(-2)^n - (1/2)(-1)^n + 1/6, exactly."""
    return Fraction((-2) ** n, 3) - Fraction((-1) ** n, 2) + Fraction(1, 6)


def j_by_recurrence(n: int) -> int:
    """j(0) = 0 and j(k+1) = -2 j(k) + [k odd]."""
    value = 0
    for k in range(n):
        value = -2 * value + (k % 2)
    return value


def cumulative_range(d: int) -> Tuple[int, int]:
    """Values of negabinary strings of degree <= d: the integers between j(d+1) and j(d+2)."""
    ends = (int(j_bound(d + 1)), int(j_bound(d + 2)))
    return min(ends), max(ends)


def degree_range(d: int) -> Tuple[int, int]:
    """Values of strings of degree exactly d (degree 0 includes the empty string)."""
    lo, hi = cumulative_range(d)
    if d == 0:
        return lo, hi
    prev_lo, prev_hi = cumulative_range(d - 1)
    if lo < prev_lo:
        return lo, prev_lo - 1
    return prev_hi + 1, hi


TABLE_DEGREE_LIMIT = 24


def negabinary_values(d: int) -> np.ndarray:
    """Values of all 2^(d+1) strings of degree <= d; index i spells the string with bits of i."""
    if d > TABLE_DEGREE_LIMIT:
        raise TooLarge(f"Enumerating degree {d} needs 2^{d + 1} strings; the limit is degree {TABLE_DEGREE_LIMIT}.")
    values = np.zeros(1, dtype=np.int64)
    for j in range(d + 1):
        values = np.concatenate([values, values + (-2) ** j])
    return values


def degree_table(d_max: int) -> List[Tuple[int, int, int]]:
    """(d, min, max) over the negabinary strings of degree exactly d, by exhaustive enumeration."""
    values = negabinary_values(d_max)
    rows = []
    for d in range(d_max + 1):
        segment = values[0:2] if d == 0 else values[2**d : 2 ** (d + 1)]
        rows.append((d, int(segment.min()), int(segment.max())))
    return rows


def degree_bound(z: int) -> float:
    return math.log2(3 * abs(z) + 2) + 1


@dataclass
class BoundsReport:
    z_max: int
    d_max: int
    checked: int = 0
    max_degree: int = 0
    violations: List[Tuple[int, int, float]] = field(default_factory=list)
    cumulative: List[Tuple[int, int, int, bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and all(ok for _, _, _, ok in self.cumulative)

    def to_json(self) -> dict:
        return {
            "z_max": self.z_max,
            "d_max": self.d_max,
            "checked": self.checked,
            "max_degree": self.max_degree,
            "violations": [list(v) for v in self.violations],
            "cumulative": [{"d": d, "min": lo, "max": hi, "exact": ok} for d, lo, hi, ok in self.cumulative],
            "passed": self.passed,
        }


def check_bounds(z_max: int, d_max: int = 12, bind: Optional[SystemBinding] = None) -> BoundsReport:
    """Degree bound log2(3|z|+2)+1 for 0 < |z| <= z_max, and the cumulative value sets of degree <= d
    against the interval between j(d+1) and j(d+2)."""
    if bind is None:
        bind = get_binding("neg2")
    order = _require_order(bind)
    report = BoundsReport(z_max, d_max)
    for z in range(-z_max, z_max + 1):
        if z == 0:
            continue
        degree = len(encode(order.element(z), bind)) - 1
        report.checked += 1
        report.max_degree = max(report.max_degree, degree)
        if degree > degree_bound(z):
            report.violations.append((z, degree, degree_bound(z)))
    values = negabinary_values(d_max)
    for d in range(d_max + 1):
        lo, hi = cumulative_range(d)
        found = np.unique(values[: 2 ** (d + 1)])
        exact = found.size == 2 ** (d + 1) and np.array_equal(found, np.arange(lo, hi + 1))
        report.cumulative.append((d, lo, hi, bool(exact)))
    return report


GROWTH_LIMITS = {"sqrt-11": 2, "one-plus-sqrt-2": 3}


@dataclass
class GrowthReport:
    system: str
    trials: int
    limit: Optional[int]
    max_growth: float = float("-inf")
    growth_counts: Dict[str, int] = field(default_factory=dict)
    bound_violations: List[str] = field(default_factory=list)
    side_violations: List[str] = field(default_factory=list)


def growth_of_plus_one(z: DigitString, bind: SystemBinding) -> Tuple[DigitString, float]:
    result = add(z, DigitString(z.n, (0,)), bind.system)
    return result, result.degree - z.degree


def plus_one_growth(
    bind: SystemBinding,
    trials: int,
    max_deg: int,
    seed: int = 0,
    limit: Optional[int] = None,
    side_condition: Optional[bool] = None,
) -> GrowthReport:
    """Degree growth of z -> z + 1 on random strings.  The side condition: if the digit of z+1 at
    position deg(z)+2 is non-Zero, the one at deg(z)+1 is Zero or of the opposite sign."""
    if limit is None:
        limit = GROWTH_LIMITS.get(bind.name)
    if side_condition is None:
        side_condition = bind.name == "sqrt-11"
    rng = np.random.default_rng(seed)
    report = GrowthReport(bind.name, trials, limit)
    n = bind.n
    for _ in range(trials):
        d = int(rng.integers(0, max_deg + 1))
        low = [None if v == 0 else int(v) - 1 for v in rng.integers(0, n + 1, size=d)]
        z = DigitString(n, tuple(low) + (int(rng.integers(1, n + 1)) - 1,))
        result, growth = growth_of_plus_one(z, bind)
        report.max_growth = max(report.max_growth, growth)
        key = str(growth if growth == float("-inf") else int(growth))
        report.growth_counts[key] = report.growth_counts.get(key, 0) + 1
        if limit is not None and growth > limit:
            report.bound_violations.append(str(z))
        if side_condition:
            top = result[d + 2]
            below = result[d + 1]
            if top and below and below.exponent == top.exponent:
                report.side_violations.append(str(z))
    return report
