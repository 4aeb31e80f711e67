"""Arithmetic in the finite rings R_m = R / X^m and the additive structure of R_m."""

from __future__ import annotations

import itertools
import logging
import multiprocessing.pool
from collections import Counter
from dataclasses import dataclass
from time import perf_counter
from typing import Dict, Iterator, List, Sequence

from tqdm import tqdm

from .carry import add_mod, mul_mod, sum_mod
from .digits import Digit, DigitString, alphabet, scale_string
from .helpers import TooLarge, count_str, prime_power, timespan_str
from .system import NumberSystem

logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 10**6


@dataclass(frozen=True, eq=False)
class TruncatedElement:
    """A class of R_m.  Two elements are equal when their digits, m and hold tables agree."""

    digits: DigitString
    m: int
    system: NumberSystem

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"Truncation length must be positive, got {self.m}.")
        object.__setattr__(self, "digits", self.digits.truncate(self.m))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedElement):
            return NotImplemented
        return self.digits == other.digits and self.m == other.m and self.system.same_arithmetic(other.system)

    def __hash__(self) -> int:
        return hash((self.digits, self.m, self.system.n, self.system.hold))

    @staticmethod
    def of(digits: DigitString, m: int, system: NumberSystem) -> TruncatedElement:
        return TruncatedElement(digits, m, system)

    @staticmethod
    def zero(m: int, system: NumberSystem) -> TruncatedElement:
        return TruncatedElement(DigitString.empty(system.n), m, system)

    def is_zero(self) -> bool:
        return self.digits.is_zero()

    def padded(self) -> List[Digit]:
        return self.digits.padded(self.m)

    def __add__(self, other: TruncatedElement) -> TruncatedElement:
        return trunc_add(self, other)

    def __neg__(self) -> TruncatedElement:
        return trunc_neg(self)

    def __mul__(self, other: TruncatedElement) -> TruncatedElement:
        return trunc_mul(self, other)

    def __str__(self) -> str:
        return ",".join(str(d) for d in self.padded())


def _same_ring(a: TruncatedElement, b: TruncatedElement):
    if a.m != b.m or not a.system.same_arithmetic(b.system):
        raise ValueError(f"Elements of R_{a.m} ({a.system.name}) and R_{b.m} ({b.system.name}) cannot be combined.")


def trunc_add(a: TruncatedElement, b: TruncatedElement, faithful: bool = False) -> TruncatedElement:
    _same_ring(a, b)
    return TruncatedElement(add_mod(a.digits, b.digits, a.m, a.system, faithful=faithful), a.m, a.system)


def trunc_mul(a: TruncatedElement, b: TruncatedElement) -> TruncatedElement:
    _same_ring(a, b)
    return TruncatedElement(mul_mod(a.digits, b.digits, a.m, a.system), a.m, a.system)


def negate_by_search(a: TruncatedElement) -> TruncatedElement:
    """Choose the digits of w one position at a time so that a + w vanishes up to that position."""
    sys = a.system
    chosen: List[Digit] = []
    for k in range(a.m):
        for alpha in alphabet(sys.n):
            candidate = DigitString.of(chosen + [alpha], sys.n)
            if add_mod(a.digits, candidate, k + 1, sys).is_zero():
                chosen.append(alpha)
                break
        else:
            raise ValueError(f"No digit cancels position {k} of {a} in system '{sys.name}'.")
    return TruncatedElement(DigitString.of(chosen, sys.n), a.m, sys)


def trunc_neg(a: TruncatedElement) -> TruncatedElement:
    if a.system.n % 2 == 0:
        return TruncatedElement(scale_string(Digit.minus_one(a.system.n), a.digits), a.m, a.system)
    return negate_by_search(a)


def scalar_multiple(k: int, a: TruncatedElement) -> TruncatedElement:
    return TruncatedElement(sum_mod([a.digits] * k, a.m, a.system), a.m, a.system)


def additive_order(a: TruncatedElement) -> int:
    k = 1
    acc = a
    while not acc.is_zero():
        acc = trunc_add(acc, a)
        k += 1
    return k


def project(a: TruncatedElement, m: int) -> TruncatedElement:
    """R_{a.m} -> R_m for m <= a.m."""
    if m > a.m:
        raise ValueError(f"Cannot project R_{a.m} onto R_{m}; use lift().")
    return TruncatedElement(a.digits, m, a.system)


def lift(a: TruncatedElement, m: int) -> TruncatedElement:
    """The element of R_m (m >= a.m) with the same digits."""
    if m < a.m:
        raise ValueError(f"Cannot lift R_{a.m} into R_{m}; use project().")
    return TruncatedElement(a.digits, m, a.system)


def ring_size(sys: NumberSystem, m: int) -> int:
    return (sys.n + 1) ** m


def elements(sys: NumberSystem, m: int, prefix: Sequence[Digit] = ()) -> Iterator[TruncatedElement]:
    """Every element of R_m whose top digits are 'prefix' (given from the top down)."""
    size = ring_size(sys, m)
    if size > ENUMERATION_LIMIT:
        raise TooLarge(
            f"R_{m} of system '{sys.name}' has {count_str(size)} elements, above the limit of"
            f" {count_str(ENUMERATION_LIMIT)}."
        )
    free = m - len(prefix)
    top = list(reversed(prefix))
    for low in itertools.product(alphabet(sys.n), repeat=free):
        yield TruncatedElement(DigitString.of(list(low) + top, sys.n), m, sys)


@dataclass
class StructureReport:
    system: str
    m: int
    size: int
    characteristic: int
    histogram: Dict[int, int]

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "m": self.m,
            "size": self.size,
            "characteristic": self.characteristic,
            "histogram": {str(order): count for order, count in sorted(self.histogram.items())},
        }


class OrderTable:
    """Additive orders in R_m.  Every order is a power of p (R_m is a module over Z_p), so the
    order of x is p^depth(x) where depth counts applications of multiplication by p until zero;
    depths are memoized."""

    def __init__(self, sys: NumberSystem, m: int):
        power = prime_power(sys.n + 1)
        if power is None:
            raise ValueError(f"System '{sys.name}': n+1 = {sys.n + 1} is not a prime power.")
        self.p = power[0]
        self.sys = sys
        self.m = m
        self.depth: Dict[DigitString, int] = {DigitString.empty(sys.n): 0}

    def order_of(self, digits: DigitString) -> int:
        path = []
        current = digits
        while current not in self.depth:
            path.append(current)
            current = sum_mod([current] * self.p, self.m, self.sys)
        depth = self.depth[current]
        for s in reversed(path):
            depth += 1
            self.depth[s] = depth
        return self.p ** self.depth[digits]

    def histogram(self, prefix: Sequence[Digit] = ()) -> Counter:
        counts: Counter = Counter()
        for element in elements(self.sys, self.m, prefix):
            counts[self.order_of(element.digits)] += 1
        return counts


def structure_probe(sys: NumberSystem, m: int, n_parallel: int = 1, progress: bool = True) -> StructureReport:
    """Exhaustive additive-order histogram and characteristic of R_m."""
    size = ring_size(sys, m)
    if size > ENUMERATION_LIMIT:
        raise TooLarge(
            f"R_{m} of system '{sys.name}' has {count_str(size)} elements, above the limit of"
            f" {count_str(ENUMERATION_LIMIT)}."
        )
    logger.info(f"Probing R_{m} of system '{sys.name}' ({count_str(size)} elements)...")
    started = perf_counter()
    prefixes = [[d] for d in alphabet(sys.n)]
    histogram: Counter = Counter()
    with tqdm(total=len(prefixes), disable=not progress) as bar:
        if n_parallel > 1:
            # Separate tables per task; the memo tables are not shared.
            pool = multiprocessing.pool.ThreadPool(n_parallel)
            try:
                pending = [
                    pool.apply_async(OrderTable(sys, m).histogram, (prefix,)) for prefix in prefixes
                ]
                for async_pending in pending:
                    histogram.update(async_pending.get())
                    bar.update(1)
            finally:
                pool.close()
                pool.join()
        else:
            orders = OrderTable(sys, m)
            for prefix in prefixes:
                histogram.update(orders.histogram(prefix))
                bar.update(1)
    characteristic = OrderTable(sys, m).order_of(DigitString.from_ints([1], sys.n))
    logger.debug(f"Structure of R_{m} finished in {timespan_str(perf_counter() - started)}.")
    return StructureReport(sys.name, m, size, characteristic, dict(histogram))


def cyclic_signature(p: int, exponents: Sequence[int]) -> Dict[int, int]:
    """Additive-order histogram of the direct sum of Z/p^e over the given exponents."""
    top = max(exponents, default=0)
    killed = [1]
    for k in range(1, top + 1):
        count = 1
        for e in exponents:
            count *= p ** min(e, k)
        killed.append(count)
    return {p**k: killed[k] - (killed[k - 1] if k else 0) for k in range(top + 1)}
