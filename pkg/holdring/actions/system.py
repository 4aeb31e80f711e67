from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .digits import (
    Digit,
    DigitString,
    Exponent,
    digit_from_json,
    digit_to_json,
    scale_string,
)
from .helpers import InvalidSystem, is_prime_power

logger = logging.getLogger(__name__)

PairResult = Tuple[Exponent, DigitString]


@dataclass(frozen=True)
class NumberSystem:
    """A digit alphabet mu_{n,+} together with its hold: hold[k] is the digit string
    of w^k + 1.  A system built only to drive encoding may be bare (every hold None);
    check() insists on a complete hold.
    """

    name: str
    n: int
    hold: Tuple[Optional[DigitString], ...]
    embedding: Optional[complex] = field(default=None, compare=False)

    @staticmethod
    def from_holds(
        name: str, n: int, holds: Mapping[int, DigitString], embedding: Optional[complex] = None
    ) -> NumberSystem:
        table: List[Optional[DigitString]] = [None] * n
        for k, s in holds.items():
            if s.n != n:
                raise InvalidSystem(f"System '{name}': hold of w^{k} is over mu_{s.n}, expected mu_{n}.")
            table[k % n] = s
        return NumberSystem(name, n, tuple(table), embedding)

    @staticmethod
    def bare(name: str, n: int, embedding: Optional[complex] = None) -> NumberSystem:
        return NumberSystem(name, n, (None,) * n, embedding)

    @property
    def q(self) -> int:
        return self.n + 1

    def is_bare(self) -> bool:
        return any(h is None for h in self.hold)

    def same_arithmetic(self, other: NumberSystem) -> bool:
        """Same alphabet and hold, whatever the names."""
        return self.n == other.n and self.hold == other.hold

    def hold_of(self, xi: Digit) -> DigitString:
        if xi.exponent is None:
            raise ValueError("The hold is defined on mu_n only, not on Zero.")
        h = self.hold[xi.exponent]
        if h is None:
            raise InvalidSystem(f"System '{self.name}' has no hold defined for {xi}.")
        return h

    @cached_property
    def pair_table(self) -> Dict[Tuple[int, int], PairResult]:
        """H on pairs of roots, keyed by exponents."""
        table = {}
        for e1 in range(self.n):
            for e2 in range(self.n):
                eta = Digit(self.n, e2)
                s = scale_string(eta, self.hold_of(Digit(self.n, e1 - e2)))
                table[(e1, e2)] = (s.exponents[0] if s else None, s.shift(-1))
        return table

    def pair(self, e1: Exponent, e2: Exponent) -> PairResult:
        """hold_pair on exponent classes; the hot path of the carry algorithms."""
        if e1 is None:
            return e2, DigitString.empty(self.n)
        if e2 is None:
            return e1, DigitString.empty(self.n)
        return self.pair_table[(e1, e2)]

    def check(self):
        """Raise InvalidSystem unless the hold table is complete and well formed."""
        if self.n < 1:
            raise InvalidSystem(f"System '{self.name}': n must be positive, got {self.n}.")
        if not is_prime_power(self.q):
            raise InvalidSystem(
                f"System '{self.name}': n+1 = {self.q} is not a prime power, so R/X cannot be a finite field."
            )
        if self.is_bare():
            missing = [k for k, h in enumerate(self.hold) if h is None]
            raise InvalidSystem(f"System '{self.name}': hold undefined for exponents {missing}.")
        for k, h in enumerate(self.hold):
            is_minus_one = self.n % 2 == 0 and k == self.n // 2
            if is_minus_one and h:
                raise InvalidSystem(f"System '{self.name}': the hold of -1 must be empty, got [{h}].")
            if not h and not is_minus_one and not (self.n % 2 == 1 and k == 0):
                raise InvalidSystem(f"System '{self.name}': the hold of w^{k} is empty.")
        one = self.hold[0]
        if self.n == 1 and one and one.exponents[0] is not None:
            raise InvalidSystem(f"System '{self.name}': with n=1 the constant digit of hold(1) must be Zero.")
        if self.n == 2 and one and one.exponents[0] != 1:
            raise InvalidSystem(f"System '{self.name}': with n=2 the constant digit of hold(1) must be -1.")
        for (e1, e2), result in self.pair_table.items():
            if self.pair_table[(e2, e1)] != result:
                raise InvalidSystem(
                    f"System '{self.name}': the pair map is not symmetric at (w^{e1}, w^{e2}):\n"
                    f"\t{result}\n\tvs\n\t{self.pair_table[(e2, e1)]}"
                )
        logger.debug(f"System '{self.name}' passed its structural checks.")

    def describe(self) -> str:
        holds = "; ".join(f"{Digit(self.n, k)} -> [{h}]" for k, h in enumerate(self.hold) if h is not None)
        return f"{self.name} (n={self.n}): {holds}"


def hold_pair(xi: Digit, eta: Digit, sys: NumberSystem) -> Tuple[Digit, DigitString]:
    """H(xi, eta): the low digit and the carry of xi + eta."""
    if xi.n != sys.n or eta.n != sys.n:
        raise ValueError(f"Digits must belong to mu_{sys.n},+ of system '{sys.name}'.")
    low, carry = sys.pair(xi.exponent, eta.exponent)
    return Digit(sys.n, low), carry


def twist(sys: NumberSystem, zeta: Digit) -> NumberSystem:
    """The system of the generator zeta*X: the j-th hold digit is multiplied by zeta^-j."""
    if zeta.exponent is None or zeta.n != sys.n:
        raise ValueError(f"The twist must be a root of unity of mu_{sys.n}.")
    holds: Dict[int, DigitString] = {}
    for k, h in enumerate(sys.hold):
        if h is None:
            continue
        holds[k] = DigitString(
            sys.n, tuple(None if e is None else e - j * zeta.exponent for j, e in enumerate(h.exponents))
        )
    embedding = None if sys.embedding is None else zeta.complex() * sys.embedding
    return NumberSystem.from_holds(f"{sys.name}*{zeta}", sys.n, holds, embedding)


def extend_by_root(sys: NumberSystem, m: int, twist_by: Optional[Digit] = None) -> NumberSystem:
    """The system of Y with Y^m = X (or Y^m = zeta*X when twisted): position j moves to m*j."""
    if m < 1:
        raise ValueError(f"Root degree must be at least 1, got {m}.")
    base = sys if twist_by is None else twist(sys, twist_by)
    if m == 1:
        return base
    holds = {k: DigitString(sys.n, _spread(h.exponents, m)) for k, h in enumerate(base.hold) if h is not None}
    embedding = None if base.embedding is None else cmath.exp(cmath.log(base.embedding) / m)
    return NumberSystem.from_holds(f"{base.name}^(1/{m})", sys.n, holds, embedding)


def _spread(exps: Tuple[Exponent, ...], m: int) -> Tuple[Exponent, ...]:
    out: List[Exponent] = [None] * (m * (len(exps) - 1) + 1) if exps else []
    for j, e in enumerate(exps):
        out[m * j] = e
    return tuple(out)


def system_to_json(sys: NumberSystem) -> Dict[str, Any]:
    record: Dict[str, Any] = {"name": sys.name, "n": sys.n, "hold": {}}
    for k, h in enumerate(sys.hold):
        if h is not None:
            record["hold"][str(k)] = [digit_to_json(d) for d in h]
    if sys.embedding is not None:
        record["embedding"] = {"re": sys.embedding.real, "im": sys.embedding.imag}
    return record


def system_from_json(record: Mapping[str, Any]) -> NumberSystem:
    try:
        name = str(record["name"])
        n = int(record["n"])
        holds = {
            int(k): DigitString.of([digit_from_json(v, n) for v in values], n)
            for k, values in record["hold"].items()
        }
        embedding = None
        if "embedding" in record:
            embedding = complex(float(record["embedding"]["re"]), float(record["embedding"]["im"]))
    except (KeyError, TypeError, ValueError) as ex:
        raise InvalidSystem(f"Malformed system record:\n{record}\n{ex}") from ex
    return NumberSystem.from_holds(name, n, holds, embedding)
