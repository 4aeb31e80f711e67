"""Digits of the pointed monoid mu_{n,+} and finite little-endian strings of them.

A digit is either Zero or a root of unity, stored as its exponent class mod n with
respect to a fixed generator of mu_n.  Nothing here knows about complex numbers
except Digit.complex(), which is used for rendering and bounds only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

Degree = Union[int, float]
MINUS_INFINITY: Degree = float("-inf")

# Exponent classes are Optional[int]: None is the Zero digit.
Exponent = Optional[int]


@dataclass(frozen=True)
class Digit:
    n: int
    exponent: Exponent = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Digit alphabet order must be positive, got {self.n}.")
        if self.exponent is not None:
            object.__setattr__(self, "exponent", self.exponent % self.n)

    @staticmethod
    def zero(n: int) -> Digit:
        return Digit(n, None)

    @staticmethod
    def root(k: int, n: int) -> Digit:
        return Digit(n, k)

    @staticmethod
    def one(n: int) -> Digit:
        return Digit(n, 0)

    @staticmethod
    def minus_one(n: int) -> Digit:
        if n % 2:
            raise ValueError(f"-1 is not in mu_{n} for odd n.")
        return Digit(n, n // 2)

    def is_zero(self) -> bool:
        return self.exponent is None

    def __bool__(self) -> bool:
        return self.exponent is not None

    def __mul__(self, other: Digit) -> Digit:
        return digit_mul(self, other)

    def inverse(self) -> Digit:
        if self.exponent is None:
            raise ZeroDivisionError("The Zero digit has no inverse.")
        return Digit(self.n, -self.exponent)

    def __pow__(self, k: int) -> Digit:
        if self.exponent is None:
            return self if k > 0 else Digit.one(self.n)
        return Digit(self.n, self.exponent * k)

    def complex(self) -> complex:
        if self.exponent is None:
            return 0j
        return cmath.exp(2j * math.pi * self.exponent / self.n)

    def __str__(self) -> str:
        return format_digit(self)

    def __repr__(self) -> str:
        return f"Digit({format_digit(self)}, n={self.n})"


def alphabet(n: int, include_zero: bool = True) -> List[Digit]:
    """The digits of mu_{n,+}: Zero first (if requested), then the roots by exponent."""
    roots = [Digit(n, k) for k in range(n)]
    return ([Digit.zero(n)] if include_zero else []) + roots


def digit_mul(a: Digit, b: Digit) -> Digit:
    if a.n != b.n:
        raise ValueError(f"Cannot multiply digits of mu_{a.n} and mu_{b.n}.")
    if a.exponent is None or b.exponent is None:
        return Digit.zero(a.n)
    return Digit(a.n, a.exponent + b.exponent)


@dataclass(frozen=True)
class DigitString:
    """A normalized little-endian digit string.  Position j carries X^j; there are no
    trailing Zero digits and the empty string represents 0."""

    n: int
    exponents: Tuple[Exponent, ...] = ()

    def __post_init__(self):
        exps = [None if e is None else e % self.n for e in self.exponents]
        while exps and exps[-1] is None:
            exps.pop()
        object.__setattr__(self, "exponents", tuple(exps))

    @staticmethod
    def empty(n: int) -> DigitString:
        return DigitString(n, ())

    @staticmethod
    def of(digits: Iterable[Digit], n: Optional[int] = None) -> DigitString:
        digits = list(digits)
        if n is None:
            if not digits:
                raise ValueError("The alphabet order is needed for an empty digit list.")
            n = digits[0].n
        if any(d.n != n for d in digits):
            raise ValueError(f"Mixed alphabets in a digit string over mu_{n}.")
        return DigitString(n, tuple(d.exponent for d in digits))

    @staticmethod
    def from_ints(values: Sequence[int], n: int) -> DigitString:
        """Integer digits for n <= 2: 0 is Zero, 1 is the unit and -1 the root of order 2."""
        return DigitString(n, tuple(int_to_exponent(v, n) for v in values))

    def __len__(self) -> int:
        return len(self.exponents)

    def __bool__(self) -> bool:
        return len(self.exponents) > 0

    def __getitem__(self, j: int) -> Digit:
        if j < 0:
            raise IndexError("Digit positions are non-negative.")
        if j >= len(self.exponents):
            return Digit.zero(self.n)
        return Digit(self.n, self.exponents[j])

    def __iter__(self) -> Iterator[Digit]:
        return (Digit(self.n, e) for e in self.exponents)

    @property
    def degree(self) -> Degree:
        return len(self.exponents) - 1 if self.exponents else MINUS_INFINITY

    def is_zero(self) -> bool:
        return not self.exponents

    def nonzero(self) -> Iterator[Tuple[int, int]]:
        """(position, exponent) for each non-Zero digit."""
        for j, e in enumerate(self.exponents):
            if e is not None:
                yield j, e

    def shift(self, k: int) -> DigitString:
        """Multiply by X^k (k >= 0) or drop the k lowest digits (k < 0)."""
        if not self.exponents:
            return self
        if k >= 0:
            return DigitString(self.n, (None,) * k + self.exponents)
        return DigitString(self.n, self.exponents[-k:])

    def truncate(self, m: int) -> DigitString:
        """The class mod X^m: keep positions below m."""
        if m <= 0:
            return DigitString.empty(self.n)
        if len(self.exponents) <= m:
            return self
        return DigitString(self.n, self.exponents[:m])

    def padded(self, m: int) -> List[Digit]:
        return [self[j] for j in range(m)]

    def to_ints(self) -> List[int]:
        return [exponent_to_int(e, self.n) for e in self.exponents]

    def __str__(self) -> str:
        return format_digits(self)


def scale_string(xi: Digit, s: DigitString) -> DigitString:
    """Digitwise product xi * s_j."""
    if xi.n != s.n:
        raise ValueError(f"Cannot scale a string over mu_{s.n} by a digit of mu_{xi.n}.")
    if xi.exponent is None:
        return DigitString.empty(s.n)
    return DigitString(s.n, tuple(None if e is None else e + xi.exponent for e in s.exponents))


def int_to_exponent(value: int, n: int) -> Exponent:
    if value == 0:
        return None
    if value == 1:
        return 0
    if value == -1 and n % 2 == 0:
        return n // 2
    raise ValueError(f"{value} is not a digit of mu_{n},+.")


def exponent_to_int(e: Exponent, n: int) -> int:
    if e is None:
        return 0
    if e == 0:
        return 1
    if n == 2:
        return -1
    raise ValueError(f"Root w^{e} of mu_{n} has no integer spelling.")


def format_digit(d: Digit) -> str:
    """Text spelling of a digit: integers for n <= 2, otherwise "0" or "w^k" (the unit is "w^0")."""
    if d.exponent is None:
        return "0"
    if d.n <= 2:
        return str(exponent_to_int(d.exponent, d.n))
    return f"w^{d.exponent}"


def parse_digit(token: str, n: int) -> Digit:
    token = token.strip().replace(" ", "")
    if token in ("0", "1", "-1"):
        return Digit(n, int_to_exponent(int(token), n))
    if token == "w":
        return Digit(n, 1)
    if token.startswith("w^"):
        try:
            return Digit(n, int(token[2:]))
        except ValueError as ex:
            raise ValueError(f"Unable to parse digit token '{token}'.") from ex
    raise ValueError(f"Unable to parse digit token '{token}' for mu_{n},+.")


def format_digits(s: DigitString) -> str:
    """Little-endian, comma-separated.  The empty string prints as an empty line."""
    return ",".join(format_digit(d) for d in s)


def parse_digits(text: str, n: int) -> DigitString:
    text = text.strip()
    if not text:
        return DigitString.empty(n)
    return DigitString(n, tuple(parse_digit(token, n).exponent for token in text.split(",")))


def digit_to_json(d: Digit):
    """JSON spelling: integers for n <= 2, text tokens otherwise."""
    if d.n <= 2:
        return exponent_to_int(d.exponent, d.n)
    return format_digit(d)


def digit_from_json(value, n: int) -> Digit:
    if isinstance(value, int):
        return Digit(n, int_to_exponent(value, n))
    return parse_digit(str(value), n)
