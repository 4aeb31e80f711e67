"""Exact host-ring arithmetic for realizations of number systems.

OrderSpec / QuadraticInt cover Z (rank 1) and the orders Z[w] with w^2 = t*w - c.
FiniteField / PolynomialRing / FieldPolynomial cover the symbolic F_q[X] systems.
All elements share one small protocol: +, -, *, exact_div(), divisible_by(), is_zero(),
embeddings() and digit_estimate(), which is what embed.py relies on.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_div,
    gf_irreducible_p,
    gf_mul,
    gf_neg,
    gf_rem,
    gf_strip,
    gf_sub,
)

from .helpers import NotDivisible, prime_power, squarefree_part


@dataclass(frozen=True)
class OrderSpec:
    """Z[w] with minimal polynomial x^2 - t*x + c; rank 1 is Z itself (t = c = 0, b always 0)."""

    t: int = 0
    c: int = 0
    rank: int = 2
    description: str = field(default="", compare=False)

    @staticmethod
    def integers() -> OrderSpec:
        return OrderSpec(0, 0, rank=1, description="Z")

    @property
    def discriminant(self) -> int:
        return self.t * self.t - 4 * self.c

    def is_imaginary(self) -> bool:
        return self.rank == 2 and self.discriminant < 0

    @cached_property
    def omega_embeddings(self) -> Tuple[complex, ...]:
        """The complex values of w: (w,) for rank 1 and (w, w') otherwise, w with Im >= 0 first.
        For a real order the larger root comes first."""
        if self.rank == 1:
            return (0j,)
        root = cmath.sqrt(self.discriminant)
        return ((self.t + root) / 2, (self.t - root) / 2)

    @property
    def omega_value(self) -> complex:
        return self.omega_embeddings[0]

    @property
    def field_key(self) -> int:
        """Signed squarefree part of the discriminant; 1 stands for Q."""
        if self.rank == 1:
            return 1
        return squarefree_part(self.discriminant)

    def element(self, a: int, b: int = 0) -> QuadraticInt:
        return QuadraticInt(a, b, self)

    def zero(self) -> QuadraticInt:
        return QuadraticInt(0, 0, self)

    def one(self) -> QuadraticInt:
        return QuadraticInt(1, 0, self)

    def omega(self) -> QuadraticInt:
        if self.rank == 1:
            raise ValueError("Z has no second basis element.")
        return QuadraticInt(0, 1, self)

    def residue_count(self, x: QuadraticInt) -> int:
        return abs(x.norm())

    def __str__(self) -> str:
        if self.description:
            return self.description
        if self.rank == 1:
            return "Z"
        return f"Z[w], w^2 = {self.t}*w - {self.c}"


@dataclass(frozen=True)
class QuadraticInt:
    a: int
    b: int
    order: OrderSpec

    def __post_init__(self):
        if self.order.rank == 1 and self.b != 0:
            raise ValueError(f"An element of Z cannot have an w-component ({self.b}).")

    def _same(self, other: QuadraticInt):
        if other.order != self.order:
            raise ValueError(f"Elements of different orders: {self.order} vs {other.order}.")

    def __add__(self, other: QuadraticInt) -> QuadraticInt:
        self._same(other)
        return QuadraticInt(self.a + other.a, self.b + other.b, self.order)

    def __sub__(self, other: QuadraticInt) -> QuadraticInt:
        self._same(other)
        return QuadraticInt(self.a - other.a, self.b - other.b, self.order)

    def __neg__(self) -> QuadraticInt:
        return QuadraticInt(-self.a, -self.b, self.order)

    def __mul__(self, other: QuadraticInt) -> QuadraticInt:
        self._same(other)
        # (a + b w)(a' + b' w), with w^2 = t w - c
        bb = self.b * other.b
        return QuadraticInt(
            self.a * other.a - self.order.c * bb,
            self.a * other.b + self.b * other.a + self.order.t * bb,
            self.order,
        )

    def __pow__(self, k: int) -> QuadraticInt:
        result = self.order.one()
        base = self
        while k > 0:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> QuadraticInt:
        if self.order.rank == 1:
            return self
        return QuadraticInt(self.a + self.b * self.order.t, -self.b, self.order)

    def norm(self) -> int:
        if self.order.rank == 1:
            return self.a
        return self.a * self.a + self.a * self.b * self.order.t + self.b * self.b * self.order.c

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def exact_div(self, other: QuadraticInt) -> QuadraticInt:
        """self / other, raising NotDivisible unless the quotient lies in the order."""
        self._same(other)
        if other.is_zero():
            raise ZeroDivisionError("Division by zero in a quadratic order.")
        if self.order.rank == 1:
            q, r = divmod(self.a, other.a)
            if r:
                raise NotDivisible(f"{self} is not divisible by {other} in Z.")
            return QuadraticInt(q, 0, self.order)
        numerator = self * other.conj()
        n = other.norm()
        if numerator.a % n or numerator.b % n:
            raise NotDivisible(f"{self} is not divisible by {other} in {self.order}.")
        return QuadraticInt(numerator.a // n, numerator.b // n, self.order)

    def divisible_by(self, other: QuadraticInt) -> bool:
        try:
            self.exact_div(other)
        except NotDivisible:
            return False
        return True

    def embeddings(self) -> Tuple[complex, ...]:
        return tuple(self.a + self.b * w for w in self.order.omega_embeddings)

    def complex(self) -> complex:
        return self.embeddings()[0]

    def magnitude(self) -> float:
        return max(abs(v) for v in self.embeddings())

    def digit_estimate(self, x: QuadraticInt) -> int:
        """Rough count of base-x digits of self: ceil(log_|x|(|self| + 1)) with the weakest embedding of x."""
        smallest = min(abs(v) for v in x.embeddings())
        if smallest <= 1.0:
            return 64
        return int(math.ceil(math.log(self.magnitude() + 1.0) / math.log(smallest)))

    def __str__(self) -> str:
        return format_element(self)


def format_element(z: Element) -> str:
    """Text spelling: "a+b*w" (or just "a" when b is zero) in a quadratic order, "c0+c1*X+c2*X^2"
    in F_q[X] with zero terms left out and coefficients given as field codes 0..q-1."""
    if isinstance(z, FieldPolynomial):
        return _format_polynomial(z)
    if z.b == 0:
        return str(z.a)
    if z.a == 0:
        return f"{z.b}*w"
    sign = "+" if z.b > 0 else "-"
    return f"{z.a}{sign}{abs(z.b)}*w"


def _format_polynomial(z: FieldPolynomial) -> str:
    terms = []
    for j, v in enumerate(z.coefficients):
        if not v:
            continue
        if j == 0:
            terms.append(str(v))
            continue
        power = "X" if j == 1 else f"X^{j}"
        terms.append(power if v == 1 else f"{v}*{power}")
    return "+".join(terms) if terms else "0"


def parse_element(text: str, order: Ring) -> Element:
    """Parse "a", "b*w", "a+b*w", "a-w" and similar; in F_q[X], "1+2*X^2" and similar."""
    if isinstance(order, PolynomialRing):
        return _parse_polynomial(text, order)
    compact = text.strip().replace(" ", "")
    if not compact:
        raise ValueError("Empty element text.")
    a = 0
    b = 0
    terms: List[str] = []
    current = ""
    for ch in compact:
        if ch in "+-" and current and not current.endswith("*"):
            terms.append(current)
            current = ch
        else:
            current += ch
    terms.append(current)
    try:
        for term in terms:
            if term.endswith("w"):
                coefficient = term[:-1].rstrip("*")
                if coefficient in ("", "+"):
                    b += 1
                elif coefficient == "-":
                    b -= 1
                else:
                    b += int(coefficient)
            else:
                a += int(term)
    except ValueError as ex:
        raise ValueError(f"Unable to parse element '{text}'; expected a form like 3, 2*w or 1-2*w.") from ex
    return QuadraticInt(a, b, order)


def _parse_polynomial(text: str, ring: PolynomialRing) -> FieldPolynomial:
    compact = text.strip().replace(" ", "")
    if not compact:
        raise ValueError("Empty element text.")
    q = ring.field.q
    coefficients: Dict[int, int] = {}
    try:
        for term in compact.split("+"):
            head, variable, tail = term.partition("X")
            if not variable:
                value, power = int(term), 0
            else:
                value = int(head.rstrip("*")) if head else 1
                if not tail:
                    power = 1
                elif tail.startswith("^"):
                    power = int(tail[1:])
                else:
                    raise ValueError(term)
            if not 0 <= value < q or power < 0:
                raise ValueError(term)
            coefficients[power] = ring.field.add(coefficients.get(power, 0), value)
    except ValueError as ex:
        raise ValueError(
            f"Unable to parse element '{text}' of {ring}; expected a form like 1+X or 2+1*X^3 with"
            f" coefficients in 0..{q - 1}."
        ) from ex
    size = max(coefficients) + 1 if coefficients else 0
    return FieldPolynomial(tuple(coefficients.get(j, 0) for j in range(size)), ring)


def _big_endian(coefficients) -> List[int]:
    """Little-endian coefficients as a galoistools polynomial."""
    return gf_strip([int(v) for v in reversed(coefficients)])


class FiniteField:
    """F_q with elements encoded as integers 0..q-1 (base-p digits are polynomial coefficients
    modulo a fixed irreducible polynomial).  Sums and reductions are galoistools operations on
    those coefficient lists; multiplication goes through log tables built from a primitive element."""

    def __init__(self, q: int):
        power = prime_power(q)
        if power is None:
            raise ValueError(f"{q} is not a prime power.")
        self.q = q
        self.p, self.r = power
        self.modulus = self._find_irreducible()
        self._exp: List[int] = []
        self._log: Dict[int, int] = {}
        self.primitive = self._find_primitive()

    def coefficients_of(self, value: int) -> List[int]:
        out = []
        for _ in range(self.r):
            value, digit = divmod(value, self.p)
            out.append(digit)
        return out

    def _encode(self, coefficients: List[int]) -> int:
        value = 0
        for digit in reversed(coefficients):
            value = value * self.p + digit % self.p
        return value

    def _find_irreducible(self) -> List[int]:
        """Lowest monic irreducible polynomial of degree r over F_p, big-endian coefficients."""
        if self.r == 1:
            return [1, 0]
        for tail in range(self.p**self.r):
            candidate = [1] + list(reversed(self.coefficients_of(tail)))
            if gf_irreducible_p(candidate, self.p, ZZ):
                return candidate
        raise ValueError(f"No irreducible polynomial of degree {self.r} over F_{self.p}.")

    def as_poly(self, u: int) -> List[int]:
        """The element u as a big-endian polynomial in F_p[t]."""
        return _big_endian(self.coefficients_of(u))

    def reduce(self, poly: List[int]) -> int:
        """The code of poly (any degree, big-endian, over F_p) modulo the field modulus."""
        remainder = gf_rem(poly, self.modulus, self.p, ZZ)
        return self._encode([int(v) for v in reversed(remainder)])

    def mul_by_reduction(self, u: int, v: int) -> int:
        return self.reduce(gf_mul(self.as_poly(u), self.as_poly(v), self.p, ZZ))

    def _find_primitive(self) -> int:
        for g in range(2 if self.q > 2 else 1, self.q):
            powers = [1]
            while len(powers) < self.q - 1:
                nxt = self.mul_by_reduction(powers[-1], g)
                if nxt == 1:
                    break
                powers.append(nxt)
            if len(powers) == self.q - 1:
                self._exp = powers
                self._log = {v: k for k, v in enumerate(powers)}
                return g
        raise ValueError(f"No primitive element found in F_{self.q}.")

    def add(self, u: int, v: int) -> int:
        return self.reduce(gf_add(self.as_poly(u), self.as_poly(v), self.p, ZZ))

    def neg(self, u: int) -> int:
        return self.reduce(gf_neg(self.as_poly(u), self.p, ZZ))

    def sub(self, u: int, v: int) -> int:
        return self.reduce(gf_sub(self.as_poly(u), self.as_poly(v), self.p, ZZ))

    def mul(self, u: int, v: int) -> int:
        if u == 0 or v == 0:
            return 0
        return self._exp[(self._log[u] + self._log[v]) % (self.q - 1)]

    def inverse(self, u: int) -> int:
        if u == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.q}.")
        return self._exp[(-self._log[u]) % (self.q - 1)]

    def power_of_primitive(self, k: int) -> int:
        return self._exp[k % (self.q - 1)]

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("F", self.q))

    def __repr__(self) -> str:
        return f"FiniteField({self.q})"


@dataclass(frozen=True)
class PolynomialRing:
    """F_q[X]; plays the role of OrderSpec for the symbolic systems."""

    field: FiniteField

    @property
    def description(self) -> str:
        return f"F_{self.field.q}[X]"

    def zero(self) -> FieldPolynomial:
        return FieldPolynomial((), self)

    def one(self) -> FieldPolynomial:
        return FieldPolynomial((1,), self)

    def constant(self, value: int) -> FieldPolynomial:
        return FieldPolynomial((value,), self)

    def variable(self) -> FieldPolynomial:
        return FieldPolynomial((0, 1), self)

    def residue_count(self, x: FieldPolynomial) -> int:
        return self.field.q ** max(len(x.coefficients) - 1, 0)

    def __str__(self) -> str:
        return self.description


@dataclass(frozen=True)
class FieldPolynomial:
    """Little-endian coefficients in F_q, trailing zeros trimmed."""

    coefficients: Tuple[int, ...]
    ring: PolynomialRing

    def __post_init__(self):
        coefficients = list(self.coefficients)
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        object.__setattr__(self, "coefficients", tuple(coefficients))

    @property
    def _f(self) -> FiniteField:
        return self.ring.field

    def _coefficient(self, j: int) -> int:
        return self.coefficients[j] if j < len(self.coefficients) else 0

    def __add__(self, other: FieldPolynomial) -> FieldPolynomial:
        size = max(len(self.coefficients), len(other.coefficients))
        return FieldPolynomial(
            tuple(self._f.add(self._coefficient(j), other._coefficient(j)) for j in range(size)), self.ring
        )

    def __neg__(self) -> FieldPolynomial:
        return FieldPolynomial(tuple(self._f.neg(v) for v in self.coefficients), self.ring)

    def __sub__(self, other: FieldPolynomial) -> FieldPolynomial:
        return self + (-other)

    def _packed(self) -> List[int]:
        """Kronecker substitution X = t^(2r-1): the whole polynomial as one big-endian F_p polynomial."""
        stride = 2 * self._f.r - 1
        little: List[int] = []
        for v in self.coefficients:
            digits = self._f.coefficients_of(v)
            little.extend(digits + [0] * (stride - len(digits)))
        return _big_endian(little)

    def __mul__(self, other: FieldPolynomial) -> FieldPolynomial:
        if self.is_zero() or other.is_zero():
            return self.ring.zero()
        f = self._f
        stride = 2 * f.r - 1
        product = [int(v) for v in reversed(gf_mul(self._packed(), other._packed(), f.p, ZZ))]
        chunks = [product[k : k + stride] for k in range(0, len(product), stride)]
        return FieldPolynomial(tuple(f.reduce(_big_endian(chunk)) for chunk in chunks), self.ring)

    def __pow__(self, k: int) -> FieldPolynomial:
        result = self.ring.one()
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return not self.coefficients

    def exact_div(self, other: FieldPolynomial) -> FieldPolynomial:
        if other.is_zero():
            raise ZeroDivisionError("Division by the zero polynomial.")
        f = self._f
        if f.r == 1:
            quotient, remainder = gf_div(_big_endian(self.coefficients), _big_endian(other.coefficients), f.p, ZZ)
            if remainder:
                raise NotDivisible(f"{self} is not divisible by {other} in {self.ring}.")
            return FieldPolynomial(tuple(int(v) for v in reversed(quotient)), self.ring)
        # coefficients outside F_p: long division with field operations
        remainder = list(self.coefficients)
        d = len(other.coefficients) - 1
        lead_inverse = f.inverse(other.coefficients[-1])
        quotient = [0] * max(len(remainder) - d, 0)
        for i in range(len(remainder) - 1, d - 1, -1):
            factor = f.mul(remainder[i], lead_inverse)
            if factor:
                quotient[i - d] = factor
                for j, v in enumerate(other.coefficients):
                    remainder[i - d + j] = f.sub(remainder[i - d + j], f.mul(factor, v))
        if any(remainder):
            raise NotDivisible(f"{self} is not divisible by {other} in {self.ring}.")
        return FieldPolynomial(tuple(quotient), self.ring)

    def divisible_by(self, other: FieldPolynomial) -> bool:
        try:
            self.exact_div(other)
        except NotDivisible:
            return False
        return True

    def embeddings(self) -> Tuple[complex, ...]:
        raise TypeError(f"{self.ring} has no complex embedding.")

    def digit_estimate(self, x: FieldPolynomial) -> int:
        return len(self.coefficients)

    def __str__(self) -> str:
        return format_element(self)


Element = Union[QuadraticInt, FieldPolynomial]
Ring = Union[OrderSpec, PolynomialRing]
