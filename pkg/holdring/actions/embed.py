from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

from .digits import Digit, DigitString, alphabet, parse_digits
from .helpers import InvalidSystem, NonTerminating, NoResidueDigit, NotDivisible
from .ring import Element, OrderSpec, QuadraticInt, Ring, parse_element
from .system import NumberSystem, system_from_json, system_to_json

logger = logging.getLogger(__name__)

ENCODE_CAP_MARGIN = 16


@dataclass(frozen=True)
class SystemBinding:
    """A number system realized in a ring: X and iota(w^k) = root^k."""

    system: NumberSystem
    order: Ring
    x: Element
    root: Element

    @property
    def name(self) -> str:
        return self.system.name

    @property
    def n(self) -> int:
        return self.system.n

    @cached_property
    def iota_table(self) -> Tuple[Element, ...]:
        powers = [self.order.one()]
        for _ in range(self.n - 1):
            powers.append(powers[-1] * self.root)
        return tuple(powers)

    def iota(self, digit: Digit) -> Element:
        if digit.exponent is None:
            return self.order.zero()
        return self.iota_table[digit.exponent]

    def with_system(self, system: NumberSystem) -> SystemBinding:
        return SystemBinding(system, self.order, self.x, self.root)

    def is_quadratic(self) -> bool:
        return isinstance(self.order, OrderSpec)

    def check(self):
        """Raise InvalidSystem unless iota is an injective character of mu_n, |N(X)| = n+1 and the
        hold identity holds for every root."""
        self.system.check()
        one = self.order.one()
        if self.root ** self.n != one:
            raise InvalidSystem(f"System '{self.name}': the chosen root is not an {self.n}-th root of unity.")
        if len(set(self.iota_table)) != self.n:
            raise InvalidSystem(f"System '{self.name}': iota is not injective on mu_{self.n}.")
        residues = self.order.residue_count(self.x)
        if residues != self.n + 1:
            raise InvalidSystem(f"System '{self.name}': R/X has {residues} elements, expected {self.n + 1}.")
        failures = check_hold_identity(self)
        if failures:
            raise InvalidSystem(
                f"System '{self.name}': sigma(hold(xi)) != iota(xi) + 1 for xi in {[str(f) for f in failures]}."
            )


def eval_sigma(s: DigitString, bind: SystemBinding) -> Element:
    """sum_j iota(s_j) X^j, by Horner's rule."""
    if s.n != bind.n:
        raise ValueError(f"A digit string over mu_{s.n} cannot be evaluated in system '{bind.name}'.")
    acc = bind.order.zero()
    for digit in reversed(list(s)):
        acc = acc * bind.x + bind.iota(digit)
    return acc


def residue_digit(z: Element, bind: SystemBinding) -> Digit:
    matches = [alpha for alpha in alphabet(bind.n) if (z - bind.iota(alpha)).divisible_by(bind.x)]
    if len(matches) != 1:
        raise NoResidueDigit(
            f"System '{bind.name}': {len(matches)} digits are congruent to {z} modulo X"
            f" ({[str(m) for m in matches]}); expected exactly one."
        )
    return matches[0]


def div_by_X_exact(z: Element, bind: SystemBinding) -> Element:
    return z.exact_div(bind.x)


def tau(z: Element, bind: SystemBinding) -> Tuple[Digit, Element]:
    """One step of digit extraction: (digit, (z - iota(digit)) / X)."""
    digit = residue_digit(z, bind)
    return digit, div_by_X_exact(z - bind.iota(digit), bind)


def encode_cap(z: Element, bind: SystemBinding) -> int:
    return z.digit_estimate(bind.x) + ENCODE_CAP_MARGIN


def encode(z: Element, bind: SystemBinding, cap: Optional[int] = None) -> DigitString:
    """The unique digit string with eval_sigma(result) == z."""
    if cap is None:
        cap = encode_cap(z, bind)
    original = z
    digits: List[Optional[int]] = []
    seen = set()
    while not z.is_zero():
        if len(digits) >= cap:
            raise NonTerminating(f"System '{bind.name}': encoding {original} did not finish within {cap} digits.")
        if z in seen:
            raise NonTerminating(
                f"System '{bind.name}': {original} has no finite expansion; the remainder {z} recurs"
                f" after {len(digits)} digits."
            )
        seen.add(z)
        digit, z = tau(z, bind)
        digits.append(digit.exponent)
    return DigitString(bind.n, tuple(digits))


def encode_text(text: str, bind: SystemBinding, cap: Optional[int] = None) -> DigitString:
    """Parse an element ("a+b*w", or "c0+c1*X" for the F_q[X] systems) and encode it."""
    return encode(parse_element(text, bind.order), bind, cap)


def decode(text: str, bind: SystemBinding) -> Element:
    """The element spelled by a comma-separated digit string."""
    return eval_sigma(parse_digits(text, bind.n), bind)


def check_hold_identity(bind: SystemBinding) -> List[Digit]:
    """Roots xi for which sigma(hold(xi)) != iota(xi) + 1 (an undefined hold counts as a failure)."""
    failures = []
    one = bind.order.one()
    for xi in alphabet(bind.n, include_zero=False):
        h = bind.system.hold[xi.exponent]
        if h is None or eval_sigma(h, bind) != bind.iota(xi) + one:
            failures.append(xi)
    return failures


def derive_binding(
    order: Ring, x: Element, n: int, root: Element, name: str, cap: Optional[int] = None
) -> SystemBinding:
    """Build the binding of a generator by encoding iota(xi) + 1 for every root."""
    embedding = x.complex() if isinstance(x, QuadraticInt) else None
    bare = SystemBinding(NumberSystem.bare(name, n, embedding), order, x, root)
    holds = {}
    for xi in alphabet(n, include_zero=False):
        try:
            holds[xi.exponent] = encode(bare.iota(xi) + order.one(), bare, cap)
        except (NonTerminating, NoResidueDigit, NotDivisible) as ex:
            raise InvalidSystem(f"Unable to derive the hold of {xi} for '{name}':\n{ex}") from ex
    bind = bare.with_system(NumberSystem.from_holds(name, n, holds, embedding))
    logger.debug(f"Derived {bind.system.describe()}")
    return bind


def binding_to_json(bind: SystemBinding) -> Dict[str, Any]:
    record = system_to_json(bind.system)
    if isinstance(bind.order, OrderSpec):
        record["realization"] = {
            "order": {
                "t": bind.order.t,
                "c": bind.order.c,
                "rank": bind.order.rank,
                "description": bind.order.description,
            },
            "x": [bind.x.a, bind.x.b],
            "root": [bind.root.a, bind.root.b],
        }
    return record


def binding_from_json(record: Dict[str, Any]) -> SystemBinding:
    """Load a record carrying a realization block; the binding is checked before it is returned."""
    system = system_from_json(record)
    if "realization" not in record:
        raise InvalidSystem(f"System '{system.name}' has no realization block.")
    try:
        realization = record["realization"]
        spec = realization["order"]
        order = OrderSpec(
            int(spec.get("t", 0)), int(spec.get("c", 0)), int(spec.get("rank", 2)), str(spec.get("description", ""))
        )
        x = order.element(int(realization["x"][0]), int(realization["x"][1]))
        root = order.element(int(realization["root"][0]), int(realization["root"][1]))
    except (KeyError, TypeError, ValueError, IndexError) as ex:
        raise InvalidSystem(f"Malformed realization block for system '{system.name}':\n{ex}") from ex
    if system.embedding is None:
        system = NumberSystem(system.name, system.n, system.hold, x.complex())
    bind = SystemBinding(system, order, x, root)
    bind.check()
    return bind
