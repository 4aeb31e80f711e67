"""Addition and multiplication of digit strings driven only by the hold of a system.

Two implementations of truncated addition are provided.  carry_steps() follows the
carry-list bookkeeping step by step (every position folds its summands pairwise and
appends the carries to a pending list).  sum_mod() keeps one queue of pending digits
per position and is the default.  Both return the unique representative mod X^m.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import DefaultDict, Dict, Iterator, List, Optional, Sequence, Tuple

from .digits import Digit, DigitString, Exponent, scale_string
from .helpers import NonTerminating
from .system import NumberSystem

logger = logging.getLogger(__name__)

DEFAULT_CAP_MARGIN = 64


@dataclass(frozen=True)
class CarryState:
    """State after k steps: the k produced digits R(k) and the pending carry list C(k)."""

    produced: Tuple[Digit, ...]
    pending: Tuple[DigitString, ...]

    @property
    def step(self) -> int:
        return len(self.produced)


def carry_steps(
    a: DigitString, b: DigitString, m: int, sys: NumberSystem, keep_empty: bool = False
) -> Iterator[CarryState]:
    """Run the carry-list algorithm mod X^m, yielding the state after each step.

    Every position folds its summands pairwise, so a column of s summands yields s-1 carries.
    By default carries and tails that are all Zero are dropped, which leaves the sum unchanged
    and keeps the list short.  With keep_empty=True they stay in the list as Zero strings and
    the pending list holds exactly 2^k - 1 carries after k steps."""
    _check_alphabet(sys, a, b)
    produced: List[Digit] = []
    pending: List[DigitString] = []
    for k in range(m):
        summands = [a[k], b[k]] + [c[0] for c in pending]
        tails = [c.shift(-1) for c in pending]
        new_carries: List[DigitString] = []
        acc = summands[0].exponent
        for digit in summands[1:]:
            acc, carry = sys.pair(acc, digit.exponent)
            carry = carry.truncate(m - k - 1)
            if carry or keep_empty:
                new_carries.append(carry)
        produced.append(Digit(sys.n, acc))
        pending = [t for t in tails if t or keep_empty] + new_carries
        yield CarryState(tuple(produced), tuple(pending))


def add_mod_faithful(a: DigitString, b: DigitString, m: int, sys: NumberSystem) -> DigitString:
    state = None
    for state in carry_steps(a, b, m, sys):
        pass
    if state is None:
        return DigitString.empty(sys.n)
    return DigitString.of(state.produced, sys.n)


def add_mod(a: DigitString, b: DigitString, m: int, sys: NumberSystem, faithful: bool = False) -> DigitString:
    """a + b mod X^m."""
    if faithful:
        return add_mod_faithful(a, b, m, sys)
    return sum_mod([a, b], m, sys)


def _check_alphabet(sys: NumberSystem, *strings: DigitString):
    for s in strings:
        if s.n != sys.n:
            raise ValueError(f"A digit string over mu_{s.n} cannot be used with system '{sys.name}' (n={sys.n}).")


def _settle_column(exps: List[int], sys: NumberSystem) -> Tuple[Exponent, List[DigitString]]:
    """Fold the digits of one position into a single digit plus carries."""
    if sys.n % 2 == 0 and len(exps) > 1:
        half = sys.n // 2
        counts: Dict[int, int] = defaultdict(int)
        for e in exps:
            counts[e] += 1
        for e in range(half):
            cancel = min(counts[e], counts[e + half])
            counts[e] -= cancel
            counts[e + half] -= cancel
        exps = [e for e in range(sys.n) for _ in range(counts[e])]
    else:
        exps = sorted(exps)
    acc: Exponent = None
    carries = []
    for e in exps:
        acc, carry = sys.pair(acc, e)
        if carry:
            carries.append(carry)
    return acc, carries


def sum_mod(strings: Sequence[DigitString], m: int, sys: NumberSystem) -> DigitString:
    """The sum of any number of strings mod X^m, via per-position queues."""
    _check_alphabet(sys, *strings)
    columns: DefaultDict[int, List[int]] = defaultdict(list)
    for s in strings:
        for j, e in s.nonzero():
            if j < m:
                columns[j].append(e)
    out: List[Exponent] = []
    for k in range(m):
        digit, carries = _settle_column(columns.pop(k, []), sys)
        out.append(digit)
        for carry in carries:
            for j, e in carry.nonzero():
                if k + 1 + j < m:
                    columns[k + 1 + j].append(e)
    return DigitString(sys.n, tuple(out))


def default_cap(strings: Sequence[DigitString]) -> int:
    degrees = sorted((max(len(s) - 1, 0) for s in strings), reverse=True)
    return sum(degrees[:2]) + DEFAULT_CAP_MARGIN


def sum_strings(strings: Sequence[DigitString], sys: NumberSystem, cap: Optional[int] = None) -> DigitString:
    """The exact sum of any number of strings.

    The pending configuration (digits by position relative to the next output) is
    recorded after every position.  If it repeats after a block of Zero outputs, what
    remains equals X^p times itself and is therefore zero, so the sum is complete.  If
    it repeats after a non-Zero output the expansion is infinite.
    """
    _check_alphabet(sys, *strings)
    if cap is None:
        cap = default_cap(strings)
    columns: DefaultDict[int, List[int]] = defaultdict(list)
    for s in strings:
        for j, e in s.nonzero():
            columns[j].append(e)
    out: List[Exponent] = []
    seen: Dict[Tuple[Tuple[int, int], ...], int] = {}
    k = 0
    while columns:
        if k >= cap:
            raise NonTerminating(
                f"Addition in system '{sys.name}' still has {sum(len(c) for c in columns.values())} pending"
                f" digits at position {k}, past the cap of {cap}."
            )
        digit, carries = _settle_column(columns.pop(k, []), sys)
        out.append(digit)
        for carry in carries:
            for j, e in carry.nonzero():
                columns[k + 1 + j].append(e)
        signature = tuple(sorted((pos - k, e) for pos, col in columns.items() for e in col))
        if signature in seen:
            first = seen[signature]
            if all(e is None for e in out[first + 1 :]):
                logger.debug(f"Carry configuration repeats from position {first} with Zero output: sum complete.")
                del out[first + 1 :]
                break
            raise NonTerminating(
                f"Addition in system '{sys.name}' produces an eventually periodic infinite expansion"
                f" (carry configuration at position {k} repeats the one at position {first})."
            )
        seen[signature] = k
        k += 1
    return DigitString(sys.n, tuple(out))


def add(a: DigitString, b: DigitString, sys: NumberSystem, cap: Optional[int] = None) -> DigitString:
    """a + b without truncation; see sum_strings() for termination."""
    return sum_strings([a, b], sys, cap)


def _partial_products(a: DigitString, b: DigitString) -> List[DigitString]:
    return [scale_string(Digit(a.n, e), b).shift(j) for j, e in a.nonzero()]


def mul(a: DigitString, b: DigitString, sys: NumberSystem, cap: Optional[int] = None) -> DigitString:
    _check_alphabet(sys, a, b)
    partials = _partial_products(a, b)
    if cap is None:
        cap = max(len(a) - 1, 0) + max(len(b) - 1, 0) + default_cap(partials)
    return sum_strings(partials, sys, cap)


def mul_mod(a: DigitString, b: DigitString, m: int, sys: NumberSystem) -> DigitString:
    _check_alphabet(sys, a, b)
    return sum_mod([p.truncate(m) for p in _partial_products(a.truncate(m), b.truncate(m))], m, sys)
