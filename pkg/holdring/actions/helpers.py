from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Any, Optional, Tuple, Union

import humanfriendly
from sympy import factorint

logger = logging.getLogger(__name__)

PathOrStr = Union[Path, str]

CATALOG_ENV = "HOLDRING_CATALOG"
CATALOG_FILENAME = "holdring_catalog.json"


class HoldringError(RuntimeError):
    """Base class for every domain error raised by holdring.  The CLI maps these
    to exit code 1."""


class NonTerminating(HoldringError):
    """A carry or digit-extraction process ran past its cap, or was detected to
    produce an infinite (eventually periodic) expansion."""


class NoResidueDigit(HoldringError):
    """No digit (or more than one) is congruent to the element modulo X."""


class NotDivisible(HoldringError):
    pass


class TooLarge(HoldringError):
    """An exhaustive enumeration would exceed its guard."""


class InvalidSystem(HoldringError):
    pass


class CatalogError(HoldringError):
    pass


class RenderIoError(HoldringError, OSError):
    pass


def prime_power(q: int) -> Optional[Tuple[int, int]]:
    """Return (p, r) with q == p**r for a prime p, or None if q is not a prime power."""
    if q < 2:
        return None
    factors = factorint(q)
    if len(factors) != 1:
        return None
    ((p, r),) = factors.items()
    return int(p), int(r)


def is_prime_power(q: int) -> bool:
    return prime_power(q) is not None


def squarefree_part(value: int) -> int:
    """Signed squarefree part, e.g. -12 -> -3, -8 -> -2, 0 -> 0."""
    if value == 0:
        return 0
    part = 1
    for p, e in factorint(abs(value)).items():
        if e % 2:
            part *= int(p)
    return part if value > 0 else -part


def count_str(count: int) -> str:
    return humanfriendly.format_number(count)


def timespan_str(seconds: float) -> str:
    return humanfriendly.format_timespan(seconds)


def read_json_file(json_file: PathOrStr) -> Any:
    """Read a JSON file (catalog or system record)."""
    with open(json_file, "rt") as fh:
        return json.load(fh)


def write_json_file(json_file: PathOrStr, record: Any):
    with open(json_file, "wt") as outfile:
        json.dump(record, outfile, indent=4)


def find_catalog_file(starting: Optional[Path] = None) -> Optional[Path]:
    """An external catalog is taken from the HOLDRING_CATALOG environment variable
    if set.  Otherwise the directory tree is searched upward from 'starting' for a
    holdring_catalog.json.  Returns None if there is no external catalog.
    """
    from_env = os.environ.get(CATALOG_ENV)
    if from_env:
        path = Path(from_env)
        if not path.exists():
            raise CatalogError(f"{CATALOG_ENV} points at a catalog that does not exist: {path}")
        return path
    if starting is None:
        return None
    attempt = starting / CATALOG_FILENAME
    if attempt.exists():
        return attempt
    if starting.resolve() == starting.parent.resolve():
        # 'starting' is already the root...
        return None
    return find_catalog_file(starting.parent)
