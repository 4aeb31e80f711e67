"""The built-in systems, the negative controls and loading of an external catalog.

Holds are spelled in the digit text syntax, little-endian.  For n >= 3 the token w
is the chosen generator of mu_n (its value in the ring is the 'root' of the entry).
"""

from __future__ import annotations

import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .digits import parse_digits
from .embed import SystemBinding, binding_from_json, binding_to_json, derive_binding
from .helpers import CatalogError, HoldringError, find_catalog_file, read_json_file, write_json_file
from .ring import FiniteField, OrderSpec, PolynomialRing
from .system import NumberSystem

logger = logging.getLogger(__name__)

OrderTuple = Tuple[int, int, int, str]
Pair = Tuple[int, int]

# name, order (t, c, rank, description), x, root, n, holds by exponent
_QUADRATIC_ENTRIES: List[Tuple[str, OrderTuple, Pair, Pair, int, Dict[int, str]]] = [
    ("neg2", (0, 0, 1, "Z"), (-2, 0), (1, 0), 1, {0: "0,1,1"}),
    ("gaussian", (0, 1, 2, "Z[i], w = i"), (-1, 1), (1, 0), 1, {0: "0,0,1,1"}),
    ("sqrt-2", (0, 2, 2, "Z[sqrt(-2)], w = sqrt(-2)"), (0, 1), (1, 0), 1, {0: "0,0,1,0,1"}),
    ("sqrt-7", (-1, 2, 2, "O(Q(sqrt(-7))), w = (-1+sqrt(-7))/2"), (0, 1), (1, 0), 1, {0: "0,1,0,1"}),
    ("bal3", (0, 0, 1, "Z"), (3, 0), (-1, 0), 2, {0: "-1,1", 1: ""}),
    ("sqrt-11", (1, 3, 2, "O(Q(sqrt(-11))), w = (1+sqrt(-11))/2"), (0, 1), (-1, 0), 2, {0: "-1,1,-1", 1: ""}),
    ("sqrt-3", (0, 3, 2, "Z[sqrt(-3)], w = sqrt(-3)"), (0, 1), (-1, 0), 2, {0: "-1,0,-1", 1: ""}),
    ("one-plus-sqrt-2", (0, 2, 2, "Z[sqrt(-2)], w = sqrt(-2)"), (1, 1), (-1, 0), 2, {0: "-1,-1,1,-1", 1: ""}),
    (
        "mu3",
        (-1, 1, 2, "Z[j], w = j"),
        (-2, 0),
        (0, 1),
        3,
        {0: "0,1,1", 1: "w^2,w^2", 2: "w,w"},
    ),
    (
        "mu4",
        (0, 1, 2, "Z[i], w = i"),
        (1, 2),
        (0, 1),
        4,
        {0: "w,w^3", 1: "w^3,1", 2: "", 3: "w^2,w^3"},
    ),
    (
        "mu6",
        (-1, 1, 2, "Z[j], w = j"),
        (2, -1),
        (1, 1),
        6,
        {0: "w^2,1", 1: "w^4,w", 2: "w", 3: "", 4: "w^5", 5: "w^3,1"},
    ),
]

_FIELD_ENTRIES: List[Tuple[str, int]] = [("f2", 2), ("f3", 3), ("f4", 4)]


def _quadratic_binding(name, order_spec, x, root, n, holds) -> SystemBinding:
    t, c, rank, description = order_spec
    order = OrderSpec(t, c, rank, description)
    x_element = order.element(*x)
    system = NumberSystem.from_holds(
        name, n, {k: parse_digits(text, n) for k, text in holds.items()}, x_element.complex()
    )
    return SystemBinding(system, order, x_element, order.element(*root))


def field_binding(q: int) -> SystemBinding:
    """F_q[X] with X itself as generator and mu_{q-1} realized by the powers of a primitive element."""
    field = FiniteField(q)
    ring = PolynomialRing(field)
    return derive_binding(ring, ring.variable(), q - 1, ring.constant(field.primitive), f"f{q}")


@lru_cache(maxsize=None)
def catalog() -> Tuple[SystemBinding, ...]:
    """Every built-in binding, each checked (hold identity included) as it is built."""
    entries = [_quadratic_binding(*entry) for entry in _QUADRATIC_ENTRIES]
    entries += [field_binding(q) for _, q in _FIELD_ENTRIES]
    for bind in entries:
        bind.check()
    logger.debug(f"Built-in catalog: {len(entries)} systems.")
    return tuple(entries)


def pseudo_binding() -> SystemBinding:
    """The hold -1 + X + X^2 realized by X = w, w^2 + w - 3 = 0.  The identity holds but 5 has
    no finite expansion."""
    return _quadratic_binding(
        "pseudo", (-1, -3, 2, "Z[w], w^2 = 3 - w (real)"), (0, 1), (-1, 0), 2, {0: "-1,1,1", 1: ""}
    )


def binary_binding() -> SystemBinding:
    """Base 2 with digits {0, 1}: negative integers have no finite expansion."""
    return _quadratic_binding("binary", (0, 0, 1, "Z"), (2, 0), (1, 0), 1, {0: "0,1"})


def auxiliary_bindings() -> Tuple[SystemBinding, ...]:
    return (pseudo_binding(), binary_binding())


def load_external(path: Path) -> List[SystemBinding]:
    try:
        records = read_json_file(path)
    except (OSError, ValueError) as ex:
        raise CatalogError(f"Unable to read system catalog '{path}':\n{ex}") from ex
    if isinstance(records, Mapping):
        records = records.get("systems", [])
    bindings = []
    for record in records:
        try:
            bindings.append(binding_from_json(record))
        except HoldringError as ex:
            raise CatalogError(f"Catalog '{path}' holds an invalid system:\n{ex}") from ex
    logger.info(f"Loaded {len(bindings)} systems from catalog: {path}")
    return bindings


def all_bindings(include_auxiliary: bool = True, external: Optional[Path] = None) -> Dict[str, SystemBinding]:
    """Built-in, then auxiliary, then external systems by name.  Earlier names win."""
    found: Dict[str, SystemBinding] = {bind.name: bind for bind in catalog()}
    if include_auxiliary:
        for bind in auxiliary_bindings():
            found.setdefault(bind.name, bind)
    if external is None:
        external = find_catalog_file(Path.cwd())
    if external is not None:
        for bind in load_external(external):
            if bind.name in found:
                logger.warning(f"External system '{bind.name}' ignored: the name is already taken.")
                continue
            found[bind.name] = bind
    return found


def get_binding(name: str, external: Optional[Path] = None) -> SystemBinding:
    bindings = all_bindings(external=external)
    if name not in bindings:
        raise CatalogError(f"Unknown system '{name}'.  Known systems: {', '.join(bindings)}")
    return bindings[name]


def export_catalog(path: Path):
    """Write the realizable built-in systems in the external-catalog format."""
    records: List[Any] = [binding_to_json(bind) for bind in catalog() if bind.is_quadratic()]
    write_json_file(path, {"systems": records})
    logger.info(f"Wrote {len(records)} systems to: {path}")
