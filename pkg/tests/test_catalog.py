import json
import logging
from pathlib import Path

import pytest

from holdring.actions.catalog import (
    all_bindings,
    auxiliary_bindings,
    catalog,
    export_catalog,
    get_binding,
    load_external,
)
from holdring.actions.helpers import CATALOG_ENV, CatalogError, find_catalog_file, read_json_file

logger = logging.getLogger(__name__)

BUILT_IN = [
    "neg2",
    "gaussian",
    "sqrt-2",
    "sqrt-7",
    "bal3",
    "sqrt-11",
    "sqrt-3",
    "one-plus-sqrt-2",
    "mu3",
    "mu4",
    "mu6",
    "f2",
    "f3",
    "f4",
]


@pytest.fixture
def clean_env(monkeypatch, tmp_path: Path) -> Path:
    monkeypatch.delenv(CATALOG_ENV, raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_built_in(clean_env):
    assert [bind.name for bind in catalog()] == BUILT_IN
    assert [bind.name for bind in auxiliary_bindings()] == ["pseudo", "binary"]
    assert list(all_bindings()) == BUILT_IN + ["pseudo", "binary"]
    assert list(all_bindings(include_auxiliary=False)) == BUILT_IN
    for bind in catalog():
        assert bind.order.residue_count(bind.x) == bind.n + 1
    with pytest.raises(CatalogError):
        get_binding("no-such-system")


def test_export_and_external(clean_env, monkeypatch, caplog):
    exported = clean_env / "exported.json"
    export_catalog(exported)
    records = read_json_file(exported)["systems"]
    assert len(records) == 11
    assert [bind.name for bind in load_external(exported)] == BUILT_IN[:11]

    renamed = dict(records[0], name="negabinary")
    external = clean_env / "external.json"
    with open(external, "wt") as fh:
        json.dump({"systems": [renamed, records[4]]}, fh, indent=4)
    monkeypatch.setenv(CATALOG_ENV, str(external))
    assert find_catalog_file(None) == external
    with caplog.at_level(logging.WARNING):
        found = all_bindings()
    assert "negabinary" in found
    assert found["negabinary"].system.hold == found["neg2"].system.hold
    assert "External system 'bal3' ignored" in caplog.text
    assert get_binding("negabinary").x == get_binding("neg2").x


def test_catalog_file_discovery(clean_env):
    nested = clean_env / "a" / "b"
    nested.mkdir(parents=True)
    assert find_catalog_file(nested) is None
    export_catalog(clean_env / "holdring_catalog.json")
    assert find_catalog_file(nested) == clean_env / "holdring_catalog.json"


def test_bad_catalogs(clean_env, monkeypatch):
    monkeypatch.setenv(CATALOG_ENV, str(clean_env / "missing.json"))
    with pytest.raises(CatalogError):
        all_bindings()
    monkeypatch.delenv(CATALOG_ENV)

    broken = clean_env / "broken.json"
    with open(broken, "wt") as fh:
        fh.write("{not json")
    with pytest.raises(CatalogError):
        load_external(broken)

    # the hold of 1 does not evaluate to 2 for X = -2
    invalid = clean_env / "invalid.json"
    with open(invalid, "wt") as fh:
        json.dump(
            [
                {
                    "name": "wrong",
                    "n": 1,
                    "hold": {"0": [0, 0, 1]},
                    "realization": {"order": {"t": 0, "c": 0, "rank": 1}, "x": [-2, 0], "root": [1, 0]},
                }
            ],
            fh,
        )
    with pytest.raises(CatalogError):
        load_external(invalid)
