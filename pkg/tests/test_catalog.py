from __future__ import annotations

import json

import pytest
import yaml

from catalog.loader import CatalogLoader, dump_catalog, load_catalog, load_catalog_text
from catalog.models import (
    AlgebraId,
    CatalogError,
    ConstraintViolationError,
    Endpoint,
    UnknownAlgebraError,
    evaluate_guard,
    expand_free_params,
)
from catalog.witnesses import verify_all_witnesses, verify_witness
from scalars.errors import UnboundParameterError
from scalars.field import ExactScalar
from scalars.poly import RatFunc

SMALL = """
table: "1"
entries:
  - label: k
    dim: 1
    products: []
  - label: B
    dim: 2
    products:
      - {i: 1, j: 1, k: 2}
  - label: Bk
    dim: 3
    summands: [B, k]
    products:
      - {i: 1, j: 1, k: 2}
  - label: P
    dim: 2
    params:
      - {name: a, excluded: ["0"]}
    constraints: ["a != 2"]
    products:
      - {i: 1, j: 1, k: 2, coeff: "a"}
    samples:
      - {a: "1"}
      - {a: "-1"}
    expected:
      - values: {ann_dim: 1}
      - when: "a == 1"
        values: {aut_dim: 2}
witnesses:
  - id: P_scale
    source: {label: P, params: {a: "a0"}}
    target: {label: B}
    free_params: {a0: ["1", "4", "-9"]}
    matrix:
      - ["1", "0"]
      - ["0", "a0"]
cited:
  - separates: [B, k]
    reason: "different dimension"
"""

TWO_PARAMS = """
entries:
  - label: Q
    dim: 3
    params:
      - {name: a}
      - {name: b}
    products:
      - {i: 1, j: 1, k: 2, coeff: "a"}
      - {i: 1, j: 2, k: 3, coeff: "b"}
    samples:
      - {a: "1", b: "1"}
"""


@pytest.fixture
def small():
    return load_catalog_text(SMALL)


@pytest.fixture(scope="module")
def shipped():
    return load_catalog()


def _write(directory, name, text):
    directory.mkdir(parents=True, exist_ok=True)
    (directory / name).write_text(text)


class TestLoadCatalogText:
    def test_entries(self, small):
        assert list(small.entries) == ["k", "B", "Bk", "P"]
        assert small.get("P").param_names == ("a",)
        assert small.get("B").table == "1"

    def test_instantiate(self, small):
        tensor = small.instantiate(AlgebraId.of("P", {"a": "3"}))
        assert tensor.c[0][0][1] == 3

    def test_symbolic_instantiate(self, small):
        tensor = small.get("P").tensor({"a": RatFunc.t()})
        assert tensor.domain is RatFunc
        assert tensor.c[0][0][1] == RatFunc.t()

    def test_excluded_value(self, small):
        with pytest.raises(ConstraintViolationError):
            small.instantiate(AlgebraId.of("P", {"a": "0"}))

    def test_constraint(self, small):
        with pytest.raises(ConstraintViolationError):
            small.instantiate(AlgebraId.of("P", {"a": "2"}))

    def test_excluded_allowed_on_request(self, small):
        tensor = small.instantiate(AlgebraId.of("P", {"a": "0"}), allow_excluded=True)
        assert tensor.products() == {}

    def test_unbound(self, small):
        with pytest.raises(UnboundParameterError):
            small.instantiate("P")

    def test_partial_binding(self):
        catalog = load_catalog_text(TWO_PARAMS)
        with pytest.raises(UnboundParameterError) as info:
            catalog.instantiate(catalog.make_id("Q", {"a": "2"}))
        assert info.value.name == "b"
        assert catalog.instantiate(catalog.make_id("Q", {"b": "1", "a": "2"})).c[0][1][2] == 1

    def test_unknown(self, small):
        with pytest.raises(UnknownAlgebraError):
            small.get("nope")

    def test_expected_with_guard(self, small):
        assert small.expected_invariants(AlgebraId.of("P", {"a": "1"})) == {"ann_dim": 1, "aut_dim": 2}
        assert small.expected_invariants(AlgebraId.of("P", {"a": "-1"})) == {"ann_dim": 1}

    def test_sample_ids(self, small):
        keys = [a.key for a in small.get("P").sample_ids()]
        assert keys == ["P(a=1)", "P(a=-1)"]

    def test_with_samples(self, small):
        small.with_samples({"P": [{"a": "5"}]})
        assert [a.key for a in small.get("P").sample_ids()] == ["P(a=5)"]

    def test_with_samples_rejects_excluded(self, small):
        with pytest.raises(ConstraintViolationError):
            small.with_samples({"P": [{"a": "0"}]})

    def test_cited(self, small):
        assert small.cited[0].separates == ("B", "k")

    def test_dump_reloads(self, small):
        again = load_catalog_text(dump_catalog(small))
        assert again.entries == small.entries
        assert again.witnesses == small.witnesses
        assert again.cited == small.cited

    def test_dump_is_byte_identical(self, small):
        text = dump_catalog(small)
        assert dump_catalog(load_catalog_text(text)) == text

    def test_json_text(self):
        doc = {"entries": [{"label": "B", "dim": 2, "products": [{"i": 1, "j": 1, "k": 2}]}]}
        catalog = load_catalog_text(json.dumps(doc))
        assert catalog.instantiate("B").products() == {(0, 0): {1: ExactScalar(1)}}


class TestCatalogErrors:
    def test_missing_products(self):
        with pytest.raises(CatalogError):
            load_catalog_text("entries:\n  - label: x\n")

    def test_index_out_of_range(self):
        with pytest.raises(CatalogError):
            load_catalog_text("entries:\n  - label: x\n    dim: 2\n    products:\n      - {i: 1, j: 1, k: 3}\n")

    def test_family_without_samples(self):
        text = "entries:\n  - label: x\n    dim: 2\n    params: [{name: a}]\n    products: []\n"
        with pytest.raises(CatalogError):
            load_catalog_text(text)

    def test_duplicate_label(self):
        text = "entries:\n  - {label: x, dim: 1, products: []}\n  - {label: x, dim: 1, products: []}\n"
        with pytest.raises(CatalogError):
            load_catalog_text(text)

    def test_summand_mismatch(self):
        text = SMALL.replace("summands: [B, k]", "summands: [k, B]")
        with pytest.raises(CatalogError):
            load_catalog_text(text)

    def test_non_jordan_rejected(self, tmp_path):
        doc = {"entries": [{"label": "bad", "dim": 2, "products": [
            {"i": 1, "j": 1, "k": 2}, {"i": 2, "j": 2, "k": 1}]}]}
        _write(tmp_path / "catalog", "bad.yaml", yaml.dump(doc))
        with pytest.raises(CatalogError):
            CatalogLoader(str(tmp_path)).load_all()

    def test_non_jordan_text_rejected(self):
        doc = {"entries": [{"label": "bad", "dim": 2, "products": [
            {"i": 1, "j": 1, "k": 2}, {"i": 2, "j": 2, "k": 1}]}]}
        with pytest.raises(CatalogError):
            load_catalog_text(yaml.dump(doc))
        assert list(load_catalog_text(yaml.dump(doc), validate=False).entries) == ["bad"]

    def test_json_file(self, tmp_path):
        _write(tmp_path / "catalog", "one.json", json.dumps({"entries": [{"label": "k", "dim": 1, "products": []}]}))
        _write(tmp_path / "catalog", "two.yaml", "entries:\n  - {label: Z2, dim: 2, products: []}\n")
        assert list(load_catalog(str(tmp_path)).entries) == ["k", "Z2"]

    def test_malformed_yaml(self, tmp_path):
        _write(tmp_path / "catalog", "broken.yaml", "entries: [\n")
        with pytest.raises(CatalogError):
            load_catalog(str(tmp_path))

    def test_missing_directory(self, tmp_path):
        with pytest.raises(CatalogError):
            load_catalog(str(tmp_path / "absent"))

    def test_data_dir_from_environment(self, tmp_path, monkeypatch):
        _write(tmp_path / "catalog", "one.yaml", "entries:\n  - {label: k, dim: 1, products: []}\n")
        monkeypatch.setenv("JORN5_DATA_DIR", str(tmp_path))
        assert list(load_catalog().entries) == ["k"]


class TestModels:
    def test_guard(self):
        assert evaluate_guard("a == 1 and b != 0", {"a": 1, "b": 2})
        assert not evaluate_guard("a == 1 and b != 0", {"a": 1, "b": 0})

    def test_guard_needs_operator(self):
        with pytest.raises(CatalogError):
            evaluate_guard("a", {"a": 1})

    def test_algebra_id_key(self):
        assert AlgebraId.of("J_27", {"e": "1/2", "f": "-1"}).key == "J_27(e=1/2,f=-1)"
        assert AlgebraId.of("J_23", {"b": "i"}).bindings == {"b": ExactScalar(0, 1)}

    def test_endpoint_varies(self):
        assert Endpoint("J_15", {"a": "a0"}).varies()
        assert Endpoint("J_24", {"g": "t"}).varies()
        assert Endpoint("J_24", {"g": "t"}).depends_on_t()
        assert not Endpoint("J_41", {"l": "0"}).varies()

    def test_endpoint_rejects_t_in_algebra_id(self):
        with pytest.raises(Exception):
            Endpoint("J_24", {"g": "t"}).algebra_id({})

    def test_expand_free_params(self):
        combos = expand_free_params({"a": ("1", "2"), "b": ("0",)})
        assert combos == [{"a": 1, "b": 0}, {"a": 2, "b": 0}]
        assert expand_free_params({}) == [{}]


class TestWitnesses:
    def test_scaling_witness(self, small):
        results = verify_all_witnesses(small)
        assert len(results) == 3
        # (e1)(e1) = a0 e2 = (a0 e2 as new basis vector)
        assert all(r.ok for r in results)

    def test_wrong_matrix_reports_diff(self, small):
        witness = small.witnesses[0]
        broken = type(witness)(
            id="broken", source=witness.source, target=witness.target,
            matrix=(("1", "0"), ("0", "1")), free_params=witness.free_params,
        )
        result = verify_witness(small, broken, {"a0": ExactScalar(4)})
        assert not result.ok
        assert result.diff[0][:3] == (1, 1, 2)
        assert "differs" in result.describe()

    def test_singular_matrix_recorded(self, small):
        witness = small.witnesses[0]
        small.witnesses = [type(witness)(
            id="singular", source=witness.source, target=witness.target,
            matrix=(("1", "0"), ("0", "0")), free_params={"a0": ("1",)},
        )]
        results = verify_all_witnesses(small)
        assert results[0].error is not None
        assert not results[0].ok

    def test_shipped_witnesses(self, shipped):
        failed = [r.describe() for r in verify_all_witnesses(shipped) if not r.ok]
        assert failed == []


class TestShippedCatalog:
    def test_dump_is_byte_identical(self, shipped):
        text = dump_catalog(shipped)
        assert "variances:" in text
        assert dump_catalog(load_catalog_text(text)) == text

    def test_tables_present(self, shipped):
        assert {e.table for e in shipped.entries.values()} == {"1", "2", "3"}
        assert len(shipped.by_table("2")) == 25

    def test_table_associativity(self, shipped):
        from algebra.identities import is_associative

        for algebra in shipped.sample_ids(tables=("2",)):
            assert is_associative(shipped.instantiate(algebra)), algebra.key
        for algebra in shipped.sample_ids(tables=("3",)):
            assert not is_associative(shipped.instantiate(algebra)), algebra.key

    def test_families_have_three_samples(self, shipped):
        for entry in shipped.entries.values():
            if entry.family_node:
                assert len(entry.samples) >= 3, entry.label
