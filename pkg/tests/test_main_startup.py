from __future__ import annotations

import importlib
import json
import sys

import pytest

from scalars.errors import InputError


@pytest.fixture
def main_module(monkeypatch, tmp_path):
    monkeypatch.setenv("JORN5_HOME", str(tmp_path / "home"))
    sys.modules.pop("main", None)
    return importlib.import_module("main")


def test_main_import_creates_log_directory(monkeypatch, tmp_path):
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.delenv("JORN5_HOME", raising=False)
    sys.modules.pop("main", None)
    importlib.import_module("main")
    assert (tmp_path / ".jorn5").exists()


def test_jorn5_home_overrides_log_directory(main_module, tmp_path):
    assert main_module.LOG_DIR == tmp_path / "home"
    assert (tmp_path / "home").is_dir()


class TestArguments:
    def test_parse_samples(self, main_module):
        parsed = main_module.parse_samples(["J_27=e:1,f:2;e:3, f:4"])
        assert parsed == {"J_27": [{"e": "1", "f": "2"}, {"e": "3", "f": "4"}]}

    def test_parse_samples_rejects_missing_label(self, main_module):
        with pytest.raises(InputError):
            main_module.parse_samples(["e:1"])

    def test_parse_params_checks_values(self, main_module):
        assert main_module.parse_params(["e=1/2"]) == {"e": "1/2"}
        with pytest.raises(InputError):
            main_module.parse_params(["e=1 +"])

    def test_unknown_stage_is_a_usage_error(self, main_module):
        with pytest.raises(SystemExit) as info:
            main_module.main(["verify", "everything"])
        assert info.value.code == 2


class TestCommands:
    def test_missing_config(self, main_module, tmp_path):
        with pytest.raises(SystemExit) as info:
            main_module.main(["catalog", "list", "--config", str(tmp_path / "absent.yaml")])
        assert info.value.code == main_module.EXIT_INPUT

    def test_catalog_list(self, main_module, capsys):
        assert main_module.main(["catalog", "list", "--table", "3"]) == 0
        out = capsys.readouterr().out
        assert "J_21\ttable 3\tdim 5" in out
        assert "eps_1" not in out

    def test_invariants_to_file(self, main_module, tmp_path):
        path = tmp_path / "out" / "eps_25.json"
        code = main_module.main(["invariants", "eps_25", "--no-cohomology", "--output", str(path)])
        assert code == 0
        data = json.loads(path.read_text())
        assert data["algebra"] == "eps_25"
        assert data["ann_dim"] == 5
        assert data["orbit_dim"] == 0

    def test_unknown_algebra_exit_code(self, main_module):
        assert main_module.main(["invariants", "J_99", "--no-cohomology"]) == main_module.EXIT_INPUT

    def test_partial_parameters_exit_code(self, main_module):
        code = main_module.main(["invariants", "J_27", "--param", "e=2", "--no-cohomology"])
        assert code == main_module.EXIT_INPUT

    def test_verify_single_stage(self, main_module, capsys):
        assert main_module.main(["verify", "identity"]) == 0
        assert "identity: ok" in capsys.readouterr().out

    def test_bad_data_dir(self, main_module, tmp_path):
        assert main_module.main(["catalog", "list", "--data-dir", str(tmp_path)]) == main_module.EXIT_INPUT
