# -*- coding: utf-8 -*-
"""命令行入口与退出码"""

import json

import pytest

from euler_duality.cli import EXIT_CHECK_FAILED, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, build_parser, exit_code, main
from euler_duality.models import ErrorType, LabError, LabResult, SpacetimeField
from euler_duality.utils import write_field

from conftest import SCENARIOS


SOD = "[eos]\ngamma0 = 1.4\n\n[grid]\ncells = 400\n\n[run]\noutput_times = 0.1, 0.2\n"


@pytest.mark.parametrize("error_type, code", [
    (ErrorType.CHECK_FAILED, EXIT_CHECK_FAILED),
    (ErrorType.VACUUM, EXIT_NUMERICAL),
    (ErrorType.NUMERICAL_ABORT, EXIT_NUMERICAL),
    (ErrorType.DOMAIN_ERROR, EXIT_NUMERICAL),
    (ErrorType.CONFIG_ERROR, EXIT_USAGE),
    (ErrorType.SINGULAR_TIME, EXIT_USAGE),
    (ErrorType.COVERAGE_ERROR, EXIT_USAGE),
])
def test_exit_codes(error_type, code):
    result = LabResult(success=False, error=LabError(error_type=error_type, message="x"))
    assert exit_code(result) == code
    assert exit_code(LabResult(success=True)) == EXIT_OK


def test_manifest_flag_is_required():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["check", "--config", "a.cfg", "--out", "o"])


def test_riemann_then_check(write_config, tmp_path, capsys):
    cfg = write_config(SOD)
    assert main(["riemann", "--config", cfg, "--out", str(tmp_path / "r")]) == EXIT_OK
    printed = json.loads(capsys.readouterr().out)
    assert printed["success"] and "error" not in printed
    code = main(["check", "--config", cfg, "--manifest", str(tmp_path / "r" / "manifest.json"),
                 "--out", str(tmp_path / "c"), "--seed", "3"])
    assert code == EXIT_OK


def test_unknown_preset_is_usage_error(write_config, tmp_path, capsys):
    cfg = write_config("[initial]\npreset = nope\n")
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "s")]) == EXIT_USAGE
    printed = json.loads(capsys.readouterr().out)
    assert printed["error"]["error_type"] == ErrorType.CONFIG_ERROR.value


def test_vacuum_is_numerical_failure(write_config, tmp_path):
    cfg = write_config("[eos]\ngamma0 = 1.4\n[initial]\npreset = two-shock\nspeed = -10.0\n")
    assert main(["riemann", "--config", cfg, "--out", str(tmp_path / "r")]) == EXIT_NUMERICAL


def test_strict_turns_warnings_into_failure(write_config, tmp_path, air):
    path = write_field(tmp_path / "empty", SpacetimeField(snapshots=[], eos=air), kind="simulate")
    cfg = write_config("[group]\nbeta = 0.5\n")
    argv = ["transform", "--config", cfg, "--manifest", str(path), "--out", str(tmp_path / "t")]
    assert main(argv) == EXIT_OK
    assert main(argv + ["--strict"]) == EXIT_CHECK_FAILED


def test_negative_control_demo_exits_one(tmp_path):
    code = main(["demo-duality", "--config", str(SCENARIOS / "negative_control.cfg"), "--out", str(tmp_path / "d")])
    assert code == EXIT_CHECK_FAILED
    assert json.loads((tmp_path / "d" / "demo.json").read_text())["negative_control"]
