# -*- coding: utf-8 -*-
"""子命令工具函数 (与 MCP 工具共享)"""

import asyncio
import json

import pytest

from euler_duality.core import fvm
from euler_duality.core.shock import hugoniot_front
from euler_duality.models import ErrorType, Primitive, SpacetimeField
from euler_duality.tools import cmd_check, cmd_demo_duality, cmd_riemann, cmd_simulate, cmd_transform
from euler_duality.utils import read_field, write_field

from conftest import SCENARIOS


SOD = """
[eos]
gamma0 = 1.4

[grid]
cells = 400

[run]
output_times = 0.1, 0.15, 0.2
"""

SWEEP = """
[eos]
n = 1

[grid]
cells = 400

[run]
output_times = 0.1, 0.15, 0.2

[sweep]
samples = 8
mach = 3.0
"""

TUBE = """
[eos]
n = 1

[grid]
x_left = 0.0
x_right = 10.0
cells = 100

[initial]
preset = sod
x0 = 3.5

[run]
t_start = 0.2
t_end = 2.0
output_times = 1.0, 1.5, 2.0
"""

DM = """
[eos]
n = 1

[group]
alpha = 0.0
beta = -1.0
gamma = 1.0
delta = 0.0
"""


def run(coro):
    return asyncio.run(coro)


def riemann(config, out):
    return run(cmd_riemann(config=config, out=str(out)))


def check(config, manifest, out, seed=None):
    return run(cmd_check(config=config, manifest=str(manifest), out=str(out), seed=seed))


def test_riemann_writes_outputs(write_config, tmp_path):
    result = riemann(write_config(SOD), tmp_path / "r")
    assert result.success
    assert result.data["p_star"] == pytest.approx(0.30313, abs=1e-5)
    waves = json.loads((tmp_path / "r" / "waves.json").read_text())
    assert waves["waves"] == {"left": "rarefaction", "right": "shock"}
    field, manifest = read_field(tmp_path / "r" / "manifest.json")
    assert manifest.kind == "riemann"
    assert [s.t for s in field.snapshots] == [0.1, 0.15, 0.2]
    assert (tmp_path / "r" / "riemann.csv").exists()


def test_riemann_rejects_non_riemann_preset(write_config, tmp_path):
    result = riemann(write_config("[initial]\npreset = gaussian-pulse\n"), tmp_path / "r")
    assert not result.success
    assert result.error.error_type is ErrorType.CONFIG_ERROR
    assert result.error.parameter == "initial.preset"


def test_riemann_vacuum(write_config, tmp_path):
    text = """
    [eos]
    gamma0 = 1.4

    [state]
    rho = 1.0
    u = -5.0
    p = 0.1
    x_end = 0.5

    [state]
    rho = 1.0
    u = 5.0
    p = 0.1
    """
    result = riemann(write_config(text), tmp_path / "r")
    assert result.error.error_type is ErrorType.VACUUM


def test_missing_config_is_reported(tmp_path):
    result = riemann(str(tmp_path / "nope.cfg"), tmp_path / "r")
    assert result.error.error_type is ErrorType.INVALID_PARAMETER


def test_simulate_zero_duration(write_config, tmp_path):
    cfg = write_config("[run]\nt_start = 0.2\nt_end = 0.2\n")
    result = run(cmd_simulate(config=cfg, out=str(tmp_path / "s")))
    assert result.success
    assert result.data["snapshots"] == 1
    assert result.data["stats"]["steps"] == 0


def test_simulate_reports_front_trajectory(write_config, tmp_path):
    result = run(cmd_simulate(config=write_config(TUBE), out=str(tmp_path / "s")))
    assert result.success
    manifest = json.loads((tmp_path / "s" / "manifest.json").read_text())
    assert manifest["kind"] == "simulate"
    assert manifest["extra"]["trajectory_monotone"]
    assert len(manifest["extra"]["front_trajectory"]) == 3


def test_transform_drury_mendonca_window(write_config, tmp_path):
    assert run(cmd_simulate(config=write_config(TUBE), out=str(tmp_path / "s"))).success
    result = run(cmd_transform(config=write_config(DM, "dm.cfg"), manifest=str(tmp_path / "s" / "manifest.json"),
                               out=str(tmp_path / "t")))
    assert result.success
    assert result.data["singular_time"] == 0.0
    field, manifest = read_field(tmp_path / "t" / "manifest.json")
    assert [s.t for s in field.snapshots] == pytest.approx([-1.0, -2.0 / 3.0, -0.5])
    assert manifest.extra["source_kind"] == "simulate"
    # x' = x/t
    assert field.snapshots[0].x_right == pytest.approx(10.0)
    assert field.snapshots[-1].x_right == pytest.approx(5.0)


def test_transform_rejects_straddling_window(write_config, tmp_path):
    assert run(cmd_simulate(config=write_config(TUBE), out=str(tmp_path / "s"))).success
    group = "[group]\nbeta = -2.5\ngamma = 1.0\ndelta = -1.5\n"
    result = run(cmd_transform(config=write_config(group, "g.cfg"), manifest=str(tmp_path / "s" / "manifest.json"),
                               out=str(tmp_path / "t")))
    assert result.error.error_type is ErrorType.SINGULAR_TIME
    assert result.error.details["singular_time"] == pytest.approx(1.5)


def test_check_exact_riemann_passes(write_config, tmp_path):
    cfg = write_config(SOD)
    assert riemann(cfg, tmp_path / "r").success
    result = check(cfg, tmp_path / "r" / "manifest.json", tmp_path / "c")
    assert result.success, result.error
    document = json.loads((tmp_path / "c" / "check.json").read_text())
    assert document["exact_fronts"]
    assert document["charge_balance"] == []
    assert all(len(s["fronts"]) == 2 for s in document["snapshots"])
    assert (tmp_path / "c" / "jumps.csv").exists()


def test_check_empty_field_passes(write_config, tmp_path, air):
    path = write_field(tmp_path / "empty", SpacetimeField(snapshots=[], eos=air), kind="simulate")
    result = check(write_config(SOD), path, tmp_path / "c")
    assert result.success
    assert result.data["fronts"] == 0


def test_check_flags_time_reversed_shock(write_config, tmp_path, eos1):
    front = hugoniot_front(Primitive(rho=1.0, u=0.0, p=1.0), 2.0, eos1)
    down = front.left
    snap = fvm.piecewise([(down.rho, -down.ux, down.p), (1.0, 0.0, 1.0)], [0.5], 0.0, 1.0, 100, t=0.1)
    path = write_field(tmp_path / "bad", SpacetimeField(snapshots=[snap], eos=eos1), kind="riemann")
    result = check(write_config("[eos]\nn = 1\n"), path, tmp_path / "c")
    assert result.error.error_type is ErrorType.CHECK_FAILED
    assert any("不容许" in f for f in result.error.details["failures"])


def test_check_sweep_with_seed(write_config, tmp_path):
    cfg = write_config(SWEEP)
    assert riemann(cfg, tmp_path / "r").success
    result = check(cfg, tmp_path / "r" / "manifest.json", tmp_path / "c", seed=7)
    assert result.success, result.error
    assert result.data["sweep_samples"] == 8
    document = json.loads((tmp_path / "c" / "check.json").read_text())
    assert document["sweep"] == {"seed": 7, "samples": 8, "passed": 8}


def test_check_rejects_negative_seed(write_config, tmp_path):
    cfg = write_config(SOD)
    assert riemann(cfg, tmp_path / "r").success
    result = check(cfg, tmp_path / "r" / "manifest.json", tmp_path / "c", seed=-1)
    assert result.error.error_type is ErrorType.INVALID_PARAMETER


def test_check_simulation_balances_charges(write_config, tmp_path):
    cfg = write_config(TUBE)
    assert run(cmd_simulate(config=cfg, out=str(tmp_path / "s"))).success
    result = check(cfg, tmp_path / "s" / "manifest.json", tmp_path / "c")
    document = json.loads((tmp_path / "c" / "check.json").read_text())
    rows = {row["family"]: row for row in document["charge_balance"]}
    for label in ("rho", "P0", "H"):
        assert rows[label]["passed"], rows[label]
    # 对称指数下 K/D/A 都参与判定，容差 max(1e-3, 1.6/100)
    for label in ("K0", "D", "A"):
        assert rows[label]["tolerance"] == pytest.approx(0.016)
        assert isinstance(rows[label]["passed"], bool)
    assert document["residual_norm"] is not None
    assert document["residual_tolerance"] is None
    assert "L" in document["skipped_families"]
    assert result.success == document["passed"]


def test_check_gates_boost_balance_for_any_exponent(write_config, tmp_path):
    cfg = write_config(TUBE.replace("n = 1", "gamma0 = 1.4"))
    assert run(cmd_simulate(config=cfg, out=str(tmp_path / "s"))).success
    check(cfg, tmp_path / "s" / "manifest.json", tmp_path / "c")
    rows = {row["family"]: row for row in json.loads((tmp_path / "c" / "check.json").read_text())["charge_balance"]}
    assert isinstance(rows["K0"]["passed"], bool)
    assert rows["D"]["passed"] is None and rows["A"]["passed"] is None


def test_check_gates_euler_residual(write_config, tmp_path):
    assert run(cmd_simulate(config=write_config(TUBE), out=str(tmp_path / "s"))).success
    manifest = tmp_path / "s" / "manifest.json"

    strict = write_config(TUBE + "\n[tolerances]\neuler_residual = 1e-12\n", "strict.cfg")
    result = check(strict, manifest, tmp_path / "c1")
    assert result.error.error_type is ErrorType.CHECK_FAILED
    assert any("Euler 残差" in f for f in result.error.details["failures"])

    loose = write_config(TUBE + "\n[tolerances]\neuler_residual = 1e6\n", "loose.cfg")
    check(loose, manifest, tmp_path / "c2")
    document = json.loads((tmp_path / "c2" / "check.json").read_text())
    assert document["residual_tolerance"] == 1e6
    assert not any("Euler 残差" in f for f in document["failures"])


def test_demo_requires_symmetric_exponent(write_config, tmp_path):
    result = run(cmd_demo_duality(config=write_config("[eos]\ngamma0 = 1.4\n"), out=str(tmp_path / "d")))
    assert result.error.error_type is ErrorType.PRECONDITION_FAILED


def test_demo_planar_duality(tmp_path):
    result = run(cmd_demo_duality(config=str(SCENARIOS / "tube_n1.cfg"), out=str(tmp_path / "d")))
    assert result.success, result.error
    document = json.loads((tmp_path / "d" / "demo.json").read_text())
    assert document["passed"] and not document["negative_control"]
    assert len(document["pairs"]) == 11
    for pair in document["pairs"]:
        assert pair["implosion"]["t"] == pytest.approx(-1.0 / pair["explosion"]["t"])
    implosion, manifest = read_field(tmp_path / "d" / "implosion" / "manifest.json")
    assert manifest.kind == "transform"
    assert implosion.snapshots[0].t == pytest.approx(-1.0)


def test_demo_spherical_duality(tmp_path):
    result = run(cmd_demo_duality(config=str(SCENARIOS / "blast_n3.cfg"), out=str(tmp_path / "d")))
    assert result.success, result.error
    document = json.loads((tmp_path / "d" / "demo.json").read_text())
    assert document["passed"]
    assert len(document["pairs"]) == 11
    for pair in document["pairs"]:
        assert all(pair["checks"].values()), pair["checks"]
        assert pair["position_error"] <= pair["position_tolerance"]


def test_demo_negative_control_fails(tmp_path):
    result = run(cmd_demo_duality(config=str(SCENARIOS / "negative_control.cfg"), out=str(tmp_path / "d")))
    assert result.error.error_type is ErrorType.CHECK_FAILED
    assert result.error.details["negative_control"]
    document = json.loads((tmp_path / "d" / "demo.json").read_text())
    assert document["negative_control"] and document["note"]
