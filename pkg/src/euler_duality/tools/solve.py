# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 求解类工具 (riemann / simulate)
"""

import logging
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
from pydantic import Field

from ..models import (
    LabResult,
    ConfigError,
    Geometry,
    Polytrope,
    Primitive,
    ScenarioConfig,
    Snapshot,
    SpacetimeField,
    ShockFront,
)
from ..core import fvm
from ..core.euler import entropy_state
from ..core.riemann import solve, sample_snapshot
from ..core.shock import admissibility, detect_fronts, leading_shock
from ..utils import (
    emit_config,
    load_config,
    parse_numeric_error,
    validate_config_path,
    validate_out_dir,
    write_field,
    write_json,
    write_snapshot_csv,
)


logger = logging.getLogger(__name__)


# =============================================================================
# 场景构造
# =============================================================================
def riemann_states(config: ScenarioConfig) -> Tuple[Primitive, Primitive, float]:
    """[state] 段 (恰好两个) 或 sod/two-shock 预设给出的左右状态与间断位置"""
    if config.states:
        if len(config.states) != 2:
            raise ConfigError(
                f"Riemann 问题需要恰好两个 [state] 段，实际 {len(config.states)} 个",
                parameter="state",
            )
        a, b = config.states
        return Primitive(rho=a.rho, u=a.u, p=a.p), Primitive(rho=b.rho, u=b.u, p=b.p), a.x_end
    preset = config.initial.preset
    if preset == "sod":
        left, right = fvm.SOD_LEFT, fvm.SOD_RIGHT
    elif preset == "two-shock":
        v = config.initial.speed
        left, right = (1.0, v, 1.0), (1.0, -v, 1.0)
    else:
        raise ConfigError(
            f"预设 '{preset}' 不是 Riemann 问题",
            parameter="initial.preset",
            suggestion="使用 sod / two-shock，或给出两个 [state] 段",
        )
    return (Primitive(rho=left[0], u=left[1], p=left[2]),
            Primitive(rho=right[0], u=right[1], p=right[2]), config.initial.x0)


def initial_snapshot(config: ScenarioConfig, eos: Polytrope) -> Snapshot:
    """按预设构造 t = t_start 的初始快照；未知预设为配置错误"""
    grid, init = config.grid, config.initial
    common = dict(cells=grid.cells, x_left=grid.x_left, x_right=grid.x_right,
                  t=config.run.t_start, geometry=grid.geometry)
    preset = init.preset
    if preset not in fvm.PRESETS:
        raise ConfigError(
            f"未知预设 '{preset}'",
            parameter="initial.preset",
            suggestion=f"可用预设: {', '.join(fvm.PRESETS)}",
        )
    if preset == "piecewise" or (config.states and preset == "sod"):
        if not config.states:
            raise ConfigError("piecewise 预设需要至少一个 [state] 段", parameter="state")
        states = [(s.rho, s.u, s.p) for s in config.states]
        breaks = [s.x_end for s in config.states[:-1]]
        return fvm.piecewise(states, breaks, **common)
    if preset == "sod":
        return fvm.sod(x0=init.x0, **common)
    if preset == "two-shock":
        return fvm.two_shock(x0=init.x0, speed=init.speed, **common)
    if preset == "blast-sphere":
        return fvm.blast_sphere(r0=init.x0, p_in=init.p_in, p_out=init.p_out, **common)
    return fvm.gaussian_pulse(eos=eos, x0=init.x0, width=init.width, amplitude=init.amplitude, **common)


def output_times(config: ScenarioConfig) -> List[float]:
    run = config.run
    return sorted(run.output_times) if run.output_times else [run.t_end]


def simulate_field(config: ScenarioConfig) -> SpacetimeField:
    eos = config.eos.polytrope()
    run = config.run
    return fvm.run(
        initial_snapshot(config, eos), eos, run.t_end,
        output_times=output_times(config) if run.t_end > run.t_start else None,
        cfl=run.cfl, scheme=run.scheme,
        boundary_left=config.grid.boundary_left,
        boundary_right=config.grid.boundary_right,
        floor=run.floor, max_steps=run.max_steps,
    )


def front_trajectory(field: SpacetimeField, contact_tol: float,
                     threshold: float, halo: int) -> List[dict]:
    """每个快照中最外侧激波的位置与速度"""
    trajectory = []
    for snap, lead in zip(field.snapshots, leading_fronts(field, contact_tol, threshold, halo)):
        if lead is not None:
            verdict = admissibility(lead, field.eos, contact_tol)
            trajectory.append({
                "t": snap.t, "xs": lead.xs, "s": lead.s,
                "delta_s": verdict.delta_s, "verdict": verdict.verdict.value,
            })
    return trajectory


def tracked_fronts(field: SpacetimeField, threshold: float, halo: int,
                   tracking: bool = True) -> List[List[ShockFront]]:
    """逐快照检测阵面；tracking=False 时只用质量 RH 速度 (精确采样场)"""
    snaps = field.snapshots
    out = []
    for k, snap in enumerate(snaps):
        previous = snaps[k - 1] if tracking and k > 0 else None
        following = snaps[k + 1] if tracking and k + 1 < len(snaps) else None
        out.append(detect_fronts(snap, previous, threshold, halo, following=following))
    return out


def leading_fronts(field: SpacetimeField, contact_tol: float, threshold: float,
                   halo: int) -> List[Optional[ShockFront]]:
    return [leading_shock(fronts, field.eos, contact_tol)
            for fronts in tracked_fronts(field, threshold, halo)]


# =============================================================================
# 工具函数
# =============================================================================
async def cmd_riemann(
    config: str = Field(description="场景配置文件路径"),
    out: str = Field(description="输出目录"),
) -> LabResult:
    """
    求解并采样精确 Riemann 问题

    输出 riemann.csv (x, rho, u, p, chi, S_rel)、waves.json 波系摘要，
    以及供 check 使用的快照清单。
    """
    if error := validate_config_path(config):
        return LabResult(success=False, error=error)
    if error := validate_out_dir(out):
        return LabResult(success=False, error=error)

    try:
        cfg = load_config(config)
        eos = cfg.eos.polytrope()
        if cfg.grid.geometry is not Geometry.PLANAR:
            raise ConfigError("riemann 子命令只支持 planar 几何", parameter="grid.geometry")
        left, right, x0 = riemann_states(cfg)
        sol = solve(left, right, eos, x0=x0, t0=cfg.run.t_start)
        times = output_times(cfg)
        if times[0] <= cfg.run.t_start:
            raise ConfigError(
                f"采样时刻必须晚于 t_start={cfg.run.t_start}",
                parameter="run.output_times",
            )
        grid = cfg.grid
        snapshots = [sample_snapshot(sol, grid.x_left, grid.x_right, grid.cells, t) for t in times]
        field = SpacetimeField(snapshots=snapshots, eos=eos)

        out_dir = Path(out)
        csv_path = write_snapshot_csv(out_dir / "riemann.csv", snapshots[-1], eos)
        summary = {
            "p_star": sol.p_star,
            "u_star": sol.u_star,
            "rho_star_left": sol.rho_star_left,
            "rho_star_right": sol.rho_star_right,
            "waves": {"left": sol.left_wave, "right": sol.right_wave},
            "speeds": sol.wave_speeds(),
            "entropy": {
                "left": entropy_state(left, eos).model_dump(),
                "right": entropy_state(right, eos).model_dump(),
            },
            "shocks": [f.model_dump(mode="json") for f in sol.shock_fronts(times[-1])],
        }
        summary_path = write_json(out_dir / "waves.json", summary)
        manifest = write_field(out_dir, field, kind="riemann",
                               extra={"riemann": summary, "config": emit_config(cfg)})
        logger.info(f"Riemann 解: p*={sol.p_star:.10g}, u*={sol.u_star:.10g}")
        return LabResult(success=True, data={
            "csv": str(csv_path),
            "summary": str(summary_path),
            "manifest": str(manifest),
            **{k: summary[k] for k in ("p_star", "u_star", "waves")},
        })
    except Exception as e:
        logger.error(f"Riemann 求解失败: {e}")
        return LabResult(success=False, error=parse_numeric_error(e, "riemann"))


async def cmd_simulate(
    config: str = Field(description="场景配置文件路径"),
    out: str = Field(description="输出目录"),
) -> LabResult:
    """运行有限体积求解器，每个输出时刻写一个 CSV，外加清单 JSON"""
    if error := validate_config_path(config):
        return LabResult(success=False, error=error)
    if error := validate_out_dir(out):
        return LabResult(success=False, error=error)

    try:
        cfg = load_config(config)
        field = simulate_field(cfg)
        tol = cfg.tolerances
        trajectory = front_trajectory(field, tol.contact_detected, tol.zone_threshold, tol.halo)
        positions = [p["xs"] for p in trajectory]
        manifest = write_field(out, field, kind="simulate", extra={
            "stats": field.stats,
            "front_trajectory": trajectory,
            "trajectory_monotone": bool(np.all(np.diff(positions) > 0.0)) if len(positions) > 1 else True,
            "config": emit_config(cfg),
        })
        return LabResult(success=True, data={
            "manifest": str(manifest),
            "snapshots": len(field.snapshots),
            "stats": field.stats,
            "front_trajectory": trajectory,
        })
    except Exception as e:
        logger.error(f"演化失败: {e}")
        return LabResult(success=False, error=parse_numeric_error(e, "simulate"))
