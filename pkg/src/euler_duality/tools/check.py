# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 验证工具 (check)

对清单中的每个快照检测阵面，计算七个流族的跳跃残差、对偶 RH 残差与容许性；
再加上荷平衡、光滑区 Euler 残差，以及可选的随机 SL(2,R) 性质扫描。
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import Field

from ..models import (
    LabResult,
    LabError,
    ErrorType,
    FamilyKind,
    GalileiElement,
    Geometry,
    GroupElement,
    Primitive,
    ScenarioConfig,
    SpacetimeField,
    Verdict,
    STANDARD_FAMILIES,
    EXTENDED_FAMILIES,
)
from ..core.group import admissible_at, random_sl2
from ..core.noether import charge_balance, residual_norm
from ..core.shock import (
    admissibility,
    dual_rh_vector,
    hugoniot_front,
    jump_report,
    normalized_residual,
    transform_front,
)
from ..utils import (
    TOOL_SIMULATE,
    load_config,
    parse_numeric_error,
    read_field,
    validate_config_path,
    validate_manifest_path,
    validate_out_dir,
    validate_seed,
    write_json,
    write_records_csv,
)
from .solve import tracked_fronts
from .transform import group_element


logger = logging.getLogger(__name__)

# 扫描时与奇异时刻保持的最小距离 |γt+δ|
SWEEP_MIN_FACTOR = 0.05


# =============================================================================
# 阵面检查
# =============================================================================
def front_reports(config: ScenarioConfig, field: SpacetimeField, exact: bool,
                  g: Optional[GroupElement] = None) -> List[Dict[str, Any]]:
    """
    每个快照一条记录，内含各阵面的 JumpReport

    exact=True (精确 Riemann 采样) 时使用严格容差、质量 RH 速度；
    否则容差按 factor/cells 放宽，速度由相邻快照追踪。
    """
    tol = config.tolerances
    contact_tol = tol.contact_exact if exact else tol.contact_detected
    dual = g is not None and not np.allclose(g.sl2.matrix, np.eye(2))
    out = []
    fronts_by_snapshot = tracked_fronts(field, tol.zone_threshold, tol.halo, tracking=not exact)
    for snap, fronts in zip(field.snapshots, fronts_by_snapshot):
        rh_tol = tol.rh_exact if exact else tol.rh_detected_factor / snap.cells
        reports = []
        for front in fronts:
            sl2 = admissible_at(g.sl2, front.t) if dual else None
            reports.append(jump_report(
                front, field.eos, tolerance=rh_tol, sl2=sl2, contact_tol=contact_tol,
            ))
        out.append({"t": snap.t, "tolerance": rh_tol, "reports": reports})
    return out


def angular_note(field: SpacetimeField) -> str:
    """角动量族 L 不进入跳跃检查的原因"""
    if field.geometry is Geometry.SPHERICAL:
        return "球对称约化下矢量荷恒为零，L 的跳跃残差平凡为零"
    return f"n={field.eos.n} 的平面问题没有角动量流 (L 只在 n ≥ 2 时定义)"


def report_failures(snapshots: List[Dict[str, Any]]) -> List[str]:
    failures = []
    for entry in snapshots:
        for report in entry["reports"]:
            for record in report.records:
                if not record.passed:
                    failures.append(
                        f"t={report.t:.6g} xs={report.xs:.6g}: {record.family} "
                        f"残差 {abs(record.normalized):.3e} > {record.tolerance:.3e}"
                    )
            if report.admissibility.verdict is Verdict.SHOCK_INADMISSIBLE:
                verdict = report.admissibility
                failures.append(
                    f"t={report.t:.6g} xs={report.xs:.6g}: 不容许间断 "
                    f"(ΔS={verdict.delta_s:.3e}, Lax={verdict.lax_satisfied})"
                )
    return failures


# =============================================================================
# 荷平衡与 Euler 残差
# =============================================================================
def balance_table(config: ScenarioConfig, field: SpacetimeField) -> List[Dict[str, Any]]:
    """
    全时间窗上的相对荷平衡残差

    质量/动量/能量以 tolerances.charge_balance 判定；boost 对任意 γ₀ 守恒，
    dilatation/expansion 只在对称指数下守恒，非对称时只报告。
    扩展族跨激波一阶收敛，容差放宽到 factor/cells。
    """
    tol = config.tolerances
    t1, t2 = field.window()
    cells = field.snapshots[0].cells
    extended_tol = max(tol.charge_balance, tol.charge_balance_extended_factor / cells)
    rows = []
    for family in (*STANDARD_FAMILIES, *EXTENDED_FAMILIES):
        residual = charge_balance(field, family, t1, t2, relative=True)
        if family in STANDARD_FAMILIES:
            tolerance = tol.charge_balance
        elif family.kind is FamilyKind.BOOST or field.eos.symmetric:
            tolerance = extended_tol
        else:
            tolerance = None
        rows.append({
            "family": family.label,
            "t1": t1,
            "t2": t2,
            "relative_residual": residual,
            "tolerance": tolerance,
            "passed": bool(abs(residual) <= tolerance) if tolerance is not None else None,
        })
    return rows


# =============================================================================
# 随机性质扫描
# =============================================================================
def property_sweep(config: ScenarioConfig, field: SpacetimeField, seed: int) -> List[Dict[str, Any]]:
    """
    在精确 Hugoniot 阵面上抽取随机 SL(2,R) 元素

    逐个检查：容许性判定不变、ΔS 不变、对偶残差为零、变换后阵面满足标准 RH。
    """
    eos = field.eos
    tol = config.tolerances
    rng = np.random.default_rng(seed)
    base = hugoniot_front(Primitive(rho=1.0, u=0.0, p=1.0), config.sweep.mach, eos, t=1.0, xs=0.5)
    before = admissibility(base, eos, tol.contact_exact)
    identity = GalileiElement.identity(1)
    rows = []
    while len(rows) < config.sweep.samples:
        sl2 = random_sl2(rng, config.sweep.max_parameter)
        if abs(sl2.q(base.t)) < SWEEP_MIN_FACTOR:
            continue
        sl2 = admissible_at(sl2, base.t)
        image = transform_front(GroupElement(sl2=sl2, gal=identity), base, eos)
        after = admissibility(image, eos, tol.contact_exact)
        _, dual = dual_rh_vector(base, sl2, eos)
        dual_max = float(np.max(np.abs(dual)))
        standard_max = max(abs(normalized_residual(image, f, eos)) for f in STANDARD_FAMILIES)
        ds_error = abs(after.delta_s - before.delta_s)
        rows.append({
            "sample": len(rows),
            "alpha": sl2.alpha,
            "beta": sl2.beta,
            "gamma": sl2.gamma,
            "delta": sl2.delta,
            "verdict_before": before.verdict.value,
            "verdict_after": after.verdict.value,
            "delta_s_error": ds_error,
            "dual_residual": dual_max,
            "image_rh_residual": standard_max,
            "passed": bool(
                after.verdict is before.verdict
                and ds_error <= tol.entropy * max(1.0, abs(before.delta_s))
                and dual_max <= tol.dual_exact
                and standard_max <= tol.dual_exact
            ),
        })
    return rows


# =============================================================================
# 工具函数
# =============================================================================
async def cmd_check(
    config: str = Field(description="场景配置文件路径 (容差与群元素)"),
    manifest: str = Field(description="待检查的清单 JSON"),
    out: str = Field(description="输出目录"),
    seed: Optional[int] = Field(default=None, description="随机性质扫描的种子，缺省不扫描"),
) -> LabResult:
    """
    检测阵面并验证 RH (七个流族)、对偶 RH、容许性、荷平衡与 Euler 残差

    输出 check.json (总判定) 以及 jumps.csv / charge_balance.csv / sweep.csv 明细。
    任一启用的检查超出容差时返回 CHECK_FAILED。
    """
    if error := validate_config_path(config):
        return LabResult(success=False, error=error)
    if error := validate_manifest_path(manifest):
        return LabResult(success=False, error=error)
    if error := validate_out_dir(out):
        return LabResult(success=False, error=error)
    if error := validate_seed(seed):
        return LabResult(success=False, error=error)

    try:
        cfg = load_config(config)
        field, source = read_field(manifest)
        out_dir = Path(out)
        exact = source.kind == "riemann"
        g = group_element(cfg)

        snapshots = front_reports(cfg, field, exact, g)
        failures = report_failures(snapshots)
        jumps = [
            {"snapshot": k, **row}
            for k, entry in enumerate(snapshots)
            for report in entry["reports"]
            for row in report.flat_records()
        ]
        write_records_csv(out_dir / "jumps.csv", jumps)

        balance: List[Dict[str, Any]] = []
        if source.kind == "simulate" and len(field.snapshots) >= 2 and field.common_grid:
            balance = balance_table(cfg, field)
            write_records_csv(out_dir / "charge_balance.csv", balance)
            failures += [
                f"{row['family']} 荷平衡残差 {abs(row['relative_residual']):.3e} > {row['tolerance']:.3e}"
                for row in balance if row["passed"] is False
            ]

        residual = None
        residual_tol = cfg.tolerances.euler_residual
        if len(field.snapshots) >= 3 and field.common_grid:
            residual = residual_norm(field, threshold=cfg.tolerances.zone_threshold, halo=cfg.tolerances.halo)
            if residual_tol is not None and residual > residual_tol:
                failures.append(f"Euler 残差最大模 {residual:.3e} > {residual_tol:.3e}")
        elif residual_tol is not None:
            logger.warning("设置了 euler_residual 容差，但场不足三个共享网格的快照，残差未检查")

        sweep: List[Dict[str, Any]] = []
        if seed is not None and cfg.sweep.samples > 0:
            if cfg.run.negative_control:
                logger.warning("负对照场景下跳过随机性质扫描")
            else:
                sweep = property_sweep(cfg, field, seed)
                write_records_csv(out_dir / "sweep.csv", sweep)
                failures += [f"扫描样本 {row['sample']} 未通过" for row in sweep if not row["passed"]]

        document = {
            "passed": not failures,
            "manifest": str(Path(manifest)),
            "source_kind": source.kind,
            "exact_fronts": exact,
            "tolerances": cfg.tolerances.model_dump(),
            "snapshots": [
                {
                    "t": entry["t"],
                    "tolerance": entry["tolerance"],
                    "fronts": [r.model_dump(mode="json") for r in entry["reports"]],
                }
                for entry in snapshots
            ],
            "charge_balance": balance,
            "residual_norm": residual,
            "residual_tolerance": residual_tol,
            "skipped_families": {"L": angular_note(field)},
            "sweep": {"seed": seed, "samples": len(sweep),
                      "passed": sum(1 for row in sweep if row["passed"])},
            "failures": failures,
        }
        report_path = write_json(out_dir / "check.json", document)
        fronts = sum(len(entry["reports"]) for entry in snapshots)
        logger.info(f"检查完成: {fronts} 个阵面，{len(failures)} 项未通过")

        if failures:
            return LabResult(success=False, error=LabError(
                error_type=ErrorType.CHECK_FAILED,
                message=f"check: {len(failures)} 项检查未通过容差",
                suggestion="查看 check.json 中的 failures 与 jumps.csv 明细",
                related_tools=[TOOL_SIMULATE],
                details={"report": str(report_path), "failures": failures[:50]},
            ))
        return LabResult(success=True, data={
            "report": str(report_path),
            "fronts": fronts,
            "residual_norm": residual,
            "sweep_samples": len(sweep),
        })
    except Exception as e:
        logger.error(f"检查失败: {e}")
        return LabResult(success=False, error=parse_numeric_error(e, "check"))
