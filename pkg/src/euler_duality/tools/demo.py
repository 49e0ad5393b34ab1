# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 对偶演示 (demo-duality)

爆炸 → 检查标准 RH 与容许性 → Drury-Mendonça 元素 (0, −1, 1, 0) 变换 →
在内爆上检查 RH 与容许性 → 并排比较文档。
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import Field

from ..models import (
    LabResult,
    LabError,
    ErrorType,
    ScenarioConfig,
    ShockFront,
    Snapshot,
    SpacetimeField,
    STANDARD_FAMILIES,
)
from ..core.group import admissible_at, drury_mendonca
from ..core.shock import jump_report
from ..utils import (
    TOOL_CHECK,
    load_config,
    parse_numeric_error,
    validate_config_path,
    validate_out_dir,
    validate_symmetric,
    write_field,
    write_json,
    write_records_csv,
)
from .solve import leading_fronts, simulate_field
from .transform import transform_field


logger = logging.getLogger(__name__)

NEGATIVE_CONTROL_NOTE = (
    "负对照: γ₀ 不是对称指数 1+2/n，Drury-Mendonça 映射不把解映为解，"
    "内爆侧 RH 与熵对应关系预期不成立"
)


def _pair(config: ScenarioConfig, k: int, explosion: ShockFront, implosion: ShockFront,
          source: Snapshot, image: Snapshot, eos) -> Dict[str, Any]:
    """一对对应阵面的并排比较"""
    tol = config.tolerances
    contact_tol = tol.contact_detected
    dm = drury_mendonca(n=1)
    ex = jump_report(
        explosion, eos, families=STANDARD_FAMILIES,
        tolerance=tol.rh_detected_factor / source.cells,
        sl2=admissible_at(dm.sl2, explosion.t), contact_tol=contact_tol,
    )
    im = jump_report(
        implosion, eos, families=STANDARD_FAMILIES,
        tolerance=tol.rh_detected_factor / image.cells, contact_tol=contact_tol,
    )
    expected_xs = explosion.xs / explosion.t
    position_error = abs(implosion.xs - expected_xs)
    ds_error = abs(im.admissibility.delta_s - ex.admissibility.delta_s)
    checks = {
        "explosion_rh": all(r.passed for r in ex.records if not r.family.startswith("dual")),
        "explosion_dual_rh": all(r.passed for r in ex.records if r.family.startswith("dual")),
        "explosion_admissible": ex.admissibility.verdict.value == "shock_admissible",
        "implosion_rh": im.passed,
        "verdict_match": im.admissibility.verdict is ex.admissibility.verdict,
        "position": position_error <= tol.position_cells * image.dx,
        "entropy_match": ds_error <= tol.entropy * max(1.0, abs(ex.admissibility.delta_s)),
    }
    return {
        "snapshot": k,
        "explosion": ex.model_dump(mode="json"),
        "implosion": im.model_dump(mode="json"),
        "expected_xs": expected_xs,
        "position_error": position_error,
        "position_tolerance": tol.position_cells * image.dx,
        "delta_s_error": ds_error,
        "checks": checks,
        "passed": all(checks.values()),
    }


def pair_fronts(config: ScenarioConfig, explosion: SpacetimeField,
                implosion: SpacetimeField) -> tuple[List[Dict[str, Any]], List[str]]:
    tol = config.tolerances
    ex_fronts = leading_fronts(explosion, tol.contact_detected, tol.zone_threshold, tol.halo)
    im_fronts = leading_fronts(implosion, tol.contact_detected, tol.zone_threshold, tol.halo)
    pairs, failures = [], []
    for k, (ex, im) in enumerate(zip(ex_fronts, im_fronts)):
        t = explosion.snapshots[k].t
        if ex is None and im is None:
            logger.debug(f"t={t}: 两侧都没有激波，跳过")
            continue
        if ex is None or im is None:
            failures.append(f"t={t:.6g}: 只在{'内爆' if ex is None else '爆炸'}一侧检测到激波")
            continue
        pair = _pair(config, k, ex, im, explosion.snapshots[k], implosion.snapshots[k], explosion.eos)
        pairs.append(pair)
        failures += [f"t={t:.6g}: {name} 未通过" for name, ok in pair["checks"].items() if not ok]
    if not pairs and not failures:
        failures.append("没有找到任何成对的激波阵面")
    return pairs, failures


def _fronts_table(pairs: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    rows = []
    for pair in pairs:
        ex, im = pair["explosion"], pair["implosion"]
        rows.append({
            "snapshot": pair["snapshot"],
            "t": ex["t"],
            "xs": ex["xs"],
            "s": ex["s"],
            "t_image": im["t"],
            "xs_image": im["xs"],
            "s_image": im["s"],
            "expected_xs_image": pair["expected_xs"],
            "verdict": ex["admissibility"]["verdict"],
            "verdict_image": im["admissibility"]["verdict"],
            "delta_s": ex["admissibility"]["delta_s"],
            "delta_s_image": im["admissibility"]["delta_s"],
            "passed": pair["passed"],
        })
    return rows


async def cmd_demo_duality(
    config: str = Field(description="爆炸场景配置文件路径"),
    out: str = Field(description="输出目录 (explosion/、implosion/ 与比较文档)"),
) -> LabResult:
    """
    爆炸/内爆对偶的端到端演示

    在 t ∈ [t_start, t_end] 演化爆炸，经 (0, −1, 1, 0) 映为 t' = −1/t 上的内爆，
    逐快照比较最外侧激波：位置 x's = xs/t、RH 残差、熵判定与 ΔS。
    """
    if error := validate_config_path(config):
        return LabResult(success=False, error=error)
    if error := validate_out_dir(out):
        return LabResult(success=False, error=error)

    try:
        cfg = load_config(config)
        if error := validate_symmetric(cfg):
            return LabResult(success=False, error=error)
        out_dir = Path(out)
        explosion = simulate_field(cfg)
        write_field(out_dir / "explosion", explosion, kind="simulate", extra={"stats": explosion.stats})

        dm = drury_mendonca(n=1)
        times = [-1.0 / s.t for s in explosion.snapshots]
        implosion = transform_field(cfg, explosion, dm, target_times=times)
        write_field(out_dir / "implosion", implosion, kind="transform", extra={
            "stats": implosion.stats,
            "group": dm.model_dump(mode="json"),
            "source_kind": "simulate",
        })

        pairs, failures = pair_fronts(cfg, explosion, implosion)
        negative = cfg.run.negative_control
        document = {
            "passed": not failures,
            "negative_control": negative,
            "note": NEGATIVE_CONTROL_NOTE if negative else "",
            "gamma0": explosion.eos.gamma0,
            "n": explosion.eos.n,
            "geometry": explosion.geometry.value,
            "group": dm.model_dump(mode="json"),
            "pairs": pairs,
            "failures": failures,
        }
        doc_path = write_json(out_dir / "demo.json", document)
        write_records_csv(out_dir / "demo_fronts.csv", _fronts_table(pairs))
        logger.info(f"对偶演示: {len(pairs)} 对阵面，{len(failures)} 项未通过")

        if negative and not failures:
            logger.warning("负对照意外通过全部检查")
        if failures:
            message = f"demo-duality: {len(failures)} 项成对检查未通过"
            if negative:
                message += " (负对照，预期失败)"
            return LabResult(success=False, error=LabError(
                error_type=ErrorType.CHECK_FAILED,
                message=message,
                suggestion=NEGATIVE_CONTROL_NOTE if negative else "查看 demo.json 中各对阵面的 checks",
                related_tools=[TOOL_CHECK],
                details={"report": str(doc_path), "negative_control": negative, "failures": failures[:50]},
            ))
        return LabResult(success=True, data={
            "report": str(doc_path),
            "pairs": len(pairs),
            "explosion": str(out_dir / "explosion" / "manifest.json"),
            "implosion": str(out_dir / "implosion" / "manifest.json"),
        })
    except Exception as e:
        logger.error(f"对偶演示失败: {e}")
        return LabResult(success=False, error=parse_numeric_error(e, "demoDuality"))
