# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 变换工具 (transform)
"""

import logging
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
from pydantic import Field

from ..models import (
    LabResult,
    CoverageError,
    GroupElement,
    ScenarioConfig,
    SpacetimeField,
)
from ..core.group import act_coords, inverse_time, make_element, normalize_for_window, singular_time, transform_snapshot
from ..utils import (
    load_config,
    parse_numeric_error,
    read_field,
    validate_config_path,
    validate_manifest_path,
    validate_out_dir,
    write_field,
)


logger = logging.getLogger(__name__)


def group_element(config: ScenarioConfig) -> GroupElement:
    """[group] 段 → 一维约化下的群元素"""
    g = config.group
    return make_element(
        alpha=g.alpha, beta=g.beta, gamma=g.gamma, delta=g.delta,
        R=[[g.rotation]], v=[g.velocity], a=[g.shift],
    )


def image_times(g: GroupElement, field: SpacetimeField) -> List[float]:
    """源快照时刻在 t' = (αt+β)/(γt+δ) 下的像"""
    normalize_for_window(g, *field.window())
    _, tp = act_coords(g, np.zeros(len(field.snapshots)), field.times)
    return [float(t) for t in tp]


def common_target_grid(g: GroupElement, field: SpacetimeField, target_times: List[float],
                       cells: int) -> Tuple[float, float, int]:
    """各目标时刻源网格像区间的交集，作为统一的目标网格"""
    pre = inverse_time(g.sl2, np.asarray(target_times, dtype=float))
    g = normalize_for_window(g, float(np.min(pre)), float(np.max(pre)))
    r = float(g.gal.rotation[0, 0])
    v = float(g.gal.velocity[0])
    a = float(g.gal.shift[0])
    lo, hi = -np.inf, np.inf
    for t in pre:
        ref = field.snapshots[field.nearest(float(t))]
        ends = (r * np.array([ref.x_left, ref.x_right]) + v * t + a) / g.sl2.q(t)
        lo, hi = max(lo, float(ends.min())), min(hi, float(ends.max()))
    if not lo < hi:
        raise CoverageError(
            "各目标时刻的源网格像区间没有公共部分",
            parameter="group.target_cells",
            suggestion="去掉 target_cells 使用逐时刻的像网格，或缩短目标时间窗",
            required_window={"t": [float(np.min(pre)), float(np.max(pre))]},
        )
    return lo, hi, cells


def transform_field(config: ScenarioConfig, field: SpacetimeField,
                    g: Optional[GroupElement] = None,
                    target_times: Optional[List[float]] = None) -> SpacetimeField:
    g = g or group_element(config)
    if not field.snapshots:
        return field
    times = target_times or sorted(config.group.target_times) or image_times(g, field)
    grid = None
    if config.group.target_cells is not None:
        grid = common_target_grid(g, field, times, config.group.target_cells)
    tol = config.tolerances
    return transform_snapshot(
        g, field, times,
        target_grid=grid,
        interpolation=config.group.interpolation,
        zone_threshold=tol.zone_threshold,
        halo=tol.halo,
        strict=not config.run.negative_control,
    )


async def cmd_transform(
    config: str = Field(description="场景配置文件路径 ([group] 段给出群元素)"),
    manifest: str = Field(description="输入清单 JSON (simulate / riemann / transform 的输出)"),
    out: str = Field(description="输出目录"),
) -> LabResult:
    """
    对清单中的时空场施加 SL(2,R)∧Galilei 元素

    输出清单记录奇异时刻 −δ/γ 与映射后的时间窗。
    时间窗跨越奇异时刻 (γt+δ 变号) 时拒绝执行。
    """
    if error := validate_config_path(config):
        return LabResult(success=False, error=error)
    if error := validate_manifest_path(manifest):
        return LabResult(success=False, error=error)
    if error := validate_out_dir(out):
        return LabResult(success=False, error=error)

    try:
        cfg = load_config(config)
        field, source = read_field(manifest)
        g = group_element(cfg)
        result = transform_field(cfg, field, g)
        stats = dict(result.stats)
        if not result.snapshots:
            logger.warning("输入场为空，输出空清单")
            stats = {"singular_time": singular_time(g.sl2)}
        path = write_field(out, result, kind="transform", extra={
            "stats": stats,
            "group": g.model_dump(mode="json"),
            "source_manifest": str(Path(manifest)),
            "source_kind": source.extra.get("source_kind", source.kind),
        })
        logger.info(f"变换完成: {len(result.snapshots)} 个快照 → {path}")
        return LabResult(success=True, data={
            "manifest": str(path),
            "snapshots": len(result.snapshots),
            "singular_time": stats.get("singular_time"),
            "mapped_window": stats.get("mapped_window"),
        })
    except Exception as e:
        logger.error(f"变换失败: {e}")
        return LabResult(success=False, error=parse_numeric_error(e, "transform"))
