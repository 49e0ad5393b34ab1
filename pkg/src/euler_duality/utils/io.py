# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 文件格式

- 场景配置：`key = value` 行，`#` 注释，[section] 头 ([state] 可重复)
- CSV：固定表头，浮点数 17 位有效数字
- JSON 清单：schema_version "1"，列出每个快照对应的 CSV
"""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import Field, ValidationError

from ..models import (
    MyBaseModel,
    ConfigError,
    ScenarioConfig,
    Polytrope,
    Snapshot,
    SpacetimeField,
    Geometry,
    Boundary,
)
from ..core.euler import chi_arrays, relative_entropy


logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
FLOAT_FORMAT = "%.17g"

_SECTIONS = ("eos", "grid", "initial", "state", "group", "run", "tolerances", "sweep")


# =============================================================================
# 场景配置
# =============================================================================
def parse_config(text: str, source: str = "<config>") -> ScenarioConfig:
    """解析配置文本；错误携带行号 (details["line"])"""
    data: Dict[str, Any] = {}
    lines: Dict[Tuple, int] = {}
    section: Optional[str] = None
    target: Optional[Dict[str, Any]] = None
    seen = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"{source}:{lineno}: 段头缺少 ']'", parameter="section", line=lineno)
            section = line[1:-1].strip().lower()
            if section not in _SECTIONS:
                raise ConfigError(
                    f"{source}:{lineno}: 未知段 [{section}]",
                    parameter="section",
                    suggestion=f"可用段: {', '.join(_SECTIONS)}",
                    line=lineno,
                )
            if section == "state":
                target = {}
                data.setdefault("states", []).append(target)
                lines[("states", len(data["states"]) - 1)] = lineno
            else:
                if section in seen:
                    raise ConfigError(f"{source}:{lineno}: 段 [{section}] 重复", parameter=section, line=lineno)
                seen.add(section)
                target = data.setdefault(section, {})
                lines[(section,)] = lineno
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: 缺少 '='", parameter="line", line=lineno)
        if target is None:
            raise ConfigError(f"{source}:{lineno}: 键值对出现在任何段之前", parameter="line", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key in target:
            raise ConfigError(f"{source}:{lineno}: 键 '{key}' 重复", parameter=key, line=lineno)
        target[key] = _parse_value(value)
        if section == "state":
            lines[("states", len(data["states"]) - 1, key)] = lineno
        else:
            lines[(section, key)] = lineno

    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = tuple(first.get("loc", ()))
        lineno = _line_for(loc, lines)
        where = f"{source}:{lineno}" if lineno else source
        raise ConfigError(
            f"{where}: {'.'.join(str(p) for p in loc)}: {first.get('msg')}",
            parameter=".".join(str(p) for p in loc) or None,
            line=lineno,
        ) from e


def _parse_value(value: str):
    """逗号分隔的值解析为列表，空值为空列表"""
    if value == "":
        return []
    if "," in value:
        return [v.strip() for v in value.split(",") if v.strip()]
    return value


def _line_for(loc: Tuple, lines: Dict[Tuple, int]) -> Optional[int]:
    for n in range(len(loc), 0, -1):
        if loc[:n] in lines:
            return lines[loc[:n]]
    return None


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), source=str(path))


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        # 单元素列表补尾逗号以与标量区分
        items = ", ".join(_format_value(v) for v in value)
        return items + "," if len(value) == 1 else items
    return str(value)


def _emit_section(name: str, model: MyBaseModel) -> List[str]:
    out = [f"[{name}]"]
    for key in type(model).model_fields:
        value = getattr(model, key)
        if value is None:
            continue
        out.append(f"{key} = {_format_value(value)}")
    return out


def emit_config(config: ScenarioConfig) -> str:
    """emit → parse 为恒等映射"""
    blocks = [
        _emit_section("eos", config.eos),
        _emit_section("grid", config.grid),
        _emit_section("initial", config.initial),
        *(_emit_section("state", s) for s in config.states),
        _emit_section("group", config.group),
        _emit_section("run", config.run),
        _emit_section("tolerances", config.tolerances),
        _emit_section("sweep", config.sweep),
    ]
    return "\n\n".join("\n".join(b) for b in blocks) + "\n"


# =============================================================================
# CSV
# =============================================================================
def write_csv(path: Union[str, Path], header: Sequence[str], columns: Sequence[np.ndarray]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([np.asarray(c, dtype=float) for c in columns]) if columns else np.empty((0, 0))
    np.savetxt(path, table, fmt=FLOAT_FORMAT, delimiter=",", header=",".join(header), comments="")
    return path


def read_csv(path: Union[str, Path]) -> Dict[str, np.ndarray]:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if table.size == 0:
        return {name: np.empty(0) for name in header}
    return {name: table[:, i] for i, name in enumerate(header)}


def write_records_csv(path: Union[str, Path], records: Sequence[Dict[str, Any]]) -> Path:
    """字典记录 → CSV；数值列 17 位有效数字，其他列原样输出"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not records:
        path.write_text("", encoding="utf-8")
        return path
    header = list(records[0].keys())
    rows = [",".join(header)]
    for rec in records:
        cells = []
        for key in header:
            value = rec.get(key)
            if isinstance(value, bool) or value is None:
                cells.append(str(value).lower())
            elif isinstance(value, (float, np.floating)):
                cells.append(FLOAT_FORMAT % value)
            else:
                cells.append(str(value))
        rows.append(",".join(cells))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


SNAPSHOT_HEADER = ("x", "rho", "u", "p", "chi", "S_rel")


def write_snapshot_csv(path: Union[str, Path], snapshot: Snapshot, eos: Polytrope) -> Path:
    """变换场额外输出 zone 列 (原像落入间断区为 1)"""
    chi = chi_arrays(snapshot.rho, snapshot.p, eos)
    header = list(SNAPSHOT_HEADER)
    columns = [snapshot.centers, snapshot.rho, snapshot.u, snapshot.p, chi, relative_entropy(chi, eos)]
    if snapshot.zone_mask is not None:
        header.append("zone")
        columns.append(snapshot.zone_mask.astype(float))
    return write_csv(path, header, columns)


# =============================================================================
# JSON 清单
# =============================================================================
class SnapshotEntry(MyBaseModel):
    t: float
    file: str
    cells: int
    x_left: float
    x_right: float
    zone_cells: int = Field(default=0, description="原像落入间断区的单元数")


class Manifest(MyBaseModel):
    schema_version: str = Field(default=SCHEMA_VERSION)
    kind: str = Field(description="riemann / simulate / transform")
    gamma0: float
    n: int
    geometry: Geometry
    boundary_left: Boundary = Boundary.TRANSMISSIVE
    boundary_right: Boundary = Boundary.TRANSMISSIVE
    snapshots: List[SnapshotEntry] = Field(default_factory=list)
    extra: Dict[str, Any] = Field(default_factory=dict)


def write_json(path: Union[str, Path], payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(payload, MyBaseModel):
        text = payload.model_dump_json(indent=2)
    else:
        text = json.dumps(payload, indent=2, ensure_ascii=False, default=_json_default)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def _json_default(value: Any):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, MyBaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, Enum):
        return value.value
    raise TypeError(f"无法序列化 {type(value).__name__}")


def write_field(out_dir: Union[str, Path], field: SpacetimeField, kind: str,
                extra: Optional[Dict[str, Any]] = None, prefix: str = "snapshot") -> Path:
    """每个快照一个 CSV，加上 manifest.json；返回清单路径"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for k, snap in enumerate(field.snapshots):
        name = f"{prefix}_{k:04d}.csv"
        write_snapshot_csv(out_dir / name, snap, field.eos)
        zones = 0 if snap.zone_mask is None else int(np.count_nonzero(snap.zone_mask))
        entries.append(SnapshotEntry(
            t=snap.t, file=name, cells=snap.cells, x_left=snap.x_left, x_right=snap.x_right,
            zone_cells=zones,
        ))
    manifest = Manifest(
        kind=kind,
        gamma0=field.eos.gamma0,
        n=field.eos.n,
        geometry=field.geometry,
        boundary_left=field.boundary_left,
        boundary_right=field.boundary_right,
        snapshots=entries,
        extra=json.loads(json.dumps(extra or {}, default=_json_default)),
    )
    path = write_json(out_dir / "manifest.json", manifest)
    logger.info(f"写出 {len(entries)} 个快照与清单 {path}")
    return path


def read_field(manifest_path: Union[str, Path]) -> Tuple[SpacetimeField, Manifest]:
    """读取清单及其引用的 CSV，重建 SpacetimeField"""
    manifest_path = Path(manifest_path)
    manifest = Manifest.model_validate_json(manifest_path.read_text(encoding="utf-8"))
    if manifest.schema_version != SCHEMA_VERSION:
        raise ConfigError(
            f"不支持的清单版本 {manifest.schema_version}",
            parameter="schema_version",
        )
    snapshots = []
    for entry in manifest.snapshots:
        table = read_csv(manifest_path.parent / entry.file)
        snapshots.append(Snapshot(
            t=entry.t, x_left=entry.x_left, x_right=entry.x_right,
            rho=table["rho"], u=table["u"], p=table["p"], geometry=manifest.geometry,
            zone_mask=table["zone"] > 0.5 if "zone" in table else None,
        ))
    field = SpacetimeField(
        snapshots=snapshots,
        eos=Polytrope(gamma0=manifest.gamma0, n=manifest.n),
        geometry=manifest.geometry,
        boundary_left=manifest.boundary_left,
        boundary_right=manifest.boundary_right,
    )
    return field, manifest
