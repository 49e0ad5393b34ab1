# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 工具函数包导出
"""

from .errors import (
    TOOL_RIEMANN,
    TOOL_SIMULATE,
    TOOL_TRANSFORM,
    TOOL_CHECK,
    TOOL_DEMO_DUALITY,
    WarningCollector,
    collect_warnings,
    parse_numeric_error,
    strict_failure,
)

from .validators import (
    validate_config_path,
    validate_manifest_path,
    validate_out_dir,
    validate_symmetric,
    validate_seed,
)

from .io import (
    SCHEMA_VERSION,
    Manifest,
    SnapshotEntry,
    parse_config,
    load_config,
    emit_config,
    write_csv,
    read_csv,
    write_records_csv,
    write_snapshot_csv,
    write_json,
    write_field,
    read_field,
)

__all__ = [
    # 错误处理
    "TOOL_RIEMANN",
    "TOOL_SIMULATE",
    "TOOL_TRANSFORM",
    "TOOL_CHECK",
    "TOOL_DEMO_DUALITY",
    "WarningCollector",
    "collect_warnings",
    "parse_numeric_error",
    "strict_failure",
    # 参数验证
    "validate_config_path",
    "validate_manifest_path",
    "validate_out_dir",
    "validate_symmetric",
    "validate_seed",
    # 文件格式
    "SCHEMA_VERSION",
    "Manifest",
    "SnapshotEntry",
    "parse_config",
    "load_config",
    "emit_config",
    "write_csv",
    "read_csv",
    "write_records_csv",
    "write_snapshot_csv",
    "write_json",
    "write_field",
    "read_field",
]
