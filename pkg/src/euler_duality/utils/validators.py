# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 参数验证模块
"""

from pathlib import Path
from typing import Optional

from ..models import ErrorType, LabError, ScenarioConfig
from .errors import TOOL_SIMULATE, TOOL_TRANSFORM


def validate_config_path(config: Optional[str]) -> Optional[LabError]:
    """验证配置文件路径"""
    if not config:
        return LabError(
            error_type=ErrorType.MISSING_PARAMETER,
            parameter="config",
            message="缺少必需参数: config (场景配置文件)",
            suggestion="请通过 --config 指定 key = value 格式的配置文件"
        )
    if not Path(config).is_file():
        return LabError(
            error_type=ErrorType.INVALID_PARAMETER,
            parameter="config",
            message=f"配置文件不存在: '{config}'",
            suggestion="请检查路径"
        )
    return None


def validate_manifest_path(manifest: Optional[str]) -> Optional[LabError]:
    """验证输入清单路径"""
    if not manifest:
        return LabError(
            error_type=ErrorType.MISSING_PARAMETER,
            parameter="manifest",
            message="缺少必需参数: manifest (输入清单 JSON)",
            suggestion="请先运行 simulate 生成清单",
            related_tools=[TOOL_SIMULATE]
        )
    if not Path(manifest).is_file():
        return LabError(
            error_type=ErrorType.INVALID_PARAMETER,
            parameter="manifest",
            message=f"清单文件不存在: '{manifest}'",
            suggestion="请先运行 simulate 或 transform 生成清单",
            related_tools=[TOOL_SIMULATE, TOOL_TRANSFORM]
        )
    return None


def validate_out_dir(out: Optional[str]) -> Optional[LabError]:
    """输出目录可以不存在，但不能是普通文件"""
    if not out:
        return LabError(
            error_type=ErrorType.MISSING_PARAMETER,
            parameter="out",
            message="缺少必需参数: out (输出目录)",
            suggestion="请通过 --out 指定输出目录"
        )
    if Path(out).exists() and not Path(out).is_dir():
        return LabError(
            error_type=ErrorType.INVALID_PARAMETER,
            parameter="out",
            message=f"输出路径已存在且不是目录: '{out}'",
            suggestion="请换一个输出目录"
        )
    return None


def validate_symmetric(config: ScenarioConfig) -> Optional[LabError]:
    """对偶验证要求对称指数 γ₀ = 1 + 2/n，负对照显式放行"""
    eos = config.eos.polytrope()
    if eos.symmetric or config.run.negative_control:
        return None
    return LabError(
        error_type=ErrorType.PRECONDITION_FAILED,
        parameter="eos.gamma0",
        message=f"γ₀={eos.gamma0} 不是 n={eos.n} 的对称指数 {1.0 + 2.0 / eos.n!r}",
        suggestion="去掉 gamma0 使用对称值，或设置 [run] negative_control = true"
    )


def validate_seed(seed: Optional[int]) -> Optional[LabError]:
    if seed is not None and not 0 <= seed < 2 ** 64:
        return LabError(
            error_type=ErrorType.INVALID_PARAMETER,
            parameter="seed",
            message=f"seed 必须是 64 位无符号整数: {seed}",
            suggestion="请使用 0 到 2^64−1 之间的整数"
        )
    return None
