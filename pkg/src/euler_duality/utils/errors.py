# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 错误处理模块

包含工具建议常量和数值异常解析函数
"""

import logging
from contextlib import contextmanager
from typing import Iterator, List

from pydantic import ValidationError

from ..models import ErrorType, LabError, LabException, ToolSuggestion


logger = logging.getLogger(__name__)


# =============================================================================
# 工具建议常量 - 用于错误响应中引导调用方
# =============================================================================
TOOL_RIEMANN = ToolSuggestion(
    tool_name="riemann",
    description="求解并采样精确 Riemann 问题",
    example_params={"config": "scenarios/sod.cfg"}
)

TOOL_SIMULATE = ToolSuggestion(
    tool_name="simulate",
    description="运行有限体积求解器，生成快照与清单",
    example_params={"config": "scenarios/sod.cfg"}
)

TOOL_TRANSFORM = ToolSuggestion(
    tool_name="transform",
    description="对清单中的时空场施加群元素",
    example_params={"config": "scenarios/dm.cfg", "manifest": "out/manifest.json"}
)

TOOL_CHECK = ToolSuggestion(
    tool_name="check",
    description="检测阵面并验证 RH、对偶 RH、容许性与荷平衡",
    example_params={"config": "scenarios/sod.cfg", "manifest": "out/manifest.json"}
)

TOOL_DEMO_DUALITY = ToolSuggestion(
    tool_name="demoDuality",
    description="爆炸 → 内爆的端到端对偶演示",
    example_params={"config": "scenarios/blast.cfg"}
)


_SUGGESTIONS = {
    ErrorType.SINGULAR_TIME: ("将时间窗移到 −δ/γ 的一侧，如 Drury-Mendonça 使用 t ∈ [1, 2]", [TOOL_SIMULATE]),
    ErrorType.COVERAGE_ERROR: ("扩大源场的空间区域或时间窗以覆盖目标原像", [TOOL_SIMULATE]),
    ErrorType.VACUUM: ("减小左右速度差或提高初始压强", [TOOL_RIEMANN]),
    ErrorType.NUMERICAL_ABORT: ("降低 cfl 或改用 godunov 格式", [TOOL_SIMULATE]),
    ErrorType.CONFIG_ERROR: ("检查配置文件对应行的键名与取值", []),
}


def parse_numeric_error(error: Exception, operation: str) -> LabError:
    """
    将数值核心或 I/O 层抛出的异常转换为结构化的 LabError
    """
    if isinstance(error, LabException):
        lab_error = error.error
        suggestion, tools = _SUGGESTIONS.get(lab_error.error_type, ("", []))
        update = {}
        if not lab_error.suggestion and suggestion:
            update["suggestion"] = suggestion
        if lab_error.related_tools is None and tools:
            update["related_tools"] = tools
        return lab_error.model_copy(update=update) if update else lab_error

    if isinstance(error, ValidationError):
        first = error.errors()[0]
        return LabError(
            error_type=ErrorType.INVALID_PARAMETER,
            parameter=".".join(str(p) for p in first.get("loc", ())) or None,
            message=f"{operation}: 参数校验失败: {first.get('msg', error)}",
            suggestion="请检查参数取值范围",
        )

    if isinstance(error, FileNotFoundError):
        return LabError(
            error_type=ErrorType.IO_ERROR,
            parameter=getattr(error, "filename", None),
            message=f"文件不存在: {error.filename}",
            suggestion="清单需由 simulate 或 transform 生成",
            related_tools=[TOOL_SIMULATE],
        )

    if isinstance(error, OSError):
        return LabError(
            error_type=ErrorType.IO_ERROR,
            message=f"文件读写失败: {error}",
            suggestion="请检查输出目录权限",
        )

    if isinstance(error, (FloatingPointError, ZeroDivisionError)):
        return LabError(
            error_type=ErrorType.NUMERICAL_ABORT,
            message=f"{operation}: 浮点运算失败: {error}",
            suggestion="降低 cfl 或检查初始状态",
        )

    # 默认错误处理
    logger.exception(f"{operation} 出现未分类的异常")
    return LabError(
        error_type=ErrorType.PRECONDITION_FAILED,
        message=f"{operation} 失败: {error}",
        suggestion="请检查输入参数",
    )


# =============================================================================
# --strict：运行期间的 WARNING 记录视为失败
# =============================================================================
class WarningCollector(logging.Handler):
    """挂在根 logger 上，收集 WARNING 及以上级别的消息"""

    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.messages: List[str] = []

    def emit(self, record: logging.LogRecord) -> None:
        self.messages.append(record.getMessage())


@contextmanager
def collect_warnings() -> Iterator[WarningCollector]:
    collector = WarningCollector()
    root = logging.getLogger()
    root.addHandler(collector)
    try:
        yield collector
    finally:
        root.removeHandler(collector)


def strict_failure(messages: List[str], operation: str) -> LabError:
    return LabError(
        error_type=ErrorType.CHECK_FAILED,
        message=f"{operation}: --strict 模式下出现 {len(messages)} 条警告",
        suggestion="去掉 --strict 或消除警告来源",
        details={"warnings": messages[:50]},
    )
