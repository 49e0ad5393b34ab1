# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 数据模型基础模块

- 结构化错误类型
- 统一响应模型
- 数值核心抛出的异常族 (携带结构化错误)
"""

from enum import Enum
from typing import Dict, Any, Optional, List

from pydantic import Field, BaseModel, ConfigDict


# =============================================================================
# 错误类型枚举
# =============================================================================
class ErrorType(str, Enum):
    """错误类型枚举，CLI 据此决定退出码"""
    MISSING_PARAMETER = "MISSING_PARAMETER"          # 必需参数缺失
    INVALID_PARAMETER = "INVALID_PARAMETER"          # 参数格式或值无效
    CONFIG_ERROR = "CONFIG_ERROR"                    # 配置文件语法/语义错误
    PRECONDITION_FAILED = "PRECONDITION_FAILED"      # 前置条件不满足
    DOMAIN_ERROR = "DOMAIN_ERROR"                    # 状态越出定义域 (ρ, p ≤ 0 等)
    SINGULAR_TIME = "SINGULAR_TIME"                  # γt+δ = 0 或符号违例
    COVERAGE_ERROR = "COVERAGE_ERROR"                # 源场未覆盖原像区域
    UNSUPPORTED_FAMILY = "UNSUPPORTED_FAMILY"        # 当前维数下不存在的流族
    DISCONTINUITY_ZONE = "DISCONTINUITY_ZONE"        # 求值点落入间断区
    VACUUM = "VACUUM"                                # Riemann 问题生成真空
    NUMERICAL_ABORT = "NUMERICAL_ABORT"              # 数值演化失败
    IO_ERROR = "IO_ERROR"                            # 文件读写错误
    CHECK_FAILED = "CHECK_FAILED"                    # 验证未通过容差


# =============================================================================
# 基础模型
# =============================================================================
class MyBaseModel(BaseModel):
    model_config = ConfigDict(json_dumps_params={'ensure_ascii': False})


class ToolSuggestion(MyBaseModel):
    """工具建议模型 - 引导调用方使用正确的子命令"""
    tool_name: str = Field(description="建议调用的工具名称")
    description: str = Field(description="调用该工具的原因说明")
    example_params: Optional[Dict[str, Any]] = Field(default=None, description="示例参数")


class LabError(MyBaseModel):
    """
    结构化错误响应

    包含错误类型、可读消息、修复建议以及相关工具，
    details 中放置数值诊断 (奇异时刻、所需源窗口、单元诊断等)。
    """
    error_type: ErrorType = Field(description="错误类型")
    message: str = Field(description="人类可读的错误描述")
    parameter: Optional[str] = Field(default=None, description="出错的参数名")
    suggestion: str = Field(default="", description="解决方案建议")
    related_tools: Optional[List[ToolSuggestion]] = Field(
        default=None,
        description="相关工具推荐"
    )
    details: Optional[Dict[str, Any]] = Field(default=None, description="数值诊断信息")

    def __str__(self) -> str:
        parts = [f"[{self.error_type.value}] {self.message}"]
        if self.suggestion:
            parts.append(f"建议: {self.suggestion}")
        if self.details:
            parts.append(f"诊断: {self.details}")
        if self.related_tools:
            tools_info = ", ".join([f"{t.tool_name}({t.description})" for t in self.related_tools])
            parts.append(f"相关工具: {tools_info}")
        return "\n".join(parts)


class LabResult(MyBaseModel):
    """统一响应模型 - 所有工具与子命令都返回它"""
    success: bool = Field(description="操作是否成功")
    data: Optional[Any] = Field(default=None, description="成功时的数据")
    error: Optional[LabError] = Field(default=None, description="失败时的错误信息")
    request_id: Optional[str] = Field(default=None, description="请求 ID，用于追踪")


# =============================================================================
# 异常族 - 数值核心直接抛出，工具层转换为 LabResult
# =============================================================================
class LabException(Exception):
    """携带 LabError 的异常基类"""

    error_type: ErrorType = ErrorType.PRECONDITION_FAILED

    def __init__(self, message: str, *, parameter: Optional[str] = None,
                 suggestion: str = "", **details: Any):
        super().__init__(message)
        self.error = LabError(
            error_type=self.error_type,
            message=message,
            parameter=parameter,
            suggestion=suggestion,
            details=details or None,
        )


class DomainError(LabException):
    error_type = ErrorType.DOMAIN_ERROR


class SingularTimeError(LabException):
    """γt+δ = 0 (或窗口内符号改变)，details["singular_time"] 给出被排除的时刻"""
    error_type = ErrorType.SINGULAR_TIME


class CoverageError(LabException):
    """details["required_window"] 给出所需的源场窗口"""
    error_type = ErrorType.COVERAGE_ERROR


class UnsupportedFamilyError(LabException):
    error_type = ErrorType.UNSUPPORTED_FAMILY


class DiscontinuityZoneError(LabException):
    error_type = ErrorType.DISCONTINUITY_ZONE


class VacuumError(LabException):
    error_type = ErrorType.VACUUM


class NumericalAbort(LabException):
    error_type = ErrorType.NUMERICAL_ABORT


class ConfigError(LabException):
    """details["line"] 给出出错行号"""
    error_type = ErrorType.CONFIG_ERROR
