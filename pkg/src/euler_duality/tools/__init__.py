# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 工具包导出
"""

from .solve import (
    cmd_riemann,
    cmd_simulate,
)

from .transform import (
    cmd_transform,
)

from .check import (
    cmd_check,
)

from .demo import (
    cmd_demo_duality,
)

__all__ = [
    # 求解工具
    "cmd_riemann",
    "cmd_simulate",
    # 变换工具
    "cmd_transform",
    # 验证工具
    "cmd_check",
    "cmd_demo_duality",
]
