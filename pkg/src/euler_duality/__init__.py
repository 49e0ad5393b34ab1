# -*- coding: utf-8 -*-
"""
Euler Duality Lab

可压缩 Euler 方程的 SL(2,R)∧Galilei 对称性验证实验室：精确 Riemann 解、
有限体积求解器、群作用下的场变换、对偶 Rankine-Hugoniot 条件与熵容许性。
"""

from .models import LabResult, LabError, ErrorType, Polytrope, Primitive
from .tools import (
    cmd_riemann,
    cmd_simulate,
    cmd_transform,
    cmd_check,
    cmd_demo_duality,
)

__version__ = "0.1.0"

__all__ = [
    "LabResult",
    "LabError",
    "ErrorType",
    "Polytrope",
    "Primitive",
    "cmd_riemann",
    "cmd_simulate",
    "cmd_transform",
    "cmd_check",
    "cmd_demo_duality",
]
