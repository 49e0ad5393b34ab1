# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 数值核心

euler (状态方程) → noether (守恒流) → group (对称群作用) → riemann (精确解)
→ shock (跳跃条件) → fvm (有限体积求解器)
"""

from . import euler, noether, group, riemann, shock, fvm

__all__ = ["euler", "noether", "group", "riemann", "shock", "fvm"]
