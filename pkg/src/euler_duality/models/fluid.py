# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 流体状态模型

Polytrope / Primitive / Conserved / EntropyState 均为不可变值对象。
"""

from typing import Tuple

import numpy as np
from pydantic import Field, ConfigDict, field_validator, model_validator

from .base import MyBaseModel, DomainError


SYMMETRIC_TOLERANCE = 1e-14


class Polytrope(MyBaseModel):
    """多方状态方程 p = (γ₀ − 1) ε"""
    model_config = ConfigDict(frozen=True)

    gamma0: float = Field(description="多方指数 γ₀ (> 1)")
    n: int = Field(default=1, ge=1, le=3, description="空间维数")

    @model_validator(mode="after")
    def _check_gamma(self) -> "Polytrope":
        if not self.gamma0 > 1.0:
            raise DomainError(f"多方指数必须大于 1: γ₀={self.gamma0}", parameter="gamma0")
        return self

    @property
    def symmetric(self) -> bool:
        """γ₀ = 1 + 2/n 时方程具有完整的 SL(2,R) 不变性"""
        return abs(self.gamma0 - (1.0 + 2.0 / self.n)) <= SYMMETRIC_TOLERANCE

    @classmethod
    def symmetric_for(cls, n: int) -> "Polytrope":
        return cls(gamma0=1.0 + 2.0 / n, n=n)


class Primitive(MyBaseModel):
    """原始变量 (ρ, u, p)，u 为 n 分量 (径向/一维约化下为单分量)"""
    model_config = ConfigDict(frozen=True)

    rho: float = Field(description="质量密度 (> 0)")
    u: Tuple[float, ...] = Field(description="速度分量")
    p: float = Field(description="压强 (> 0)")

    @field_validator("u", mode="before")
    @classmethod
    def _coerce_velocity(cls, value):
        if np.ndim(value) == 0:
            return (float(value),)
        return tuple(float(v) for v in np.ravel(value))

    @model_validator(mode="after")
    def _check_positive(self) -> "Primitive":
        if not (self.rho > 0.0 and self.p > 0.0):
            raise DomainError(
                f"真空态被排除: ρ={self.rho}, p={self.p}",
                parameter="rho" if not self.rho > 0.0 else "p",
                suggestion="ρ 与 p 必须严格为正",
            )
        return self

    @property
    def velocity(self) -> np.ndarray:
        return np.asarray(self.u, dtype=float)

    @property
    def ux(self) -> float:
        """一维/径向约化下的速度"""
        return self.u[0]


class Conserved(MyBaseModel):
    """守恒变量 (ρ, ρu, E)"""
    model_config = ConfigDict(frozen=True)

    rho: float = Field(description="质量密度")
    mom: Tuple[float, ...] = Field(description="动量密度 ρu")
    E: float = Field(description="总能量密度 ½ρ|u|² + ε")

    @field_validator("mom", mode="before")
    @classmethod
    def _coerce_momentum(cls, value):
        if np.ndim(value) == 0:
            return (float(value),)
        return tuple(float(v) for v in np.ravel(value))

    @property
    def momentum(self) -> np.ndarray:
        return np.asarray(self.mom, dtype=float)


class EntropyState(MyBaseModel):
    """熵簿记：χ = ε/ρ^γ₀，S_rel = C_v log χ"""
    model_config = ConfigDict(frozen=True)

    chi: float = Field(gt=0.0, description="熵相关标量 χ")
    s_rel: float = Field(description="相对比熵 C_v log χ")
    c_v: float = Field(gt=0.0, description="定容比热 R_gas/(γ₀−1)")
