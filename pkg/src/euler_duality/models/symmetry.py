# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 对称群元素模型

SL(2,R) 元素、静态 Galilei 元素以及二者的半直积元素。
群运算本身 (复合、求逆、作用) 在 core.group 中实现。
"""

import math
from typing import Tuple

import numpy as np
from pydantic import Field, ConfigDict, field_validator, model_validator

from .base import MyBaseModel, DomainError


DETERMINANT_TOLERANCE = 1e-12
ORTHOGONALITY_TOLERANCE = 1e-12

# 流栈顺序 (一维约化)
STACK_LABELS: Tuple[str, ...] = ("rho", "K", "P", "A", "D", "H")


class Sl2Element(MyBaseModel):
    """SL(2,R) 元素 (α, β, γ, δ)，αδ − βγ = 1"""
    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float
    gamma: float
    delta: float

    @model_validator(mode="before")
    @classmethod
    def _renormalize(cls, data):
        if not isinstance(data, dict):
            return data
        a, b, c, d = (float(data[k]) for k in ("alpha", "beta", "gamma", "delta"))
        det = a * d - b * c
        if not det > 0.0:
            raise DomainError(
                f"SL(2,R) 元素行列式必须为正才能归一化: αδ−βγ={det}",
                parameter="alpha,beta,gamma,delta",
                suggestion="检查 (α, β, γ, δ)，例如 Drury-Mendonça 元素 (0, -1, 1, 0)",
            )
        scale = math.sqrt(det)
        return {"alpha": a / scale, "beta": b / scale, "gamma": c / scale, "delta": d / scale}

    @model_validator(mode="after")
    def _check_determinant(self) -> "Sl2Element":
        if abs(self.determinant - 1.0) > DETERMINANT_TOLERANCE:
            raise DomainError(f"αδ−βγ 偏离 1: {self.determinant}")
        return self

    @property
    def determinant(self) -> float:
        return self.alpha * self.delta - self.beta * self.gamma

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta], [self.gamma, self.delta]])

    def q(self, t):
        """共形因子 γt + δ"""
        return self.gamma * t + self.delta

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "Sl2Element":
        return cls(alpha=m[0, 0], beta=m[0, 1], gamma=m[1, 0], delta=m[1, 1])


class GalileiElement(MyBaseModel):
    """静态 Galilei 元素 x → R x + v t + a"""
    model_config = ConfigDict(frozen=True)

    R: Tuple[Tuple[float, ...], ...] = Field(description="正交矩阵")
    v: Tuple[float, ...] = Field(description="boost 速度")
    a: Tuple[float, ...] = Field(description="平移向量")

    @field_validator("R", mode="before")
    @classmethod
    def _coerce_rotation(cls, value):
        m = np.atleast_2d(np.asarray(value, dtype=float))
        return tuple(tuple(float(x) for x in row) for row in m)

    @field_validator("v", "a", mode="before")
    @classmethod
    def _coerce_vector(cls, value):
        return tuple(float(x) for x in np.ravel(np.asarray(value, dtype=float)))

    @model_validator(mode="after")
    def _check_orthogonal(self) -> "GalileiElement":
        r = self.rotation
        n = r.shape[0]
        if r.shape != (n, n) or len(self.v) != n or len(self.a) != n:
            raise DomainError(
                f"Galilei 元素维数不一致: R{r.shape}, v{len(self.v)}, a{len(self.a)}",
                parameter="R",
            )
        if np.max(np.abs(r.T @ r - np.eye(n))) > ORTHOGONALITY_TOLERANCE:
            raise DomainError("R 不是正交矩阵 (RᵀR ≠ I)", parameter="R")
        return self

    @property
    def n(self) -> int:
        return len(self.v)

    @property
    def rotation(self) -> np.ndarray:
        return np.asarray(self.R, dtype=float)

    @property
    def velocity(self) -> np.ndarray:
        return np.asarray(self.v, dtype=float)

    @property
    def shift(self) -> np.ndarray:
        return np.asarray(self.a, dtype=float)

    @property
    def is_identity(self) -> bool:
        return (np.array_equal(self.rotation, np.eye(self.n))
                and not np.any(self.velocity) and not np.any(self.shift))

    @classmethod
    def identity(cls, n: int) -> "GalileiElement":
        return cls(R=np.eye(n), v=np.zeros(n), a=np.zeros(n))


class GroupElement(MyBaseModel):
    """SL(2,R)∧G 元素：先作用 Galilei，再作用 SL(2,R)"""
    model_config = ConfigDict(frozen=True)

    sl2: Sl2Element
    gal: GalileiElement

    @property
    def n(self) -> int:
        return self.gal.n


class RepresentationMatrix(MyBaseModel):
    """流栈 (ρ, K, P, A, D, H) 上的 6×6 表示矩阵"""
    model_config = ConfigDict(frozen=True)

    entries: Tuple[Tuple[float, ...], ...]
    printed: bool = Field(default=False, description="是否为原文印刷版 (A 行首项为 α)")
    labels: Tuple[str, ...] = STACK_LABELS

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.array))
