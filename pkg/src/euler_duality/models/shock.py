# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 守恒流与激波模型
"""

from enum import Enum
from typing import Optional, List, Tuple, Dict, Any

import numpy as np
from pydantic import Field, ConfigDict, model_validator

from .base import MyBaseModel, DomainError, UnsupportedFamilyError
from .fluid import Primitive


# =============================================================================
# 守恒流族
# =============================================================================
class FamilyKind(str, Enum):
    MASS = "mass"
    MOMENTUM = "momentum"
    ANGULAR_MOMENTUM = "angular_momentum"
    BOOST = "boost"
    ENERGY = "energy"
    DILATATION = "dilatation"
    EXPANSION = "expansion"


VECTOR_KINDS = (FamilyKind.MOMENTUM, FamilyKind.ANGULAR_MOMENTUM, FamilyKind.BOOST)

_SHORT_NAMES = {
    FamilyKind.MASS: "rho",
    FamilyKind.MOMENTUM: "P",
    FamilyKind.ANGULAR_MOMENTUM: "L",
    FamilyKind.BOOST: "K",
    FamilyKind.ENERGY: "H",
    FamilyKind.DILATATION: "D",
    FamilyKind.EXPANSION: "A",
}
_BY_SHORT = {v: k for k, v in _SHORT_NAMES.items()}


class CurrentFamily(MyBaseModel):
    """流族：标量族 index 恒为 0，矢量族 index 为分量 (角动量为旋转平面编号)"""
    model_config = ConfigDict(frozen=True)

    kind: FamilyKind
    index: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_index(self) -> "CurrentFamily":
        if self.kind not in VECTOR_KINDS and self.index != 0:
            raise DomainError(f"标量流族 {self.kind.value} 不带分量下标", parameter="index")
        return self

    @property
    def label(self) -> str:
        short = _SHORT_NAMES[self.kind]
        return f"{short}{self.index}" if self.kind in VECTOR_KINDS else short

    def check_dimension(self, n: int) -> None:
        """角动量仅在 n ≥ 2 存在，分量下标需小于 n"""
        if self.kind is FamilyKind.ANGULAR_MOMENTUM:
            planes = 1 if n == 2 else 3
            if n < 2 or self.index >= planes:
                raise UnsupportedFamilyError(
                    f"维数 n={n} 下不存在角动量分量 {self.index}",
                    parameter="family",
                    suggestion="一维/径向问题只使用 mass/momentum/boost/energy/dilatation/expansion",
                )
        elif self.kind in VECTOR_KINDS and self.index >= n:
            raise UnsupportedFamilyError(f"分量下标 {self.index} 超出维数 n={n}", parameter="family")

    @classmethod
    def parse(cls, text: str) -> "CurrentFamily":
        """接受 'mass'、'momentum[0]'、'K0'、'H' 等写法"""
        text = text.strip()
        name, index = text, 0
        if text.endswith("]") and "[" in text:
            name, rest = text[:-1].split("[", 1)
            index = int(rest)
        elif text[:1] in "PLK" and text[1:].isdigit():
            name, index = text[:1], int(text[1:])
        if name in _BY_SHORT:
            return cls(kind=_BY_SHORT[name], index=index)
        return cls(kind=FamilyKind(name.lower()), index=index)


def mass() -> CurrentFamily:
    return CurrentFamily(kind=FamilyKind.MASS)


def momentum(i: int = 0) -> CurrentFamily:
    return CurrentFamily(kind=FamilyKind.MOMENTUM, index=i)


def angular_momentum(i: int = 0) -> CurrentFamily:
    return CurrentFamily(kind=FamilyKind.ANGULAR_MOMENTUM, index=i)


def boost(i: int = 0) -> CurrentFamily:
    return CurrentFamily(kind=FamilyKind.BOOST, index=i)


def energy() -> CurrentFamily:
    return CurrentFamily(kind=FamilyKind.ENERGY)


def dilatation() -> CurrentFamily:
    return CurrentFamily(kind=FamilyKind.DILATATION)


def expansion() -> CurrentFamily:
    return CurrentFamily(kind=FamilyKind.EXPANSION)


# 一维约化下的七个流族 (角动量除外) 与标准 RH 三族
STANDARD_FAMILIES: Tuple[CurrentFamily, ...] = (mass(), momentum(0), energy())
EXTENDED_FAMILIES: Tuple[CurrentFamily, ...] = (boost(0), dilatation(), expansion())


class CurrentSample(MyBaseModel):
    """某一流族在时空点 (x, t) 处的 (J⁰, Jʲ)"""
    model_config = ConfigDict(frozen=True)

    family: CurrentFamily
    J0: float = Field(description="荷密度")
    Jx: Tuple[float, ...] = Field(description="通量分量")
    x: Tuple[float, ...]
    t: float


# =============================================================================
# 激波阵面与跳跃报告
# =============================================================================
class ShockFront(MyBaseModel):
    """间断面样本 (一维/径向约化)，法余矢量 n_μ = (−s, 1) 不归一化"""
    model_config = ConfigDict(frozen=True)

    t: float
    xs: float = Field(description="阵面位置")
    s: float = Field(description="阵面速度 dxs/dt")
    left: Primitive
    right: Primitive
    zone_id: Optional[int] = Field(default=None, description="检测时的间断区编号")
    speed_mass_rh: Optional[float] = Field(default=None, description="由质量 RH 给出的速度 (诊断)")

    @model_validator(mode="after")
    def _check_jump(self) -> "ShockFront":
        if self.left == self.right:
            raise DomainError("阵面两侧状态完全相同，不构成间断", parameter="front")
        return self

    @property
    def n_mu(self) -> np.ndarray:
        return np.array([-self.s, 1.0])

    @property
    def mass_flux(self) -> float:
        """m = ρ_L (u_L − s)"""
        return self.left.rho * (self.left.ux - self.s)


class Verdict(str, Enum):
    SHOCK_ADMISSIBLE = "shock_admissible"
    SHOCK_INADMISSIBLE = "shock_inadmissible"
    CONTACT = "contact"


class Admissibility(MyBaseModel):
    """容许性判定：熵判据与 Lax 判据分别给出"""
    verdict: Verdict
    mass_flux: float
    delta_s: float = Field(description="沿质量通量方向 (上游→下游) 的比熵跳跃")
    entropy_increases: bool
    lax_satisfied: bool
    upstream: str = Field(description="'left' 或 'right'")


class JumpRecord(MyBaseModel):
    """单一流族的跳跃残差，可直接展平为 CSV 行"""
    family: str
    residual: float
    normalized: float
    tolerance: float
    passed: bool


class JumpReport(MyBaseModel):
    """阵面上的残差与容许性报告"""
    t: float
    xs: float
    s: float
    records: List[JumpRecord] = Field(default_factory=list)
    admissibility: Admissibility

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def flat_records(self) -> List[Dict[str, Any]]:
        base = {
            "t": self.t,
            "xs": self.xs,
            "s": self.s,
            "verdict": self.admissibility.verdict.value,
            "delta_s": self.admissibility.delta_s,
            "mass_flux": self.admissibility.mass_flux,
        }
        return [{**base, **r.model_dump()} for r in self.records]
