# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 网格场模型

Snapshot: 单一时刻的网格流体状态 (单元中心取值)
SpacetimeField: 按时间排序的 Snapshot 序列
"""

from enum import Enum
from typing import Optional, List, Dict, Any

import numpy as np
from pydantic import Field, ConfigDict, model_validator

from .base import MyBaseModel, DomainError
from .fluid import Polytrope


class Geometry(str, Enum):
    PLANAR = "planar"
    SPHERICAL = "spherical"


class Boundary(str, Enum):
    TRANSMISSIVE = "transmissive"
    REFLECTIVE = "reflective"


class Snapshot(MyBaseModel):
    """单一时刻的网格状态，均匀单元宽度"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    t: float = Field(description="时刻")
    x_left: float = Field(description="左边界")
    x_right: float = Field(description="右边界")
    rho: np.ndarray = Field(description="单元密度")
    u: np.ndarray = Field(description="单元速度 (一维/径向分量)")
    p: np.ndarray = Field(description="单元压强")
    geometry: Geometry = Field(default=Geometry.PLANAR)
    zone_mask: Optional[np.ndarray] = Field(
        default=None, description="变换场中原像落入间断区的单元标记"
    )

    @model_validator(mode="after")
    def _check_shapes(self) -> "Snapshot":
        if not self.x_right > self.x_left:
            raise DomainError(f"网格区间无效: [{self.x_left}, {self.x_right}]", parameter="grid")
        if not (self.rho.shape == self.u.shape == self.p.shape) or self.rho.ndim != 1:
            raise DomainError("rho/u/p 必须是等长的一维数组", parameter="snapshot")
        if self.geometry is Geometry.SPHERICAL and self.x_left < 0.0:
            raise DomainError("球对称网格的内边界必须 ≥ 0", parameter="x_left")
        return self

    @property
    def cells(self) -> int:
        return self.rho.shape[0]

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.cells

    @property
    def centers(self) -> np.ndarray:
        return self.x_left + (np.arange(self.cells) + 0.5) * self.dx

    @property
    def faces(self) -> np.ndarray:
        return np.linspace(self.x_left, self.x_right, self.cells + 1)

    @property
    def areas(self) -> np.ndarray:
        """单元界面面积 (球对称下含 4π)"""
        if self.geometry is Geometry.SPHERICAL:
            return 4.0 * np.pi * self.faces ** 2
        return np.ones(self.cells + 1)

    @property
    def volumes(self) -> np.ndarray:
        """单元体积 (球对称下为球壳体积)"""
        if self.geometry is Geometry.SPHERICAL:
            f = self.faces
            return 4.0 * np.pi * (f[1:] ** 3 - f[:-1] ** 3) / 3.0
        return np.full(self.cells, self.dx)

    def same_grid(self, other: "Snapshot") -> bool:
        return (self.cells == other.cells and self.x_left == other.x_left
                and self.x_right == other.x_right and self.geometry == other.geometry)

    def with_time(self, t: float) -> "Snapshot":
        return self.model_copy(update={"t": t})


class SpacetimeField(MyBaseModel):
    """时间严格递增的 Snapshot 序列"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    snapshots: List[Snapshot] = Field(default_factory=list)
    eos: Polytrope
    geometry: Geometry = Field(default=Geometry.PLANAR)
    boundary_left: Boundary = Field(default=Boundary.TRANSMISSIVE)
    boundary_right: Boundary = Field(default=Boundary.TRANSMISSIVE)
    stats: Dict[str, Any] = Field(default_factory=dict, description="运行统计 (步数、钳位计数等)")

    @model_validator(mode="after")
    def _check_times(self) -> "SpacetimeField":
        times = [s.t for s in self.snapshots]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise DomainError(f"快照时间必须严格递增: {times}", parameter="snapshots")
        if any(s.geometry != self.geometry for s in self.snapshots):
            raise DomainError("快照几何标签与场不一致", parameter="geometry")
        return self

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])

    @property
    def common_grid(self) -> bool:
        return all(self.snapshots[0].same_grid(s) for s in self.snapshots[1:])

    def window(self) -> tuple[float, float]:
        return self.snapshots[0].t, self.snapshots[-1].t

    def nearest(self, t: float) -> int:
        return int(np.argmin(np.abs(self.times - t)))
