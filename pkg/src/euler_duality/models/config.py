# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 场景配置模型

与 `key = value` 配置文件一一对应：每个 [section] 对应一个模型，
[state] 段可重复出现。所有容差默认值集中在 Tolerances。
"""

from typing import List, Optional

from pydantic import Field, ConfigDict, model_validator

from .base import MyBaseModel
from .field import Geometry, Boundary
from .fluid import Polytrope


class _Section(MyBaseModel):
    model_config = ConfigDict(extra="forbid", json_dumps_params={'ensure_ascii': False})


class EosSection(_Section):
    gamma0: Optional[float] = Field(default=None, description="多方指数，缺省取对称值 1+2/n")
    n: int = Field(default=1, ge=1, le=3, description="空间维数")

    def polytrope(self) -> Polytrope:
        if self.gamma0 is None:
            return Polytrope.symmetric_for(self.n)
        return Polytrope(gamma0=self.gamma0, n=self.n)


class GridSection(_Section):
    x_left: float = 0.0
    x_right: float = 1.0
    cells: int = Field(default=200, ge=8)
    geometry: Geometry = Geometry.PLANAR
    boundary_left: Boundary = Boundary.TRANSMISSIVE
    boundary_right: Boundary = Boundary.TRANSMISSIVE


class InitialSection(_Section):
    preset: str = Field(default="sod", description="sod / two-shock / blast-sphere / gaussian-pulse / piecewise")
    x0: float = Field(default=0.5, description="间断位置或脉冲中心 (blast-sphere 为球半径)")
    speed: float = Field(default=1.0, description="two-shock 的对撞速度")
    width: float = Field(default=0.1, description="gaussian-pulse 宽度")
    amplitude: float = Field(default=0.2, description="gaussian-pulse 振幅")
    p_in: float = Field(default=1.0, description="blast-sphere 球内压强")
    p_out: float = Field(default=0.1, description="blast-sphere 环境压强")


class StateSection(_Section):
    """分段常状态中的一段；最后一段不给 x_end"""
    rho: float
    u: float = 0.0
    p: float
    x_end: Optional[float] = None


class GroupSection(_Section):
    alpha: float = 1.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 1.0
    rotation: float = Field(default=1.0, description="一维约化下 R = ±1")
    velocity: float = 0.0
    shift: float = 0.0
    target_times: List[float] = Field(default_factory=list, description="目标时刻，缺省为源时刻的像")
    target_cells: Optional[int] = Field(default=None, description="目标网格单元数，缺省为源网格的像")
    interpolation: str = Field(default="linear", description="linear / cubic")

    @model_validator(mode="after")
    def _check_rotation(self) -> "GroupSection":
        if self.rotation not in (1.0, -1.0):
            raise ValueError(f"一维约化下 rotation 只能取 ±1: {self.rotation}")
        if self.interpolation not in ("linear", "cubic"):
            raise ValueError(f"未知插值方式: {self.interpolation}")
        return self


class RunSection(_Section):
    t_start: float = 0.0
    t_end: float = 0.2
    output_times: List[float] = Field(default_factory=list, description="缺省为 [t_end]")
    cfl: float = Field(default=0.9, gt=0.0, lt=1.0)
    scheme: str = Field(default="godunov", description="godunov / muscl")
    floor: float = Field(default=1e-12, gt=0.0)
    max_steps: int = Field(default=1_000_000, ge=1)
    negative_control: bool = Field(default=False, description="非对称指数下仍执行对偶变换 (预期失败)")

    @model_validator(mode="after")
    def _check_window(self) -> "RunSection":
        if self.t_end < self.t_start:
            raise ValueError(f"t_end={self.t_end} 早于 t_start={self.t_start}")
        if self.scheme not in ("godunov", "muscl"):
            raise ValueError(f"未知格式: {self.scheme}")
        return self


class Tolerances(_Section):
    rh_exact: float = Field(default=1e-8, description="精确阵面的归一化 RH 残差容差")
    rh_detected_factor: float = Field(default=40.0, description="检测阵面容差 = factor·dx/L")
    dual_exact: float = Field(default=1e-10, description="精确阵面的归一化对偶残差容差")
    contact_exact: float = Field(default=1e-10, description="精确阵面的接触间断判别阈值")
    contact_detected: float = Field(default=0.05, description="检测阵面的接触间断判别阈值")
    charge_balance: float = Field(default=1e-3, description="相对荷平衡残差容差")
    charge_balance_extended_factor: float = Field(
        default=1.6, ge=0.0,
        description="K/D/A 荷平衡容差 = max(charge_balance, factor/cells)，跨激波一阶收敛",
    )
    euler_residual: Optional[float] = Field(
        default=None, gt=0.0,
        description="光滑区 Euler 残差最大模的容差；缺省只报告 (残差由输出时刻间距主导)",
    )
    entropy: float = Field(default=1e-12, description="变换前后 ΔS 的一致性容差")
    position_cells: float = Field(default=1.0, description="阵面位置映射容差 (单元宽度倍数)")
    zone_threshold: float = Field(default=0.05, description="间断区 |Δρ|/ρ 阈值")
    halo: int = Field(default=3, ge=0)


class SweepSection(_Section):
    """check 子命令在给定 --seed 时执行的随机群元素扫描"""
    samples: int = Field(default=0, ge=0)
    max_parameter: float = Field(default=2.0, gt=0.0, description="随机 SL(2,R) 元素的参数范围")
    mach: float = Field(default=2.0, gt=1.0, description="扫描所用 Hugoniot 阵面的 Mach 数")


class ScenarioConfig(_Section):
    eos: EosSection = Field(default_factory=EosSection)
    grid: GridSection = Field(default_factory=GridSection)
    initial: InitialSection = Field(default_factory=InitialSection)
    states: List[StateSection] = Field(default_factory=list)
    group: GroupSection = Field(default_factory=GroupSection)
    run: RunSection = Field(default_factory=RunSection)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    sweep: SweepSection = Field(default_factory=SweepSection)

    @model_validator(mode="after")
    def _check_states(self) -> "ScenarioConfig":
        if self.states:
            ends = [s.x_end for s in self.states]
            if any(e is None for e in ends[:-1]) or ends[-1] is not None:
                raise ValueError("除最后一个 [state] 外均需给出 x_end，最后一个不得给出")
        if self.grid.geometry is Geometry.SPHERICAL and self.eos.n != 3:
            raise ValueError("spherical 几何要求 n = 3")
        return self
