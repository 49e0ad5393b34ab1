# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 多方气体一维 Riemann 问题精确解 (riemann)

星区压强满足 f_L(p) + f_R(p) + Δu = 0，采用带二分保护的 Newton 迭代。
数组接口对一批界面同时求解，供 Godunov 通量使用。
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import Field, ConfigDict

from ..models import (
    MyBaseModel,
    Polytrope,
    Primitive,
    Snapshot,
    Geometry,
    ShockFront,
    VacuumError,
    LabException,
)
from .euler import sound_speed_arrays


logger = logging.getLogger(__name__)

PRESSURE_TOLERANCE = 1e-14
MAX_ITERATIONS = 100


# =============================================================================
# 压强函数与星区求解 (数组)
# =============================================================================
def _pressure_function(p, rho_k, p_k, c_k, gamma: float):
    """f_K(p) 及其导数：p > p_K 取激波分支，否则取稀疏波分支"""
    a = 2.0 / ((gamma + 1.0) * rho_k)
    b = (gamma - 1.0) / (gamma + 1.0) * p_k
    ratio = p / p_k
    shock = p > p_k
    with np.errstate(invalid="ignore", divide="ignore"):
        root = np.sqrt(a / (p + b))
        f_shock = (p - p_k) * root
        df_shock = root * (1.0 - (p - p_k) / (2.0 * (b + p)))
        z = (gamma - 1.0) / (2.0 * gamma)
        f_rare = 2.0 * c_k / (gamma - 1.0) * (ratio ** z - 1.0)
        df_rare = ratio ** (-(gamma + 1.0) / (2.0 * gamma)) / (rho_k * c_k)
    return np.where(shock, f_shock, f_rare), np.where(shock, df_shock, df_rare)


def _initial_guess(rho_l, u_l, p_l, c_l, rho_r, u_r, p_r, c_r, gamma: float):
    """双稀疏波近似，失败时退回压强平均"""
    z = (gamma - 1.0) / (2.0 * gamma)
    with np.errstate(invalid="ignore", divide="ignore"):
        num = c_l + c_r - 0.5 * (gamma - 1.0) * (u_r - u_l)
        den = c_l / p_l ** z + c_r / p_r ** z
        guess = (num / den) ** (1.0 / z)
    fallback = 0.5 * (p_l + p_r)
    return np.where(np.isfinite(guess) & (guess > 0.0), guess, fallback)


def star_state(rho_l, u_l, p_l, rho_r, u_r, p_r, eos: Polytrope,
               tol: float = PRESSURE_TOLERANCE,
               max_iter: int = MAX_ITERATIONS) -> Tuple[np.ndarray, np.ndarray]:
    """返回 (p*, u*) 数组；生成真空时抛出 VacuumError"""
    gamma = eos.gamma0
    rho_l, u_l, p_l, rho_r, u_r, p_r = (
        np.asarray(v, dtype=float) for v in (rho_l, u_l, p_l, rho_r, u_r, p_r)
    )
    c_l = sound_speed_arrays(rho_l, p_l, eos)
    c_r = sound_speed_arrays(rho_r, p_r, eos)
    du = u_r - u_l
    vacuum = 2.0 / (gamma - 1.0) * (c_l + c_r) <= du
    if np.any(vacuum):
        idx = np.flatnonzero(np.atleast_1d(vacuum))
        raise VacuumError(
            f"{idx.size} 个 Riemann 问题生成真空 (压强正性条件不满足)",
            parameter="states",
            suggestion="减小左右速度差或提高压强",
            interfaces=idx[:20].tolist(),
        )

    def total(p):
        f_l, df_l = _pressure_function(p, rho_l, p_l, c_l, gamma)
        f_r, df_r = _pressure_function(p, rho_r, p_r, c_r, gamma)
        return f_l + f_r + du, df_l + df_r

    p = _initial_guess(rho_l, u_l, p_l, c_l, rho_r, u_r, p_r, c_r, gamma)
    lo = np.zeros_like(p)
    hi = np.maximum(np.maximum(p_l, p_r), p)
    f_hi, _ = total(hi)
    while np.any(f_hi < 0.0):
        hi = np.where(f_hi < 0.0, 2.0 * hi, hi)
        f_hi, _ = total(hi)

    done = np.zeros(p.shape, dtype=bool)
    for iteration in range(max_iter):
        f, df = total(p)
        lo = np.where(f < 0.0, p, lo)
        hi = np.where(f >= 0.0, p, hi)
        step = p - f / df
        bad = ~np.isfinite(step) | (step <= lo) | (step >= hi)
        p_new = np.where(bad, 0.5 * (lo + hi), step)
        change = np.abs(p_new - p) / p_new
        p = np.where(done, p, p_new)
        done |= change < tol
        if np.all(done):
            logger.debug(f"星区压强在 {iteration + 1} 次迭代后收敛")
            break
    else:
        logger.debug(f"星区压强迭代达到上限 {max_iter}")

    f_l, _ = _pressure_function(p, rho_l, p_l, c_l, gamma)
    f_r, _ = _pressure_function(p, rho_r, p_r, c_r, gamma)
    u_star = 0.5 * (u_l + u_r) + 0.5 * (f_r - f_l)
    return p, u_star


# =============================================================================
# 自相似采样 (数组)
# =============================================================================
def _side_sample(rho_k, u_k, p_k, p_star, u_star, xi, gamma: float, sign: float):
    """
    单侧采样；sign = +1 为左波，−1 为右波 (通过 u → −u, ξ → −ξ 镜像)
    """
    u_k = sign * u_k
    u_s = sign * u_star
    xi = sign * xi
    c_k = np.sqrt(gamma * p_k / rho_k)
    ratio = p_star / p_k
    g6 = (gamma - 1.0) / (gamma + 1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        # 激波
        speed = u_k - c_k * np.sqrt((gamma + 1.0) / (2.0 * gamma) * ratio + (gamma - 1.0) / (2.0 * gamma))
        rho_shock = rho_k * (ratio + g6) / (g6 * ratio + 1.0)
        # 稀疏波
        head = u_k - c_k
        c_star = c_k * ratio ** ((gamma - 1.0) / (2.0 * gamma))
        tail = u_s - c_star
        rho_rare = rho_k * ratio ** (1.0 / gamma)
        u_fan = 2.0 / (gamma + 1.0) * (c_k + 0.5 * (gamma - 1.0) * u_k + xi)
        c_fan = 2.0 / (gamma + 1.0) * (c_k + 0.5 * (gamma - 1.0) * (u_k - xi))
        rho_fan = rho_k * (c_fan / c_k) ** (2.0 / (gamma - 1.0))
        p_fan = p_k * (c_fan / c_k) ** (2.0 * gamma / (gamma - 1.0))

    is_shock = p_star > p_k
    outside = np.where(is_shock, xi < speed, xi < head)
    in_fan = ~is_shock & (xi >= head) & (xi <= tail)
    rho = np.where(outside, rho_k, np.where(is_shock, rho_shock, np.where(in_fan, rho_fan, rho_rare)))
    u = np.where(outside, u_k, np.where(in_fan, u_fan, u_s))
    p = np.where(outside, p_k, np.where(in_fan, p_fan, p_star))
    return rho, sign * u, p


def sample_arrays(rho_l, u_l, p_l, rho_r, u_r, p_r, p_star, u_star, xi, eos: Polytrope):
    """ξ = x/t 处的 (ρ, u, p)"""
    gamma = eos.gamma0
    left = _side_sample(rho_l, u_l, p_l, p_star, u_star, xi, gamma, 1.0)
    right = _side_sample(rho_r, u_r, p_r, p_star, u_star, xi, gamma, -1.0)
    on_left = xi <= u_star
    return tuple(np.where(on_left, a, b) for a, b in zip(left, right))


def godunov_flux(rho_l, u_l, p_l, rho_r, u_r, p_r, eos: Polytrope) -> np.ndarray:
    """精确 Riemann 解在 ξ = 0 处的界面通量，形状 (3, M)"""
    p_star, u_star = star_state(rho_l, u_l, p_l, rho_r, u_r, p_r, eos)
    rho, u, p = sample_arrays(rho_l, u_l, p_l, rho_r, u_r, p_r, p_star, u_star, 0.0, eos)
    E = 0.5 * rho * u * u + p / (eos.gamma0 - 1.0)
    return np.stack([rho * u, rho * u * u + p, (E + p) * u])


# =============================================================================
# 单个 Riemann 问题
# =============================================================================
class RiemannSolution(MyBaseModel):
    """精确解：星区状态、波型以及以 (x0, t0) 为中心的自相似采样"""
    model_config = ConfigDict(frozen=True)

    left: Primitive
    right: Primitive
    eos: Polytrope
    p_star: float = Field(gt=0.0)
    u_star: float
    left_wave: str = Field(description="'shock' 或 'rarefaction'")
    right_wave: str = Field(description="'shock' 或 'rarefaction'")
    rho_star_left: float
    rho_star_right: float
    x0: float = Field(default=0.0, description="初始间断位置")
    t0: float = Field(default=0.0, description="初始时刻")

    def _shock_speed(self, side: str) -> float:
        """由质量 RH 关系 s = Δ(ρu)/Δρ 给出的激波速度"""
        s = self.left if side == "left" else self.right
        rho_star = self.rho_star_left if side == "left" else self.rho_star_right
        return (rho_star * self.u_star - s.rho * s.ux) / (rho_star - s.rho)

    def wave_speeds(self) -> dict:
        """各波的特征速度：激波给出 shock，稀疏波给出 head/tail"""
        g = self.eos.gamma0
        speeds = {"contact": self.u_star}
        for side, state, rho_star, sign in (
            ("left", self.left, self.rho_star_left, -1.0),
            ("right", self.right, self.rho_star_right, 1.0),
        ):
            c = np.sqrt(g * state.p / state.rho)
            if getattr(self, f"{side}_wave") == "shock" and rho_star != state.rho:
                speeds[f"{side}_shock"] = self._shock_speed(side)
            else:
                c_star = np.sqrt(g * self.p_star / rho_star)
                speeds[f"{side}_head"] = float(state.ux + sign * c)
                speeds[f"{side}_tail"] = float(self.u_star + sign * c_star)
        return speeds

    def sample_xi(self, xi):
        L, R = self.left, self.right
        return sample_arrays(L.rho, L.ux, L.p, R.rho, R.ux, R.p, self.p_star, self.u_star,
                             np.asarray(xi, dtype=float), self.eos)

    def shock_fronts(self, t: float) -> List[ShockFront]:
        """t 时刻每道激波的 ShockFront (左右极限取星区与未扰动态)"""
        fronts = []
        star_u = self.u_star
        for side in ("left", "right"):
            if getattr(self, f"{side}_wave") != "shock":
                continue
            state = self.left if side == "left" else self.right
            rho_star = self.rho_star_left if side == "left" else self.rho_star_right
            if rho_star == state.rho:
                continue
            s = self._shock_speed(side)
            star = Primitive(rho=rho_star, u=star_u, p=self.p_star)
            lhs, rhs = (state, star) if side == "left" else (star, state)
            fronts.append(ShockFront(
                t=t, xs=self.x0 + s * (t - self.t0), s=s, left=lhs, right=rhs,
            ))
        return fronts


def solve(left: Primitive, right: Primitive, eos: Polytrope,
          x0: float = 0.0, t0: float = 0.0) -> RiemannSolution:
    p_star, u_star = star_state(left.rho, left.ux, left.p, right.rho, right.ux, right.p, eos)
    p_star, u_star = float(p_star), float(u_star)
    g6 = (eos.gamma0 - 1.0) / (eos.gamma0 + 1.0)

    def star_density(state: Primitive) -> float:
        ratio = p_star / state.p
        if p_star > state.p:
            return state.rho * (ratio + g6) / (g6 * ratio + 1.0)
        return state.rho * ratio ** (1.0 / eos.gamma0)

    sol = RiemannSolution(
        left=left, right=right, eos=eos, p_star=p_star, u_star=u_star,
        left_wave="shock" if p_star > left.p else "rarefaction",
        right_wave="shock" if p_star > right.p else "rarefaction",
        rho_star_left=star_density(left),
        rho_star_right=star_density(right),
        x0=x0, t0=t0,
    )
    logger.debug(f"Riemann 解: p*={p_star:.12g}, u*={u_star:.12g}, 波型 {sol.left_wave}/{sol.right_wave}")
    return sol


def sample(sol: RiemannSolution, x: float, t: float) -> Primitive:
    """自相似采样 (t > t0)"""
    if not t > sol.t0:
        raise LabException(f"采样要求 t > t0: t={t}", parameter="t")
    rho, u, p = sol.sample_xi((x - sol.x0) / (t - sol.t0))
    return Primitive(rho=float(rho), u=float(u), p=float(p))


def sample_snapshot(sol: RiemannSolution, x_left: float, x_right: float, cells: int, t: float,
                    geometry: Geometry = Geometry.PLANAR) -> Snapshot:
    """在单元中心上采样精确解得到快照"""
    dx = (x_right - x_left) / cells
    centers = x_left + (np.arange(cells) + 0.5) * dx
    rho, u, p = sol.sample_xi((centers - sol.x0) / (t - sol.t0))
    return Snapshot(t=t, x_left=x_left, x_right=x_right,
                    rho=np.asarray(rho, dtype=float), u=np.asarray(u, dtype=float),
                    p=np.asarray(p, dtype=float), geometry=geometry)


def front_state(sol: RiemannSolution, side: str) -> Optional[Primitive]:
    """星区一侧的状态"""
    rho = sol.rho_star_left if side == "left" else sol.rho_star_right
    return Primitive(rho=rho, u=sol.u_star, p=sol.p_star)
