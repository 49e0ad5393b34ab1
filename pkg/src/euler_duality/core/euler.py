# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 流体状态与多方状态方程 (euler_core)

标量接口作用于 Primitive/Conserved 值对象，数组接口供求解器与场运算使用。
所有函数无状态，可在多线程中并发调用。
"""

import logging
from typing import Tuple

import numpy as np

from ..models import (
    Polytrope,
    Primitive,
    Conserved,
    EntropyState,
    DomainError,
    NumericalAbort,
)


logger = logging.getLogger(__name__)

DEFAULT_R_GAS = 1.0
DEFAULT_FLOOR = 1e-12


# =============================================================================
# 状态方程
# =============================================================================
def eps_from_p(p, eos: Polytrope):
    """ε = p/(γ₀−1)"""
    if np.any(np.asarray(p) <= 0.0):
        raise DomainError(f"压强必须为正: p={p}", parameter="p")
    return p / (eos.gamma0 - 1.0)


def p_from_eps(eps, eos: Polytrope):
    if np.any(np.asarray(eps) <= 0.0):
        raise DomainError(f"内能密度必须为正: ε={eps}", parameter="eps")
    return (eos.gamma0 - 1.0) * eps


def prim_to_cons(s: Primitive, eos: Polytrope) -> Conserved:
    u = s.velocity
    E = 0.5 * s.rho * float(u @ u) + s.p / (eos.gamma0 - 1.0)
    return Conserved(rho=s.rho, mom=s.rho * u, E=E)


def cons_to_prim(c: Conserved, eos: Polytrope) -> Primitive:
    mom = c.momentum
    if not c.rho > 0.0:
        raise DomainError(f"密度必须为正: ρ={c.rho}", parameter="rho")
    eps = c.E - float(mom @ mom) / (2.0 * c.rho)
    if not eps > 0.0:
        raise DomainError(
            f"内能为负: E − |ρu|²/(2ρ) = {eps}",
            parameter="E",
            suggestion="守恒量不对应任何物理状态",
        )
    return Primitive(rho=c.rho, u=mom / c.rho, p=(eos.gamma0 - 1.0) * eps)


def chi(s: Primitive, eos: Polytrope) -> float:
    """χ = ε/ρ^γ₀ (光滑流中沿流线守恒)"""
    return eps_from_p(s.p, eos) / s.rho ** eos.gamma0


def chi_arrays(rho, p, eos: Polytrope):
    return p / ((eos.gamma0 - 1.0) * rho ** eos.gamma0)


def sound_speed(s: Primitive, eos: Polytrope) -> float:
    return float(np.sqrt(eos.gamma0 * s.p / s.rho))


def sound_speed_arrays(rho, p, eos: Polytrope):
    return np.sqrt(eos.gamma0 * p / rho)


def specific_heat(eos: Polytrope, r_gas: float = DEFAULT_R_GAS) -> float:
    """C_v = R_gas/(γ₀−1)"""
    return r_gas / (eos.gamma0 - 1.0)


def relative_entropy(chi_value, eos: Polytrope, r_gas: float = DEFAULT_R_GAS):
    """S_rel = C_v log χ (省略 S₀ 与粒子质量常数，只比较差值)"""
    return specific_heat(eos, r_gas) * np.log(chi_value)


def entropy_state(s: Primitive, eos: Polytrope, r_gas: float = DEFAULT_R_GAS) -> EntropyState:
    value = chi(s, eos)
    return EntropyState(
        chi=value,
        s_rel=float(relative_entropy(value, eos, r_gas)),
        c_v=specific_heat(eos, r_gas),
    )


def specific_entropy_jump(upstream: Primitive, downstream: Primitive, eos: Polytrope,
                          r_gas: float = DEFAULT_R_GAS) -> float:
    """ΔS = S_rel(downstream) − S_rel(upstream)"""
    return float(specific_heat(eos, r_gas) * np.log(chi(downstream, eos) / chi(upstream, eos)))


# =============================================================================
# 数组接口 (一维/径向约化，守恒量数组形状 (3, N))
# =============================================================================
def prim_to_cons_arrays(rho, u, p, eos: Polytrope) -> np.ndarray:
    rho, u, p = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (rho, u, p)))
    return np.stack([rho, rho * u, 0.5 * rho * u * u + p / (eos.gamma0 - 1.0)])


def flux_arrays(rho, u, p, eos: Polytrope) -> np.ndarray:
    """物理通量 (ρu, ρu² + p, (E + p)u)"""
    E = 0.5 * rho * u * u + p / (eos.gamma0 - 1.0)
    return np.stack([rho * u, rho * u * u + p, (E + p) * u])


def cons_to_prim_arrays(U: np.ndarray, eos: Polytrope,
                        floor: float = DEFAULT_FLOOR) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """
    守恒量 → 原始量，返回 (rho, u, p, 钳位计数)

    (0, floor) 内的值钳位到 floor 并计数；负值或非有限值视为数值失败。
    """
    rho = U[0]
    bad = ~np.isfinite(U).all(axis=0) | (rho <= 0.0)
    if np.any(bad):
        cells = np.flatnonzero(bad)
        raise NumericalAbort(
            f"{cells.size} 个单元密度非正或非有限",
            cells=cells[:20].tolist(),
            rho=rho[cells[:20]].tolist(),
        )
    u = U[1] / rho
    p = (eos.gamma0 - 1.0) * (U[2] - 0.5 * rho * u * u)
    if np.any(p <= 0.0):
        cells = np.flatnonzero(p <= 0.0)
        raise NumericalAbort(
            f"{cells.size} 个单元压强非正",
            cells=cells[:20].tolist(),
            p=p[cells[:20]].tolist(),
        )
    low = (rho < floor) | (p < floor)
    clamped = int(np.count_nonzero(low))
    if clamped:
        logger.warning(f"{clamped} 个单元触及下限 {floor}，已钳位")
        rho = np.maximum(rho, floor)
        p = np.maximum(p, floor)
    return rho, u, p, clamped
