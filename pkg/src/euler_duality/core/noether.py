# -*- coding: utf-8 -*-
"""
Euler Duality Lab - Noether 守恒流 (noether)

七个流族的荷密度 J⁰ 与通量 Jʲ、有界区域上的荷积分与边界通量平衡、
光滑区域上的 Euler 方程残差。

约定：角动量取 L = P × x，通量与之同号 (J_L = J_P × x)，
从而 ∂_μ J^μ_L = 0 成立。
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from ..models import (
    Polytrope,
    Primitive,
    Snapshot,
    SpacetimeField,
    Geometry,
    Boundary,
    CurrentFamily,
    CurrentSample,
    FamilyKind,
    DiscontinuityZoneError,
    LabException,
)
from ..models.shock import VECTOR_KINDS
from .euler import flux_arrays, prim_to_cons_arrays


logger = logging.getLogger(__name__)

DEFAULT_ZONE_THRESHOLD = 0.05
DEFAULT_HALO = 3


# =============================================================================
# 点值流
# =============================================================================
def _densities_and_fluxes(rho, u, p, x, t, family: CurrentFamily, eos: Polytrope):
    """
    向量化核心：u, x 形状 (..., k)，返回 (J0 (...), Jx (..., k))
    """
    eps = p / (eos.gamma0 - 1.0)
    u2 = np.sum(u * u, axis=-1)
    x2 = np.sum(x * x, axis=-1)
    k = u.shape[-1]

    j_rho = (rho, rho[..., None] * u)
    mom = rho[..., None] * u
    # J_P[..., i, j] = ρ u_i u_j + δ_ij p
    mom_flux = mom[..., :, None] * u[..., None, :] + p[..., None, None] * np.eye(k)
    h = 0.5 * rho * u2 + eps
    j_h = (h, (h + p)[..., None] * u)
    x_dot_p = np.sum(x * mom, axis=-1)
    x_dot_jp = np.einsum("...i,...ij->...j", x, mom_flux)

    kind, i = family.kind, family.index
    if kind is FamilyKind.MASS:
        return j_rho
    if kind is FamilyKind.MOMENTUM:
        return mom[..., i], mom_flux[..., i, :]
    if kind is FamilyKind.ENERGY:
        return j_h
    if kind is FamilyKind.BOOST:
        return (t * mom[..., i] - rho * x[..., i],
                t * mom_flux[..., i, :] - x[..., i, None] * j_rho[1])
    if kind is FamilyKind.DILATATION:
        return -2.0 * t * h + x_dot_p, x_dot_jp - 2.0 * t * j_h[1]
    if kind is FamilyKind.EXPANSION:
        return (t * t * h - t * x_dot_p + 0.5 * rho * x2,
                0.5 * x2[..., None] * j_rho[1] - t * x_dot_jp + t * t * j_h[1])
    # 角动量：旋转平面 (a, b)，三维时 i ↦ ((i+1)%3, (i+2)%3)
    a, b = ((i + 1) % 3, (i + 2) % 3) if k == 3 else (0, 1)
    return (mom[..., a] * x[..., b] - mom[..., b] * x[..., a],
            mom_flux[..., a, :] * x[..., b, None] - mom_flux[..., b, :] * x[..., a, None])


def current(s: Primitive, x, t: float, family: CurrentFamily, eos: Polytrope) -> CurrentSample:
    """单点流样本；x 的分量数与 s.u 相同"""
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    family.check_dimension(xv.size)
    if s.velocity.size != xv.size:
        raise LabException(f"速度分量数 {s.velocity.size} 与位置分量数 {xv.size} 不一致", parameter="x")
    j0, jx = _densities_and_fluxes(
        np.asarray(s.rho), s.velocity, np.asarray(s.p), xv, float(t), family, eos
    )
    return CurrentSample(family=family, J0=float(j0), Jx=tuple(np.ravel(jx)), x=tuple(xv), t=float(t))


STACK_FAMILIES: Tuple[CurrentFamily, ...] = (
    CurrentFamily(kind=FamilyKind.MASS),
    CurrentFamily(kind=FamilyKind.BOOST),
    CurrentFamily(kind=FamilyKind.MOMENTUM),
    CurrentFamily(kind=FamilyKind.EXPANSION),
    CurrentFamily(kind=FamilyKind.DILATATION),
    CurrentFamily(kind=FamilyKind.ENERGY),
)


def current_stack(s: Primitive, x: float, t: float, eos: Polytrope) -> np.ndarray:
    """一维/径向约化的流栈 (ρ, K, P, A, D, H)，形状 (6, 2)，列为 (J⁰, Jˣ)"""
    out = np.empty((6, 2))
    for row, family in enumerate(STACK_FAMILIES):
        sample = current(s, x, t, family, eos)
        out[row] = sample.J0, sample.Jx[0]
    return out


# =============================================================================
# 快照上的流与荷
# =============================================================================
def _check_profile_family(snapshot: Snapshot, family: CurrentFamily, eos: Polytrope) -> None:
    if snapshot.geometry is Geometry.SPHERICAL:
        family.check_dimension(eos.n)
    else:
        family.check_dimension(1)


def current_profile(snapshot: Snapshot, family: CurrentFamily, eos: Polytrope,
                    x: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """单元中心 (或给定位置 x) 处的 (J⁰, Jˣ) 数组"""
    _check_profile_family(snapshot, family, eos)
    if family.kind is FamilyKind.ANGULAR_MOMENTUM:
        # 径向流的角动量恒为零
        zeros = np.zeros(snapshot.cells)
        return zeros, zeros.copy()
    if snapshot.geometry is Geometry.SPHERICAL and family.index != 0:
        zeros = np.zeros(snapshot.cells)
        return zeros, zeros.copy()
    xs = snapshot.centers if x is None else x
    j0, jx = _densities_and_fluxes(
        snapshot.rho, snapshot.u[:, None], snapshot.p, xs[:, None], snapshot.t,
        family.model_copy(update={"index": 0}), eos,
    )
    return j0, jx[:, 0]


def charge(snapshot: Snapshot, family: CurrentFamily, eos: Polytrope) -> float:
    """
    单元体积中点求积 Σ J⁰ V_i (球对称下 V_i 为球壳体积)

    球对称下矢量荷 (动量、boost) 由对称性恒为零。
    """
    _check_profile_family(snapshot, family, eos)
    if snapshot.geometry is Geometry.SPHERICAL and family.kind in VECTOR_KINDS:
        return 0.0
    j0, _ = current_profile(snapshot, family, eos)
    return float(np.sum(j0 * snapshot.volumes))


def _wall_state(rho, u, p, eos: Polytrope, outward: float):
    """反射壁面上的精确界面状态：u* = 0，p* 由镜像 Riemann 问题给出"""
    from .riemann import star_state

    un = outward * u
    p_star, _ = star_state(
        np.atleast_1d(rho), np.atleast_1d(un), np.atleast_1d(p),
        np.atleast_1d(rho), np.atleast_1d(-un), np.atleast_1d(p), eos,
    )
    return float(rho), 0.0, float(p_star[0])


def boundary_fluxes(snapshot: Snapshot, family: CurrentFamily, eos: Polytrope,
                    boundary_left: Boundary = Boundary.TRANSMISSIVE,
                    boundary_right: Boundary = Boundary.TRANSMISSIVE) -> Tuple[float, float]:
    """边界面上的 Jˣ·面积 (左, 右)"""
    _check_profile_family(snapshot, family, eos)
    if snapshot.geometry is Geometry.SPHERICAL and family.kind in VECTOR_KINDS:
        return 0.0, 0.0
    areas = snapshot.areas
    out = []
    for cell, face, bc, outward, area in (
        (0, snapshot.x_left, boundary_left, -1.0, areas[0]),
        (-1, snapshot.x_right, boundary_right, 1.0, areas[-1]),
    ):
        rho, u, p = snapshot.rho[cell], snapshot.u[cell], snapshot.p[cell]
        if bc is Boundary.REFLECTIVE:
            rho, u, p = _wall_state(rho, u, p, eos, outward)
        face_snap = Snapshot(
            t=snapshot.t, x_left=snapshot.x_left, x_right=snapshot.x_right,
            rho=np.array([rho]), u=np.array([u]), p=np.array([p]), geometry=snapshot.geometry,
        )
        _, jx = current_profile(face_snap, family, eos, x=np.array([face]))
        out.append(float(jx[0]) * float(area))
    return out[0], out[1]


def charge_balance(field: SpacetimeField, family: CurrentFamily, t1: float, t2: float,
                   eos: Optional[Polytrope] = None, relative: bool = False) -> float:
    """
    Q(t2) − Q(t1) + ∫[Jˣ(x_R) − Jˣ(x_L)] dt (时间上梯形求积)

    使用 [t1, t2] 内的全部快照；relative=True 时除以荷与边界通量的尺度。
    """
    eos = eos or field.eos
    if not t1 < t2:
        raise LabException(f"要求 t1 < t2: t1={t1}, t2={t2}", parameter="t1")
    slack = 1e-12 * max(1.0, abs(t2))
    chosen = [s for s in field.snapshots if t1 - slack <= s.t <= t2 + slack]
    if len(chosen) < 2:
        raise LabException(
            f"[{t1}, {t2}] 内快照不足两个",
            parameter="t1,t2",
            suggestion="增加输出时刻或扩大时间窗",
        )
    q1 = charge(chosen[0], family, eos)
    q2 = charge(chosen[-1], family, eos)
    fluxes = np.array([
        boundary_fluxes(s, family, eos, field.boundary_left, field.boundary_right) for s in chosen
    ])
    times = np.array([s.t for s in chosen])
    net = trapezoid(fluxes[:, 1] - fluxes[:, 0], times)
    residual = q2 - q1 + float(net)
    if not relative:
        return float(residual)
    scale = max(abs(q1), abs(q2), float(trapezoid(np.abs(fluxes).sum(axis=1), times)), 1e-300)
    return float(residual / scale)


# =============================================================================
# 间断区与 Euler 残差
# =============================================================================
def discontinuity_zones(snapshot: Snapshot, threshold: float = DEFAULT_ZONE_THRESHOLD,
                        halo: int = DEFAULT_HALO) -> np.ndarray:
    """相邻单元 |Δρ|/ρ 超过阈值的单元及其 halo 邻域"""
    rho = snapshot.rho
    jump = np.abs(np.diff(rho)) / np.minimum(rho[1:], rho[:-1])
    steep = np.zeros(rho.size, dtype=bool)
    steep[:-1] |= jump > threshold
    steep[1:] |= jump > threshold
    if halo > 0 and steep.any():
        kernel = np.ones(2 * halo + 1)
        steep = np.convolve(steep.astype(float), kernel, mode="same") > 0.0
    if snapshot.zone_mask is not None:
        steep |= snapshot.zone_mask
    return steep


def zone_intervals(mask: np.ndarray) -> List[Tuple[int, int]]:
    """连续标记段 [(start, end)]，端点含在内；列表下标即区编号"""
    if not mask.any():
        return []
    padded = np.concatenate([[False], mask, [False]]).astype(int)
    edges = np.flatnonzero(np.diff(padded))
    return [(int(a), int(b) - 1) for a, b in zip(edges[::2], edges[1::2])]


def _conserved_and_flux(snapshot: Snapshot, eos: Polytrope):
    U = prim_to_cons_arrays(snapshot.rho, snapshot.u, snapshot.p, eos)
    F = flux_arrays(snapshot.rho, snapshot.u, snapshot.p, eos)
    return U, F


def _geometric_source(snapshot: Snapshot, eos: Polytrope) -> np.ndarray:
    """径向约化的几何项 (n−1)/r · (ρu, ρu², (E+p)u)"""
    if snapshot.geometry is not Geometry.SPHERICAL:
        return np.zeros((3, snapshot.cells))
    _, F = _conserved_and_flux(snapshot, eos)
    F = F.copy()
    F[1] -= snapshot.p
    return (eos.n - 1) / snapshot.centers * F


def _time_weights(t0: float, t1: float, t2: float) -> Tuple[float, float, float]:
    """非均匀三点中心差分权重 (二阶)"""
    h1, h2 = t1 - t0, t2 - t1
    return -h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))


def euler_residual_field(field: SpacetimeField, eos: Optional[Polytrope] = None,
                         threshold: float = DEFAULT_ZONE_THRESHOLD,
                         halo: int = DEFAULT_HALO) -> np.ndarray:
    """
    全部内部点的 ∂_t J⁰ + ∂_x Jˣ (质量、动量、能量)，形状 (K, 3, N)

    首末快照、首末单元以及间断区内的点为 NaN。
    """
    eos = eos or field.eos
    snaps = field.snapshots
    if len(snaps) < 3 or not field.common_grid:
        raise LabException(
            "残差需要至少三个共享同一网格的快照",
            parameter="field",
            suggestion="对变换场指定固定的 target_grid",
        )
    out = np.full((len(snaps), 3, snaps[0].cells), np.nan)
    pairs = [_conserved_and_flux(s, eos) for s in snaps]
    masks = [discontinuity_zones(s, threshold, halo) for s in snaps]
    dx = snaps[0].dx
    for k in range(1, len(snaps) - 1):
        w0, w1, w2 = _time_weights(snaps[k - 1].t, snaps[k].t, snaps[k + 1].t)
        dudt = w0 * pairs[k - 1][0] + w1 * pairs[k][0] + w2 * pairs[k + 1][0]
        F = pairs[k][1]
        dfdx = np.full_like(F, np.nan)
        dfdx[:, 1:-1] = (F[:, 2:] - F[:, :-2]) / (2.0 * dx)
        res = dudt + dfdx + _geometric_source(snaps[k], eos)
        flagged = masks[k - 1] | masks[k] | masks[k + 1]
        res[:, flagged] = np.nan
        out[k] = res
    return out


def euler_residual(field: SpacetimeField, cell: int, step: int, eos: Optional[Polytrope] = None,
                   threshold: float = DEFAULT_ZONE_THRESHOLD, halo: int = DEFAULT_HALO) -> np.ndarray:
    """单点残差三元组；点落入间断区时报告区编号"""
    eos = eos or field.eos
    snaps = field.snapshots
    if not (1 <= step <= len(snaps) - 2) or not (1 <= cell <= snaps[0].cells - 2):
        raise LabException(f"求值点 (cell={cell}, step={step}) 不在内部", parameter="cell,step")
    for k in (step - 1, step, step + 1):
        mask = discontinuity_zones(snaps[k], threshold, halo)
        if mask[cell]:
            zone = next(z for z, (a, b) in enumerate(zone_intervals(mask)) if a <= cell <= b)
            raise DiscontinuityZoneError(
                f"求值点 cell={cell} 在 t={snaps[k].t} 处落入间断区 {zone}",
                parameter="cell",
                zone_id=zone,
                step=k,
            )
    return euler_residual_field(field, eos, threshold, halo)[step, :, cell]


def residual_norm(field: SpacetimeField, eos: Optional[Polytrope] = None,
                  threshold: float = DEFAULT_ZONE_THRESHOLD, halo: int = DEFAULT_HALO) -> float:
    """全部合格点上残差的最大模"""
    res = euler_residual_field(field, eos, threshold, halo)
    if np.all(np.isnan(res)):
        return 0.0
    return float(np.nanmax(np.abs(res)))
