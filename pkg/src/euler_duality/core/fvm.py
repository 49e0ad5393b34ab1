# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 有限体积激波捕捉求解器 (fvm_solver)

平面 (n=1) 与球对称 (n=3) 几何下的守恒型 Godunov 格式：
- 界面通量取精确 Riemann 解在 ξ = 0 处的值
- 可选 MUSCL (minmod 限制器) + SSP-RK2
- 球对称几何源项 p·(A₊ − A₋)/V，静止均匀态逐位保持
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..models import (
    Polytrope,
    Snapshot,
    SpacetimeField,
    Geometry,
    Boundary,
    DomainError,
    NumericalAbort,
    LabException,
)
from .euler import (
    DEFAULT_FLOOR,
    cons_to_prim_arrays,
    prim_to_cons_arrays,
    sound_speed_arrays,
)
from .riemann import godunov_flux


logger = logging.getLogger(__name__)

SCHEMES = ("godunov", "muscl")
DEFAULT_CFL = 0.9
DEFAULT_MAX_STEPS = 1_000_000


# =============================================================================
# 边界与重构
# =============================================================================
def _with_ghosts(rho, u, p, left: Boundary, right: Boundary, ng: int):
    """两侧各补 ng 个虚单元：透射为零梯度，反射为镜像并反号速度"""
    out = []
    for values, odd in ((rho, False), (u, True), (p, False)):
        lo = values[:ng][::-1] if left is Boundary.REFLECTIVE else np.repeat(values[:1], ng)
        hi = values[-ng:][::-1] if right is Boundary.REFLECTIVE else np.repeat(values[-1:], ng)
        if odd:
            lo = -lo if left is Boundary.REFLECTIVE else lo
            hi = -hi if right is Boundary.REFLECTIVE else hi
        out.append(np.concatenate([lo, values, hi]))
    return out


def _minmod(a, b):
    return np.where(a * b > 0.0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def _face_states(rho, u, p, left: Boundary, right: Boundary, scheme: str):
    """N+1 个界面的左右原始量"""
    if scheme == "godunov":
        r, v, q = _with_ghosts(rho, u, p, left, right, 1)
        return (r[:-1], v[:-1], q[:-1]), (r[1:], v[1:], q[1:])
    ext = _with_ghosts(rho, u, p, left, right, 2)
    faces_l, faces_r = [], []
    for w in ext:
        slope = _minmod(w[1:-1] - w[:-2], w[2:] - w[1:-1])
        centre = w[1:-1]
        faces_l.append((centre + 0.5 * slope)[:-1])
        faces_r.append((centre - 0.5 * slope)[1:])
    # 重构出非正密度/压强的界面退回一阶
    first_l, first_r = _face_states(rho, u, p, left, right, "godunov")
    bad = (faces_l[0] <= 0) | (faces_l[2] <= 0) | (faces_r[0] <= 0) | (faces_r[2] <= 0)
    if np.any(bad):
        faces_l = [np.where(bad, f, g) for f, g in zip(first_l, faces_l)]
        faces_r = [np.where(bad, f, g) for f, g in zip(first_r, faces_r)]
    return tuple(faces_l), tuple(faces_r)


# =============================================================================
# 单步
# =============================================================================
def _boundaries(snapshot: Snapshot, left: Boundary, right: Boundary) -> Tuple[Boundary, Boundary]:
    if snapshot.geometry is Geometry.SPHERICAL and left is not Boundary.REFLECTIVE:
        logger.debug("球对称内边界强制为反射")
        left = Boundary.REFLECTIVE
    return left, right


def _rhs(snapshot: Snapshot, rho, u, p, eos: Polytrope, left: Boundary, right: Boundary,
         scheme: str) -> np.ndarray:
    """守恒量的时间导数 −(A₊F₊ − A₋F₋)/V + S"""
    (rl, ul, pl), (rr, ur, pr) = _face_states(rho, u, p, left, right, scheme)
    flux = godunov_flux(rl, ul, pl, rr, ur, pr, eos)
    areas, volumes = snapshot.areas, snapshot.volumes
    weighted = flux * areas
    dU = -(weighted[:, 1:] - weighted[:, :-1]) / volumes
    if snapshot.geometry is Geometry.SPHERICAL:
        dU[1] += p * (areas[1:] - areas[:-1]) / volumes
    return dU


def stable_dt(snapshot: Snapshot, eos: Polytrope, cfl: float) -> float:
    """Δt = cfl·dx / max(|u| + c)"""
    speed = np.max(np.abs(snapshot.u) + sound_speed_arrays(snapshot.rho, snapshot.p, eos))
    if not np.isfinite(speed) or speed <= 0.0:
        raise NumericalAbort(f"最大特征速度无效: {speed}", parameter="snapshot")
    return cfl * snapshot.dx / float(speed)


def _advance(snapshot: Snapshot, eos: Polytrope, dt: float, scheme: str,
             left: Boundary, right: Boundary, floor: float) -> Tuple[Snapshot, int]:
    U = prim_to_cons_arrays(snapshot.rho, snapshot.u, snapshot.p, eos)
    U1 = U + dt * _rhs(snapshot, snapshot.rho, snapshot.u, snapshot.p, eos, left, right, scheme)
    rho, u, p, clamped = cons_to_prim_arrays(U1, eos, floor)
    if scheme == "muscl":
        U2 = 0.5 * U + 0.5 * (U1 + dt * _rhs(snapshot, rho, u, p, eos, left, right, scheme))
        rho, u, p, extra = cons_to_prim_arrays(U2, eos, floor)
        clamped += extra
    out = snapshot.model_copy(update={"t": snapshot.t + dt, "rho": rho, "u": u, "p": p})
    return out, clamped


def step(snapshot: Snapshot, eos: Polytrope, cfl: float = DEFAULT_CFL,
         dt: Optional[float] = None, scheme: str = "godunov",
         boundary_left: Boundary = Boundary.TRANSMISSIVE,
         boundary_right: Boundary = Boundary.TRANSMISSIVE,
         floor: float = DEFAULT_FLOOR) -> Snapshot:
    """单个时间步；dt 缺省时由 CFL 条件给出"""
    if not 0.0 < cfl < 1.0:
        raise DomainError(f"cfl 必须位于 (0, 1): {cfl}", parameter="cfl")
    if scheme not in SCHEMES:
        raise DomainError(f"未知格式 {scheme}，可选 {SCHEMES}", parameter="scheme")
    left, right = _boundaries(snapshot, boundary_left, boundary_right)
    dt = stable_dt(snapshot, eos, cfl) if dt is None else dt
    out, _ = _advance(snapshot, eos, dt, scheme, left, right, floor)
    return out


def run(initial: Snapshot, eos: Polytrope, t_end: float,
        output_times: Optional[Sequence[float]] = None,
        cfl: float = DEFAULT_CFL, scheme: str = "godunov",
        boundary_left: Boundary = Boundary.TRANSMISSIVE,
        boundary_right: Boundary = Boundary.TRANSMISSIVE,
        floor: float = DEFAULT_FLOOR,
        max_steps: int = DEFAULT_MAX_STEPS) -> SpacetimeField:
    """
    从 initial.t 演化到 t_end，在 output_times 处精确存储快照

    输出时刻缺省为 [t_end]；时间步长在输出时刻前截断。
    """
    if not 0.0 < cfl < 1.0:
        raise DomainError(f"cfl 必须位于 (0, 1): {cfl}", parameter="cfl")
    if scheme not in SCHEMES:
        raise DomainError(f"未知格式 {scheme}，可选 {SCHEMES}", parameter="scheme")
    if initial.geometry is Geometry.SPHERICAL and eos.n != 3:
        raise DomainError(f"球对称几何要求 n = 3，当前 n = {eos.n}", parameter="n")
    t0 = initial.t
    if t_end < t0:
        raise LabException(f"t_end={t_end} 早于初始时刻 {t0}", parameter="t_end")
    times = sorted(set(float(t) for t in (output_times if output_times else [t_end])))
    if t_end == t0:
        times = [t0]
    if times[0] < t0 or times[-1] > t_end:
        raise LabException(
            f"输出时刻必须位于 [{t0}, {t_end}]: {times}",
            parameter="output_times",
        )
    left, right = _boundaries(initial, boundary_left, boundary_right)

    snapshots: List[Snapshot] = []
    current = initial
    steps = clamped = 0
    for target in times:
        while current.t < target:
            if steps >= max_steps:
                raise NumericalAbort(
                    f"步数超过上限 {max_steps} (t={current.t})",
                    parameter="max_steps",
                    t=current.t,
                )
            dt = min(stable_dt(current, eos, cfl), target - current.t)
            current, count = _advance(current, eos, dt, scheme, left, right, floor)
            clamped += count
            steps += 1
            if target - current.t <= 1e-14 * max(1.0, abs(target)):
                current = current.with_time(target)
        snapshots.append(current.with_time(target))
        logger.debug(f"输出快照 t={target} (累计 {steps} 步)")

    logger.info(f"演化完成: {steps} 步, {len(snapshots)} 个快照, 格式 {scheme}, 钳位 {clamped} 次")
    return SpacetimeField(
        snapshots=snapshots,
        eos=eos,
        geometry=initial.geometry,
        boundary_left=left,
        boundary_right=right,
        stats={"steps": steps, "clamped": clamped, "scheme": scheme, "cfl": cfl},
    )


# =============================================================================
# 初始条件预设
# =============================================================================
State = Tuple[float, float, float]

SOD_LEFT: State = (1.0, 0.0, 1.0)
SOD_RIGHT: State = (0.125, 0.0, 0.1)


def _snapshot(x_left: float, x_right: float, cells: int, t: float, geometry: Geometry,
              profile: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray]]) -> Snapshot:
    dx = (x_right - x_left) / cells
    centers = x_left + (np.arange(cells) + 0.5) * dx
    rho, u, p = (np.asarray(v, dtype=float) * np.ones(cells) for v in profile(centers))
    return Snapshot(t=t, x_left=x_left, x_right=x_right, rho=rho, u=u, p=p, geometry=geometry)


def piecewise(states: Sequence[State], breaks: Sequence[float], x_left: float, x_right: float,
              cells: int, t: float = 0.0, geometry: Geometry = Geometry.PLANAR) -> Snapshot:
    """按断点 breaks (len(states)−1 个，递增) 拼接常状态"""
    if len(breaks) != len(states) - 1:
        raise DomainError(f"{len(states)} 个状态需要 {len(states) - 1} 个断点", parameter="states")
    if any(b <= a for a, b in zip(breaks, breaks[1:])):
        raise DomainError(f"断点必须严格递增: {list(breaks)}", parameter="x_end")
    table = np.asarray(states, dtype=float)
    if np.any(table[:, 0] <= 0.0) or np.any(table[:, 2] <= 0.0):
        raise DomainError("各段密度与压强必须为正", parameter="states")

    def profile(x):
        idx = np.searchsorted(np.asarray(breaks, dtype=float), x, side="right")
        return table[idx, 0], table[idx, 1], table[idx, 2]

    return _snapshot(x_left, x_right, cells, t, geometry, profile)


def sod(cells: int, x_left: float = 0.0, x_right: float = 1.0, x0: float = 0.5,
        left: State = SOD_LEFT, right: State = SOD_RIGHT, t: float = 0.0,
        geometry: Geometry = Geometry.PLANAR) -> Snapshot:
    return piecewise([left, right], [x0], x_left, x_right, cells, t, geometry)


def two_shock(cells: int, x_left: float = 0.0, x_right: float = 1.0, x0: float = 0.5,
              speed: float = 1.0, t: float = 0.0, geometry: Geometry = Geometry.PLANAR) -> Snapshot:
    """对撞气流：(1, +speed, 1) | (1, −speed, 1)"""
    return piecewise([(1.0, speed, 1.0), (1.0, -speed, 1.0)], [x0], x_left, x_right, cells, t, geometry)


def blast_sphere(cells: int, x_left: float = 0.0, x_right: float = 3.0, r0: float = 0.5,
                 p_in: float = 1.0, p_out: float = 0.1, rho: float = 1.0, t: float = 0.0,
                 geometry: Geometry = Geometry.SPHERICAL) -> Snapshot:
    """静止气体中的高压球"""
    return piecewise([(rho, 0.0, p_in), (rho, 0.0, p_out)], [r0], x_left, x_right, cells, t, geometry)


def gaussian_pulse(cells: int, eos: Polytrope, x_left: float = 0.0, x_right: float = 1.0,
                   x0: float = 0.5, width: float = 0.1, amplitude: float = 0.2,
                   p0: float = 1.0, t: float = 0.0, geometry: Geometry = Geometry.PLANAR) -> Snapshot:
    """静止背景上的等熵高斯密度扰动 p = p0·ρ^γ₀"""
    if not width > 0.0:
        raise DomainError(f"脉冲宽度必须为正: {width}", parameter="width")
    if not amplitude > -1.0:
        raise DomainError(f"振幅必须大于 −1: {amplitude}", parameter="amplitude")

    def profile(x):
        rho = 1.0 + amplitude * np.exp(-((x - x0) / width) ** 2)
        return rho, np.zeros_like(x), p0 * rho ** eos.gamma0

    return _snapshot(x_left, x_right, cells, t, geometry, profile)


PRESETS: Dict[str, Callable[..., Snapshot]] = {
    "sod": sod,
    "two-shock": two_shock,
    "blast-sphere": blast_sphere,
    "gaussian-pulse": gaussian_pulse,
    "piecewise": piecewise,
}
