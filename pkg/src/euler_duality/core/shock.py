# -*- coding: utf-8 -*-
"""
Euler Duality Lab - 跳跃条件与激波容许性 (shock)

标准 RH 条件 (ρ, P, H)、扩展条件 (K, D, A, L)、任意 SL(2,R) 元素下的
对偶 RH 条件、阵面变换、熵与 Lax 容许性判定以及数值快照上的阵面检测。

残差统一取 r_f = n_μΔJ^μ = Δ(Jˣ − s J⁰)，Δ 为右减左，法余矢量 (−s, 1) 不归一化。
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..models import (
    Polytrope,
    Primitive,
    Sl2Element,
    GroupElement,
    Snapshot,
    CurrentFamily,
    FamilyKind,
    ShockFront,
    Verdict,
    Admissibility,
    JumpRecord,
    JumpReport,
    DomainError,
    STANDARD_FAMILIES,
    EXTENDED_FAMILIES,
    STACK_LABELS,
)
from .euler import sound_speed, specific_entropy_jump
from .group import act_coords, act_state, representation_matrix, _conformal_factor
from .noether import (
    current,
    current_stack,
    discontinuity_zones,
    zone_intervals,
    DEFAULT_ZONE_THRESHOLD,
    DEFAULT_HALO,
)


logger = logging.getLogger(__name__)

CONTACT_TOLERANCE = 1e-10
RESIDUAL_TOLERANCE = 1e-8
NORM_FLOOR = 1e-300
RELATIVE_FLOOR = 1e-6
SAMPLE_OFFSET = 3
# 侧状态外推到 xs 时所用斜率的跨度 (单元数)
EXTRAPOLATION_CELLS = 2

DUAL_LABELS = ("dual_rho", "dual_P", "dual_H")


# =============================================================================
# 残差
# =============================================================================
def mass_flux(front: ShockFront) -> float:
    """m = ρ_L (u_L − s)"""
    return front.mass_flux


def _embedded_state(s: Primitive) -> Primitive:
    """一维状态嵌入二维 (横向速度为 0)，用于角动量流"""
    return Primitive(rho=s.rho, u=(s.ux, 0.0), p=s.p)


def _pair(state: Primitive, front: ShockFront, family: CurrentFamily,
          eos: Polytrope, transverse: float) -> np.ndarray:
    """(J⁰, Jˣ)"""
    if family.kind is FamilyKind.ANGULAR_MOMENTUM:
        sample = current(_embedded_state(state), (front.xs, transverse), front.t, family, eos)
    else:
        sample = current(state, front.xs, front.t, family, eos)
    return np.array([sample.J0, sample.Jx[0]])


def _normalize(left: np.ndarray, right: np.ndarray, s: float, floor: float):
    """
    left/right 为 (..., 2) 的 (J⁰, Jˣ)；分母 |n·J_L| + |n·J_R| 加上
    floor 倍的分量尺度 |Jˣ| + |s J⁰|，接触间断处 n·J 本身为舍入量级
    """
    n_left = left[..., 1] - s * left[..., 0]
    n_right = right[..., 1] - s * right[..., 0]
    size = (np.abs(left[..., 1]) + np.abs(s * left[..., 0])
            + np.abs(right[..., 1]) + np.abs(s * right[..., 0]))
    raw = n_right - n_left
    return raw, raw / (np.abs(n_left) + np.abs(n_right) + floor * size + NORM_FLOOR)


def rh_residual(front: ShockFront, family: CurrentFamily, eos: Polytrope,
                transverse: float = 1.0) -> float:
    """
    n_μΔJ^μ，在 (xs, t) 处求值

    角动量把阵面嵌入平面，取横向坐标 transverse，此时 r_L = transverse·r_P。
    """
    left = _pair(front.left, front, family, eos, transverse)
    right = _pair(front.right, front, family, eos, transverse)
    return float((right[1] - front.s * right[0]) - (left[1] - front.s * left[0]))


def normalized_residual(front: ShockFront, family: CurrentFamily, eos: Polytrope,
                        transverse: float = 1.0, floor: float = RELATIVE_FLOOR) -> float:
    """r̂ = r / (|n·J_L| + |n·J_R| + floor·尺度)，取值于 [−1, 1]"""
    left = _pair(front.left, front, family, eos, transverse)
    right = _pair(front.right, front, family, eos, transverse)
    _, norm = _normalize(left, right, front.s, floor)
    return float(norm)


def extended_combination(r_rho: float, r_p: float, r_h: float, xs: float, t: float,
                         transverse: float = 1.0) -> Dict[str, float]:
    """由标准残差线性组合出的扩展残差"""
    return {
        "K0": t * r_p - xs * r_rho,
        "D": xs * r_p - 2.0 * t * r_h,
        "A": 0.5 * xs * xs * r_rho - t * xs * r_p + t * t * r_h,
        "L0": transverse * r_p,
    }


def _side_stacks(front: ShockFront, eos: Polytrope):
    """两侧 (ρ, K, P, A, D, H) 流栈，形状 (6, 2)"""
    left = current_stack(front.left, front.xs, front.t, eos)
    right = current_stack(front.right, front.xs, front.t, eos)
    return left, right


def standard_vector(front: ShockFront, eos: Polytrope) -> np.ndarray:
    """按 (ρ, K, P, A, D, H) 排列的六个残差"""
    left, right = _side_stacks(front, eos)
    return (right - left) @ front.n_mu


def dual_rh_vector(front: ShockFront, sl2: Sl2Element, eos: Polytrope,
                   floor: float = RELATIVE_FLOOR):
    """
    完整的对偶残差向量 M·r 及其归一化形式

    两侧先各自按 M 组合流，再取跳跃。
    """
    _conformal_factor(sl2, front.t, positive=True)
    m = representation_matrix(sl2).array
    left, right = _side_stacks(front, eos)
    return _normalize(m @ left, m @ right, front.s, floor)


def dual_rh_residual(front: ShockFront, sl2: Sl2Element, eos: Polytrope) -> np.ndarray:
    """
    (质量行, 动量行, 能量行)：
        n·ΔJ_ρ,  n·(γΔJ_K + δΔJ_P),  n·(δ²ΔJ_H − γδΔJ_D + γ²ΔJ_A)

    Drury-Mendonça 元素下依次化为 ρ、−(xJ_ρ − tJ_P)、−t²J_H + txJ_P − ½x²J_ρ
    的跳跃条件。
    """
    raw, _ = dual_rh_vector(front, sl2, eos)
    rows = [STACK_LABELS.index(label) for label in ("rho", "P", "H")]
    return raw[rows]


# =============================================================================
# 阵面变换
# =============================================================================
def transform_front(g: GroupElement, front: ShockFront, eos: Polytrope,
                    strict: bool = True) -> ShockFront:
    """
    x's 由坐标作用给出，s' = (γt+δ)(R s + v) − γ(R xs + v t + a)；
    R = −1 时左右两侧互换。
    """
    if g.n != 1:
        raise DomainError("阵面变换只支持一维/径向约化 (n_components = 1)", parameter="group")
    q = float(_conformal_factor(g.sl2, front.t, positive=True))
    xp, tp = act_coords(g, front.xs, front.t)
    r = float(g.gal.rotation[0, 0])
    v = float(g.gal.velocity[0])
    xt = r * front.xs + v * front.t + float(g.gal.shift[0])
    sp = q * (r * front.s + v) - g.sl2.gamma * xt
    left = act_state(g, front.left, front.xs, front.t, eos, strict=strict)
    right = act_state(g, front.right, front.xs, front.t, eos, strict=strict)
    if r < 0.0:
        left, right = right, left
    return ShockFront(
        t=float(tp), xs=float(xp), s=float(sp), left=left, right=right,
        zone_id=front.zone_id,
        speed_mass_rh=None if front.speed_mass_rh is None else float(
            q * (r * front.speed_mass_rh + v) - g.sl2.gamma * xt),
    )


# =============================================================================
# 容许性
# =============================================================================
def admissibility(front: ShockFront, eos: Polytrope,
                  contact_tol: float = CONTACT_TOLERANCE) -> Admissibility:
    """
    熵判据：比熵沿质量通量方向 (上游 → 下游) 增加；
    Lax 判据：上游 |u−s| > c，下游 |u−s| < c。两者同时满足才判为容许激波。
    """
    m = front.mass_flux
    c_left, c_right = sound_speed(front.left, eos), sound_speed(front.right, eos)
    scale = max(front.left.rho, front.right.rho) * max(c_left, c_right)
    if abs(m) < contact_tol * scale:
        return Admissibility(
            verdict=Verdict.CONTACT,
            mass_flux=m,
            delta_s=specific_entropy_jump(front.left, front.right, eos),
            entropy_increases=False,
            lax_satisfied=False,
            upstream="none",
        )
    if m > 0.0:
        upstream, downstream, side = front.left, front.right, "left"
        c_up, c_down = c_left, c_right
    else:
        upstream, downstream, side = front.right, front.left, "right"
        c_up, c_down = c_right, c_left
    delta_s = specific_entropy_jump(upstream, downstream, eos)
    lax = abs(upstream.ux - front.s) > c_up and abs(downstream.ux - front.s) < c_down
    entropy_ok = delta_s > 0.0
    verdict = Verdict.SHOCK_ADMISSIBLE if entropy_ok and lax else Verdict.SHOCK_INADMISSIBLE
    return Admissibility(
        verdict=verdict,
        mass_flux=m,
        delta_s=delta_s,
        entropy_increases=entropy_ok,
        lax_satisfied=lax,
        upstream=side,
    )


# =============================================================================
# Hugoniot 阵面
# =============================================================================
def hugoniot_front(upstream: Primitive, mach: float, eos: Polytrope, t: float = 0.0,
                   xs: float = 0.0, direction: str = "right") -> ShockFront:
    """
    由正激波关系构造精确阵面

    direction="right" 时激波向右传入位于右侧的上游气体，否则镜像。
    """
    if not mach > 1.0:
        raise DomainError(f"激波 Mach 数必须大于 1: {mach}", parameter="mach")
    if direction not in ("left", "right"):
        raise DomainError(f"未知传播方向: {direction}", parameter="direction")
    g = eos.gamma0
    m2 = mach * mach
    c1 = sound_speed(upstream, eos)
    rho2 = upstream.rho * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0)
    p2 = upstream.p * (1.0 + 2.0 * g / (g + 1.0) * (m2 - 1.0))
    sign = 1.0 if direction == "right" else -1.0
    s = upstream.ux + sign * mach * c1
    u2 = s + upstream.rho * (upstream.ux - s) / rho2
    downstream = Primitive(rho=rho2, u=u2, p=p2)
    left, right = (downstream, upstream) if direction == "right" else (upstream, downstream)
    return ShockFront(t=t, xs=xs, s=s, left=left, right=right)


# =============================================================================
# 报告
# =============================================================================
def jump_report(front: ShockFront, eos: Polytrope,
                families: Optional[Sequence[CurrentFamily]] = None,
                tolerance: float = RESIDUAL_TOLERANCE,
                sl2: Optional[Sl2Element] = None,
                contact_tol: float = CONTACT_TOLERANCE,
                include_angular: bool = False) -> JumpReport:
    """各流族残差、可选的对偶残差以及容许性"""
    families = list(families) if families is not None else [*STANDARD_FAMILIES, *EXTENDED_FAMILIES]
    if include_angular:
        families.append(CurrentFamily(kind=FamilyKind.ANGULAR_MOMENTUM))
    records: List[JumpRecord] = []
    for family in families:
        norm = normalized_residual(front, family, eos)
        records.append(JumpRecord(
            family=family.label,
            residual=rh_residual(front, family, eos),
            normalized=norm,
            tolerance=tolerance,
            passed=bool(abs(norm) <= tolerance),
        ))
    if sl2 is not None:
        raw, norm = dual_rh_vector(front, sl2, eos)
        for label, stack_label in zip(DUAL_LABELS, ("rho", "P", "H")):
            i = STACK_LABELS.index(stack_label)
            records.append(JumpRecord(
                family=label,
                residual=float(raw[i]),
                normalized=float(norm[i]),
                tolerance=tolerance,
                passed=bool(abs(norm[i]) <= tolerance),
            ))
    return JumpReport(
        t=front.t, xs=front.xs, s=front.s, records=records,
        admissibility=admissibility(front, eos, contact_tol),
    )


# =============================================================================
# 阵面检测
# =============================================================================
def _state_at(snapshot: Snapshot, i: int) -> Primitive:
    return Primitive(rho=float(snapshot.rho[i]), u=float(snapshot.u[i]), p=float(snapshot.p[i]))


def _midpoint_crossing(snapshot: Snapshot, lo: int, hi: int) -> float:
    """ρ 穿过两侧平均值的位置 (相邻中心间线性插值)"""
    rho, x = snapshot.rho, snapshot.centers
    mid = 0.5 * (rho[lo] + rho[hi])
    for j in range(lo, hi):
        a, b = rho[j] - mid, rho[j + 1] - mid
        if a == 0.0:
            return float(x[j])
        if a * b < 0.0:
            return float(x[j] + (mid - rho[j]) / (rho[j + 1] - rho[j]) * snapshot.dx)
    return float(0.5 * (x[lo] + x[hi]))


def _side_state(snapshot: Snapshot, i: int, outward: int, xs: float) -> Primitive:
    """
    第 i 单元的状态沿区外方向的斜率线性外推到 xs

    背景场的线性部分 (例如变换像中的 −γx̃ 速度项) 由此在 xs 处对消；
    外推出非正的 ρ 或 p 时退回单元值。
    """
    j = i + outward * EXTRAPOLATION_CELLS
    if not 0 <= j < snapshot.cells:
        return _state_at(snapshot, i)
    x = snapshot.centers
    w = (xs - x[i]) / (x[i] - x[j])
    rho, u, p = (float(v[i] + w * (v[i] - v[j])) for v in (snapshot.rho, snapshot.u, snapshot.p))
    if not (rho > 0.0 and p > 0.0):
        logger.debug(f"单元 {i} 外推到 xs={xs:.6g} 失去正性，使用单元值")
        return _state_at(snapshot, i)
    return Primitive(rho=rho, u=u, p=p)


def _sampling_windows(snapshot: Snapshot, threshold: float, halo: int, offset: int):
    """[(zone_id, lo, hi)]；zone_id 为 zone_intervals 中的下标，合并窗保留第一个区的编号"""
    mask = discontinuity_zones(snapshot, threshold, halo)
    windows = []
    for zone_id, (start, end) in enumerate(zone_intervals(mask)):
        lo, hi = start - offset, end + offset
        if lo < 0 or hi >= snapshot.cells:
            logger.warning(f"间断区 {zone_id} [{start}, {end}] 触及边界，跳过")
            continue
        if windows and lo <= windows[-1][2]:
            logger.warning(f"间断区采样窗重叠，合并为 [{windows[-1][1]}, {hi}]")
            windows[-1] = (windows[-1][0], windows[-1][1], hi)
            continue
        windows.append((zone_id, lo, hi))
    return windows


def _raw_fronts(snapshot: Snapshot, threshold: float, halo: int, offset: int):
    """[(zone_id, xs, left, right, s_mass)]，两侧状态外推到 xs"""
    raw = []
    for zone_id, lo, hi in _sampling_windows(snapshot, threshold, halo, offset):
        if _state_at(snapshot, lo) == _state_at(snapshot, hi):
            continue
        xs = _midpoint_crossing(snapshot, lo, hi)
        left, right = _side_state(snapshot, lo, -1, xs), _side_state(snapshot, hi, 1, xs)
        d_rho = right.rho - left.rho
        s_mass = (right.rho * right.ux - left.rho * left.ux) / d_rho if d_rho != 0.0 else left.ux
        raw.append((zone_id, xs, left, right, s_mass))
    return raw


def _match(candidates, xs: float, s_mass: float, dt: float) -> Optional[float]:
    """按质量 RH 速度外推，取位置最接近的阵面"""
    if not candidates:
        return None
    return min((c[1] for c in candidates), key=lambda x: abs(x + s_mass * dt - xs))


def detect_fronts(snapshot: Snapshot, previous: Optional[Snapshot] = None,
                  threshold: float = DEFAULT_ZONE_THRESHOLD, halo: int = DEFAULT_HALO,
                  offset: int = SAMPLE_OFFSET,
                  following: Optional[Snapshot] = None) -> List[ShockFront]:
    """
    陡峭梯度区 → 阵面

    两侧状态取区外 offset 个单元处并线性外推到阵面；位置为密度中值穿越点。给出相邻快照时
    速度由阵面追踪得到 (前后都有时取中心差分)，否则用质量 RH 速度 Δ(ρu)/Δρ。
    """
    before = _raw_fronts(previous, threshold, halo, offset) if previous is not None else []
    after = _raw_fronts(following, threshold, halo, offset) if following is not None else []
    fronts: List[ShockFront] = []
    for zone_id, xs, left, right, s_mass in _raw_fronts(snapshot, threshold, halo, offset):
        x_prev = _match(before, xs, s_mass, snapshot.t - previous.t) if before else None
        x_next = _match(after, xs, s_mass, snapshot.t - following.t) if after else None
        if x_prev is not None and x_next is not None:
            s = (x_next - x_prev) / (following.t - previous.t)
        elif x_prev is not None:
            s = (xs - x_prev) / (snapshot.t - previous.t)
        elif x_next is not None:
            s = (x_next - xs) / (following.t - snapshot.t)
        else:
            s = s_mass
        fronts.append(ShockFront(
            t=snapshot.t, xs=xs, s=s, left=left, right=right,
            zone_id=zone_id, speed_mass_rh=s_mass,
        ))
    logger.debug(f"t={snapshot.t}: 检测到 {len(fronts)} 个阵面")
    return fronts


def leading_shock(fronts: Iterable[ShockFront], eos: Polytrope,
                  contact_tol: float = CONTACT_TOLERANCE) -> Optional[ShockFront]:
    """最外侧 (xs 最大) 的非接触间断"""
    shocks = [f for f in fronts if admissibility(f, eos, contact_tol).verdict is not Verdict.CONTACT]
    return max(shocks, key=lambda f: f.xs) if shocks else None
