# -*- coding: utf-8 -*-
"""
Euler Duality Lab - SL(2,R)∧Galilei 群 (group)

坐标作用、场作用、粘性场作用、6×6 流表示矩阵、Jacobian/余矢量因子以及整场拉回。

约定：
- 群元素先作用 Galilei 部分 x̃ = R x + v t + a，再作用 SL(2,R) 部分
  x' = x̃/(γt+δ)，t' = (αt+β)/(γt+δ)。
- 映射解的运算要求整个源时间窗上 γt+δ > 0。
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from ..models import (
    Polytrope,
    Primitive,
    Sl2Element,
    GalileiElement,
    GroupElement,
    RepresentationMatrix,
    Snapshot,
    SpacetimeField,
    Geometry,
    LabException,
    SingularTimeError,
    CoverageError,
)
from .euler import chi_arrays
from .noether import discontinuity_zones


logger = logging.getLogger(__name__)

TIME_MATCH_TOLERANCE = 1e-12


# =============================================================================
# 构造
# =============================================================================
def make_element(alpha: float = 1.0, beta: float = 0.0, gamma: float = 0.0, delta: float = 1.0,
                 R=None, v=None, a=None, n: int = 1) -> GroupElement:
    if R is not None:
        n = np.atleast_2d(np.asarray(R, dtype=float)).shape[0]
    return GroupElement(
        sl2=Sl2Element(alpha=alpha, beta=beta, gamma=gamma, delta=delta),
        gal=GalileiElement(
            R=np.eye(n) if R is None else R,
            v=np.zeros(n) if v is None else v,
            a=np.zeros(n) if a is None else a,
        ),
    )


def identity(n: int = 1) -> GroupElement:
    return make_element(n=n)


def time_translation(b: float, n: int = 1) -> GroupElement:
    return make_element(1.0, b, 0.0, 1.0, n=n)


def dilatation(lam: float, n: int = 1) -> GroupElement:
    return make_element(lam, 0.0, 0.0, 1.0 / lam, n=n)


def expansion(c: float, n: int = 1) -> GroupElement:
    return make_element(1.0, 0.0, c, 1.0, n=n)


def drury_mendonca(n: int = 1) -> GroupElement:
    """(α,β,γ,δ) = (0,−1,1,0)：t → −1/t，x → x/t"""
    return make_element(0.0, -1.0, 1.0, 0.0, n=n)


def boost(v, n: Optional[int] = None) -> GroupElement:
    v = np.atleast_1d(np.asarray(v, dtype=float))
    return make_element(v=v, n=n or v.size)


def translation(a, n: Optional[int] = None) -> GroupElement:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    return make_element(a=a, n=n or a.size)


def rotation(R) -> GroupElement:
    return make_element(R=R)


# =============================================================================
# 群运算
# =============================================================================
def compose(g2: GroupElement, g1: GroupElement) -> GroupElement:
    """
    g2∘g1 (先 g1 后 g2)

    SL(2,R) 部分为矩阵乘积 σ₂σ₁；Galilei 部分:
        R = R₂R₁, v = R₂v₁ + α₁v₂ + γ₁a₂, a = R₂a₁ + β₁v₂ + δ₁a₂
    """
    s1, s2 = g1.sl2, g2.sl2
    r1, r2 = g1.gal.rotation, g2.gal.rotation
    v = r2 @ g1.gal.velocity + s1.alpha * g2.gal.velocity + s1.gamma * g2.gal.shift
    a = r2 @ g1.gal.shift + s1.beta * g2.gal.velocity + s1.delta * g2.gal.shift
    return GroupElement(
        sl2=Sl2Element.from_matrix(s2.matrix @ s1.matrix),
        gal=GalileiElement(R=r2 @ r1, v=v, a=a),
    )


def inverse(g: GroupElement) -> GroupElement:
    s = g.sl2
    rt = g.gal.rotation.T
    rv, ra = rt @ g.gal.velocity, rt @ g.gal.shift
    return GroupElement(
        sl2=Sl2Element(alpha=s.delta, beta=-s.beta, gamma=-s.gamma, delta=s.alpha),
        gal=GalileiElement(R=rt, v=-(s.delta * rv - s.gamma * ra), a=-(s.alpha * ra - s.beta * rv)),
    )


def negate(g: GroupElement) -> GroupElement:
    """(σ, R, v, a) → (−σ, −R, −v, −a)：诱导完全相同的坐标与场映射"""
    s = g.sl2
    return GroupElement(
        sl2=Sl2Element(alpha=-s.alpha, beta=-s.beta, gamma=-s.gamma, delta=-s.delta),
        gal=GalileiElement(R=-g.gal.rotation, v=-g.gal.velocity, a=-g.gal.shift),
    )


def singular_time(sl2: Sl2Element) -> Optional[float]:
    """γt+δ = 0 的时刻 −δ/γ (γ = 0 时不存在)"""
    if sl2.gamma == 0.0:
        return None
    return -sl2.delta / sl2.gamma


def normalize_for_window(g: GroupElement, t0: float, t1: float) -> GroupElement:
    """保证 [t0, t1] 上 γt+δ > 0，必要时应用离散对称 (−σ, −R, −v, −a)"""
    ts = singular_time(g.sl2)
    if ts is not None and min(t0, t1) <= ts <= max(t0, t1):
        raise SingularTimeError(
            f"时间窗 [{t0}, {t1}] 包含奇异时刻 t = {ts}",
            parameter="group",
            suggestion="选取不含 −δ/γ 的严格单侧时间窗，例如 Drury-Mendonça 用 t ∈ [1, 2]",
            singular_time=ts,
            window=[t0, t1],
        )
    if g.sl2.q(t0) < 0.0:
        logger.debug("应用离散对称 (−α,−β,−γ,−δ) 使 γt+δ > 0")
        return negate(g)
    return g


def random_sl2(rng: np.random.Generator, scale: float = 2.0) -> Sl2Element:
    """α, β, γ 均匀取自 [−scale, scale] (|α| ≥ 0.1)，δ 由 det = 1 确定"""
    while True:
        alpha, beta, gamma = rng.uniform(-scale, scale, size=3)
        if abs(alpha) >= 0.1:
            return Sl2Element(alpha=alpha, beta=beta, gamma=gamma, delta=(1.0 + beta * gamma) / alpha)


def admissible_at(sl2: Sl2Element, t: float) -> Sl2Element:
    """返回在 t 处 γt+δ > 0 的代表元 (±σ)"""
    if sl2.q(t) == 0.0:
        raise SingularTimeError(f"t = {t} 恰为奇异时刻", parameter="t", singular_time=t)
    if sl2.q(t) > 0.0:
        return sl2
    return Sl2Element(alpha=-sl2.alpha, beta=-sl2.beta, gamma=-sl2.gamma, delta=-sl2.delta)


def _conformal_factor(sl2: Sl2Element, t, positive: bool):
    q = sl2.q(np.asarray(t, dtype=float))
    if np.any(q == 0.0):
        raise SingularTimeError(
            f"γt+δ = 0：t = {singular_time(sl2)} 被排除",
            parameter="t",
            singular_time=singular_time(sl2),
        )
    if positive and np.any(q < 0.0):
        raise SingularTimeError(
            "γt+δ < 0：违反保向分支约束",
            parameter="t",
            suggestion="先调用 normalize_for_window 或更换时间窗",
            singular_time=singular_time(sl2),
        )
    return q


def _as_points(x, n: int) -> Tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    if n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        return x[..., None], True
    return x, False


# =============================================================================
# 坐标与场作用
# =============================================================================
def act_coords(g: GroupElement, x, t):
    """(x, t) → (x', t')；一维时 x 可为标量或数组"""
    q = _conformal_factor(g.sl2, t, positive=False)
    xv, squeeze = _as_points(x, g.n)
    t = np.asarray(t, dtype=float)
    xt = xv @ g.gal.rotation.T + t[..., None] * g.gal.velocity + g.gal.shift
    xp = xt / q[..., None]
    tp = (g.sl2.alpha * t + g.sl2.beta) / q
    if squeeze:
        xp = xp[..., 0]
    return xp, tp


def inverse_time(sl2: Sl2Element, tp):
    """t' 的原像 t"""
    tp = np.asarray(tp, dtype=float)
    return (sl2.delta * tp - sl2.beta) / (sl2.alpha - sl2.gamma * tp)


def _require_symmetric(g: GroupElement, eos: Polytrope, strict: bool) -> None:
    s = g.sl2
    pure_time_translation = s.gamma == 0.0 and s.alpha == 1.0 and s.delta == 1.0
    if eos.symmetric or pure_time_translation:
        return
    if strict:
        raise LabException(
            f"γ₀={eos.gamma0} 不是 n={eos.n} 的对称指数 1+2/n，SL(2,R) 作用不是对称变换",
            parameter="gamma0",
            suggestion="使用 γ₀ = 1 + 2/n，或在负对照中显式传入 strict=False",
        )
    logger.warning(f"负对照: 在非对称指数 γ₀={eos.gamma0} 下施加 SL(2,R) 作用")


def act_state(g: GroupElement, s: Primitive, x, t, eos: Polytrope, strict: bool = True) -> Primitive:
    """
    ρ' = (γt+δ)ⁿ ρ，u' = (γt+δ)(R u + v) − γ(R x + v t + a)，χ 为标量
    """
    _require_symmetric(g, eos, strict)
    q = float(_conformal_factor(g.sl2, t, positive=True))
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    r = g.gal.rotation
    xt = r @ xv + g.gal.velocity * t + g.gal.shift
    u = q * (r @ s.velocity + g.gal.velocity) - g.sl2.gamma * xt
    rho = q ** eos.n * s.rho
    # χ' = χ ⇒ p' = p·q^{nγ₀}
    return Primitive(rho=rho, u=u, p=s.p * q ** (eos.n * eos.gamma0))


def act_state_arrays(g: GroupElement, rho, u, p, x, t, eos: Polytrope, strict: bool = True):
    """一维/径向约化的数组版本，R 取 ±1"""
    _require_symmetric(g, eos, strict)
    q = _conformal_factor(g.sl2, t, positive=True)
    r = float(g.gal.rotation[0, 0])
    v = float(g.gal.velocity[0])
    a = float(g.gal.shift[0])
    xt = r * x + v * t + a
    return (
        q ** eos.n * rho,
        q * (r * u + v) - g.sl2.gamma * xt,
        p * q ** (eos.n * eos.gamma0),
    )


def act_viscosity(g: GroupElement, eta, zeta, t, n: int):
    """η' = (γt+δ)ⁿ η，ζ' = (γt+δ)ⁿ ζ (与密度同为标量密度)"""
    q = _conformal_factor(g.sl2, t, positive=True)
    return q ** n * eta, q ** n * zeta


# =============================================================================
# 表示矩阵与 Jacobian
# =============================================================================
def representation_matrix(sl2: Sl2Element, printed: bool = False) -> RepresentationMatrix:
    """
    流栈 (ρ, K, P, A, D, H) 上的表示 {1}⊕{二重态}⊕{三重态}

    A 行首项取 α²；printed=True 时复现印刷版的 α，此时 det M ≠ 1。
    """
    a, b, c, d = sl2.alpha, sl2.beta, sl2.gamma, sl2.delta
    m = np.zeros((6, 6))
    m[0, 0] = 1.0
    m[1:3, 1:3] = [[a, b], [c, d]]
    m[3:6, 3:6] = [
        [a if printed else a * a, -a * b, b * b],
        [-2.0 * a * c, b * c + a * d, -2.0 * b * d],
        [c * c, -c * d, d * d],
    ]
    return RepresentationMatrix(entries=tuple(map(tuple, m)), printed=printed)


def expand_representation(sl2: Sl2Element, n: int) -> np.ndarray:
    """n 维流栈 (ρ, K₁..Kₙ, P₁..Pₙ, A, D, H) 上的表示，K/P 块按分量重复"""
    m6 = representation_matrix(sl2).array
    size = 4 + 2 * n
    m = np.zeros((size, size))
    m[0, 0] = 1.0
    m[1:1 + 2 * n, 1:1 + 2 * n] = np.kron(m6[1:3, 1:3], np.eye(n))
    m[-3:, -3:] = m6[3:, 3:]
    return m


def jacobian_factors(sl2: Sl2Element, x, t, n: Optional[int] = None):
    """
    返回 (det(∂x/∂x'), ∂x'^μ/∂x^ν, 余矢量拉回 ∂x^ν/∂x'^μ)

    坐标顺序 (t, x¹..xᵏ)；det 按完整的 n 维空间计为 (γt+δ)^{n+2}。
    """
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    k = xv.size
    n = k if n is None else n
    q = float(_conformal_factor(sl2, t, positive=True))
    forward = np.zeros((k + 1, k + 1))
    forward[0, 0] = 1.0 / q ** 2
    forward[1:, 0] = -sl2.gamma * xv / q ** 2
    forward[1:, 1:] = np.eye(k) / q
    covector = np.zeros((k + 1, k + 1))
    covector[0, 0] = q ** 2
    covector[0, 1:] = sl2.gamma * q * xv
    covector[1:, 1:] = q * np.eye(k)
    return q ** (n + 2), forward, covector


def transform_current_stack(sl2: Sl2Element, stack: np.ndarray, x, t, n: int) -> np.ndarray:
    """J'^μ_r(x') = det(∂x/∂x') ∂x'^μ/∂x^ν Σ_s M_rs J^ν_s(x)，stack 形状 (6, 2)"""
    det, forward, _ = jacobian_factors(sl2, x, t, n)
    mixed = representation_matrix(sl2).array @ stack
    return det * mixed @ forward.T


# =============================================================================
# 整场拉回
# =============================================================================
def _interpolate(snap: Snapshot, xq: np.ndarray, method: str, zones: np.ndarray):
    centers = snap.centers
    out = []
    for values in (snap.rho, snap.u, snap.p):
        if method == "cubic":
            out.append(CubicSpline(centers, values)(xq))
        else:
            out.append(np.interp(xq, centers, values))
    in_zone = np.zeros(xq.shape, dtype=bool)
    if zones.any():
        idx = np.clip(np.floor((xq - snap.x_left) / snap.dx).astype(int), 0, snap.cells - 1)
        in_zone = zones[idx]
        if in_zone.any():
            # 间断区内取最近单元值，不跨越跳跃插值
            nearest = idx[in_zone]
            for arr, values in zip(out, (snap.rho, snap.u, snap.p)):
                arr[in_zone] = values[nearest]
    return out[0], out[1], out[2], in_zone


def _sample_source(field: SpacetimeField, x: np.ndarray, t: float, method: str,
                   threshold: float, halo: int):
    times = field.times
    t0, t1 = field.window()
    slack = TIME_MATCH_TOLERANCE * max(1.0, abs(t))
    if t < t0 - slack or t > t1 + slack:
        raise CoverageError(
            f"原像时刻 t={t} 超出源场时间覆盖 [{t0}, {t1}]",
            parameter="target_times",
            required_window={"t": [t, t]},
        )
    k = int(np.argmin(np.abs(times - t)))
    if abs(times[k] - t) <= slack:
        snap = field.snapshots[k]
        return _interpolate(snap, x, method, discontinuity_zones(snap, threshold, halo))
    k = int(np.searchsorted(times, t)) - 1
    a, b = field.snapshots[k], field.snapshots[k + 1]
    w = (t - a.t) / (b.t - a.t)
    ra, ua, pa, za = _interpolate(a, x, method, discontinuity_zones(a, threshold, halo))
    rb, ub, pb, zb = _interpolate(b, x, method, discontinuity_zones(b, threshold, halo))
    return (1 - w) * ra + w * rb, (1 - w) * ua + w * ub, (1 - w) * pa + w * pb, za | zb


def transform_snapshot(
    g: GroupElement,
    field: SpacetimeField,
    target_times: Sequence[float],
    target_grid: Optional[Tuple[float, float, int]] = None,
    interpolation: str = "linear",
    zone_threshold: float = 0.05,
    halo: int = 3,
    strict: bool = True,
) -> SpacetimeField:
    """
    把源场拉回到目标时刻 t'：对每个目标点求原像 (x, t)，插值采样源场后施加 act_state

    target_grid 缺省时取源网格在原像时刻的像 (单元数不变)。
    """
    if not field.snapshots:
        return field.model_copy(update={"snapshots": []})
    eos = field.eos
    if field.geometry is Geometry.SPHERICAL and not g.gal.is_identity:
        raise LabException(
            "球对称场只允许纯 SL(2,R) 元素 (Galilei 部分必须为恒等)",
            parameter="group",
        )
    pre_times = inverse_time(g.sl2, np.asarray(target_times, dtype=float))
    g = normalize_for_window(g, float(np.min(pre_times)), float(np.max(pre_times)))
    _require_symmetric(g, eos, strict)

    r = float(g.gal.rotation[0, 0])
    v = float(g.gal.velocity[0])
    a = float(g.gal.shift[0])
    snapshots = []
    for tp, t in zip(target_times, pre_times):
        t = float(t)
        q = float(g.sl2.q(t))
        ref = field.snapshots[field.nearest(t)]
        if target_grid is None:
            ends = (r * np.array([ref.x_left, ref.x_right]) + v * t + a) / q
            x_left, x_right, cells = float(ends.min()), float(ends.max()), ref.cells
        else:
            x_left, x_right, cells = target_grid
        centers = x_left + (np.arange(cells) + 0.5) * (x_right - x_left) / cells
        # 原像 x = Rᵀ(q x' − v t − a)
        x = r * (q * centers - v * t - a)
        pad = 1e-9 * (ref.x_right - ref.x_left)
        if x.min() < ref.x_left - pad or x.max() > ref.x_right + pad:
            raise CoverageError(
                f"t'={tp} 的原像超出源网格 [{ref.x_left}, {ref.x_right}]",
                parameter="target_grid",
                required_window={"x": [float(x.min()), float(x.max())], "t": [t, t]},
            )
        rho, u, p, in_zone = _sample_source(field, x, t, interpolation, zone_threshold, halo)
        rho2, u2, p2 = act_state_arrays(g, rho, u, p, x, t, eos, strict=False)
        snapshots.append(Snapshot(
            t=float(tp), x_left=x_left, x_right=x_right,
            rho=rho2, u=u2, p=p2, geometry=field.geometry, zone_mask=in_zone,
        ))
        logger.debug(f"t'={tp:.6g} ← t={t:.6g}，间断区单元 {int(in_zone.sum())}")

    singular = singular_time(g.sl2)
    stats = {
        "source_window": list(field.window()),
        "mapped_window": [float(target_times[0]), float(target_times[-1])],
        "singular_time": singular,
        "interpolation": interpolation,
    }
    return SpacetimeField(
        snapshots=snapshots,
        eos=eos,
        geometry=field.geometry,
        boundary_left=field.boundary_left,
        boundary_right=field.boundary_right,
        stats=stats,
    )


def chi_invariance_defect(g: GroupElement, s: Primitive, x, t, eos: Polytrope) -> float:
    """|χ(s') − χ(s)|/χ(s)，供性质测试使用"""
    s2 = act_state(g, s, x, t, eos)
    c1 = chi_arrays(s.rho, s.p, eos)
    c2 = chi_arrays(s2.rho, s2.p, eos)
    return float(abs(c2 - c1) / c1)
