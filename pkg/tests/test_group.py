# -*- coding: utf-8 -*-
"""SL(2,R)∧Galilei 群作用"""

import numpy as np
import pytest

from euler_duality.core import fvm
from euler_duality.core.group import (
    act_coords,
    act_state,
    act_viscosity,
    admissible_at,
    boost,
    chi_invariance_defect,
    compose,
    dilatation,
    drury_mendonca,
    expansion,
    identity,
    inverse,
    jacobian_factors,
    make_element,
    negate,
    random_sl2,
    representation_matrix,
    time_translation,
    transform_current_stack,
    transform_snapshot,
)
from euler_duality.core.noether import current_stack
from euler_duality.models import (
    CoverageError,
    DomainError,
    LabException,
    Primitive,
    SingularTimeError,
    Sl2Element,
    SpacetimeField,
)

from conftest import random_state


def random_element(rng, scale=1.0):
    sl2 = random_sl2(rng, scale)
    return make_element(sl2.alpha, sl2.beta, sl2.gamma, sl2.delta,
                        R=[[rng.choice([-1.0, 1.0])]], v=[rng.uniform(-1, 1)], a=[rng.uniform(-1, 1)])


def generic_sl2(rng):
    """元素量级 O(1) 的随机 SL(2,R) 元素"""
    while True:
        m = rng.uniform(-1.0, 1.0, size=(2, 2))
        if np.linalg.det(m) > 0.2:
            return Sl2Element.from_matrix(m)


# =============================================================================
# 元素与坐标作用
# =============================================================================
def test_sl2_renormalizes_positive_determinant():
    s = Sl2Element(alpha=2.0, beta=0.0, gamma=0.0, delta=2.0)
    assert s.alpha == pytest.approx(1.0)
    assert s.determinant == pytest.approx(1.0, abs=1e-12)


def test_sl2_rejects_nonpositive_determinant():
    with pytest.raises(DomainError):
        Sl2Element(alpha=1.0, beta=1.0, gamma=1.0, delta=1.0)


def test_galilei_requires_orthogonal_rotation():
    with pytest.raises(DomainError):
        make_element(R=[[2.0]])


def test_identity_coordinates():
    xp, tp = act_coords(identity(), 0.3, 0.7)
    assert (xp, tp) == (pytest.approx(0.3), pytest.approx(0.7))


def test_drury_mendonca_coordinates():
    x = np.array([0.5, 1.0, 2.0])
    t = np.array([1.0, 2.0, 4.0])
    xp, tp = act_coords(drury_mendonca(), x, t)
    np.testing.assert_allclose(xp, x / t, rtol=1e-15)
    np.testing.assert_allclose(tp, -1.0 / t, rtol=1e-15)


def test_singular_time_is_named():
    with pytest.raises(SingularTimeError) as exc:
        act_coords(drury_mendonca(), 1.0, 0.0)
    assert exc.value.error.details["singular_time"] == pytest.approx(0.0)


def test_composition_matches_successive_action(rng):
    for _ in range(200):
        g1, g2 = random_element(rng), random_element(rng)
        x, t = rng.uniform(-1, 1), rng.uniform(0.1, 1.0)
        try:
            x1, t1 = act_coords(g1, x, t)
            x2, t2 = act_coords(g2, x1, t1)
        except SingularTimeError:
            continue
        xc, tc = act_coords(compose(g2, g1), x, t)
        scale = max(1.0, abs(x2), abs(t2))
        assert abs(xc - x2) <= 1e-9 * scale
        assert abs(tc - t2) <= 1e-9 * scale


def test_inverse_undoes_action(rng):
    g = random_element(rng)
    x, t = 0.4, 0.3
    if abs(g.sl2.q(t)) < 0.05:
        pytest.skip("采样点过于接近奇异时刻")
    xp, tp = act_coords(g, x, t)
    xb, tb = act_coords(inverse(g), xp, tp)
    assert xb == pytest.approx(x, abs=1e-10)
    assert tb == pytest.approx(t, abs=1e-10)


def test_negated_element_induces_same_coordinate_map(rng):
    for _ in range(50):
        g = random_element(rng)
        x, t = rng.uniform(-1, 1), rng.uniform(0.1, 1.0)
        if abs(g.sl2.q(t)) < 0.05:
            continue
        np.testing.assert_allclose(act_coords(negate(g), x, t), act_coords(g, x, t), rtol=1e-13, atol=1e-13)


def test_admissible_representative_has_positive_factor(rng):
    for _ in range(100):
        t = rng.uniform(-2.0, 2.0)
        sl2 = random_sl2(rng)
        if sl2.q(t) == 0.0:
            continue
        assert admissible_at(sl2, t).q(t) > 0.0


# =============================================================================
# 场作用
# =============================================================================
def test_boost_adds_velocity(eos1):
    s = Primitive(rho=1.2, u=0.3, p=0.8)
    out = act_state(boost(0.5), s, 0.1, 0.2, eos1)
    assert out.rho == s.rho and out.p == s.p
    assert out.ux == pytest.approx(0.8)


def test_dilatation_scales_density_and_velocity(eos1):
    lam = 2.0
    s = Primitive(rho=1.2, u=0.3, p=0.8)
    out = act_state(dilatation(lam), s, 0.1, 0.2, eos1)
    assert out.rho == pytest.approx(s.rho / lam)
    assert out.ux == pytest.approx(s.ux / lam)


def test_chi_invariance_on_random_states(rng, eos1):
    checked = 0
    for _ in range(1000):
        g = random_element(rng)
        t = rng.uniform(0.5, 1.5)
        if abs(g.sl2.q(t)) < 0.05:
            continue
        g = g.model_copy(update={"sl2": admissible_at(g.sl2, t)})
        assert chi_invariance_defect(g, random_state(rng), rng.uniform(-1, 1), t, eos1) <= 1e-13
        checked += 1
    assert checked > 900


def test_non_symmetric_exponent_rejected_unless_negative_control(air):
    s = Primitive(rho=1.0, u=0.0, p=1.0)
    with pytest.raises(LabException):
        act_state(drury_mendonca(), s, 0.5, 1.0, air)
    act_state(drury_mendonca(), s, 0.5, 1.0, air, strict=False)


def test_time_translation_allowed_for_any_exponent(air):
    s = Primitive(rho=1.0, u=0.2, p=1.0)
    assert act_state(time_translation(0.3), s, 0.5, 1.0, air) == s


def test_viscosity_scales_with_density():
    eta, zeta = act_viscosity(expansion(1.0, n=3), 1.0, 0.5, 1.0, n=3)
    assert eta == pytest.approx(8.0)
    assert zeta == pytest.approx(4.0)
    assert act_viscosity(identity(), 0.7, 0.1, 1.0, n=1) == (pytest.approx(0.7), pytest.approx(0.1))


def test_doublet_and_triplet_laws(rng, eos1):
    for _ in range(100):
        sl2 = generic_sl2(rng)
        t = rng.uniform(0.2, 1.0)
        if sl2.q(t) <= 0.05:
            continue
        g = make_element(sl2.alpha, sl2.beta, sl2.gamma, sl2.delta)
        s, x = random_state(rng), rng.uniform(-1, 1)
        xp, tp = act_coords(g, x, t)
        before = current_stack(s, x, t, eos1)
        after = current_stack(act_state(g, s, x, t, eos1), float(xp), float(tp), eos1)
        q = sl2.q(t)
        rho, K, P, A, D, H = before[:, 0]
        assert after[2, 0] == pytest.approx(q * (sl2.delta * P + sl2.gamma * K), rel=1e-11, abs=1e-12)
        assert after[5, 0] == pytest.approx(
            q * (sl2.gamma ** 2 * A - sl2.delta * sl2.gamma * D + sl2.delta ** 2 * H), rel=1e-10, abs=1e-12)
        # 质量通量
        assert after[0, 1] == pytest.approx(q ** 2 * before[0, 1] - sl2.gamma * x * q * before[0, 0],
                                            rel=1e-11, abs=1e-12)


def test_full_current_stack_transforms_covariantly(rng, eos1):
    for _ in range(100):
        sl2 = generic_sl2(rng)
        t = rng.uniform(0.2, 1.0)
        if sl2.q(t) <= 0.05:
            continue
        g = make_element(sl2.alpha, sl2.beta, sl2.gamma, sl2.delta)
        s, x = random_state(rng), rng.uniform(-1, 1)
        xp, tp = act_coords(g, x, t)
        predicted = transform_current_stack(sl2, current_stack(s, x, t, eos1), x, t, 1)
        actual = current_stack(act_state(g, s, x, t, eos1), float(xp), float(tp), eos1)
        np.testing.assert_allclose(predicted, actual, rtol=1e-10, atol=1e-10 * np.abs(actual).max())


# =============================================================================
# 表示矩阵与 Jacobian
# =============================================================================
def test_representation_of_identity():
    m = representation_matrix(Sl2Element(alpha=1.0, beta=0.0, gamma=0.0, delta=1.0))
    np.testing.assert_array_equal(m.array, np.eye(6))


def test_representation_of_drury_mendonca():
    m = representation_matrix(drury_mendonca().sl2).array
    np.testing.assert_array_equal(m[1], [0, 0, -1, 0, 0, 0])
    np.testing.assert_array_equal(m[2], [0, 1, 0, 0, 0, 0])
    np.testing.assert_array_equal(m[3], [0, 0, 0, 0, 0, 1])
    np.testing.assert_array_equal(m[4], [0, 0, 0, 0, -1, 0])
    np.testing.assert_array_equal(m[5], [0, 0, 0, 1, 0, 0])


def test_representation_is_homomorphism_with_unit_determinant(rng):
    for _ in range(10_000):
        s1, s2 = generic_sl2(rng), generic_sl2(rng)
        m12 = representation_matrix(Sl2Element.from_matrix(s1.matrix @ s2.matrix)).array
        prod = representation_matrix(s1).array @ representation_matrix(s2).array
        np.testing.assert_allclose(prod, m12, rtol=0.0, atol=1e-11 * max(1.0, np.abs(m12).max()))
        assert abs(representation_matrix(s1).determinant - 1.0) < 1e-12


def test_printed_entry_breaks_unit_determinant(rng):
    s = generic_sl2(rng)
    while abs(abs(s.alpha) - 1.0) < 0.1:
        s = generic_sl2(rng)
    assert abs(representation_matrix(s, printed=True).determinant - 1.0) > 1e-6


def test_jacobian_identity():
    det, forward, covector = jacobian_factors(identity().sl2, 0.3, 0.5)
    assert det == 1.0
    np.testing.assert_array_equal(forward, np.eye(2))
    np.testing.assert_array_equal(covector, np.eye(2))


def test_jacobian_matches_finite_differences(rng):
    h = 1e-6
    for _ in range(20):
        sl2 = generic_sl2(rng)
        t, x = rng.uniform(0.2, 1.0), rng.uniform(-1, 1)
        if sl2.q(t) <= 0.1:
            continue
        g = make_element(sl2.alpha, sl2.beta, sl2.gamma, sl2.delta)
        det, forward, covector = jacobian_factors(sl2, x, t, n=1)

        def coords(tt, xx):
            xp, tp = act_coords(g, xx, tt)
            return np.array([float(tp), float(xp)])

        fd = np.column_stack([
            (coords(t + h, x) - coords(t - h, x)) / (2 * h),
            (coords(t, x + h) - coords(t, x - h)) / (2 * h),
        ])
        np.testing.assert_allclose(forward, fd, rtol=1e-7, atol=1e-7)
        assert det == pytest.approx(sl2.q(t) ** 3, rel=1e-12)
        assert det == pytest.approx(1.0 / np.linalg.det(forward), rel=1e-10)
        # 切向位移保持切向
        n = rng.normal(size=2)
        tangent = np.array([n[1], -n[0]])
        assert (covector @ n) @ (forward @ tangent) == pytest.approx(0.0, abs=1e-12)


# =============================================================================
# 整场拉回
# =============================================================================
def _pulse_field(eos, cells=200, times=(1.0, 1.5, 2.0)):
    snaps = [fvm.gaussian_pulse(cells=cells, eos=eos, x_left=0.0, x_right=2.0, t=t, x0=1.0, width=0.2)
             for t in times]
    return SpacetimeField(snapshots=snaps, eos=eos)


def test_identity_transform_reproduces_field(eos1):
    field = _pulse_field(eos1)
    out = transform_snapshot(identity(), field, list(field.times))
    for a, b in zip(field.snapshots, out.snapshots):
        np.testing.assert_allclose(b.rho, a.rho, rtol=1e-12)
        np.testing.assert_allclose(b.p, a.p, rtol=1e-12)


def test_uniform_state_under_time_translation(eos1):
    snaps = [fvm.piecewise([(1.0, 0.0, 0.5)], [], 0.0, 1.0, 50, t=t) for t in (0.0, 1.0)]
    field = SpacetimeField(snapshots=snaps, eos=eos1)
    out = transform_snapshot(time_translation(2.0), field, [2.0, 3.0])
    for snap in out.snapshots:
        np.testing.assert_allclose(snap.rho, 1.0)
        np.testing.assert_allclose(snap.u, 0.0)
        np.testing.assert_allclose(snap.p, 0.5)


def test_drury_mendonca_maps_window(eos1):
    field = _pulse_field(eos1)
    out = transform_snapshot(drury_mendonca(), field, [-1.0, -2.0 / 3.0, -0.5])
    assert out.stats["mapped_window"] == [-1.0, -0.5]
    assert out.stats["singular_time"] == pytest.approx(0.0)
    # x' = x/t
    assert out.snapshots[-1].x_right == pytest.approx(1.0)


def test_coverage_error_names_required_window(eos1):
    field = _pulse_field(eos1)
    with pytest.raises(CoverageError) as exc:
        transform_snapshot(identity(), field, [1.0], target_grid=(-1.0, 3.0, 40))
    assert "required_window" in exc.value.error.details


def test_window_straddling_singular_time_rejected(eos1):
    field = _pulse_field(eos1, times=(-0.5, 0.5))
    with pytest.raises(SingularTimeError):
        transform_snapshot(drury_mendonca(), field, [2.0, -2.0])
