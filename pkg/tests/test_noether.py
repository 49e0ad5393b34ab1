# -*- coding: utf-8 -*-
"""守恒流、荷与荷平衡"""

import numpy as np
import pytest
from scipy.special import erf

from euler_duality.core import fvm
from euler_duality.core.noether import (
    charge,
    charge_balance,
    current,
    discontinuity_zones,
    euler_residual,
    residual_norm,
    zone_intervals,
)
from euler_duality.models import (
    CurrentFamily,
    DiscontinuityZoneError,
    FamilyKind,
    Geometry,
    Primitive,
    Snapshot,
    SpacetimeField,
    UnsupportedFamilyError,
    EXTENDED_FAMILIES,
    STANDARD_FAMILIES,
)
from euler_duality.models.shock import boost, dilatation, energy, expansion, mass, momentum

from conftest import random_state


def test_static_state_at_origin(eos1):
    s = Primitive(rho=2.0, u=0.0, p=3.0)
    assert current(s, 0.0, 0.0, mass(), eos1).J0 == 2.0
    assert current(s, 0.0, 0.0, energy(), eos1).J0 == pytest.approx(1.5)
    assert current(s, 0.0, 0.0, momentum(), eos1).Jx == (3.0,)
    for family in (boost(), dilatation(), expansion()):
        sample = current(s, 0.0, 0.0, family, eos1)
        assert sample.J0 == 0.0 and sample.Jx == (0.0,)


def test_boost_density_at_time_zero(eos1):
    s = Primitive(rho=1.5, u=0.4, p=1.0)
    assert current(s, 0.7, 0.0, boost(), eos1).J0 == pytest.approx(-1.5 * 0.7)


def test_linear_relations_hold_pointwise(rng, eos1):
    for _ in range(50):
        s, x, t = random_state(rng), rng.uniform(-2, 2), rng.uniform(-2, 2)
        J = {f.label: current(s, x, t, f, eos1) for f in (*STANDARD_FAMILIES, *EXTENDED_FAMILIES)}
        for k in ("J0",):
            rho, P, H = (getattr(J[f], k) for f in ("rho", "P0", "H"))
            assert J["K0"].J0 == pytest.approx(t * P - x * rho, abs=1e-15)
            assert J["D"].J0 == pytest.approx(x * P - 2 * t * H, abs=1e-14)
            assert J["A"].J0 == pytest.approx(0.5 * x * x * rho - t * x * P + t * t * H, abs=1e-14)
        rho, P, H = (J[f].Jx[0] for f in ("rho", "P0", "H"))
        assert J["K0"].Jx[0] == pytest.approx(t * P - x * rho, abs=1e-14)
        assert J["D"].Jx[0] == pytest.approx(x * P - 2 * t * H, abs=1e-14)
        assert J["A"].Jx[0] == pytest.approx(0.5 * x * x * rho - t * x * P + t * t * H, abs=1e-13)


def test_angular_momentum_needs_two_dimensions(eos1):
    s = Primitive(rho=1.0, u=0.0, p=1.0)
    with pytest.raises(UnsupportedFamilyError):
        current(s, 0.0, 0.0, CurrentFamily(kind=FamilyKind.ANGULAR_MOMENTUM), eos1)


def test_angular_momentum_in_plane(eos1):
    s = Primitive(rho=2.0, u=[1.0, 0.0], p=1.0)
    sample = current(s, [0.0, 1.0], 0.0, CurrentFamily(kind=FamilyKind.ANGULAR_MOMENTUM), eos1)
    # L = P × x = P_x·y − P_y·x
    assert sample.J0 == pytest.approx(2.0)


@pytest.mark.parametrize("label", ["mass", "momentum[0]", "K0", "H", "expansion"])
def test_family_parse(label):
    assert CurrentFamily.parse(label).label in ("rho", "P0", "K0", "H", "A")


def test_uniform_mass_charge(eos1):
    snap = fvm.piecewise([(0.8, 0.0, 1.0)], [], 0.0, 1.0, 64)
    assert charge(snap, mass(), eos1) == pytest.approx(0.8, rel=1e-14)


def test_antisymmetric_momentum_vanishes(eos1):
    cells = 100
    x = (np.arange(cells) + 0.5) / cells
    snap = Snapshot(t=0.0, x_left=0.0, x_right=1.0, rho=np.ones(cells),
                    u=np.sin(2 * np.pi * (x - 0.5)), p=np.ones(cells))
    assert abs(charge(snap, momentum(), eos1)) < 1e-14


def test_gaussian_mass_matches_erf(eos1):
    amplitude, width, x0 = 0.3, 0.05, 0.5
    snap = fvm.gaussian_pulse(cells=2000, eos=eos1, x0=x0, width=width, amplitude=amplitude)
    exact = 1.0 + amplitude * width * np.sqrt(np.pi) / 2.0 * (erf((1.0 - x0) / width) - erf(-x0 / width))
    assert charge(snap, mass(), eos1) == pytest.approx(exact, abs=1e-10)


def test_spherical_uniform_mass(eos3):
    snap = fvm.piecewise([(1.0, 0.0, 1.0)], [], 0.0, 2.0, 50, geometry=Geometry.SPHERICAL)
    assert charge(snap, mass(), eos3) == pytest.approx(4.0 / 3.0 * np.pi * 8.0, rel=1e-13)
    assert charge(snap, momentum(), eos3) == 0.0


def test_static_balance_is_exact(eos1):
    snaps = [fvm.piecewise([(1.0, 0.0, 1.0)], [], 0.0, 1.0, 32, t=t) for t in (0.0, 0.5, 1.0)]
    field = SpacetimeField(snapshots=snaps, eos=eos1)
    for family in (*STANDARD_FAMILIES, *EXTENDED_FAMILIES):
        assert abs(charge_balance(field, family, 0.0, 1.0)) < 1e-13


def _shock_tube(eos, cells, times):
    initial = fvm.sod(cells=cells, x0=0.5)
    return fvm.run(initial, eos, times[-1], output_times=times, scheme="godunov", cfl=0.8)


@pytest.mark.parametrize("family", [mass(), momentum(), energy()])
def test_standard_balance_is_discrete_conservation(air, family):
    field = _shock_tube(air, 100, list(np.linspace(0.0, 0.15, 16)))
    assert abs(charge_balance(field, family, 0.0, 0.15, relative=True)) < 1e-12


@pytest.mark.parametrize("family", [boost(), dilatation(), expansion()])
def test_extended_balance_converges_across_shocks(eos1, family):
    # 对称指数下 D 与 A 才是守恒流
    times = list(np.linspace(0.0, 0.15, 31))
    errors = [abs(charge_balance(_shock_tube(eos1, cells, times), family, 0.0, 0.15, relative=True))
              for cells in (400, 800, 1600)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 1e-3


def test_zone_detection_and_intervals():
    rho = np.ones(40)
    rho[20:] = 0.5
    snap = Snapshot(t=0.0, x_left=0.0, x_right=1.0, rho=rho, u=np.zeros(40), p=np.ones(40))
    mask = discontinuity_zones(snap, threshold=0.05, halo=3)
    assert zone_intervals(mask) == [(16, 23)]


def test_residual_rejects_points_in_zones(air):
    snaps = [fvm.sod(cells=40, t=t) for t in (0.0, 0.1, 0.2)]
    field = SpacetimeField(snapshots=snaps, eos=air)
    with pytest.raises(DiscontinuityZoneError) as exc:
        euler_residual(field, 20, 1)
    assert "zone_id" in exc.value.error.details


def test_uniform_residual_vanishes(eos1):
    snaps = [fvm.piecewise([(1.0, 0.3, 1.0)], [], 0.0, 1.0, 32, t=t) for t in (0.0, 0.1, 0.3)]
    field = SpacetimeField(snapshots=snaps, eos=eos1)
    assert residual_norm(field) < 1e-13
    np.testing.assert_allclose(euler_residual(field, 10, 1), 0.0, atol=1e-13)
