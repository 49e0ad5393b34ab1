# -*- coding: utf-8 -*-
"""变换场：目标网格、像时间窗与 Euler 残差"""

import numpy as np
import pytest

from euler_duality.core import fvm
from euler_duality.core.group import drury_mendonca, transform_snapshot
from euler_duality.core.noether import residual_norm
from euler_duality.models import CoverageError, Snapshot, SpacetimeField
from euler_duality.tools.transform import common_target_grid, group_element, image_times, transform_field
from euler_duality.utils import parse_config


def _uniform_flow(eos, cells=64, times=(1.0, 1.1, 1.2, 1.3)):
    snaps = [fvm.piecewise([(1.0, 0.3, 1.0)], [], 0.0, 1.0, cells, t=t) for t in times]
    return SpacetimeField(snapshots=snaps, eos=eos)


def test_group_element_from_config():
    cfg = parse_config("[group]\nalpha = 0.0\nbeta = -1.0\ngamma = 1.0\ndelta = 0.0\nrotation = -1.0\nvelocity = 0.5\n")
    g = group_element(cfg)
    assert g.sl2.matrix.tolist() == [[0.0, -1.0], [1.0, 0.0]]
    assert g.gal.rotation[0, 0] == -1.0 and g.gal.velocity[0] == 0.5


def test_image_times_of_drury_mendonca(eos1):
    assert image_times(drury_mendonca(), _uniform_flow(eos1)) == pytest.approx([-1.0, -1 / 1.1, -1 / 1.2, -1 / 1.3])


def test_common_target_grid_is_intersection(eos1):
    field = _uniform_flow(eos1)
    lo, hi, cells = common_target_grid(drury_mendonca(), field, [-1.0, -1 / 1.3], 32)
    assert (lo, cells) == (0.0, 32)
    assert hi == pytest.approx(1 / 1.3)


def test_common_target_grid_requires_overlap(eos1):
    cfg = parse_config("[group]\nvelocity = 5.0\n")
    with pytest.raises(CoverageError):
        common_target_grid(group_element(cfg), _uniform_flow(eos1), [1.0, 1.3], 16)


def test_transform_field_uses_target_cells(eos1):
    cfg = parse_config("[eos]\nn = 1\n[group]\nalpha = 0.0\nbeta = -1.0\ngamma = 1.0\ndelta = 0.0\ntarget_cells = 40\n")
    image = transform_field(cfg, _uniform_flow(eos1))
    assert image.common_grid and image.snapshots[0].cells == 40
    assert image.stats["singular_time"] == 0.0


def test_drury_mendonca_image_of_uniform_flow_is_a_solution(eos1):
    """均匀流的像是 ρ' = −ρ/t'、u' = (x' − u)/t' 的线性膨胀流"""
    field = _uniform_flow(eos1)
    norms = []
    for k in (8, 16):
        ts = np.linspace(1.05, 1.25, k + 1)
        image = transform_snapshot(drury_mendonca(), field, list(-1.0 / ts), target_grid=(0.0, 0.75, 96))
        tp, x = image.snapshots[1].t, image.snapshots[1].centers
        np.testing.assert_allclose(image.snapshots[1].rho, -1.0 / tp, rtol=1e-12)
        np.testing.assert_allclose(image.snapshots[1].u, (x - 0.3) / tp, rtol=1e-12, atol=1e-12)
        norms.append(residual_norm(image))
    assert norms[1] < 0.35 * norms[0]
    assert norms[1] < 1e-2


def _fan(eos, cells, times, x_left=-1.0, x_right=0.5, invariant=8.0):
    """左行中心稀疏波内部：u − c = x/t，u + 2c/(γ−1) 为常数，p = ρ^γ/γ"""
    g = eos.gamma0
    x = x_left + (np.arange(cells) + 0.5) * (x_right - x_left) / cells
    snaps = []
    for t in times:
        c = (g - 1.0) / (g + 1.0) * (invariant - x / t)
        rho = c ** (2.0 / (g - 1.0))
        snaps.append(Snapshot(t=float(t), x_left=x_left, x_right=x_right,
                              rho=rho, u=x / t + c, p=rho ** g / g))
    return SpacetimeField(snapshots=snaps, eos=eos)


def _fan_image_norms(eos, strict=True):
    norms = []
    for factor in (1, 2, 4):
        ts = np.linspace(1.0, 1.5, 8 * factor + 1)
        field = _fan(eos, 48 * factor, ts)
        image = transform_snapshot(drury_mendonca(), field, list(-1.0 / ts),
                                   target_grid=(-0.6, 0.3, 32 * factor), interpolation="cubic", strict=strict)
        norms.append(residual_norm(image))
    return norms


def test_drury_mendonca_image_of_fan_converges_at_second_order(eos1):
    norms = _fan_image_norms(eos1)
    assert norms[0] > norms[1] > norms[2] > 0.0
    order = np.log2(norms[0] / norms[2]) / 2.0
    assert order >= 1.8


def test_drury_mendonca_image_of_fan_fails_for_non_symmetric_exponent(air):
    norms = _fan_image_norms(air, strict=False)
    assert norms[2] / norms[0] > 0.5
