# -*- coding: utf-8 -*-
"""测试公共夹具"""

import textwrap
from pathlib import Path

import numpy as np
import pytest

from euler_duality.models import Polytrope, Primitive


SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def eos1() -> Polytrope:
    """n = 1 的对称指数 γ₀ = 3"""
    return Polytrope.symmetric_for(1)


@pytest.fixture
def eos3() -> Polytrope:
    """n = 3 的对称指数 γ₀ = 5/3"""
    return Polytrope.symmetric_for(3)


@pytest.fixture
def air() -> Polytrope:
    return Polytrope(gamma0=1.4, n=1)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def write_config(tmp_path):
    """把缩进的配置文本写入临时文件，返回路径字符串"""
    def _write(text: str, name: str = "scenario.cfg") -> str:
        path = tmp_path / name
        path.write_text(textwrap.dedent(text).lstrip(), encoding="utf-8")
        return str(path)
    return _write


def random_state(rng: np.random.Generator, n: int = 1) -> Primitive:
    return Primitive(
        rho=rng.uniform(0.5, 2.0),
        u=rng.uniform(-1.0, 1.0, size=n),
        p=rng.uniform(0.5, 2.0),
    )
