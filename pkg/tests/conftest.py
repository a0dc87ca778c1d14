"""
Fixtures compartilhadas dos testes
"""
import logging

import numpy as np
import pytest

from modules.potentials import make_potential, zero_potential


@pytest.fixture
def gauss():
    return make_potential("gauss", a=1.0, s=1.0)


@pytest.fixture
def box():
    return make_potential("box", k=1.0, d=0.5)


@pytest.fixture
def meanzero():
    return make_potential("meanzero", a=0.3)


@pytest.fixture
def zero():
    return zero_potential()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def matriz_simetrica(rng):
    def _criar(n):
        a = rng.standard_normal((n, n))
        return 0.5 * (a + a.T)
    return _criar


@pytest.fixture(autouse=True)
def _logging_silencioso(caplog):
    caplog.set_level(logging.WARNING)
