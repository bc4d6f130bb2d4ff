import math
import warnings

import numpy as np
import pytest

from deltatrap.errors import SupportWarning, ValidationError
from deltatrap.phasespace import (GROUND_GRID, PhaseGrid, wigner_ground_state, wigner_of,
                                  wigner_relative)
from deltatrap.spectrum import TrapConfig
from deltatrap.wavepacket import InitialState

BOUND = 1.0 / math.pi + 1e-6


@pytest.fixture(scope="module")
def w_start(packet_05):
    return wigner_relative(packet_05, 0.0)


@pytest.fixture(scope="module")
def w_fringes(packet_05):
    return wigner_relative(packet_05, 4 * np.pi)


def test_grid_axes():
    g = PhaseGrid(8, 2.0)
    assert np.allclose(g.y, [-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5])
    assert abs(g.p[1] - g.p[0] - math.pi / 4) < 1e-15 and g.p[4] == 0.0
    with pytest.raises(ValidationError):
        PhaseGrid(7, 2.0)
    with pytest.raises(ValidationError):
        PhaseGrid(8, 0.0)


def _gaussian_wigner(w, centre):
    y, p = np.meshgrid(w.y, w.p, indexing="ij")
    return np.exp(-(y - centre) ** 2 - p ** 2) / math.pi


def test_exact_gaussian():
    w = wigner_of(InitialState(6.0).relative, PhaseGrid(256, 14.0))
    assert np.abs(w.values - _gaussian_wigner(w, 6.0)).max() < 1e-12


def test_initial_packet_is_gaussian(packet_05, w_start):
    # the truncated expansion differs from the Gaussian by O(sqrt(defect)) in amplitude
    tol = 2.0 * math.sqrt(packet_05.truncation_defect) / math.sqrt(math.pi)
    assert np.abs(w_start.values - _gaussian_wigner(w_start, 6.0)).max() < tol
    assert abs(w_start.value_at(6.0, 0.0) - 1 / math.pi) < tol


def test_boosted_gaussian_sign():
    # psi ~ exp(i p0 y) must peak at p = +p0
    p0 = 2.0
    w = wigner_of(lambda y: math.pi ** -0.25 * np.exp(-0.5 * (y - 1.0) ** 2 + 1j * p0 * y),
                  PhaseGrid(256, 10.0))
    i, j = np.unravel_index(np.argmax(w.values), w.values.shape)
    assert abs(w.y[i] - 1.0) < w.dy and abs(w.p[j] - p0) < w.dp


@pytest.mark.parametrize("which", ["w_start", "w_fringes"])
def test_grid_invariants(which, request):
    w = request.getfixturevalue(which)
    assert w.imag_residue < 1e-10
    assert abs(w.normalization() - 1.0) < 1e-4
    assert abs(w.purity() - 1.0) < 1e-3
    assert np.abs(w.values).max() <= BOUND


def test_marginal(packet_05, w_fringes):
    dens = np.abs(packet_05.relative(w_fringes.y, 4 * np.pi)) ** 2
    assert np.abs(w_fringes.marginal_y() - dens).max() < 1e-4


def test_time_reversal(packet_05):
    # real initial data: psi(-t) = conj psi(t), hence W(y, p, -t) = W(y, -p, t)
    a = wigner_relative(packet_05, 2.3).values[:, 1:]
    b = wigner_relative(packet_05, -2.3).values[:, 1:][:, ::-1]
    assert np.abs(a - b).max() < 1e-12


def test_real_state_even_in_p(w_start):
    v = w_start.values[:, 1:]
    assert np.abs(v - v[:, ::-1]).max() < 1e-12


def test_fringes_between_humps(w_fringes):
    w = w_fringes
    ymask = np.abs(w.y) < 3.0
    assert w.values[ymask].min() < -0.01
    # humps on opposite sides
    left = w.values[w.y < -3].max()
    right = w.values[w.y > 3].max()
    assert left > 0.02 and right > 0.02


def test_ground_state_free_is_gaussian():
    w = wigner_ground_state(TrapConfig(0.0))
    y, p = np.meshgrid(w.y, w.p, indexing="ij")
    assert np.abs(w.values - np.exp(-y ** 2 - p ** 2) / math.pi).max() < 1e-8


def test_ground_state_interacting():
    w = wigner_ground_state(TrapConfig(0.5))
    assert abs(w.normalization() - 1.0) < 1e-4
    assert abs(w.purity() - 1.0) < 1e-3
    assert np.abs(w.values).max() <= BOUND
    line = w.values[np.argmin(np.abs(w.y))]
    assert line.min() < 0.0


def test_ground_grid_is_used_by_default():
    w = wigner_ground_state(TrapConfig(0.5))
    assert w.y.size == GROUND_GRID.n


def test_support_warning(packet_05):
    with pytest.warns(SupportWarning):
        wigner_relative(packet_05, 0.0, PhaseGrid(64, 4.0))


def test_workers_do_not_change_result(packet_05):
    g = PhaseGrid(64, 12.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SupportWarning)
        a = wigner_relative(packet_05, 1.0, g, workers=1).values
        b = wigner_relative(packet_05, 1.0, g, workers=3).values
    assert np.array_equal(a, b)
