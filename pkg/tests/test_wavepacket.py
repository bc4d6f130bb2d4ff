import math

import numpy as np
import pytest
from scipy.stats import poisson

from deltatrap.errors import TruncationError, ValidationError
from deltatrap.quadrature import symmetric_panels
from deltatrap.specfun import hermite_fn
from deltatrap.spectrum import TrapConfig
from deltatrap.wavepacket import (CoordinateMap, InitialState, SpectralState,
                                  eval_relative, eval_two_particle, interaction_energy,
                                  norm_defect, project_initial)


def _level(mode):
    return 2 * mode.k + (1 if mode.parity == "odd" else 0)


class TestProjection:
    def test_ground_state_trivial(self):
        st = project_initial(TrapConfig(0.0), InitialState(0.0))
        assert abs(st.coeffs[0] - 1.0) < 1e-14
        assert len(st.modes) == 1

    def test_poisson_law_free(self, packet_free):
        levels = np.array([_level(m) for m in packet_free.modes])
        prob = np.abs(packet_free.coeffs) ** 2
        assert np.max(np.abs(prob - poisson.pmf(levels, 18.0))) < 1e-6

    def test_against_direct_hermite_quadrature(self, packet_free):
        y, w = symmetric_panels(20.0, 8192)
        target = np.pi ** -0.25 * np.exp(-0.5 * (y - 6.0) ** 2)
        for m, c in list(zip(packet_free.modes, packet_free.coeffs))[:30]:
            ref = w @ (hermite_fn(_level(m), y) * target)
            assert abs(c - ref) < 1e-10

    def test_completeness(self, packet_05):
        total = float(np.sum(np.abs(packet_05.coeffs) ** 2))
        assert abs(total - 1.0) < 1e-8
        assert packet_05.truncation_defect < 1e-8

    def test_minimal_prefix(self, packet_05):
        cum = np.cumsum(np.abs(packet_05.coeffs) ** 2)
        assert 1.0 - cum[-2] >= 1e-8

    def test_odd_coefficients_vanish_at_rho_zero(self):
        # the cusp of the even modes makes |c_n|^2 decay only like E_n^(-5/2)
        # when the packet overlaps the origin, so a loose target is used here
        st = project_initial(TrapConfig(0.5), InitialState(0.0), trunc_eps=1e-4)
        odd = [c for m, c in zip(st.modes, st.coeffs) if m.parity == "odd"]
        assert all(c == 0 for c in odd)

    def test_overlapping_packet_hits_mode_cap(self):
        with pytest.raises(TruncationError) as info:
            project_initial(TrapConfig(0.5), InitialState(0.0), n_modes=200)
        assert 1e-8 < info.value.defect < 1e-4

    def test_truncation_failure_reports_defect(self):
        with pytest.raises(TruncationError) as info:
            project_initial(TrapConfig(0.5), InitialState(6.0), n_modes=10)
        assert info.value.defect > 0.5

    def test_tighter_target_needs_more_modes(self, packet_05):
        st = project_initial(TrapConfig(0.5), InitialState(6.0), trunc_eps=1e-11)
        assert len(st.modes) > len(packet_05.modes)

    def test_validation(self):
        with pytest.raises(ValidationError):
            InitialState(-1.0)
        with pytest.raises(ValidationError):
            project_initial(TrapConfig(0.5), InitialState(1.0), trunc_eps=0.0)


class TestEvolution:
    def test_initial_gaussian(self, packet_05):
        y = np.linspace(-4, 12, 161)
        ref = np.pi ** -0.25 * np.exp(-0.5 * (y - 6.0) ** 2)
        assert np.abs(eval_relative(packet_05, y, 0.0) - ref).max() < 1e-4
        assert abs(eval_relative(packet_05, 0.0, 0.0)) < 1e-4

    def test_free_periodicity(self, packet_free):
        u = np.linspace(-8, 8, 33)
        u1, u2 = np.meshgrid(u, u, indexing="ij")
        a = eval_two_particle(packet_free, u1, u2, 0.0)
        b = eval_two_particle(packet_free, u1, u2, 2 * np.pi)
        assert np.abs(a - b).max() < 1e-8
        y = np.linspace(-10, 10, 101)
        assert np.allclose(np.abs(eval_relative(packet_free, y, 2 * np.pi)),
                           np.abs(eval_relative(packet_free, y, 0.0)), atol=1e-12)

    def test_unitarity(self, packet_05):
        assert np.all(np.abs(norm_defect(packet_05, [0.0, 1.0, 9 * np.pi])) < 1e-7)

    @pytest.mark.parametrize("t", [0.0, 3.3, 9 * np.pi, 12 * np.pi])
    def test_two_particle_grid_norm(self, packet_05, t):
        u = np.linspace(-12, 12, 481)
        du = u[1] - u[0]
        u1, u2 = np.meshgrid(u, u, indexing="ij")
        psi = eval_two_particle(packet_05, u1, u2, t)
        assert abs(np.sum(np.abs(psi) ** 2) * du * du - 1.0) < 1e-6

    def test_product_at_start(self, packet_05):
        u = np.linspace(-9, 9, 61)
        u1, u2 = np.meshgrid(u, u, indexing="ij")
        d = 6.0 / math.sqrt(2.0)
        ref = np.pi ** -0.5 * np.exp(-0.5 * (u1 - d) ** 2 - 0.5 * (u2 + d) ** 2)
        assert np.abs(eval_two_particle(packet_05, u1, u2, 0.0) - ref).max() < 1e-4

    def test_exchange_symmetry_at_rho_zero(self):
        st = project_initial(TrapConfig(0.5), InitialState(0.0), trunc_eps=1e-4)
        u = np.linspace(-5, 5, 21)
        u1, u2 = np.meshgrid(u, u, indexing="ij")
        psi = eval_two_particle(st, u1, u2, 2.7)
        assert np.abs(psi - psi.T).max() < 1e-12

    def test_linearity(self):
        cfg = TrapConfig(0.5)
        a = project_initial(cfg, InitialState(6.0))
        b = project_initial(cfg, InitialState(3.0))
        n = max(len(a.modes), len(b.modes))
        modes = a.modes if len(a.modes) == n else b.modes
        ca = np.pad(a.coeffs, (0, n - len(a.coeffs)))
        cb = np.pad(b.coeffs, (0, n - len(b.coeffs)))
        mix = SpectralState(cfg, 0.0, modes, 0.6 * ca + 0.8j * cb, 0.0)
        y = np.linspace(-10, 10, 57)
        t = 2.4
        lhs = eval_relative(mix, y, t)
        rhs = 0.6 * eval_relative(a, y, t) + 0.8j * eval_relative(b, y, t)
        assert np.abs(lhs - rhs).max() < 1e-12


class TestInteractionEnergy:
    def test_zero_without_interaction(self, packet_free):
        assert np.all(interaction_energy(packet_free, np.linspace(0, 7, 50)) == 0.0)

    def test_initial_tail(self, packet_05):
        assert interaction_energy(packet_05, 0.0) < 1e-8

    def test_pulses_near_quarter_periods(self, packet_05):
        t = np.linspace(0, 2 * np.pi, 1201)
        e = interaction_energy(packet_05, t)
        first = t[np.argmax(np.where(t < np.pi, e, 0))]
        second = t[np.argmax(np.where(t >= np.pi, e, 0))]
        assert abs(first - np.pi / 2) < 0.2 and abs(second - 3 * np.pi / 2) < 0.2
        assert e.max() > 0.1

    def test_scalar_and_vector_agree(self, packet_05):
        assert interaction_energy(packet_05, 1.3) == pytest.approx(
            interaction_energy(packet_05, np.array([1.3]))[0], rel=1e-14)


class TestCoordinateMap:
    def test_round_trip(self):
        rng = np.random.default_rng(3)
        u1, u2 = rng.normal(size=(2, 50))
        back = CoordinateMap.inverse(*CoordinateMap.forward(u1, u2))
        assert np.allclose(back[0], u1, atol=1e-15) and np.allclose(back[1], u2, atol=1e-15)

    def test_orthogonal(self):
        yc, yr = CoordinateMap.forward(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        mat = np.array([yc, yr])
        assert np.allclose(mat @ mat.T, np.eye(2))
        assert abs(abs(np.linalg.det(mat)) - CoordinateMap.jacobian) < 1e-15

    def test_physical_scaling(self):
        assert CoordinateMap.scale_length(2.0, mass=4.0, omega=1.0, hbar=1.0) == pytest.approx(4.0)
