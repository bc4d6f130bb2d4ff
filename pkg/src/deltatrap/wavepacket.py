"""Initial Gaussian packets, spectral projection and time evolution.

The two atoms start as displaced ground-state Gaussians with no momentum.  In
scaled coordinates the centre of mass sits in its ground state for all times,
so only the relative wavefunction is expanded in relative-motion modes and
evolved with phases exp(-i E_n t).
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import TruncationError, ValidationError
from .quadrature import symmetric_panels
from .spectrum import TrapConfig, eval_mode, lowest_modes

TRUNC_EPS = 1e-8
MAX_MODES = 400
QUAD_POINTS = 4096
QUAD_MARGIN = 8.0

_PI_QUARTER = math.pi ** -0.25
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class InitialState:
    """Gaussian pair with scaled separation ``rho`` (rho = kappa_r R)."""

    rho: float = 6.0

    def __post_init__(self):
        if not math.isfinite(self.rho) or self.rho < 0:
            raise ValidationError("rho", "must be finite and >= 0")

    def relative(self, y):
        y = np.asarray(y, dtype=float)
        return _PI_QUARTER * np.exp(-0.5 * (y - self.rho) ** 2)


class CoordinateMap:
    """Rotation between oscillator-scaled particle coordinates and (y_c, y_r).

    With u_i = sqrt(m omega / hbar) x_i,  y_c = (u1 + u2)/sqrt(2) and
    y_r = (u1 - u2)/sqrt(2).  The map is orthogonal, so densities carry over
    without a Jacobian.
    """

    jacobian = 1.0

    @staticmethod
    def forward(u1, u2):
        u1 = np.asarray(u1, dtype=float)
        u2 = np.asarray(u2, dtype=float)
        return (u1 + u2) / _SQRT2, (u1 - u2) / _SQRT2

    @staticmethod
    def inverse(yc, yr):
        yc = np.asarray(yc, dtype=float)
        yr = np.asarray(yr, dtype=float)
        return (yc + yr) / _SQRT2, (yc - yr) / _SQRT2

    @staticmethod
    def scale_length(x, mass, omega, hbar):
        """Physical coordinate to oscillator units u = sqrt(m omega / hbar) x."""
        return np.asarray(x) * math.sqrt(mass * omega / hbar)


@dataclass
class SpectralState:
    cfg: TrapConfig
    rho: float
    modes: tuple
    coeffs: np.ndarray
    truncation_defect: float

    @property
    def energies(self):
        return np.array([m.energy for m in self.modes])

    @property
    def gamma_tilde(self):
        return self.cfg.gamma_tilde

    def mode_matrix(self, y):
        """Mode values, shape (n_modes,) + shape(y)."""
        y = np.asarray(y, dtype=float)
        return np.array([eval_mode(m, self.cfg, y) for m in self.modes])

    def phased_coeffs(self, t):
        return self.coeffs * np.exp(-1j * self.energies * t)

    def relative(self, y, t):
        """psi_r(y, t) = sum_n c_n psi_n(y) exp(-i E_n t)."""
        y = np.asarray(y, dtype=float)
        if y.size > 4096:
            # grids in (u1, u2) repeat y_r values heavily
            uniq, inv = np.unique(y, return_inverse=True)
            if uniq.size < y.size // 2:
                return (self.phased_coeffs(t) @ self.mode_matrix(uniq))[inv].reshape(y.shape)
        return np.tensordot(self.phased_coeffs(t), self.mode_matrix(y), axes=1)

    def value_at_origin(self, times):
        """psi_r(0, t) for an array of times."""
        times = np.asarray(times, dtype=float)
        phi0 = np.array([float(eval_mode(m, self.cfg, 0.0)) for m in self.modes])
        phases = np.exp(-1j * np.multiply.outer(times, self.energies))
        return phases @ (self.coeffs * phi0)


def project_initial(cfg, init, n_modes=MAX_MODES, trunc_eps=TRUNC_EPS, n_quad=QUAD_POINTS):
    """Expand the initial relative Gaussian in relative-motion modes.

    Modes are added in order of energy until 1 - sum |c_n|^2 < ``trunc_eps``.
    """
    if trunc_eps <= 0:
        raise ValidationError("trunc_eps", "must be > 0")
    if n_modes < 1:
        raise ValidationError("n_modes", "must be >= 1")
    rho = float(init.rho)
    y, w = symmetric_panels(rho + QUAD_MARGIN, n_quad)
    target = init.relative(y) * w

    count = min(n_modes, int(rho * rho / 2 + 8 * rho + 24))
    computed = []
    coeffs = np.zeros(0)
    while True:
        modes = lowest_modes(cfg, count)
        new = modes[len(computed):]
        if new:
            vals = np.array([eval_mode(m, cfg, y) for m in new])
            c_new = vals @ target
            if rho == 0.0:
                c_new = np.where([m.parity == "odd" for m in new], 0.0, c_new)
            coeffs = np.concatenate([coeffs, c_new])
            computed = modes
        cum = np.cumsum(coeffs ** 2)
        defects = 1.0 - cum
        ok = np.flatnonzero(defects < trunc_eps)
        if ok.size:
            keep = ok[0] + 1
            return SpectralState(cfg, rho, tuple(computed[:keep]),
                                 coeffs[:keep].astype(complex), float(defects[keep - 1]))
        if count >= n_modes:
            raise TruncationError(
                f"{count} modes leave a truncation defect of {defects[-1]:.3e} "
                f"(target {trunc_eps:g})", defect=float(defects[-1]))
        count = min(n_modes, 2 * count)


def eval_relative(state, y_r, t):
    return state.relative(y_r, t)


def eval_two_particle(state, u1, u2, t):
    """Psi(u1, u2, t) in oscillator-scaled particle coordinates."""
    yc, yr = CoordinateMap.forward(u1, u2)
    return (_PI_QUARTER * np.exp(-0.5 * yc * yc) * np.exp(-0.5j * t)
            * state.relative(yr, t))


def interaction_energy(state, t):
    """Mean interaction energy gamma |psi_r(0, t)|^2; vectorized over t."""
    val = state.gamma_tilde * np.abs(state.value_at_origin(np.atleast_1d(t))) ** 2
    return float(val[0]) if np.ndim(t) == 0 else val


def norm_defect(state, times, n_quad=QUAD_POINTS):
    """1 - int |psi_r(y, t)|^2 dy for each time, by quadrature."""
    y, w = symmetric_panels(state.rho + QUAD_MARGIN + 4.0, n_quad)
    phi = state.mode_matrix(y)
    out = []
    for t in np.atleast_1d(times):
        psi = state.phased_coeffs(t) @ phi
        out.append(1.0 - float(w @ np.abs(psi) ** 2))
    return np.array(out)
