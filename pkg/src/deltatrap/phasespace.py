"""Wigner functions of the relative motion.

W(y, p) = (1/2pi) int dxi exp(-i p xi) psi*(y - xi/2) psi(y + xi/2).

The y-axis is y_i = (i - n/2) h and xi_k = 2 k h, so both arguments
y_i -/+ k h are nodes of an extended grid and psi is sampled exactly, without
interpolation.  The p-axis is the conjugate DFT grid p_m = (m - n/2) pi/(n h);
each row is then one FFT over k, and the discrete p-sum reproduces the
xi = 0 term exactly (normalization and marginals are plain quadratures in y).
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from ._parallel import ordered_map
from .errors import SupportWarning, ValidationError
from .spectrum import eval_mode, lowest_modes

SUPPORT_TOL = 1e-8
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class PhaseGrid:
    """n x n phase-space grid; y in [-y_max, y_max), p on the conjugate DFT axis.

    The p-axis spans [-pi/(2h), pi/(2h)) with h = 2 y_max / n (about +-16.8
    for the default 256 points on y_max = 12).
    """

    n: int = 256
    y_max: float = 12.0

    def __post_init__(self):
        if self.n < 4 or self.n % 2:
            raise ValidationError("grid_n", "must be even and >= 4")
        if not (math.isfinite(self.y_max) and self.y_max > 0):
            raise ValidationError("grid_l", "must be finite and > 0")

    @property
    def h(self):
        return 2.0 * self.y_max / self.n

    @property
    def y(self):
        return (np.arange(self.n) - self.n // 2) * self.h

    @property
    def p(self):
        return (np.arange(self.n) - self.n // 2) * (math.pi / (self.n * self.h))


GROUND_GRID = PhaseGrid(512, 8.0)


@dataclass
class WignerGrid:
    y: np.ndarray
    p: np.ndarray
    values: np.ndarray
    imag_residue: float = 0.0

    @property
    def dy(self):
        return self.y[1] - self.y[0]

    @property
    def dp(self):
        return self.p[1] - self.p[0]

    def normalization(self):
        return float(self.values.sum() * self.dy * self.dp)

    def purity(self):
        return float(2.0 * math.pi * np.sum(self.values ** 2) * self.dy * self.dp)

    def marginal_y(self):
        return self.values.sum(axis=1) * self.dp

    def value_at(self, y0, p0):
        """Grid value nearest to (y0, p0)."""
        i = int(np.argmin(np.abs(self.y - y0)))
        j = int(np.argmin(np.abs(self.p - p0)))
        return float(self.values[i, j])


def wigner_of(psi_fn, grid=None, workers=None):
    """Wigner function of a callable wavefunction ``psi_fn(y)`` on ``grid``."""
    grid = grid or PhaseGrid()
    n, h = grid.n, grid.h
    half = n // 2
    k = np.arange(-half, half)
    # extended nodes (j - n) h, j = 0..2n; y_i sits at index i + n/2
    ext = (np.arange(2 * n + 1) - n) * h
    psi = np.asarray(psi_fn(ext), dtype=complex)
    inner = psi[half:half + n]
    edge = max(abs(inner[0]), abs(inner[-1]))
    if edge > SUPPORT_TOL:
        warnings.warn(f"wavefunction amplitude {edge:.2e} at the Wigner grid edge",
                      SupportWarning, stacklevel=2)
    centre = np.arange(n) + half

    def rows(block):
        idx = centre[block][:, None]
        prod = psi[idx - k[None, :]].conj() * psi[idx + k[None, :]]
        spec = np.fft.fft(np.fft.ifftshift(prod, axes=1), axis=1)
        return np.fft.fftshift(spec, axes=1) * (h / math.pi)

    blocks = np.array_split(np.arange(n), max(1, n // 32))
    w = np.vstack(ordered_map(rows, blocks, workers))
    resid = float(np.abs(w.imag).max())
    if resid > IMAG_TOL:
        warnings.warn(f"Wigner imaginary residue {resid:.2e}", RuntimeWarning, stacklevel=2)
    return WignerGrid(grid.y, grid.p, w.real.copy(), resid)


def wigner_relative(state, t, grid=None, workers=None):
    """Wigner function of psi_r(., t)."""
    phased = state.phased_coeffs(t)
    return wigner_of(lambda y: phased @ state.mode_matrix(y), grid, workers)


def wigner_ground_state(cfg, grid=None, workers=None):
    """Wigner function of the lowest even relative-motion mode.

    The mode has a cusp at y = 0 that limits grid sums to O(h^2), so the
    default grid is finer and narrower than for wave packets.
    """
    mode = lowest_modes(cfg, 1)[0]
    return wigner_of(lambda y: eval_mode(mode, cfg, y), grid or GROUND_GRID, workers)
