"""Reduced density matrices, Schmidt spectra and von Neumann entropy.

The two-particle amplitude is sampled on a square grid u_i in [-L, L].  With
M_ij = Psi(u_i, u_j) du, the reduced density of particle 1 is rho = M M^H,
whose eigenvalues are the Schmidt weights (Nystrom discretization).  Because
y_r = (u_i - u_j)/sqrt(2) only depends on i - j, the relative wavefunction is
evaluated on 2N - 1 points per time instead of N^2.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from . import kernels
from ._parallel import ordered_map
from .errors import ConvergenceError, SupportWarning, ValidationError

SUPPORT_TOL = 1e-8
ENTROPY_CUTOFF = 1e-14
METHODS = ("householder-ql", "jacobi")

_PI_QUARTER = math.pi ** -0.25
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``n`` points on [-half_width, half_width]."""

    n: int = 256
    half_width: float = 10.0

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("grid_n", "must be >= 2")
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise ValidationError("grid_l", "must be finite and > 0")

    @property
    def points(self):
        return np.linspace(-self.half_width, self.half_width, self.n)

    @property
    def step(self):
        return 2.0 * self.half_width / (self.n - 1)

    @classmethod
    def for_packet(cls, rho, n=256):
        """Default grid: both displaced Gaussians plus six widths."""
        return cls(n, rho / _SQRT2 + 6.0)


@dataclass
class GridDensity:
    grid: GridSpec
    matrix: np.ndarray

    @property
    def trace(self):
        return float(np.real(np.trace(self.matrix)))

    @property
    def purity(self):
        return float(np.sum(np.abs(self.matrix) ** 2))


@dataclass
class SchmidtSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    grid: GridSpec | None = None

    def functions(self):
        """Eigenvectors rescaled to unit L2 norm as functions on the grid."""
        if self.eigenvectors is None or self.grid is None:
            return None
        return self.eigenvectors / math.sqrt(self.grid.step)


class AmplitudeGrid:
    """Cached Psi(u_i, u_j, t) du on a square grid for one spectral state."""

    def __init__(self, state, grid):
        self.state = state
        self.grid = grid
        n, du = grid.n, grid.step
        k = np.arange(-(n - 1), n)
        self._phi = state.mode_matrix(k * du / _SQRT2)
        i = np.arange(n)
        self._index = (i[:, None] - i[None, :]) + (n - 1)
        yc = (i[:, None] + i[None, :] - (n - 1)) * du / _SQRT2
        self._centre = _PI_QUARTER * np.exp(-0.5 * yc * yc) * du

    def matrix(self, t):
        psi_r = self.state.phased_coeffs(t) @ self._phi
        amp = self._centre * psi_r[self._index] * np.exp(-0.5j * t)
        edge = max(np.abs(amp[[0, -1], :]).max(), np.abs(amp[:, [0, -1]]).max())
        edge /= self.grid.step
        if edge > SUPPORT_TOL:
            warnings.warn(f"amplitude {edge:.2e} at the grid boundary at t={t:g}; "
                          "enlarge grid half-width", SupportWarning, stacklevel=3)
        return amp


def reduced_density(state, t, grid=None, amplitudes=None):
    """rho(u_i, u_j) du for particle 1, tracing out particle 2 by quadrature."""
    if amplitudes is None:
        amplitudes = AmplitudeGrid(state, grid or GridSpec.for_packet(state.rho))
    m = amplitudes.matrix(t)
    return GridDensity(amplitudes.grid, m @ m.conj().T)


def _tridiag_phases(e):
    """Unit phases D with D^H T D real for a Hermitian tridiagonal T."""
    n = e.shape[0] + 1
    ph = np.ones(n, dtype=complex)
    for k, ek in enumerate(e):
        a = abs(ek)
        ph[k + 1] = ph[k] * (ek / a if a > 0 else 1.0)
    return ph


def _apply_reflectors(vmat, x):
    """Q x where Q = H_0 H_1 ... H_{n-3}, H_k = I - 2 v_k v_k^H."""
    n = vmat.shape[0]
    for k in range(n - 3, -1, -1):
        v = vmat[k + 1:, k]
        x[k + 1:] -= 2.0 * np.outer(v, v.conj() @ x[k + 1:])
    return x


def hermitian_eig(a, method="householder-ql", vectors=False):
    """Eigen-decomposition of a Hermitian matrix with the in-house kernels.

    Returns ``(w, v)`` sorted in descending order; ``v`` is None unless
    ``vectors`` is true.
    """
    a = np.asarray(a, dtype=complex)
    if method not in METHODS:
        raise ValidationError("method", f"must be one of {METHODS}")
    n = a.shape[0]
    try:
        if method == "jacobi":
            w, v, _ = kernels.jacobi_hermitian(a)
        else:
            d, e, refl = kernels.householder_tridiag(a)
            ph = _tridiag_phases(e)
            z = np.eye(n) if vectors else None
            w, z = kernels.tridiag_ql(d, np.abs(e), z)
            v = _apply_reflectors(refl, ph[:, None] * z) if vectors else None
    except ArithmeticError as exc:
        raise ConvergenceError(str(exc)) from exc
    order = np.argsort(w)[::-1]
    return w[order], (v[:, order] if vectors else None)


def schmidt_spectrum(rho, method="householder-ql", vectors=False):
    """Schmidt weights (descending) of a :class:`GridDensity`."""
    w, v = hermitian_eig(rho.matrix, method, vectors)
    return SchmidtSpectrum(w, v, rho.grid)


def entropy(spec):
    """von Neumann entropy in nats; weights at or below 1e-14 are dropped."""
    lam = np.asarray(getattr(spec, "eigenvalues", spec), dtype=float)
    lam = np.clip(lam, 0.0, None)
    lam = lam[lam > ENTROPY_CUTOFF]
    return float(-np.sum(lam * np.log(lam)))


def svd_entropy(state, t, grid=None, amplitudes=None):
    """Entropy from squared singular values of the amplitude matrix."""
    if amplitudes is None:
        amplitudes = AmplitudeGrid(state, grid or GridSpec.for_packet(state.rho))
    s = np.linalg.svd(amplitudes.matrix(t), compute_uv=False)
    return entropy(s * s)


def entropy_purity_trace(state, times, grid=None, method="householder-ql", workers=None):
    """Arrays (S, purity) over ``times``; time samples run in parallel."""
    amp = AmplitudeGrid(state, grid or GridSpec.for_packet(state.rho))

    def one(t):
        rho = reduced_density(state, t, amplitudes=amp)
        return entropy(schmidt_spectrum(rho, method)), rho.purity

    rows = ordered_map(one, list(times), workers)
    return np.array([r[0] for r in rows]), np.array([r[1] for r in rows])


def entropy_trace(state, times, grid=None, method="householder-ql", workers=None):
    """List of (t, S) pairs."""
    times = [float(t) for t in times]
    s, _ = entropy_purity_trace(state, times, grid, method, workers)
    return list(zip(times, s.tolist()))
