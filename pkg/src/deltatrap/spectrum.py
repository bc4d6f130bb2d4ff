"""Relative-motion spectrum of two atoms with a contact interaction in a harmonic trap.

In scaled units the relative coordinate obeys

    psi'' - y^2 psi + 2 (E - g delta(y)) psi = 0,

with ``g`` the dimensionless interaction strength.  Odd states do not feel the
delta and keep the oscillator energies 2k + 3/2.  Even states are

    psi(y) = N U((1 - 2E)/4, 1/2, y^2) exp(-y^2/2)

with E fixed by  g / Gamma((3 - 2E)/4) = -2 / Gamma((1 - 2E)/4).
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math
import warnings

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from . import kernels
from .errors import AccuracyWarning, BracketError, NumericalError, ValidationError
from .quadrature import simpson_weights
from .specfun import (_cospi, _sinpi, digamma, hermite_fn, kummer_u, recip_gamma,
                      recip_gamma_digamma)

# Even modes with |a| above this use the Numerov profile instead of Kummer U.
A_MAX = 25.0
NUMEROV_STEP = 1e-3
Y_MAX_MIN = 12.0
ROOT_XTOL = 1e-13
# below this Gamma argument, work with factors of Gamma(1 - y) removed (overflow)
SCALED_BELOW = -20.0


@dataclass(frozen=True)
class TrapConfig:
    """Dimensionless trap parameters.

    Coordinates are scaled with kappa_c = sqrt(2 m omega / hbar) (centre of
    mass) and kappa_r = sqrt(m omega / 2 hbar) (relative), time with omega and
    energies with hbar omega.  Only ``gamma_tilde = gamma kappa_r / omega``
    survives; positive values are repulsive.
    """

    gamma_tilde: float = 0.5

    def __post_init__(self):
        if not math.isfinite(self.gamma_tilde):
            raise ValidationError("gamma_tilde", "must be finite")


@dataclass(frozen=True)
class EigenMode:
    parity: str
    k: int
    energy: float
    norm_const: float
    gamma_tilde: float = field(default=0.0, compare=False)

    @property
    def kummer_a(self):
        return 0.25 * (1.0 - 2.0 * self.energy)

    def __call__(self, y):
        return eval_mode(self, TrapConfig(self.gamma_tilde), y)


def odd_energies(count):
    """Odd relative energies 3/2, 7/2, 11/2, ... (independent of the interaction)."""
    if count < 1:
        raise ValidationError("count", "must be >= 1")
    return [2.0 * k + 1.5 for k in range(count)]


def _reflected_parts(y):
    """For y < 1/2: 1/Gamma(y) = G r and digamma(y)/Gamma(y) = G q, G = Gamma(1 - y).

    Returns (r, q, log G); r and q stay O(1) when G overflows.
    """
    s, c = float(_sinpi(np.float64(y))), float(_cospi(np.float64(y)))
    return s / math.pi, s * float(digamma(1.0 - y)) / math.pi - c, math.lgamma(1.0 - y)


def even_condition(gamma_tilde, energy):
    """g/Gamma((3-2E)/4) + 2/Gamma((1-2E)/4); zero at the even eigenvalues.

    At high energy the value is returned divided by the positive factor
    Gamma((3+2E)/4), which keeps it finite and leaves the sign intact.
    """
    w = 0.25 * (3.0 - 2.0 * energy)
    x = w - 0.5
    if np.ndim(energy) == 0 and x < SCALED_BELOW:
        rw, _, lw = _reflected_parts(w)
        rx, _, lx = _reflected_parts(x)
        return gamma_tilde * rw * math.exp(lw - lx) + 2.0 * rx
    return gamma_tilde * recip_gamma(w) + 2.0 * recip_gamma(x)


def _even_bracket(g, k):
    if g > 0:
        return 2.0 * k + 0.5, 2.0 * k + 1.5
    if k > 0:
        return 2.0 * k - 0.5, 2.0 * k + 0.5
    # Attractive ground state: push the lower edge down until the sign flips.
    hi = 0.5
    step = 1.0
    f_hi = even_condition(g, hi)
    lo = hi - step
    while np.sign(even_condition(g, lo)) == np.sign(f_hi):
        step *= 2.0
        lo = hi - step
        if step > 1e4:
            raise BracketError(f"no sign change below E=0.5 for gamma={g}", k=0)
    return lo, hi


def even_energies(cfg, count):
    """Lowest ``count`` even relative energies for the given interaction."""
    if count < 1:
        raise ValidationError("count", "must be >= 1")
    g = float(cfg.gamma_tilde)
    if g == 0.0:
        return [2.0 * k + 0.5 for k in range(count)]
    roots = []
    for k in range(count):
        lo, hi = _even_bracket(g, k)
        f_lo, f_hi = even_condition(g, lo), even_condition(g, hi)
        if f_lo == 0.0:
            roots.append(lo)
            continue
        if f_hi == 0.0:
            roots.append(hi)
            continue
        if np.sign(f_lo) == np.sign(f_hi):
            raise BracketError(
                f"even level k={k}: no sign change on [{lo}, {hi}] for gamma={g}", k=k)
        roots.append(brentq(lambda e: even_condition(g, e), lo, hi,
                            xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=500))
    return roots


def normalization_even(cfg, energy):
    """Closed-form normalization of an even mode at an eigenvalue ``energy``.

    N^2 = Gamma(3/4 - E/2) Gamma(1/4 - E/2) / (pi [psi(3/4 - E/2) - psi(1/4 - E/2)]),
    evaluated through reciprocal Gamma so the expression stays finite when
    either argument sits on a pole.
    """
    w = 0.75 - 0.5 * energy
    x = 0.25 - 0.5 * energy
    if x < SCALED_BELOW:
        rw, qw, lw = _reflected_parts(w)
        rx, qx, lx = _reflected_parts(x)
        denom = rx * qw - rw * qx
        radicand = 1.0 / (math.pi * denom) if denom != 0 else math.inf
        if radicand > 0 and math.isfinite(radicand):
            return math.sqrt(radicand) * math.exp(-0.5 * (lw + lx))
        raise NumericalError(
            f"normalization radicand {radicand!r} not positive (E={energy}, "
            f"gamma={cfg.gamma_tilde})")
    denom = recip_gamma(x) * recip_gamma_digamma(w) - recip_gamma(w) * recip_gamma_digamma(x)
    radicand = 1.0 / (math.pi * denom) if denom != 0 else math.inf
    if not (radicand > 0 and math.isfinite(radicand)):
        raise NumericalError(
            f"normalization radicand {radicand!r} not positive (E={energy}, "
            f"gamma={cfg.gamma_tilde})")
    return math.sqrt(radicand)


def make_even_mode(cfg, k, energy):
    return EigenMode("even", k, float(energy), normalization_even(cfg, energy),
                     float(cfg.gamma_tilde))


def make_odd_mode(cfg, k):
    n = 2 * k + 1
    norm = (math.sqrt(math.pi) * 2.0 ** n * math.factorial(n)) ** -0.5 if n < 170 else 0.0
    return EigenMode("odd", k, 2.0 * k + 1.5, norm, float(cfg.gamma_tilde))


def lowest_modes(cfg, count):
    """The ``count`` lowest relative modes, sorted by energy.

    Even and odd levels interlace for every interaction strength, so this is
    ceil(count/2) even modes and floor(count/2) odd ones.
    """
    n_even = (count + 1) // 2
    n_odd = count // 2
    modes = [make_even_mode(cfg, k, e) for k, e in enumerate(even_energies(cfg, n_even))]
    if n_odd:
        modes += [make_odd_mode(cfg, k) for k in range(n_odd)]
    return sorted(modes, key=lambda m: m.energy)


# -------------------------------------------------------------- Numerov

def _taylor_start(energy, slope, h):
    # psi(0) = 1, psi'(0+) = slope, psi'' = (y^2 - 2E) psi
    e = energy
    return (1.0 + slope * h - e * h ** 2 - e * slope * h ** 3 / 3.0
            + (2.0 + 4.0 * e * e) * h ** 4 / 24.0
            + (6.0 + 4.0 * e * e) * slope * h ** 5 / 120.0)


def numerov_outward(energy, slope, y_max, h=NUMEROV_STEP):
    """Even-parity solution on [0, y_max] with psi(0)=1, psi'(0+)=slope."""
    n = int(math.ceil(y_max / h)) + 1
    y = h * np.arange(n)
    g = y * y - 2.0 * energy
    return y, kernels.numerov(g, 1.0, _taylor_start(energy, slope, h), h)


def _mismatch(energy, slope, y_max, h):
    y, psi = numerov_outward(energy, slope, y_max, h)
    yy = y[-2]
    dpsi = (psi[-1] - psi[-3]) / (2.0 * h)
    lam = -yy + (energy - 0.5) / yy
    return dpsi - lam * psi[-2]


def shooting_oracle(cfg, energy_window, y_max=None, h=NUMEROV_STEP, scan_step=0.05):
    """Even eigenvalues inside ``energy_window`` by Numerov shooting.

    Integrates outward from y=0 with psi(0)=1 and psi'(0+)=gamma (the even
    form of the derivative-jump condition) and bisects on the sign of the
    mismatch with the decaying asymptotic log-derivative at ``y_max``.
    """
    lo, hi = map(float, energy_window)
    if not hi > lo:
        raise ValidationError("energy_window", "upper edge must exceed lower edge")
    g = float(cfg.gamma_tilde)
    if y_max is None:
        y_max = max(Y_MAX_MIN, math.sqrt(2.0 * max(hi, 0.0)) + 6.0)
    n_scan = max(2, int(math.ceil((hi - lo) / scan_step)) + 1)
    grid = np.linspace(lo, hi, n_scan)
    vals = [_mismatch(e, g, y_max, h) for e in grid]
    roots = []
    for (e0, f0), (e1, f1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if f0 == 0.0:
            roots.append(float(e0))
        elif np.sign(f0) != np.sign(f1) and f1 != 0.0:
            roots.append(brentq(_mismatch, e0, e1, args=(g, y_max, h), xtol=1e-12))
    if vals[-1] == 0.0:
        roots.append(float(hi))
    if not roots:
        raise BracketError(f"no even eigenvalue in window ({lo}, {hi}) for gamma={g}")
    return roots


@lru_cache(maxsize=512)
def _numerov_profile(energy, gamma_tilde, h=NUMEROV_STEP):
    y_max = max(Y_MAX_MIN, math.sqrt(2.0 * max(energy, 0.0)) + 6.0)
    n = int(math.ceil(y_max / h))
    n += n % 2  # even number of intervals for Simpson
    y = h * np.arange(n + 1)
    g = y * y - 2.0 * energy
    i_match = min(n - 10, max(10, int(math.sqrt(max(2.0 * energy, 0.0)) / h)))

    out = kernels.numerov(g[: i_match + 2], 1.0, _taylor_start(energy, gamma_tilde, h), h)
    # Inward from y_max, seeded with the decaying asymptotic shape.
    yr = y[::-1]
    tail = (energy - 0.5) * np.log(yr[:2]) - 0.5 * yr[:2] ** 2
    tail = np.exp(tail - tail[0])
    inn = kernels.numerov(g[::-1][: n - i_match + 2], tail[0], tail[1], h)[::-1]
    # inn[j] corresponds to y[i_match - 1 + j]
    scale = out[i_match] / inn[1]
    psi = np.empty(n + 1)
    psi[: i_match + 1] = out[: i_match + 1]
    psi[i_match + 1:] = scale * inn[2:]

    d_out = (out[i_match + 1] - out[i_match - 1]) / (2 * h)
    d_in = scale * (inn[2] - inn[0]) / (2 * h)
    ref = max(abs(d_out), abs(out[i_match]), 1e-300)
    if abs(d_out - d_in) > 1e-5 * ref:
        warnings.warn(f"Numerov matching mismatch {abs(d_out - d_in) / ref:.2e} at E={energy}",
                      AccuracyWarning, stacklevel=2)

    norm2 = 2.0 * float(simpson_weights(n + 1, h) @ (psi * psi))
    psi /= math.sqrt(norm2)
    if np.sign(psi[0]) != np.sign(recip_gamma(0.25 * (3.0 - 2.0 * energy))):
        psi = -psi
    return y, psi, CubicSpline(y, psi)


def eval_mode(mode, cfg, y):
    """Normalized relative-motion eigenfunction evaluated at ``y``."""
    y = np.asarray(y, dtype=float)
    if mode.parity == "odd":
        return hermite_fn(2 * mode.k + 1, y)
    a = mode.kummer_a
    if abs(a) <= A_MAX:
        with np.errstate(under="ignore"):
            z = y * y
            val = mode.norm_const * kummer_u(a, z) * np.exp(-0.5 * z)
        return val
    grid, _, spline = _numerov_profile(mode.energy, float(cfg.gamma_tilde))
    ay = np.abs(y)
    inside = ay <= grid[-1]
    res = np.where(inside, spline(np.where(inside, ay, 0.0)), 0.0)
    return float(res) if res.ndim == 0 else res


def eval_mode_numerov(mode, cfg, y):
    """Even mode from its Numerov profile regardless of A_MAX (cross-check route)."""
    grid, _, spline = _numerov_profile(mode.energy, float(cfg.gamma_tilde))
    ay = np.abs(np.asarray(y, dtype=float))
    inside = ay <= grid[-1]
    return np.where(inside, spline(np.where(inside, ay, 0.0)), 0.0)


def spectrum_table(gammas, count):
    """Rows (gamma, parity, k, energy) for the ``count`` lowest levels at each gamma."""
    rows = []
    for g in gammas:
        for m in lowest_modes(TrapConfig(float(g)), count):
            rows.append((float(g), m.parity, m.k, m.energy))
    return rows
