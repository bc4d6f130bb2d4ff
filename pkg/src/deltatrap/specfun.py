"""Real-argument special functions: Gamma, digamma, Hermite functions, Kummer M and U.

All functions accept scalars or numpy arrays and return an object of the same
shape (a Python float for scalar input).  Only the second-kind Kummer function
with ``b = 1/2`` is provided, since that is the only one the relative-motion
eigenproblem needs.

Evaluation of ``U(a, 1/2, z)`` always goes through a seed value at
``a0 = a + m`` with ``a0 >= 1`` followed by ``m`` steps of the three-term
recurrence in ``a`` (downwards, the stable direction).  The seed comes from

* the two-M connection formula for ``z <= Z_SERIES``,
* the asymptotic expansion for ``z > Z_SWITCH`` when it converges,
* a Gauss-Laguerre evaluation of the integral representation otherwise.

Applying the connection formula directly at large negative ``a`` loses all
significant digits for moderate ``z`` (terms grow like ``exp(2 sqrt(|a| z))``),
which is why it is only used on seeds.
"""

from dataclasses import dataclass
from functools import lru_cache
import math
import warnings

import numpy as np
from scipy.special import roots_genlaguerre

from .errors import AccuracyWarning, PoleError, SeriesConvergenceError

Z_SWITCH = 30.0
Z_SERIES = 1.0
HERMITE_NMAX = 500
M_MAX_TERMS = 4000
LAGUERRE_NODES = 60
LAGUERRE_NODES_SMALL_Z = 150
BRANCH_BAND = 2.0
BRANCH_TOL = 1e-8

_EPS = np.finfo(float).eps
_SQRT_PI = math.sqrt(math.pi)

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])


@dataclass(frozen=True)
class SpecFunResult:
    value: object
    abs_error_estimate: object


def _out(x, *templates):
    if all(np.ndim(t) == 0 for t in templates):
        return float(np.asarray(x).reshape(()))
    return x


def _as_float_array(x):
    return np.asarray(x, dtype=float)


def _is_nonpositive_int(x):
    return (x <= 0) & (x == np.floor(x))


def _sinpi(x):
    """sin(pi x) with exact zeros at the integers."""
    r = x - 2.0 * np.round(0.5 * x)
    r = np.where(r > 0.5, 1.0 - r, r)
    r = np.where(r < -0.5, -1.0 - r, r)
    return np.sin(np.pi * r)


def _cospi(x):
    r = np.abs(x - 2.0 * np.round(0.5 * x))  # in [0, 1]
    return np.where(r <= 0.5, _sinpi(0.5 - r), -_sinpi(r - 0.5))


def _gamma_right(x):
    # Valid for x >= 0.5.
    xm = x - 1.0
    acc = np.full_like(xm, _LANCZOS_COEF[0])
    for i in range(1, len(_LANCZOS_COEF)):
        acc = acc + _LANCZOS_COEF[i] / (xm + i)
    t = xm + _LANCZOS_G + 0.5
    with np.errstate(over="ignore"):
        half = t ** (0.5 * (xm + 0.5))
        return math.sqrt(2.0 * math.pi) * half * (half * np.exp(-t)) * acc


def gamma(x):
    """Gamma function. Raises PoleError at non-positive integers."""
    xa = _as_float_array(x)
    if np.any(_is_nonpositive_int(xa)):
        raise PoleError(f"gamma has a pole at {xa[_is_nonpositive_int(xa)].ravel()[0]!r}")
    left = xa < 0.5
    xr = np.where(left, 1.0 - xa, xa)
    g = _gamma_right(xr)
    with np.errstate(divide="ignore", over="ignore"):
        res = np.where(left, np.pi / (_sinpi(xa) * g), g)
    return _out(res, x)


def recip_gamma(x):
    """1/Gamma(x); entire, exactly zero at non-positive integers."""
    xa = _as_float_array(x)
    left = xa < 0.5
    xr = np.where(left, 1.0 - xa, xa)
    g = _gamma_right(xr)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        res = np.where(left, _sinpi(xa) * g / np.pi, 1.0 / g)
    res = np.where(_is_nonpositive_int(xa), 0.0, res)
    return _out(res, x)


def _digamma_right(x):
    # Valid for x >= 0.5: shift up to x >= 10, then the asymptotic series.
    x = x.copy()
    acc = np.zeros_like(x)
    while True:
        small = x < 10.0
        if not small.any():
            break
        acc = acc - np.where(small, 1.0 / np.where(small, x, 1.0), 0.0)
        x = np.where(small, x + 1.0, x)
    inv2 = 1.0 / (x * x)
    tail = inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (
        1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))))
    return acc + np.log(x) - 0.5 / x - tail


def digamma(x):
    """Logarithmic derivative of Gamma. Raises PoleError at non-positive integers."""
    xa = _as_float_array(x)
    if np.any(_is_nonpositive_int(xa)):
        raise PoleError(f"digamma has a pole at {xa[_is_nonpositive_int(xa)].ravel()[0]!r}")
    left = xa < 0.5
    res = _digamma_right(np.where(left, 1.0 - xa, xa))
    with np.errstate(divide="ignore", invalid="ignore"):
        res = np.where(left, res - np.pi * _cospi(xa) / _sinpi(xa), res)
    return _out(res, x)


def recip_gamma_digamma(x):
    """The product digamma(x)/Gamma(x), continued through the poles.

    At x = -k the limit is -(-1)^k k!.
    """
    xa = _as_float_array(x)
    pole = _is_nonpositive_int(xa)
    safe = np.where(pole, 0.5, xa)
    with np.errstate(invalid="ignore"):
        res = recip_gamma(safe) * digamma(safe)
    k = np.where(pole, -xa, 0.0)
    limit = -np.where(k % 2 == 0, 1.0, -1.0) * np.exp(np.vectorize(math.lgamma)(k + 1.0))
    res = np.where(pole, limit, res)
    return _out(res, x)


# ---------------------------------------------------------------- Hermite

def hermite_fns(n_max, y):
    """Normalized oscillator eigenfunctions h_0..h_{n_max} evaluated at y.

    Returns an array of shape ``(n_max + 1,) + np.shape(y)``.  Uses the
    normalized three-term recurrence, so no raw Hermite polynomial is formed.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if n_max > HERMITE_NMAX:
        raise ValueError(f"n = {n_max} exceeds HERMITE_NMAX = {HERMITE_NMAX}")
    y = _as_float_array(y)
    out = np.empty((n_max + 1,) + y.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * y * y)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * y * out[0]
    for k in range(1, n_max):
        out[k + 1] = (math.sqrt(2.0 / (k + 1)) * y * out[k]
                      - math.sqrt(k / (k + 1.0)) * out[k - 1])
    return out


def hermite_fn(n, y):
    """Normalized oscillator eigenfunction (sqrt(pi) 2^n n!)^(-1/2) H_n(y) exp(-y^2/2)."""
    return _out(hermite_fns(int(n), y)[int(n)], y)


# ------------------------------------------------------------------ Kummer

def kummer_m_full(a, b, z, max_terms=M_MAX_TERMS):
    a, b, z = np.broadcast_arrays(_as_float_array(a), _as_float_array(b), _as_float_array(z))
    if np.any(_is_nonpositive_int(b)):
        raise PoleError("kummer_m: b must not be a non-positive integer")
    if np.any(z < 0):
        raise ValueError("kummer_m: z must be >= 0")
    term = np.ones(z.shape)
    total = np.ones(z.shape)
    abs_sum = np.ones(z.shape)
    done = z == 0
    n_min = np.maximum(z, -a)
    for n in range(max_terms):
        term = np.where(done, 0.0, term * (a + n) * z / ((b + n) * (n + 1)))
        total = total + term
        abs_sum = abs_sum + np.abs(term)
        done = done | (term == 0.0) | ((np.abs(term) <= 0.25 * _EPS * np.abs(total)) & (n + 1 >= n_min))
        if done.all():
            break
    else:
        raise SeriesConvergenceError(
            f"kummer_m series did not converge in {max_terms} terms (max z = {z.max():g})")
    return SpecFunResult(total, 2.0 * _EPS * abs_sum)


def kummer_m(a, b, z, max_terms=M_MAX_TERMS):
    """Confluent hypergeometric M(a, b, z) by its power series, z >= 0."""
    return _out(kummer_m_full(a, b, z, max_terms).value, a, b, z)


def _u_connection(a, z):
    """U(a, 1/2, z) by the two-M connection formula, with rounding estimate."""
    m1 = kummer_m_full(a, 0.5, z)
    m2 = kummer_m_full(a + 0.5, 1.5, z)
    c1 = _SQRT_PI * recip_gamma(a + 0.5)
    c2 = -2.0 * _SQRT_PI * recip_gamma(a) * np.sqrt(z)
    value = c1 * m1.value + c2 * m2.value
    err = abs(c1) * (m1.abs_error_estimate + _EPS * np.abs(m1.value)) \
        + np.abs(c2) * (m2.abs_error_estimate + _EPS * np.abs(m2.value))
    return value, err


def _u_asymptotic(a, z, max_terms=400):
    """U(a, 1/2, z) ~ z^-a sum (a)_n (a+1/2)_n / n! (-z)^-n, truncated at the smallest term.

    Returns (value, abs_error_estimate, converged_mask).
    """
    term = np.ones(z.shape)
    total = np.ones(z.shape)
    last = np.ones(z.shape)
    active = np.ones(z.shape, dtype=bool)
    for n in range(max_terms):
        nxt = term * (a + n) * (a + n + 0.5) / ((n + 1) * -z)
        grows = np.abs(nxt) >= np.abs(term)
        stop = active & (grows | (nxt == 0.0))
        active = active & ~stop
        term = np.where(active, nxt, term)
        total = total + np.where(active, nxt, 0.0)
        last = np.where(active, np.abs(nxt), last)
        if not active.any():
            break
    scale = z ** -a
    converged = last <= 4.0 * _EPS * np.abs(total)
    return scale * total, np.abs(scale) * (last + _EPS * np.abs(total)), converged


@lru_cache(maxsize=256)
def _laguerre_rule(alpha, n):
    x, w = roots_genlaguerre(n, alpha)
    return x, w


def _u_laguerre(a, z, n=LAGUERRE_NODES):
    """U(a, 1/2, z) for a > 0 from the integral representation.

    U(a, b, z) = z^-a / Gamma(a) * int_0^inf e^-s s^(a-1) (1 + s/z)^(b-a-1) ds
    """
    x, w = _laguerre_rule(float(a - 1.0), n)
    f = (1.0 + x[:, None] / z[None, :]) ** (-a - 0.5)
    value = recip_gamma(a) * z ** -a * (w @ f)
    return value, 1e-14 * np.abs(value)


def _u_seed(a0, z):
    value = np.empty(z.shape)
    err = np.empty(z.shape)
    low = z <= Z_SERIES
    if low.any():
        value[low], err[low] = _u_connection(a0, z[low])
    high = z > Z_SWITCH
    rest = ~low
    if high.any():
        v, e, ok = _u_asymptotic(a0, z[high])
        idx = np.flatnonzero(high)[ok]
        value[idx], err[idx] = v[ok], e[ok]
        rest = rest.copy()
        rest[idx] = False
    near = rest & (z <= 2.0)
    far = rest & (z > 2.0)
    if near.any():
        value[near], err[near] = _u_laguerre(a0, z[near], LAGUERRE_NODES_SMALL_Z)
    if far.any():
        value[far], err[far] = _u_laguerre(a0, z[far])
    return value, err


def _kummer_u_scalar_a(a, z):
    m = 0 if a >= 1.0 else int(math.ceil(1.0 - a))
    a0 = a + m
    u0, e0 = _u_seed(a0, z)
    if m == 0:
        return u0, e0
    u1, e1 = _u_seed(a0 + 1.0, z)
    scale = np.maximum(np.abs(u0), np.abs(u1))
    rel = np.maximum(e0 / np.where(u0 == 0, 1.0, np.abs(u0)),
                     e1 / np.where(u1 == 0, 1.0, np.abs(u1)))
    ac = a0
    for _ in range(m):
        um = (2.0 * ac + z - 0.5) * u0 - ac * (ac + 0.5) * u1
        u1, u0 = u0, um
        scale = np.maximum(scale, np.abs(um))
        ac -= 1.0
    err = scale * (rel + 4.0 * _EPS * (m + 1))
    return u0, err


def kummer_u_full(a, z):
    """Kummer U(a, 1/2, z) for z >= 0 with an absolute error estimate."""
    a_arr, z_arr = np.broadcast_arrays(_as_float_array(a), _as_float_array(z))
    if np.any(z_arr < 0):
        raise ValueError("kummer_u: z must be >= 0")
    value = np.empty(z_arr.shape)
    err = np.empty(z_arr.shape)
    for av in np.unique(a_arr):
        sel = a_arr == av
        value[sel], err[sel] = _kummer_u_scalar_a(float(av), z_arr[sel])
    _check_branch_band(a_arr, z_arr, value)
    return SpecFunResult(_out(value, a, z), _out(err, a, z))


def kummer_u(a, z):
    """Kummer's function of the second kind U(a, 1/2, z), z >= 0."""
    return kummer_u_full(a, z).value


def _check_branch_band(a_arr, z_arr, value):
    # Near Z_SWITCH, compare against the asymptotic branch wherever it converges.
    band = np.abs(z_arr - Z_SWITCH) <= BRANCH_BAND
    if not band.any():
        return
    for av in np.unique(a_arr[band]):
        sel = band & (a_arr == av)
        v, e, _ = _u_asymptotic(float(av), z_arr[sel])
        ok = e < 0.1 * BRANCH_TOL * np.abs(v)
        ref = value[sel][ok]
        if ref.size and np.any(np.abs(v[ok] - ref) > BRANCH_TOL * np.abs(ref)):
            warnings.warn(f"kummer_u branches disagree near z_switch for a={av:g}",
                          AccuracyWarning, stacklevel=3)


def kummer_u_series(a, z):
    """U(a, 1/2, z) straight from the connection formula (no recurrence)."""
    a_arr, z_arr = np.broadcast_arrays(_as_float_array(a), _as_float_array(z))
    value = np.empty(z_arr.shape)
    for av in np.unique(a_arr):
        sel = a_arr == av
        value[sel] = _u_connection(float(av), z_arr[sel])[0]
    return _out(value, a, z)


def kummer_u_asymptotic(a, z):
    """U(a, 1/2, z) from the large-z expansion; returns (value, converged)."""
    z_arr = _as_float_array(z)
    v, _, ok = _u_asymptotic(float(a), np.atleast_1d(z_arr))
    if np.ndim(z) == 0:
        return float(v[0]), bool(ok[0])
    return v, ok
