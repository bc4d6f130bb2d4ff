import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from deltatrap import _fallback, kernels

try:
    from deltatrap import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

BACKENDS = [pytest.param(_fallback, id="python")]
if compiled is not None:
    BACKENDS.append(pytest.param(compiled, id="compiled"))


def _hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


@pytest.mark.parametrize("mod", BACKENDS)
class TestKernels:
    def test_numerov_harmonic(self, mod):
        # psi'' = -psi from exact sin data; global error is fourth order in h
        errs = []
        for h in (0.02, 0.01):
            y = np.arange(0, 10, h)
            psi = mod.numerov(np.full(y.size, -1.0), 0.0, np.sin(h), h)
            errs.append(np.abs(psi - np.sin(y)).max())
        assert errs[1] < 1e-8
        assert 14.0 < errs[0] / errs[1] < 18.0

    @pytest.mark.parametrize("n", [1, 2, 3, 17, 64])
    def test_tridiag_ql_values(self, mod, n):
        rng = np.random.default_rng(n)
        d, e = rng.normal(size=n), rng.normal(size=n - 1)
        w, z = mod.tridiag_ql(d, e)
        assert z is None
        ref = eigh_tridiagonal(d, e, eigvals_only=True) if n > 1 else d
        assert np.allclose(np.sort(w), ref, atol=1e-12)

    def test_tridiag_ql_vectors(self, mod):
        rng = np.random.default_rng(5)
        d, e = rng.normal(size=30), rng.normal(size=29)
        w, z = mod.tridiag_ql(d, e, np.eye(30))
        t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        assert np.abs(t @ z - z * w).max() < 1e-12
        assert np.abs(z.T @ z - np.eye(30)).max() < 1e-12

    def test_tridiag_ql_graded_spectrum(self, mod):
        # rank-one-like matrices with tiny trailing entries must deflate
        rng = np.random.default_rng(9)
        v = rng.normal(size=60) * np.exp(-np.arange(60))
        a = np.outer(v, v)
        d, e, refl = mod.householder_tridiag(a)
        w, _ = mod.tridiag_ql(d, np.abs(e))
        assert abs(np.max(w) - v @ v) < 1e-13

    def test_tridiag_ql_budget(self, mod):
        with pytest.raises(ArithmeticError):
            mod.tridiag_ql(np.arange(5.0), np.ones(4), max_iter=0)

    @pytest.mark.parametrize("n", [1, 2, 3, 12, 40])
    def test_householder_reconstructs(self, mod, n):
        a = _hermitian(n, n)
        d, e, refl = mod.householder_tridiag(a)
        t = np.diag(d).astype(complex)
        if n > 1:
            t += np.diag(e, -1) + np.diag(e.conj(), 1)
        q = np.eye(n, dtype=complex)
        for k in range(n - 3, -1, -1):
            v = refl[k + 1:, k]
            q[k + 1:] -= 2.0 * np.outer(v, v.conj() @ q[k + 1:])
        assert np.abs(q @ t @ q.conj().T - a).max() < 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3, 8, 24])
    def test_jacobi(self, mod, n):
        a = _hermitian(n, 100 + n)
        w, v, sweeps = mod.jacobi_hermitian(a)
        assert np.abs(a @ v - v * w).max() < 1e-12
        assert np.abs(v.conj().T @ v - np.eye(n)).max() < 1e-12
        assert np.allclose(np.sort(w), np.linalg.eigvalsh(a), atol=1e-12)

    def test_jacobi_sweep_cap(self, mod):
        with pytest.raises(ArithmeticError):
            mod.jacobi_hermitian(_hermitian(6, 1), max_sweeps=0)


@pytest.mark.skipif(compiled is None, reason="extension not built")
def test_backends_agree():
    a = _hermitian(30, 77)
    for name in ("householder_tridiag",):
        c, p = getattr(compiled, name)(a), getattr(_fallback, name)(a)
        for x, y in zip(c, p):
            assert np.allclose(x, y, atol=1e-12)
    w1 = np.sort(compiled.jacobi_hermitian(a)[0])
    w2 = np.sort(_fallback.jacobi_hermitian(a)[0])
    assert np.allclose(w1, w2, atol=1e-12)
    g = np.linspace(-3, 3, 500)
    assert np.array_equal(compiled.numerov(g, 0.1, 0.2, 0.01), _fallback.numerov(g, 0.1, 0.2, 0.01))


def test_backend_selection_env():
    env = dict(os.environ, DELTATRAP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from deltatrap import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("compiled", "python")
