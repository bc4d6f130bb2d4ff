# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Pure-Python equivalents live in ``_fallback.py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from "complex.h":
    double cabs(double complex)
    double complex conj(double complex)
    double creal(double complex)
    double cimag(double complex)


def numerov(const double[:] g, double psi0, double psi1, double h):
    """Integrate psi'' = g psi on a uniform grid from two starting values."""
    cdef Py_ssize_t n = g.shape[0], i
    cdef double c = h * h / 12.0
    out = np.empty(n)
    cdef double[:] psi = out
    psi[0] = psi0
    if n > 1:
        psi[1] = psi1
    for i in range(1, n - 1):
        psi[i + 1] = (2.0 * (1.0 + 5.0 * c * g[i]) * psi[i]
                      - (1.0 - c * g[i - 1]) * psi[i - 1]) / (1.0 - c * g[i + 1])
    return out


def tridiag_ql(d_in, e_in, z_in=None, int max_iter=30):
    """Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal matrix.

    ``e_in`` is the sub-diagonal (length n-1).  When ``z_in`` is given, its
    columns are rotated along (pass the identity to get eigenvectors).
    The iteration budget is ``max_iter * n`` sweeps in total, as in LAPACK.
    Eigenvalues are returned unsorted.
    """
    cdef Py_ssize_t n = len(d_in)
    dd_arr = np.array(d_in, dtype=np.float64)
    ee_arr = np.zeros(n)
    if n > 1:
        ee_arr[:n - 1] = e_in
    cdef double[:] d = dd_arr
    cdef double[:] e = ee_arr
    cdef bint vec = z_in is not None
    cdef double[:, :] z
    if vec:
        z_arr = np.array(z_in, dtype=np.float64, order="C")
        z = z_arr
    else:
        z_arr = None
    cdef Py_ssize_t l, m, i, k
    cdef long it = 0, budget = max_iter * max(n, 1)
    cdef double dd, g, r, s, c, p, f, b, tst1 = 0.0
    cdef bint underflow
    for l in range(n):
        # running scale as in EISPACK tql2: negligible relative to the matrix
        tst1 = max(tst1, fabs(d[l]) + fabs(e[l]))
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= 2.2e-16 * max(dd, tst1):
                    break
                m += 1
            if m == l:
                break
            if it >= budget:
                raise ArithmeticError("tridiag_ql: too many iterations")
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if vec:
                    for k in range(z.shape[0]):
                        f = z[k, i + 1]
                        z[k, i + 1] = s * z[k, i] + c * f
                        z[k, i] = c * z[k, i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return dd_arr, z_arr


def householder_tridiag(a_in):
    """Reduce a complex Hermitian matrix to tridiagonal form by Householder reflections.

    Returns ``(d, e, v)``: real diagonal, complex sub-diagonal and the matrix
    whose column k holds the unit reflector vector for step k (rows k+1..n-1).
    """
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    cdef double complex[:, :] a = a_arr
    cdef Py_ssize_t n = a.shape[0], k, i, j, m
    v_arr = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, :] vmat = v_arr
    e_arr = np.zeros(max(n - 1, 0), dtype=np.complex128)
    cdef double complex[:] e = e_arr
    cdef double complex *v = <double complex *> malloc(n * sizeof(double complex))
    cdef double complex *p = <double complex *> malloc(n * sizeof(double complex))
    cdef double complex *w = <double complex *> malloc(n * sizeof(double complex))
    cdef double norm, vnorm, x0abs, kk
    cdef double complex alpha, phase, acc, vi, wi
    try:
        for k in range(n - 2):
            m = n - k - 1
            norm = 0.0
            for i in range(m):
                norm += creal(a[k + 1 + i, k]) ** 2 + cimag(a[k + 1 + i, k]) ** 2
            norm = sqrt(norm)
            if norm == 0.0:
                e[k] = 0.0
                continue
            x0abs = cabs(a[k + 1, k])
            phase = a[k + 1, k] / x0abs if x0abs > 0.0 else 1.0
            alpha = -phase * norm
            vnorm = 0.0
            for i in range(m):
                v[i] = a[k + 1 + i, k]
            v[0] = v[0] - alpha
            for i in range(m):
                vnorm += creal(v[i]) ** 2 + cimag(v[i]) ** 2
            vnorm = sqrt(vnorm)
            if vnorm == 0.0:
                e[k] = alpha
                continue
            for i in range(m):
                v[i] = v[i] / vnorm
                vmat[k + 1 + i, k] = v[i]
            # p = A_sub v, K = v^H p
            kk = 0.0
            for i in range(m):
                acc = 0.0
                for j in range(m):
                    acc = acc + a[k + 1 + i, k + 1 + j] * v[j]
                p[i] = acc
                kk += creal(conj(v[i]) * acc)
            for i in range(m):
                w[i] = 2.0 * p[i] - 2.0 * kk * v[i]
            for i in range(m):
                vi = v[i]
                wi = w[i]
                for j in range(m):
                    a[k + 1 + i, k + 1 + j] = (a[k + 1 + i, k + 1 + j]
                                               - vi * conj(w[j]) - wi * conj(v[j]))
            e[k] = alpha
        if n >= 2:
            e[n - 2] = a[n - 1, n - 2]
    finally:
        free(v)
        free(p)
        free(w)
    d_arr = np.array([creal(a[i, i]) for i in range(n)], dtype=np.float64)
    return d_arr, e_arr, v_arr


def jacobi_hermitian(a_in, double tol=1e-14, int max_sweeps=60):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Returns ``(w, V, sweeps)`` with eigenvalues unsorted and eigenvectors as
    columns of V.
    """
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    cdef double complex[:, :] a = a_arr
    cdef Py_ssize_t n = a.shape[0], p, q, k
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, :] vm = v_arr
    cdef double off, scale, gabs, theta, t, c, s
    cdef double complex ph, aip, aiq
    cdef int sweep = 0
    scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += creal(a[p, q]) ** 2 + cimag(a[p, q]) ** 2
    scale = sqrt(scale)
    while True:
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += creal(a[p, q]) ** 2 + cimag(a[p, q]) ** 2
        if sqrt(off) <= tol * scale or scale == 0.0:
            break
        if sweep == max_sweeps:
            raise ArithmeticError("jacobi_hermitian: no convergence")
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                gabs = cabs(a[p, q])
                if gabs <= 1e-300:
                    continue
                ph = a[p, q] / gabs
                theta = (creal(a[q, q]) - creal(a[p, p])) / (2.0 * gabs)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                # A <- A U, U = [[c, s], [-s conj(ph), c conj(ph)]]
                for k in range(n):
                    aip = a[k, p]
                    aiq = a[k, q]
                    a[k, p] = c * aip - s * conj(ph) * aiq
                    a[k, q] = s * aip + c * conj(ph) * aiq
                for k in range(n):
                    aip = a[p, k]
                    aiq = a[q, k]
                    a[p, k] = c * aip - s * ph * aiq
                    a[q, k] = s * aip + c * ph * aiq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = creal(a[p, p])
                a[q, q] = creal(a[q, q])
                for k in range(n):
                    aip = vm[k, p]
                    aiq = vm[k, q]
                    vm[k, p] = c * aip - s * conj(ph) * aiq
                    vm[k, q] = s * aip + c * conj(ph) * aiq
    w_arr = np.array([creal(a[p, p]) for p in range(n)], dtype=np.float64)
    return w_arr, v_arr, sweep
