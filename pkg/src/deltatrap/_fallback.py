"""Pure-Python versions of the compiled kernels, same signatures and semantics."""

import math

import numpy as np


def numerov(g, psi0, psi1, h):
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    c = h * h / 12.0
    gl = g.tolist()
    psi = [0.0] * n
    psi[0] = psi0
    if n > 1:
        psi[1] = psi1
    for i in range(1, n - 1):
        psi[i + 1] = (2.0 * (1.0 + 5.0 * c * gl[i]) * psi[i]
                      - (1.0 - c * gl[i - 1]) * psi[i - 1]) / (1.0 - c * gl[i + 1])
    return np.array(psi)


def tridiag_ql(d_in, e_in, z_in=None, max_iter=30):
    n = len(d_in)
    d = [float(x) for x in d_in]
    e = [float(x) for x in e_in] + [0.0] if n > 0 else []
    e = e[:n]
    z = None if z_in is None else np.array(z_in, dtype=float, order="C")
    tst1 = 0.0
    it = 0
    budget = max_iter * max(n, 1)
    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= 2.2e-16 * max(dd, tst1):
                    break
                m += 1
            if m == l:
                break
            if it >= budget:
                raise ArithmeticError("tridiag_ql: too many iterations")
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0 else -r))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
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
                if z is not None:
                    zi = z[:, i].copy()
                    zi1 = z[:, i + 1].copy()
                    z[:, i + 1] = s * zi + c * zi1
                    z[:, i] = c * zi - s * zi1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.array(d), z


def householder_tridiag(a_in):
    a = np.array(a_in, dtype=np.complex128)
    n = a.shape[0]
    vmat = np.zeros((n, n), dtype=np.complex128)
    e = np.zeros(max(n - 1, 0), dtype=np.complex128)
    for k in range(n - 2):
        x = a[k + 1:, k]
        norm = np.linalg.norm(x)
        if norm == 0.0:
            continue
        x0abs = abs(x[0])
        phase = x[0] / x0abs if x0abs > 0 else 1.0
        alpha = -phase * norm
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            e[k] = alpha
            continue
        v /= vnorm
        vmat[k + 1:, k] = v
        sub = a[k + 1:, k + 1:]
        p = sub @ v
        kk = np.vdot(v, p).real
        w = 2.0 * p - 2.0 * kk * v
        sub -= np.outer(v, w.conj()) + np.outer(w, v.conj())
        e[k] = alpha
    if n >= 2:
        e[n - 2] = a[n - 1, n - 2]
    return np.real(np.diag(a)).copy(), e, vmat


def jacobi_hermitian(a_in, tol=1e-14, max_sweeps=60):
    a = np.array(a_in, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    sweep = 0
    while True:
        off = np.sqrt(np.sum(np.abs(np.triu(a, 1)) ** 2))
        if scale == 0.0 or off <= tol * scale:
            break
        if sweep == max_sweeps:
            raise ArithmeticError("jacobi_hermitian: no convergence")
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                gabs = abs(a[p, q])
                if gabs <= 1e-300:
                    continue
                ph = a[p, q] / gabs
                theta = (a[q, q].real - a[p, p].real) / (2.0 * gabs)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * ph.conjugate() * cq
                a[:, q] = s * cp + c * ph.conjugate() * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * ph * rq
                a[q, :] = s * rp + c * ph * rq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * ph.conjugate() * vq
                v[:, q] = s * vp + c * ph.conjugate() * vq
    return np.real(np.diag(a)).copy(), v, sweep
