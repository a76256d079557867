# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: complex Hermitian Jacobi and HJW rotation sweeps.

Both functions mirror ``entsuper._fallback`` line for line; the Python
wrappers in ``entsuper.linalg`` and ``entsuper.oracle`` pick whichever
backend imported successfully.
"""

import numpy as np

from libc.math cimport sqrt, fabs, cos, sin, log2, M_PI

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)


cdef double _INVPHI = 0.6180339887498949


def jacobi_eigh(double complex[:, ::1] a_in, double tol=1e-14, int max_sweeps=100):
    """Cyclic Jacobi on a Hermitian matrix. Returns (w, V, sweeps), unsorted."""
    cdef Py_ssize_t n = a_in.shape[0]
    a_arr = np.array(a_in, dtype=np.complex128, copy=True)
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] a = a_arr
    cdef double complex[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef double off, total, r, theta, t, c, s, app, aqq, thresh
    cdef double complex omega, wbar, x, y
    cdef int sweep = 0

    total = 0.0
    for p in range(n):
        for q in range(n):
            total += creal(a[p, q]) ** 2 + cimag(a[p, q]) ** 2
    thresh = tol * sqrt(total)
    if thresh < 1e-300:
        thresh = 1e-300

    while sweep < max_sweeps:
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += 2.0 * (creal(a[p, q]) ** 2 + cimag(a[p, q]) ** 2)
        if sqrt(off) < thresh:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = cabs(a[p, q])
                if r < 1e-300:
                    continue
                omega = a[p, q] / r
                wbar = conj(omega)
                app = creal(a[p, p])
                aqq = creal(a[q, q])
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = c * x - s * wbar * y
                    a[k, q] = s * x + c * wbar * y
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = c * x - s * wbar * y
                    v[k, q] = s * x + c * wbar * y
                for k in range(n):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - s * omega * y
                    a[q, k] = s * x + c * omega * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r

    w = np.empty(n, dtype=np.float64)
    for p in range(n):
        w[p] = creal(a[p, p])
    return w, v_arr, sweep


cdef inline double _h(double x) nogil:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * log2(x) - (1.0 - x) * log2(1.0 - x)


cdef inline double _term(double p, double az, int kind, double eps) nogil:
    cdef double c, r
    if kind == 0:
        if eps > 0.0:
            return sqrt(az * az + eps * eps)
        return az
    if p <= 1e-300:
        return 0.0
    c = az / p
    if c > 1.0:
        c = 1.0
    r = 1.0 - c * c
    if r < 0.0:
        r = 0.0
    return p * _h(0.5 * (1.0 + sqrt(r)))


cdef struct PairData:
    double complex a, b, d, pxy
    double pxx, pyy
    int kind
    double sign
    double eps


cdef inline double _pair_eval(PairData* pd, double c, double s, double complex e) nogil:
    cdef double complex eb = conj(e)
    cdef double complex z1 = c * c * pd.a - 2.0 * c * s * e * pd.d + s * s * e * e * pd.b
    cdef double complex z2 = s * s * eb * eb * pd.a + 2.0 * c * s * eb * pd.d + c * c * pd.b
    cdef double p1 = c * c * pd.pxx + s * s * pd.pyy - 2.0 * c * s * creal(eb * pd.pxy)
    cdef double p2 = pd.pxx + pd.pyy - p1
    return pd.sign * (_term(p1, cabs(z1), pd.kind, pd.eps) + _term(p2, cabs(z2), pd.kind, pd.eps))


cdef inline double complex _phase(double ph) nogil:
    return cos(ph) + 1j * sin(ph)


cdef inline double _pair_value(PairData* pd, double th, double ph) nogil:
    return _pair_eval(pd, cos(th), sin(th), _phase(ph))


cdef inline double _golden_eval(PairData* pd, double x, int over_theta, double cf, double sf,
                                double complex ef) nogil:
    if over_theta:
        return _pair_eval(pd, cos(x), sin(x), ef)
    return _pair_eval(pd, cf, sf, _phase(x))


cdef double _golden(PairData* pd, double lo, double hi, double fixed, int over_theta,
                    double* best_x, int iters) nogil:
    # trig of the fixed angle is evaluated once per search
    cdef double x1, x2, f1, f2
    cdef double cf = cos(fixed)
    cdef double sf = sin(fixed)
    cdef double complex ef = _phase(fixed)
    cdef int it
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = _golden_eval(pd, x1, over_theta, cf, sf, ef)
    f2 = _golden_eval(pd, x2, over_theta, cf, sf, ef)
    for it in range(iters):
        if f1 > f2:
            hi = x2
            x2 = x1
            f2 = f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = _golden_eval(pd, x1, over_theta, cf, sf, ef)
        else:
            lo = x1
            x1 = x2
            f1 = f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = _golden_eval(pd, x2, over_theta, cf, sf, ef)
    if f1 > f2:
        best_x[0] = x1
        return f1
    best_x[0] = x2
    return f2


def rotation_sweeps(double complex[:, ::1] u, double complex[:, ::1] tau, double[::1] mu,
                    int kind, double sign, int max_sweeps, double tol,
                    double eps=0.0, int n_theta=8, int n_phi=4, int golden_iters=28):
    """Coordinate ascent of sign*objective over pairwise row rotations of ``u``.

    ``u`` is modified in place. Returns the list of objective values (in the
    caller's sign convention) after the initial evaluation and each sweep.
    ``eps > 0`` replaces |z| by sqrt(|z|^2 + eps^2) in the concurrence objective.
    """
    cdef Py_ssize_t m = u.shape[0]
    cdef Py_ssize_t r = u.shape[1]
    cdef Py_ssize_t i, j, k, l, gi, gj
    cdef PairData pd
    cdef double f0, fbest, th, ph, fg, thb, phb, x, c, s, total, prev
    cdef double complex e, xi, yj, acc
    cdef double complex[::1] ty = np.empty(r, dtype=np.complex128)
    cdef double complex[::1] tx = np.empty(r, dtype=np.complex128)
    cdef int sweep
    cdef double[::1] gth = np.empty(n_theta)
    cdef double[::1] gc = np.empty(n_theta)
    cdef double[::1] gs = np.empty(n_theta)
    cdef double[::1] gph = np.empty(n_phi)
    cdef double complex[::1] ge = np.empty(n_phi, dtype=np.complex128)
    for gi in range(n_theta):
        gth[gi] = -0.5 * M_PI + (gi + 1) * M_PI / n_theta
        gc[gi] = cos(gth[gi])
        gs[gi] = sin(gth[gi])
    for gj in range(n_phi):
        gph[gj] = gj * M_PI / n_phi
        ge[gj] = _phase(gph[gj])
    pd.kind = kind
    pd.sign = sign
    pd.eps = eps

    history = []
    total = 0.0
    for i in range(m):
        acc = 0.0
        x = 0.0
        for k in range(r):
            x += (creal(u[i, k]) ** 2 + cimag(u[i, k]) ** 2) * mu[k]
            for l in range(r):
                acc = acc + u[i, k] * tau[k, l] * u[i, l]
        total += _term(x, cabs(acc), kind, eps)
    history.append(total)
    prev = sign * total

    for sweep in range(max_sweeps):
        for i in range(m - 1):
            for j in range(i + 1, m):
                # tau-contractions for the pair
                for k in range(r):
                    acc = 0.0
                    e = 0.0
                    for l in range(r):
                        acc = acc + tau[k, l] * u[i, l]
                        e = e + tau[k, l] * u[j, l]
                    tx[k] = acc
                    ty[k] = e
                pd.a = 0.0
                pd.b = 0.0
                pd.d = 0.0
                pd.pxy = 0.0
                pd.pxx = 0.0
                pd.pyy = 0.0
                for k in range(r):
                    pd.a = pd.a + u[i, k] * tx[k]
                    pd.b = pd.b + u[j, k] * ty[k]
                    pd.d = pd.d + u[i, k] * ty[k]
                    pd.pxx += (creal(u[i, k]) ** 2 + cimag(u[i, k]) ** 2) * mu[k]
                    pd.pyy += (creal(u[j, k]) ** 2 + cimag(u[j, k]) ** 2) * mu[k]
                    pd.pxy = pd.pxy + u[i, k] * conj(u[j, k]) * mu[k]
                f0 = _pair_value(&pd, 0.0, 0.0)
                fbest = f0
                thb = 0.0
                phb = 0.0
                for gi in range(n_theta):
                    for gj in range(n_phi):
                        fg = _pair_eval(&pd, gc[gi], gs[gi], ge[gj])
                        if fg > fbest:
                            fbest = fg
                            thb = gth[gi]
                            phb = gph[gj]
                fg = _golden(&pd, thb - M_PI / n_theta, thb + M_PI / n_theta, phb, 1, &x, golden_iters)
                if fg > fbest:
                    fbest = fg
                    thb = x
                fg = _golden(&pd, phb - M_PI / n_phi, phb + M_PI / n_phi, thb, 0, &x, golden_iters)
                if fg > fbest:
                    fbest = fg
                    phb = x
                if fbest > f0 + 1e-15 * (1.0 + fabs(f0)):
                    c = cos(thb)
                    s = sin(thb)
                    e = _phase(phb)
                    for k in range(r):
                        xi = u[i, k]
                        yj = u[j, k]
                        u[i, k] = c * xi - e * s * yj
                        u[j, k] = conj(e) * s * xi + c * yj
        total = 0.0
        for i in range(m):
            acc = 0.0
            x = 0.0
            for k in range(r):
                x += (creal(u[i, k]) ** 2 + cimag(u[i, k]) ** 2) * mu[k]
                for l in range(r):
                    acc = acc + u[i, k] * tau[k, l] * u[i, l]
            total += _term(x, cabs(acc), kind, eps)
        history.append(total)
        if sign * total - prev <= tol * (1.0 + fabs(total)):
            break
        prev = sign * total
    return history


def pair_value(double complex a, double complex b, double complex d, double complex pxy,
               double pxx, double pyy, int kind, double sign, double eps, double th, double ph):
    """Objective of a single row pair after a (th, ph) rotation; exposed for testing."""
    cdef PairData pd
    pd.a = a
    pd.b = b
    pd.d = d
    pd.pxy = pxy
    pd.pxx = pxx
    pd.pyy = pyy
    pd.kind = kind
    pd.sign = sign
    pd.eps = eps
    return _pair_value(&pd, th, ph)
