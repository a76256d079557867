"""Pure-Python twins of the routines in ``_kernels.pyx``.

Used when the compiled extension is unavailable (or forced through
``ENTSUPER_PURE=1``). The algorithms are identical; only speed differs.
"""

from __future__ import annotations

import math

import numpy as np

_INVPHI = 0.6180339887498949


def jacobi_eigh(a_in, tol=1e-14, max_sweeps=100):
    """Cyclic Jacobi on a Hermitian matrix. Returns (w, V, sweeps), unsorted."""
    a = np.array(a_in, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    thresh = max(tol * math.sqrt(float(np.sum(np.abs(a) ** 2))), 1e-300)
    iu = np.triu_indices(n, 1)
    sweep = 0
    while sweep < max_sweeps:
        off = math.sqrt(2.0 * float(np.sum(np.abs(a[iu]) ** 2)))
        if off < thresh:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                omega = apq / r
                wbar = omega.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                x = a[:, p].copy()
                y = a[:, q]
                a[:, p] = c * x - s * wbar * y
                a[:, q] = s * x + c * wbar * y
                x = v[:, p].copy()
                y = v[:, q]
                v[:, p] = c * x - s * wbar * y
                v[:, q] = s * x + c * wbar * y
                x = a[p, :].copy()
                y = a[q, :]
                a[p, :] = c * x - s * omega * y
                a[q, :] = s * x + c * omega * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
    return np.real(np.diag(a)).copy(), v, sweep


def _h(x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _term(p, az, kind, eps=0.0):
    if kind == 0:
        if eps > 0.0:
            return math.sqrt(az * az + eps * eps)
        return az
    if p <= 1e-300:
        return 0.0
    c = min(az / p, 1.0)
    return p * _h(0.5 * (1.0 + math.sqrt(max(1.0 - c * c, 0.0))))


def _phase(ph):
    return complex(math.cos(ph), math.sin(ph))


class _Pair:
    __slots__ = ("a", "b", "d", "pxy", "pxx", "pyy", "kind", "sign", "eps")

    def evaluate(self, c, s, e):
        eb = e.conjugate()
        z1 = c * c * self.a - 2.0 * c * s * e * self.d + s * s * e * e * self.b
        z2 = s * s * eb * eb * self.a + 2.0 * c * s * eb * self.d + c * c * self.b
        p1 = c * c * self.pxx + s * s * self.pyy - 2.0 * c * s * (eb * self.pxy).real
        p2 = self.pxx + self.pyy - p1
        return self.sign * (_term(p1, abs(z1), self.kind, self.eps)
                            + _term(p2, abs(z2), self.kind, self.eps))

    def value(self, th, ph):
        return self.evaluate(math.cos(th), math.sin(th), _phase(ph))


def _golden(pd, lo, hi, fixed, over_theta, iters):
    # trig of the fixed angle is evaluated once per search
    if over_theta:
        ef = _phase(fixed)

        def f(x):
            return pd.evaluate(math.cos(x), math.sin(x), ef)
    else:
        cf, sf = math.cos(fixed), math.sin(fixed)

        def f(x):
            return pd.evaluate(cf, sf, _phase(x))

    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 > f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
    return (f1, x1) if f1 > f2 else (f2, x2)


def sum_c(terms):
    acc = 0j
    for t in terms:
        acc = acc + t
    return acc


def _weight(row, mu):
    return sum((z.real ** 2 + z.imag ** 2) * w for z, w in zip(row, mu))


def _objective(u, tau, mu, kind, eps=0.0):
    # plain loops keep the summation order of the compiled kernel
    total = 0.0
    for row in u.tolist():
        acc = 0j
        for k, zk in enumerate(row):
            for l, zl in enumerate(row):
                acc = acc + zk * tau[k][l] * zl
        total += _term(_weight(row, mu), abs(acc), kind, eps)
    return total


def rotation_sweeps(u, tau, mu, kind, sign, max_sweeps, tol,
                    eps=0.0, n_theta=8, n_phi=4, golden_iters=28):
    """Coordinate ascent of sign*objective over pairwise row rotations of ``u``.

    ``u`` is modified in place. Returns the objective after the initial
    evaluation and after each sweep. ``eps > 0`` replaces |z| by
    sqrt(|z|^2 + eps^2) in the concurrence objective.
    """
    m, r = u.shape
    tau_l = tau.tolist()
    mu_l = [float(w) for w in mu]
    pd = _Pair()
    pd.kind = kind
    pd.sign = sign
    pd.eps = eps
    total = _objective(u, tau_l, mu_l, kind, eps)
    history = [total]
    prev = sign * total
    thetas = [-0.5 * math.pi + (gi + 1) * math.pi / n_theta for gi in range(n_theta)]
    phis = [gj * math.pi / n_phi for gj in range(n_phi)]
    trig = [(math.cos(th), math.sin(th)) for th in thetas]
    phases = [_phase(ph) for ph in phis]
    for _ in range(max_sweeps):
        for i in range(m - 1):
            for j in range(i + 1, m):
                x = u[i].tolist()
                y = u[j].tolist()
                tx = [sum_c(tau_l[k][l] * x[l] for l in range(r)) for k in range(r)]
                ty = [sum_c(tau_l[k][l] * y[l] for l in range(r)) for k in range(r)]
                pd.a = pd.b = pd.d = pd.pxy = 0j
                pd.pxx = pd.pyy = 0.0
                for k in range(r):
                    pd.a = pd.a + x[k] * tx[k]
                    pd.b = pd.b + y[k] * ty[k]
                    pd.d = pd.d + x[k] * ty[k]
                    pd.pxx += (x[k].real ** 2 + x[k].imag ** 2) * mu_l[k]
                    pd.pyy += (y[k].real ** 2 + y[k].imag ** 2) * mu_l[k]
                    pd.pxy = pd.pxy + x[k] * y[k].conjugate() * mu_l[k]
                f0 = pd.value(0.0, 0.0)
                fbest, thb, phb = f0, 0.0, 0.0
                for th, (c, s) in zip(thetas, trig):
                    for ph, e in zip(phis, phases):
                        fg = pd.evaluate(c, s, e)
                        if fg > fbest:
                            fbest, thb, phb = fg, th, ph
                fg, xg = _golden(pd, thb - math.pi / n_theta, thb + math.pi / n_theta,
                                 phb, True, golden_iters)
                if fg > fbest:
                    fbest, thb = fg, xg
                fg, xg = _golden(pd, phb - math.pi / n_phi, phb + math.pi / n_phi,
                                 thb, False, golden_iters)
                if fg > fbest:
                    fbest, phb = fg, xg
                if fbest > f0 + 1e-15 * (1.0 + abs(f0)):
                    c, s = math.cos(thb), math.sin(thb)
                    e = _phase(phb)
                    for k in range(r):
                        xi, yj = x[k], y[k]
                        u[i, k] = c * xi - e * s * yj
                        u[j, k] = e.conjugate() * s * xi + c * yj
        total = _objective(u, tau_l, mu_l, kind, eps)
        history.append(total)
        if sign * total - prev <= tol * (1.0 + abs(total)):
            break
        prev = sign * total
    return history
