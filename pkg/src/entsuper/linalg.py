"""Small dense complex linear algebra on numpy arrays.

Matrices are plain ``complex128`` ndarrays. Tripartite indices follow
``(a * dB + b) * dC + c``: the last subsystem varies fastest, which is what
``np.reshape`` in C order gives for free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend

HERMITIAN_TOL = 1e-10
CLAMP_TOL = 1e-10
PSD_ERROR_TOL = 1e-8
MAX_DIM = 64

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in descending order; eigenvectors are the matching columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def _check_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix is not square: {a.shape}")


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    a = as_matrix(m)
    return a.shape[0] == a.shape[1] and float(np.max(np.abs(a - a.conj().T), initial=0.0)) <= tol


def eig_hermitian(m) -> EigenSystem:
    """Jacobi eigendecomposition of a Hermitian matrix (dimension <= 64)."""
    a = as_matrix(m)
    _check_square(a)
    if a.shape[0] > MAX_DIM:
        raise DimensionError(f"dimension {a.shape[0]} exceeds {MAX_DIM}")
    if not is_hermitian(a):
        raise NotHermitianError("matrix is not Hermitian within 1e-10")
    # the solver only reads the upper triangle consistently if the input is exactly Hermitian
    a = np.ascontiguousarray(0.5 * (a + a.conj().T))
    w, v, _ = _backend.jacobi_eigh(a)
    order = np.argsort(-w, kind="stable")
    return EigenSystem(values=np.asarray(w)[order], vectors=np.asarray(v)[:, order])


def _noise_floor(w: np.ndarray) -> float:
    scale = float(np.max(np.abs(w), initial=0.0))
    return 16.0 * np.finfo(float).eps * max(scale, 1.0) * len(w)


def clamp_spectrum(w: np.ndarray) -> np.ndarray:
    """Zero eigenvalues that are roundoff; reject genuinely negative ones."""
    w = np.asarray(w, dtype=float)
    if np.any(w < -PSD_ERROR_TOL):
        raise NotPSDError(f"eigenvalue {float(w.min()):.3e} is below -{PSD_ERROR_TOL:g}")
    floor = max(_noise_floor(w), 0.0)
    return np.where(w <= floor, 0.0, w)


def psd_sqrt(m) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix."""
    es = eig_hermitian(m)
    w = clamp_spectrum(es.values)
    v = es.vectors
    out = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def _normalize_keep(keep, n: int) -> tuple[int, ...]:
    names = "ABCDEFGH"
    out = []
    for k in keep:
        if isinstance(k, str):
            if k.upper() not in names[:n]:
                raise DimensionError(f"unknown subsystem {k!r}")
            k = names.index(k.upper())
        if not 0 <= k < n:
            raise DimensionError(f"subsystem index {k} out of range for {n} parties")
        out.append(int(k))
    return tuple(sorted(set(out)))


def partial_trace(rho, dims, keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``keep`` holds indices or party letters, e.g. ``"AB"`` or ``(0, 1)``.
    """
    a = as_matrix(rho)
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    if a.shape != (total, total):
        raise DimensionError(f"matrix shape {a.shape} does not match dims {dims}")
    n = len(dims)
    kept = _normalize_keep(keep, n)
    t = a.reshape(dims + dims)
    # einsum labels: row indices then column indices, traced ones shared
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = [row[i] if i not in kept else letters[n + i] for i in range(n)]
    out = [row[i] for i in kept] + [col[i] for i in kept]
    t = np.einsum("".join(row) + "".join(col) + "->" + "".join(out), t)
    d = int(np.prod([dims[i] for i in kept])) if kept else 1
    return t.reshape(d, d)


def singular_values(x) -> np.ndarray:
    """Singular values of a small matrix, descending.

    Eigenvalues of the Hermitian dilation [[0, X], [X^dag, 0]] are +/- the
    singular values; reading them off directly keeps zero singular values at
    roundoff level instead of the sqrt(eps) a Gram-matrix route would give.
    """
    x = as_matrix(x)
    r, c = x.shape
    dil = np.zeros((r + c, r + c), dtype=np.complex128)
    dil[:r, r:] = x
    dil[r:, :r] = x.conj().T
    w = eig_hermitian(dil).values
    k = min(r, c)
    return np.maximum(w[:k], 0.0)


def frobenius(m) -> float:
    return float(np.sqrt(np.sum(np.abs(as_matrix(m)) ** 2)))
