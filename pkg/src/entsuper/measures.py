"""Closed-form entanglement measures for qubit pairs and 2x2xn pure states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    SIGMA_YY,
    DimensionError,
    as_matrix,
    clamp_spectrum,
    eig_hermitian,
    is_hermitian,
    psd_sqrt,
    singular_values,
)
from .states import NORM_TOL, PureTripartiteState, StateError

TRACE_TOL = 1e-9
LAMBDA_CLAMP = 1e-10


class InvalidDensityMatrix(ValueError):
    pass


@dataclass(frozen=True)
class LambdaSpectrum:
    """Descending square roots of the spectrum of rho * spin_flip(rho)."""

    lambdas: tuple[float, float, float, float]

    @property
    def concurrence(self) -> float:
        l1, l2, l3, l4 = self.lambdas
        return max(0.0, l1 - l2 - l3 - l4)

    @property
    def coa(self) -> float:
        return float(sum(self.lambdas))


@dataclass(frozen=True)
class MeasureSet:
    entropy_E: float
    concurrence_C: float
    coa_Ca: float

    def as_dict(self) -> dict:
        return {"E": self.entropy_E, "C": self.concurrence_C, "Ca": self.coa_Ca}


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def shannon_bits(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p)))


def entropy_pure(state, dims=(2, 2)) -> float:
    """Entanglement entropy of a normalized bipartite pure state, in ebits."""
    v = np.asarray(state, dtype=np.complex128).reshape(-1)
    da, db = (int(d) for d in dims)
    if v.size != da * db:
        raise DimensionError(f"{v.size} amplitudes do not match dims {dims}")
    if abs(np.vdot(v, v).real - 1.0) > NORM_TOL:
        raise StateError("entropy_pure needs a normalized state")
    m = v.reshape(da, db)
    p = eig_hermitian(m @ m.conj().T).values
    return shannon_bits(np.clip(p, 0.0, 1.0))


def eof_from_concurrence(c: float) -> float:
    """Two-qubit entanglement of formation from concurrence (Wootters)."""
    c = min(max(float(c), 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + math.sqrt(max(1.0 - c * c, 0.0))))


def spin_flip(rho) -> np.ndarray:
    r = as_matrix(rho)
    return SIGMA_YY @ r.conj() @ SIGMA_YY


def check_density_matrix(rho, size: int = 4) -> np.ndarray:
    r = as_matrix(rho)
    if r.shape != (size, size):
        raise InvalidDensityMatrix(f"expected a {size}x{size} matrix, got {r.shape}")
    if not is_hermitian(r):
        raise InvalidDensityMatrix("density matrix is not Hermitian")
    if abs(np.trace(r).real - 1.0) > TRACE_TOL:
        raise InvalidDensityMatrix(f"trace {np.trace(r).real:.12g} is not 1")
    return r


def _clamp_lambdas(sv) -> tuple[float, float, float, float]:
    lam = np.zeros(4)
    sv = np.sort(np.asarray(sv, dtype=float))[::-1][:4]
    lam[: sv.size] = sv
    if lam[-1] < -LAMBDA_CLAMP:
        raise InvalidDensityMatrix(f"negative lambda {lam[-1]:.3e}")
    lam = np.maximum(lam, 0.0)
    return tuple(float(x) for x in lam)


def lambdas_from_factor(f) -> LambdaSpectrum:
    """Lambda spectrum of rho = F F^dag for any 4 x k factor F.

    The lambdas are the singular values of F^T (sy x sy) F, whose Gram matrix
    shares its nonzero spectrum with rho * rho~.
    """
    f = as_matrix(f)
    if f.shape[0] != 4:
        raise DimensionError(f"factor must have 4 rows, got {f.shape}")
    if f.shape[1] > 4:
        # F^dag = Q R gives F F^dag = R^dag R with a 4x4 factor R^dag
        r = np.linalg.qr(f.conj().T, mode="r")
        f = r.conj().T
    tau = f.T @ SIGMA_YY @ f
    return LambdaSpectrum(_clamp_lambdas(singular_values(tau)))


def lambda_spectrum(rho) -> LambdaSpectrum:
    """Lambda spectrum of a normalized two-qubit density matrix."""
    r = check_density_matrix(rho)
    try:
        root = psd_sqrt(r)
    except ValueError as exc:
        raise InvalidDensityMatrix(str(exc)) from exc
    return lambdas_from_factor(root)


def coa_fidelity(rho) -> float:
    """Tr sqrt(sqrt(rho) rho~ sqrt(rho)), computed through matrix square roots only."""
    r = check_density_matrix(rho)
    root = psd_sqrt(r)
    inner = root @ spin_flip(r) @ root
    return float(np.trace(psd_sqrt(0.5 * (inner + inner.conj().T))).real)


def lambda_eigen_sum(rho) -> float:
    """Sum of sqrt of eigenvalues of sqrt(rho) rho~ sqrt(rho)."""
    r = check_density_matrix(rho)
    root = psd_sqrt(r)
    inner = root @ spin_flip(r) @ root
    w = clamp_spectrum(eig_hermitian(0.5 * (inner + inner.conj().T)).values)
    return float(np.sum(np.sqrt(w)))


def concurrence_density(rho) -> float:
    return lambda_spectrum(rho).concurrence


def concurrence_pure(state) -> float:
    """|<psi*| sy x sy |psi>| for a normalized two-qubit vector."""
    v = np.asarray(state, dtype=np.complex128).reshape(-1)
    if v.size != 4:
        raise DimensionError(f"two-qubit state needs 4 amplitudes, got {v.size}")
    if abs(np.vdot(v, v).real - 1.0) > NORM_TOL:
        raise StateError("concurrence_pure needs a normalized state")
    return float(min(abs(v @ SIGMA_YY @ v), 1.0))


def measures_of(gamma: PureTripartiteState) -> MeasureSet:
    """E, C and C_a of the AB reduction of a 2x2xn state (normalized first)."""
    da, db, _ = gamma.dims
    if (da, db) != (2, 2):
        raise DimensionError(f"measures need dA = dB = 2, got {gamma.dims}")
    g = gamma if gamma.normalized else gamma.normalize()
    spec = lambdas_from_factor(g.ab_factor())
    c = spec.concurrence
    return MeasureSet(entropy_E=eof_from_concurrence(c), concurrence_C=c, coa_Ca=spec.coa)


def measures_of_density(rho) -> MeasureSet:
    spec = lambda_spectrum(rho)
    c = spec.concurrence
    return MeasureSet(entropy_E=eof_from_concurrence(c), concurrence_C=c, coa_Ca=spec.coa)
