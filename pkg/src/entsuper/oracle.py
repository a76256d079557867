"""Brute-force extremal averages over ensemble decompositions of a qubit pair.

Every decomposition {p_i, |w_i>} of rho with m members is generated by an
m x r isometry U acting on the scaled eigenvectors of rho:
sqrt(p_i)|w_i> = sum_k U_ik sqrt(mu_k)|v_k>. The search walks over U with
pairwise row rotations; the value reported is always re-evaluated on an
explicit ensemble, so it is achievable and hence one-sided (a lower estimate
of a maximum, an upper estimate of a minimum).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .linalg import SIGMA_YY, as_matrix, clamp_spectrum, eig_hermitian
from .measures import check_density_matrix, concurrence_pure, entropy_pure
from .states import Ensemble, PureTripartiteState, rng_for

ISOMETRY_TOL = 1e-10

OBJECTIVES = {"concurrence": 0, "entropy": 1}
DIRECTIONS = {"max": 1.0, "min": -1.0}


class IsometryError(ValueError):
    pass


@dataclass(frozen=True)
class DecompositionSearch:
    restarts: int = 32
    step_budget: int = 500
    tolerance: float = 1e-9
    # None means 2 * rank, resolved per density matrix
    ensemble_size: int | None = None
    # |z| -> sqrt(|z|^2 + eps^2) continuation for minimizing concurrence,
    # whose kinks at z = 0 otherwise stall the coordinate search
    smoothing: tuple[float, ...] = (1e-2, 1e-3, 1e-4, 1e-5)

    def size_for(self, rank: int) -> int:
        m = self.ensemble_size if self.ensemble_size is not None else 2 * rank
        if m < rank:
            raise ValueError(f"ensemble size {m} is below the rank {rank}")
        return m


@dataclass
class OracleResult:
    value: float
    ensemble: Ensemble
    rank: int
    ensemble_size: int
    histories: list = field(default_factory=list, repr=False)


def eigen_ensemble(rho):
    """(mu, S): nonzero eigenvalues and the 4 x r matrix of sqrt(mu_k) v_k."""
    r = check_density_matrix(rho)
    es = eig_hermitian(r)
    w = clamp_spectrum(es.values)
    keep = w > 0.0
    mu = w[keep]
    s = es.vectors[:, keep] * np.sqrt(mu)
    return mu, s


def hjw_ensemble(rho, u) -> Ensemble:
    """Decomposition of ``rho`` generated by the m x r isometry ``u``."""
    mu, s = eigen_ensemble(rho)
    u = as_matrix(u)
    if u.shape[1] != mu.size:
        raise IsometryError(f"isometry has {u.shape[1]} columns, rho has rank {mu.size}")
    if np.max(np.abs(u.conj().T @ u - np.eye(mu.size))) > ISOMETRY_TOL:
        raise IsometryError("U^dag U is not the identity")
    return Ensemble.from_subnormalized(u @ s.T)


def random_isometry(rng: np.random.Generator, m: int, r: int) -> np.ndarray:
    z = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    q, rr = np.linalg.qr(z)
    # fix column phases so the draw is Haar on the Stiefel manifold
    d = np.diag(rr)
    return np.ascontiguousarray(q * (d / np.abs(d)))


def ensemble_average(ens: Ensemble, objective: str) -> float:
    if objective == "concurrence":
        vals = [concurrence_pure(w) for w in ens.states]
    elif objective == "entropy":
        vals = [entropy_pure(w) for w in ens.states]
    else:
        raise ValueError(f"unknown objective {objective!r}")
    return float(np.dot(ens.weights, vals))


def optimize_avg(rho, objective: str = "concurrence", direction: str = "max",
                 search: DecompositionSearch | None = None, seed: int = 0) -> OracleResult:
    """Best average ``objective`` over decompositions of ``rho`` found by the search."""
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {tuple(OBJECTIVES)}")
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {tuple(DIRECTIONS)}")
    search = search or DecompositionSearch()
    mu, s = eigen_ensemble(rho)
    rank = mu.size
    m = search.size_for(rank)
    tau = np.ascontiguousarray(s.T @ SIGMA_YY @ s)
    mu = np.ascontiguousarray(mu, dtype=float)
    kind = OBJECTIVES[objective]
    sign = DIRECTIONS[direction]

    best = None
    histories = []
    for k in range(search.restarts):
        u = random_isometry(rng_for(seed, k), m, rank)
        stages = search.smoothing if (kind == 0 and sign < 0) else ()
        for eps in stages:
            _backend.rotation_sweeps(u, tau, mu, kind, sign, search.step_budget,
                                     search.tolerance, eps)
        hist = _backend.rotation_sweeps(u, tau, mu, kind, sign, search.step_budget,
                                        search.tolerance, 0.0)
        histories.append(list(hist))
        ens = Ensemble.from_subnormalized(u @ s.T)
        val = ensemble_average(ens, objective)
        if best is None or sign * val > sign * best[0]:
            best = (val, ens)
    return OracleResult(value=best[0], ensemble=best[1], rank=rank, ensemble_size=m,
                        histories=histories)


def estimate_Ea(gamma: PureTripartiteState, search: DecompositionSearch | None = None,
                seed: int = 0) -> float:
    """Lower estimate of the entanglement of assistance of a 2x2xn state."""
    g = gamma if gamma.normalized else gamma.normalize()
    rho = g.reduced_ab()
    return optimize_avg(rho, "entropy", "max", search, seed).value


def cauchy_schwarz_sum(phi: PureTripartiteState, psi: PureTripartiteState, kraus) -> float:
    """sum_ij sqrt(q1_ij q2_ij) with q_ij = ||<i|N_j|x>||^2 over outcomes on C."""
    total = 0.0
    for n in kraus:
        n = as_matrix(n)
        a = phi.ab_factor() @ n.T
        b = psi.ab_factor() @ n.T
        q1 = np.sum(np.abs(a) ** 2, axis=0)
        q2 = np.sum(np.abs(b) ** 2, axis=0)
        total += float(np.sum(np.sqrt(q1 * q2)))
    return total
