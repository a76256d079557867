"""Upper and lower bounds on the entanglement of superposed tripartite states.

All upper bounds are on ``||Gamma||^2 * measure(Gamma / ||Gamma||)`` where
``Gamma = alpha*Phi + beta*Psi`` with |alpha|^2 + |beta|^2 = 1. They depend
on the coefficients only through |alpha| and |beta|.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .measures import MeasureSet, measures_of
from .states import PureTripartiteState, StateError, superpose

COEFF_TOL = 1e-10

KINDS = ("thm1_E", "thm1_Ea", "thm2_C", "thm2_Ca")


class CoefficientError(ValueError):
    pass


class UpperForms(NamedTuple):
    """Symmetric bound and the two asymmetric bounds it averages."""

    sym: float
    asym1: float
    asym2: float

    @property
    def best(self) -> float:
        return min(self.sym, self.asym1, self.asym2)

    def scaled(self, k: float) -> "UpperForms":
        return UpperForms(self.sym * k, self.asym1 * k, self.asym2 * k)


def _moduli(alpha: complex, beta: complex) -> tuple[float, float]:
    a, b = abs(alpha), abs(beta)
    if abs(a * a + b * b - 1.0) > COEFF_TOL:
        raise CoefficientError(f"|alpha|^2 + |beta|^2 = {a * a + b * b!r}, expected 1")
    return a, b


def thm1_upper_E(E1: float, Ea1: float, E2: float, Ea2: float,
                 alpha: complex, beta: complex) -> UpperForms:
    """Entropy bounds on ||Gamma||^2 E(rho_AB), in ebits."""
    a, b = _moduli(alpha, beta)
    a2, b2, ab = a * a, b * b, a * b
    sym = a2 * (E1 + Ea1) + b2 * (Ea2 + E2) + 4.0 * ab
    asym1 = 2.0 * (a2 * E1 + b2 * Ea2 + 2.0 * ab)
    asym2 = 2.0 * (a2 * Ea1 + b2 * E2 + 2.0 * ab)
    return UpperForms(sym, asym1, asym2)


def thm1_upper_Ea(Ea1: float, Ea2: float, alpha: complex, beta: complex) -> float:
    """Bound on ||Gamma||^2 times the entanglement of assistance of Gamma."""
    a, b = _moduli(alpha, beta)
    return 2.0 * (a * a * Ea1 + b * b * Ea2 + 2.0 * a * b)


def thm2_upper_C(C1: float, Ca1: float, C2: float, Ca2: float,
                 alpha: complex, beta: complex) -> UpperForms:
    """Concurrence bounds on ||Gamma||^2 C(rho_AB)."""
    a, b = _moduli(alpha, beta)
    a2, b2, ab = a * a, b * b, a * b
    sym = 0.5 * a2 * (C1 + Ca1) + 0.5 * b2 * (Ca2 + C2) + 2.0 * ab
    asym1 = a2 * C1 + b2 * Ca2 + 2.0 * ab
    asym2 = a2 * Ca1 + b2 * C2 + 2.0 * ab
    return UpperForms(sym, asym1, asym2)


def thm2_upper_Ca(Ca1: float, Ca2: float, alpha: complex, beta: complex) -> float:
    """Bound on ||Gamma||^2 times the concurrence of assistance of Gamma."""
    a, b = _moduli(alpha, beta)
    return a * a * Ca1 + b * b * Ca2 + 2.0 * a * b


_BOUND_FNS = {
    "thm1_E": thm1_upper_E,
    "thm1_Ea": thm1_upper_Ea,
    "thm2_C": thm2_upper_C,
    "thm2_Ca": thm2_upper_Ca,
}


def bound_unnormalized(a: complex, b: complex, measures: Sequence[float], kind: str):
    """Bound for X = a*Phi + b*Psi with arbitrary (a, b) != (0, 0).

    With t^2 = |a|^2 + |b|^2, X/t is a normalized-coefficient superposition,
    so ||X||^2 m(X) = t^2 ||X/t||^2 m(X) <= t^2 * bound(a/t, b/t).
    ``measures`` are the bound's inputs in its own argument order.
    """
    try:
        fn = _BOUND_FNS[kind]
    except KeyError:
        raise ValueError(f"unknown bound kind {kind!r}; expected one of {KINDS}") from None
    t2 = abs(a) ** 2 + abs(b) ** 2
    if t2 == 0.0:
        raise CoefficientError("a = b = 0 has no superposition to bound")
    t = math.sqrt(t2)
    out = fn(*measures, a / t, b / t)
    if isinstance(out, UpperForms):
        return out.scaled(t2)
    return out * t2


def lower_bounds_C(C1: float, Ca1: float, C2: float, Ca2: float, norm_gamma: float,
                   alpha: complex, beta: complex) -> float:
    """Lower bound on ||Gamma||^2 C(rho_AB).

    Phi = (||Gamma||/alpha) Gamma_hat - (beta/alpha) Psi is itself a
    superposition; bounding C(Phi) with the asymmetric concurrence bound
    (C on Gamma_hat, C_a on Psi) and solving for C(Gamma_hat) gives
    ||Gamma||^2 C >= |alpha|^2 C1 - |beta|^2 Ca2 - 2||Gamma|| |beta|.
    The same with the roles of Phi and Psi swapped gives the second candidate.
    Both are valid, so the larger one (floored at 0) is returned.
    """
    a, b = _moduli(alpha, beta)
    if norm_gamma <= 0.0:
        raise StateError("||Gamma|| must be positive")
    best = 0.0
    n2 = norm_gamma * norm_gamma
    for coef, other, c_self, ca_other in ((alpha, beta, C1, Ca2), (beta, alpha, C2, Ca1)):
        if abs(coef) == 0.0:
            continue
        # coef * X = Gamma - other * Psi with X normalized. The asym1 form puts
        # C on Gamma_hat and C_a on Psi; the bound is homogeneous of degree 2,
        # so |coef|^2 C(X) <= at0 + ||Gamma||^2 C(Gamma_hat). The unknown
        # enters linearly: evaluate at 0 and 1 to get the offset and slope.
        at0 = bound_unnormalized(norm_gamma, -other, (0.0, 0.0, 0.0, ca_other), "thm2_C").asym1
        at1 = bound_unnormalized(norm_gamma, -other, (1.0, 0.0, 0.0, ca_other), "thm2_C").asym1
        slope = at1 - at0  # = ||Gamma||^2
        best = max(best, n2 * (abs(coef) ** 2 * c_self - at0) / slope)
    return best


def lower_bounds_C_closed(C1, Ca1, C2, Ca2, norm_gamma, alpha, beta) -> float:
    """The same lower bound written out explicitly."""
    a, b = _moduli(alpha, beta)
    return max(0.0,
               a * a * C1 - b * b * Ca2 - 2.0 * norm_gamma * b,
               b * b * C2 - a * a * Ca1 - 2.0 * norm_gamma * a)


@dataclass(frozen=True)
class BoundReport:
    alpha: complex
    beta: complex
    norm_sq_Gamma: float
    actual: MeasureSet
    components: tuple[MeasureSet, MeasureSet]
    upper_sym: dict = field(default_factory=dict)
    upper_asym1: dict = field(default_factory=dict)
    upper_asym2: dict = field(default_factory=dict)
    upper_best: dict = field(default_factory=dict)
    lower_best: dict = field(default_factory=dict)
    slack: dict = field(default_factory=dict)

    def scaled_actual(self, name: str) -> float:
        key = {"C": "concurrence_C", "Ca": "coa_Ca", "E": "entropy_E"}[name]
        return self.norm_sq_Gamma * getattr(self.actual, key)

    def violations(self, tol: float = 1e-9) -> list[str]:
        out = [f"upper {k}" for k, s in self.slack.items() if s < -tol]
        out += [f"lower {k}" for k, lo in self.lower_best.items()
                if lo > self.scaled_actual(k) + tol]
        return out


def bound_report(alpha: complex, phi: PureTripartiteState, beta: complex,
                 psi: PureTripartiteState, ea_estimates: tuple[float, float] | None = None,
                 m_phi: MeasureSet | None = None, m_psi: MeasureSet | None = None) -> BoundReport:
    """Actual measures of Gamma against every applicable bound.

    ``ea_estimates`` (entanglement of assistance of Phi and Psi) enable the
    entropy bound; pass lower estimates to keep the check conservative.
    """
    _moduli(alpha, beta)
    gamma = superpose(alpha, phi, beta, psi)
    n2 = gamma.norm_sq
    m_phi = m_phi or measures_of(phi)
    m_psi = m_psi or measures_of(psi)
    actual = measures_of(gamma)

    c_forms = thm2_upper_C(m_phi.concurrence_C, m_phi.coa_Ca, m_psi.concurrence_C,
                           m_psi.coa_Ca, alpha, beta)
    ca = thm2_upper_Ca(m_phi.coa_Ca, m_psi.coa_Ca, alpha, beta)
    forms = {"C": c_forms, "Ca": UpperForms(ca, ca, ca)}
    if ea_estimates is not None:
        forms["E"] = thm1_upper_E(m_phi.entropy_E, ea_estimates[0], m_psi.entropy_E,
                                  ea_estimates[1], alpha, beta)

    lower = lower_bounds_C(m_phi.concurrence_C, m_phi.coa_Ca, m_psi.concurrence_C,
                           m_psi.coa_Ca, math.sqrt(n2), alpha, beta)
    report = BoundReport(
        alpha=complex(alpha), beta=complex(beta), norm_sq_Gamma=n2, actual=actual,
        components=(m_phi, m_psi),
        upper_sym={k: f.sym for k, f in forms.items()},
        upper_asym1={k: f.asym1 for k, f in forms.items()},
        upper_asym2={k: f.asym2 for k, f in forms.items()},
        upper_best={k: f.best for k, f in forms.items()},
        lower_best={"C": lower},
    )
    for k, f in forms.items():
        report.slack[k] = f.best - report.scaled_actual(k)
    return report


# --- more than two terms ----------------------------------------------------

class PartialBound(NamedTuple):
    """Upper bounds on ||G||^2 C(G_hat) and ||G||^2 Ca(G_hat) for a partial sum G."""

    C: float
    Ca: float
    norm: float


def _fold(terms, measures=None) -> PartialBound:
    if len(terms) < 2:
        raise ValueError("a superposition needs at least two terms")
    coeffs = [complex(c) for c, _ in terms]
    states = [s for _, s in terms]
    total = sum(abs(c) ** 2 for c in coeffs)
    if abs(total - 1.0) > COEFF_TOL:
        raise CoefficientError(f"sum of |coefficients|^2 = {total!r}, expected 1")
    dims = states[0].dims
    for s in states:
        if s.dims != dims:
            raise StateError("all terms must share dimensions")
        if not s.normalized:
            raise StateError("all terms must be normalized")
    ms = measures if measures is not None else [measures_of(s) for s in states]

    c0 = coeffs[0]
    partial = c0 * states[0].amps
    acc = PartialBound(abs(c0) ** 2 * ms[0].concurrence_C, abs(c0) ** 2 * ms[0].coa_Ca, abs(c0))
    for c, s, m in zip(coeffs[1:], states[1:], ms[1:]):
        # G_next = ||G|| G_hat + c X ; homogeneous two-term bounds with the
        # unknown ||G||^2 C(G_hat), ||G||^2 Ca(G_hat) replaced by upper bounds
        g, cm = acc.norm, abs(c)
        cross = 2.0 * g * cm
        c2 = cm * cm
        sym = 0.5 * (acc.C + acc.Ca) + 0.5 * c2 * (m.coa_Ca + m.concurrence_C) + cross
        asym1 = acc.C + c2 * m.coa_Ca + cross
        asym2 = acc.Ca + c2 * m.concurrence_C + cross
        new_ca = acc.Ca + c2 * m.coa_Ca + cross
        partial = partial + c * s.amps
        acc = PartialBound(min(sym, asym1, asym2), new_ca, float(np.linalg.norm(partial)))
    return acc


def multi_term_upper(terms: Sequence[tuple[complex, PureTripartiteState]], kind: str = "C",
                     measures: Sequence[MeasureSet] | None = None) -> float:
    """Left-fold bound on ||Pi||^2 C (kind "C") or ||Pi||^2 C_a (kind "Ca").

    Pi = sum_k c_k X_k. The first two terms form a partial sum whose
    measures are bounded by the two-term bounds, then each further term is
    added the same way. For two terms this is ``thm2_upper_C(...).best`` or
    ``thm2_upper_Ca``.
    """
    if kind not in ("C", "Ca"):
        raise ValueError(f"kind must be 'C' or 'Ca', got {kind!r}")
    acc = _fold(list(terms), measures)
    return acc.C if kind == "C" else acc.Ca


def multi_term_upper_min_order(terms, kind: str = "C") -> float:
    """Minimum of the left-fold bound over all orderings of the terms."""
    terms = list(terms)
    ms = [measures_of(s) for _, s in terms]
    idx = range(len(terms))
    return min(multi_term_upper([terms[i] for i in perm], kind, [ms[i] for i in perm])
               for perm in itertools.permutations(idx))


def superpose_many(terms) -> PureTripartiteState:
    states = [s for _, s in terms]
    amps = sum(complex(c) * s.amps for c, s in terms)
    return PureTripartiteState(states[0].dims, amps)
