"""Alpha sweeps and Monte-Carlo verification behind the ``sweep`` and ``verify`` commands."""

from __future__ import annotations

import cmath
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bounds import (
    bound_report,
    multi_term_upper,
    superpose_many,
    thm1_upper_E,
)
from .measures import measures_of
from .oracle import DecompositionSearch, estimate_Ea
from .states import PureTripartiteState, rng_for, sample_amplitudes

CSV_HEADER = ("abs_alpha,norm_sq_gamma,C_actual,C_upper_sym,C_upper_best,C_lower,"
              "Ca_actual,Ca_upper,ratio")
RATIO_FLOOR = 1e-6
RATIO_REPORT_MIN_C = 0.1
SLACK_TOL = 1e-9


def fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass(frozen=True)
class SweepConfig:
    grid_points: int = 101
    phase_alpha: float = 0.0
    phase_beta: float = 0.0
    seed: int = 0
    output_path: str | None = None

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")

    def abs_alphas(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.grid_points)


@dataclass(frozen=True)
class SweepRow:
    abs_alpha: float
    norm_sq_gamma: float
    C_actual: float
    C_upper_sym: float
    C_upper_best: float
    C_lower: float
    Ca_actual: float
    Ca_upper: float
    ratio: float | None

    def csv(self) -> str:
        vals = [self.abs_alpha, self.norm_sq_gamma, self.C_actual, self.C_upper_sym,
                self.C_upper_best, self.C_lower, self.Ca_actual, self.Ca_upper]
        return ",".join(fmt(v) for v in vals) + "," + ("" if self.ratio is None else fmt(self.ratio))


def coefficients(abs_alpha: float, phase_alpha: float = 0.0, phase_beta: float = 0.0):
    abs_beta = math.sqrt(max(0.0, 1.0 - abs_alpha * abs_alpha))
    return abs_alpha * cmath.exp(1j * phase_alpha), abs_beta * cmath.exp(1j * phase_beta)


def upper_over_actual(upper: float, norm_sq: float, c_actual: float) -> float | None:
    """Bound divided by ||Gamma||^2 C; None where C is numerically zero."""
    if c_actual < RATIO_FLOOR:
        return None
    return upper / (norm_sq * c_actual)


def sweep_rows(phi: PureTripartiteState, psi: PureTripartiteState,
               config: SweepConfig = SweepConfig()) -> list[SweepRow]:
    if phi.dims != psi.dims:
        raise ValueError(f"dimension mismatch: {phi.dims} vs {psi.dims}")
    m_phi, m_psi = measures_of(phi), measures_of(psi)
    rows = []
    for a in config.abs_alphas():
        alpha, beta = coefficients(float(a), config.phase_alpha, config.phase_beta)
        rep = bound_report(alpha, phi, beta, psi, m_phi=m_phi, m_psi=m_psi)
        c = rep.actual.concurrence_C
        rows.append(SweepRow(
            abs_alpha=float(a), norm_sq_gamma=rep.norm_sq_Gamma, C_actual=c,
            C_upper_sym=rep.upper_sym["C"], C_upper_best=rep.upper_best["C"],
            C_lower=rep.lower_best["C"], Ca_actual=rep.actual.coa_Ca,
            Ca_upper=rep.upper_best["Ca"],
            ratio=upper_over_actual(rep.upper_best["C"], rep.norm_sq_Gamma, c),
        ))
    return rows


def ratio_range(rows, min_c: float = RATIO_REPORT_MIN_C) -> tuple[float, float] | None:
    """(min, max) of the concurrence bound/actual ratio over rows with C_actual > min_c."""
    vals = [r.ratio for r in rows if r.ratio is not None and r.C_actual > min_c]
    if not vals:
        return None
    return min(vals), max(vals)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in rows:
        buf.write(r.csv() + "\n")
    return buf.getvalue()


def gnuplot_script(csv_name: str) -> str:
    return f"""# render with: gnuplot -p {csv_name}.gp
set datafile separator ','
set key top left
set xlabel '|alpha|'
set multiplot layout 1,2
set title 'concurrence of assistance'
plot '{csv_name}' using 1:($7*$2) skip 1 with lines lw 2 title '||Gamma||^2 Ca', \\
     '' using 1:8 skip 1 with lines dt 4 lw 2 title 'upper bound'
set title 'concurrence'
plot '{csv_name}' using 1:($3*$2) skip 1 with lines lw 2 title '||Gamma||^2 C', \\
     '' using 1:5 skip 1 with lines dt 4 lw 2 title 'upper bound (best)', \\
     '' using 1:4 skip 1 with lines dt 2 title 'upper bound (symmetric)', \\
     '' using 1:6 skip 1 with lines dt 3 title 'lower bound'
unset multiplot
"""


def write_sweep(rows, path) -> tuple[Path, Path]:
    path = Path(path)
    path.write_text(rows_to_csv(rows), encoding="utf-8", newline="")
    gp = path.with_name(path.name + ".gp")
    gp.write_text(gnuplot_script(path.name), encoding="utf-8")
    return path, gp


# --- Monte-Carlo verification ---------------------------------------------------

CHECKS = ("C_sym", "C_asym1", "C_asym2", "Ca", "C_lower", "multi_C", "multi_Ca",
          "E_sym", "E_asym1", "E_asym2")

# counter namespaces for per-sample streams
_PAIRS, _TRIPLES, _ORACLE = 0, 1, 2


@dataclass
class VerifySummary:
    pairs: int
    dims: tuple
    seed: int
    alpha_mode: str
    mode: str
    triples: int = 0
    thm1_checked: int = 0
    violations: dict = field(default_factory=lambda: {k: 0 for k in CHECKS})
    min_slack: dict = field(default_factory=dict)
    ratio_samples: int = 0
    ratio_max: float = float("nan")
    ratio_min: float = float("nan")
    ratio_in_1_2: float = float("nan")

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())

    def _slack(self, key: str, value: float) -> None:
        prev = self.min_slack.get(key)
        if prev is None or value < prev:
            self.min_slack[key] = value

    def format(self) -> str:
        lines = [
            f"pairs: {self.pairs}",
            "dims: {} {} {}".format(*self.dims),
            f"seed: {self.seed}",
            f"alpha_mode: {self.alpha_mode}",
            f"mode: {self.mode}",
            f"triples: {self.triples}",
            f"thm1_checked: {self.thm1_checked}",
        ]
        lines += [f"violations.{k}: {v}" for k, v in self.violations.items()]
        lines.append(f"violations.total: {self.total_violations}")
        lines += [f"min_slack.{k}: {fmt(v)}" for k, v in sorted(self.min_slack.items())]
        lines += [
            f"ratio_samples: {self.ratio_samples}",
            f"ratio_max: {fmt(self.ratio_max)}",
            f"ratio_min: {fmt(self.ratio_min)}",
            f"ratio_fraction_in_1_2: {fmt(self.ratio_in_1_2)}",
        ]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        d = asdict(self)
        d["dims"] = list(self.dims)
        d["total_violations"] = self.total_violations
        return json.dumps(d, indent=2, sort_keys=True)


def sample_pair(seed: int, k: int, dims, mode: str, alpha_mode: str, grid_points: int = 101):
    """State pair and coefficients for sample ``k``; depends only on (seed, k)."""
    rng = rng_for(seed, _PAIRS, k)
    phi = PureTripartiteState(dims, sample_amplitudes(rng, dims, mode))
    psi = PureTripartiteState(dims, sample_amplitudes(rng, dims, mode))
    if alpha_mode == "grid":
        alpha, beta = coefficients((k % grid_points) / (grid_points - 1))
    elif alpha_mode == "random":
        a = float(rng.random())
        ph = rng.random(2) * 2.0 * math.pi
        alpha, beta = coefficients(a, float(ph[0]), float(ph[1]))
    else:
        raise ValueError(f"alpha_mode must be 'grid' or 'random', got {alpha_mode!r}")
    return phi, psi, alpha, beta


def sample_triple(seed: int, t: int, dims, mode: str):
    rng = rng_for(seed, _TRIPLES, t)
    states = [PureTripartiteState(dims, sample_amplitudes(rng, dims, mode)) for _ in range(3)]
    c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    c = c / np.linalg.norm(c)
    return list(zip(c, states))


def check_thm1(phi, psi, alpha, beta, search: DecompositionSearch, seed: int, k: int):
    """Slack of the entropy bounds with oracle lower estimates of the assisted entropy."""
    rep = bound_report(alpha, phi, beta, psi)
    oseed = int(rng_for(seed, _ORACLE, k).integers(0, 2**63))
    ea1 = estimate_Ea(phi, search, oseed)
    ea2 = estimate_Ea(psi, search, oseed + 1)
    forms = thm1_upper_E(rep.components[0].entropy_E, ea1, rep.components[1].entropy_E, ea2,
                         alpha, beta)
    lhs = rep.scaled_actual("E")
    return {"E_sym": forms.sym - lhs, "E_asym1": forms.asym1 - lhs, "E_asym2": forms.asym2 - lhs}


def verify(n_pairs: int = 10_000, dims=(2, 2, 4), seed: int = 42, alpha_mode: str = "random",
           mode: str = "complex-gaussian", n_triples: int | None = None,
           thm1_fraction: float = 0.01, search: DecompositionSearch | None = None,
           pairs=None) -> VerifySummary:
    """Check every bound on random instances and collect tightness statistics.

    ``pairs`` optionally replaces the random sampler with explicit
    (phi, psi, alpha, beta) tuples.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")
    dims = tuple(int(d) for d in dims)
    if dims[0] != 2 or dims[1] != 2:
        raise ValueError(f"verification needs dA = dB = 2, got {dims}")
    if n_triples is None:
        n_triples = max(1, n_pairs // 10)
    search = search or DecompositionSearch()
    summary = VerifySummary(pairs=n_pairs, dims=dims, seed=seed, alpha_mode=alpha_mode,
                            mode=mode, triples=n_triples)
    step = max(1, round(1.0 / thm1_fraction)) if thm1_fraction > 0 else 0
    ratios = []

    for k in range(n_pairs):
        if pairs is not None:
            phi, psi, alpha, beta = pairs[k]
        else:
            phi, psi, alpha, beta = sample_pair(seed, k, dims, mode, alpha_mode)
        rep = bound_report(alpha, phi, beta, psi)
        lhs_c = rep.scaled_actual("C")
        slacks = {
            "C_sym": rep.upper_sym["C"] - lhs_c,
            "C_asym1": rep.upper_asym1["C"] - lhs_c,
            "C_asym2": rep.upper_asym2["C"] - lhs_c,
            "Ca": rep.upper_best["Ca"] - rep.scaled_actual("Ca"),
            "C_lower": lhs_c - rep.lower_best["C"],
        }
        if step and k % step == 0:
            slacks.update(check_thm1(phi, psi, alpha, beta, search, seed, k))
            summary.thm1_checked += 1
        for key, s in slacks.items():
            summary._slack(key, s)
            if s < -SLACK_TOL:
                summary.violations[key] += 1
        ratio = upper_over_actual(rep.upper_best["C"], rep.norm_sq_Gamma, rep.actual.concurrence_C)
        if ratio is not None:
            ratios.append(ratio)

    for t in range(n_triples):
        terms = sample_triple(seed, t, dims, mode)
        pi = superpose_many(terms)
        m = measures_of(pi)
        n2 = pi.norm_sq
        for key, bound, val in (("multi_C", multi_term_upper(terms, "C"), m.concurrence_C),
                                ("multi_Ca", multi_term_upper(terms, "Ca"), m.coa_Ca)):
            s = bound - n2 * val
            summary._slack(key, s)
            if s < -SLACK_TOL:
                summary.violations[key] += 1

    if ratios:
        r = np.array(ratios)
        summary.ratio_samples = int(r.size)
        summary.ratio_max = float(r.max())
        summary.ratio_min = float(r.min())
        summary.ratio_in_1_2 = float(np.mean((r >= 1.0 - 1e-12) & (r <= 2.0)))
    return summary
