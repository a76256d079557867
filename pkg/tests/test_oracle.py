from __future__ import annotations

import numpy as np
import pytest

from entsuper.measures import lambda_spectrum, measures_of
from entsuper.oracle import (
    DecompositionSearch,
    IsometryError,
    cauchy_schwarz_sum,
    eigen_ensemble,
    estimate_Ea,
    hjw_ensemble,
    optimize_avg,
    random_isometry,
)
from entsuper.states import ghz, load_fixture, product_ab, sample_random

from conftest import random_density

BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)
QUICK = DecompositionSearch(restarts=4, step_budget=200)


def test_identity_isometry_gives_eigen_ensemble(rng):
    rho = random_density(rng)
    mu, s = eigen_ensemble(rho)
    ens = hjw_ensemble(rho, np.eye(4))
    np.testing.assert_allclose(ens.weights, mu, atol=1e-12)
    assert np.max(np.abs(ens.density() - rho)) < 1e-12


def test_rank_one_single_member():
    ens = hjw_ensemble(np.outer(BELL, BELL), np.array([[np.exp(0.4j)]]))
    assert len(ens) == 1
    assert abs(abs(np.vdot(ens.states[0], BELL)) - 1.0) < 1e-12


def test_random_isometry_reconstructs(rng):
    for m in (4, 6, 8, 12):
        rho = random_density(rng)
        u = random_isometry(rng, m, 4)
        ens = hjw_ensemble(rho, u)
        assert abs(ens.weights.sum() - 1.0) < 1e-12
        assert np.max(np.abs(ens.density() - rho)) < 1e-9


def test_rejects_non_isometry(rng):
    rho = random_density(rng)
    with pytest.raises(IsometryError):
        hjw_ensemble(rho, np.ones((8, 4)))
    with pytest.raises(IsometryError):
        hjw_ensemble(rho, np.eye(3))


def test_size_for():
    assert DecompositionSearch().size_for(3) == 6
    assert DecompositionSearch(ensemble_size=10).size_for(3) == 10
    with pytest.raises(ValueError):
        DecompositionSearch(ensemble_size=2).size_for(3)


def test_bad_objective():
    with pytest.raises(ValueError):
        optimize_avg(np.eye(4) / 4, "fidelity")
    with pytest.raises(ValueError):
        optimize_avg(np.eye(4) / 4, "concurrence", "sideways")


@pytest.mark.parametrize("direction", ["min", "max"])
def test_bell_unique_decomposition(direction):
    r = optimize_avg(np.outer(BELL, BELL), "concurrence", direction, QUICK)
    assert abs(r.value - 1.0) < 1e-12


def test_ghz_reduced_extremes():
    rho = np.diag([0.5, 0, 0, 0.5])
    assert optimize_avg(rho, "concurrence", "min").value < 1e-6
    assert abs(optimize_avg(rho, "concurrence", "max").value - 1.0) < 1e-3


def test_ea_ghz():
    assert estimate_Ea(ghz(), QUICK) >= 1 - 1e-6


def test_ea_product():
    assert abs(estimate_Ea(product_ab([1, 0, 0, 0], [1, 0]), QUICK)) < 1e-9


def test_ea_above_formation():
    for seed in range(5):
        g = sample_random((2, 2, 4), seed)
        assert estimate_Ea(g, QUICK, seed) >= measures_of(g).entropy_E - 1e-6


def test_histories_monotone_and_ensemble_valid(rng):
    rho = random_density(rng, rank=3)
    for objective in ("concurrence", "entropy"):
        for direction, sign in (("max", 1), ("min", -1)):
            r = optimize_avg(rho, objective, direction, QUICK, seed=3)
            for h in r.histories:
                assert all(sign * (b - a) >= -1e-12 for a, b in zip(h, h[1:]))
            assert abs(r.ensemble.weights.sum() - 1.0) < 1e-10
            assert np.max(np.abs(r.ensemble.density() - rho)) < 1e-9
            assert r.ensemble_size == 6


def test_deterministic(rng):
    rho = random_density(rng)
    a = optimize_avg(rho, "concurrence", "max", QUICK, seed=11)
    b = optimize_avg(rho, "concurrence", "max", QUICK, seed=11)
    assert a.value == b.value


def test_closed_form_certification():
    for seed in range(10):
        rho = sample_random((2, 2, 4), seed).reduced_ab()
        spec = lambda_spectrum(rho)
        mx = optimize_avg(rho, "concurrence", "max", seed=seed).value
        mn = optimize_avg(rho, "concurrence", "min", seed=seed).value
        assert mx <= spec.coa + 1e-9 and spec.coa - mx <= 1e-3
        assert mn >= spec.concurrence - 1e-9 and mn - spec.concurrence <= 1e-3


def test_fixture_max_gap():
    g = load_fixture("phi33")
    rho = g.reduced_ab()
    mx = optimize_avg(rho, "concurrence", "max").value
    assert abs(mx - measures_of(g).coa_Ca) <= 1e-3


def _isometry_povm(u):
    # rank-1 operators |0><u_j| from the rows of an isometry
    dc = u.shape[1]
    return [np.outer(np.eye(1, dc, 0), row.conj()) for row in u]


def test_cauchy_schwarz(rng):
    for seed in range(50):
        phi = sample_random((2, 2, 4), seed, index=0)
        psi = sample_random((2, 2, 4), seed, index=1)
        u = random_isometry(rng, 8, 4)
        assert cauchy_schwarz_sum(phi, psi, _isometry_povm(u)) <= 1 + 1e-9
    phi = sample_random((2, 2, 4), 0)
    assert abs(cauchy_schwarz_sum(phi, phi, [np.eye(4)]) - 1.0) < 1e-12
