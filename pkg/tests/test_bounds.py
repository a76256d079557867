from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entsuper.bounds import (
    CoefficientError,
    bound_report,
    bound_unnormalized,
    lower_bounds_C,
    lower_bounds_C_closed,
    multi_term_upper,
    multi_term_upper_min_order,
    superpose_many,
    thm1_upper_E,
    thm1_upper_Ea,
    thm2_upper_C,
    thm2_upper_Ca,
)
from entsuper.measures import measures_of
from entsuper.states import ghz, load_fixture, sample_random, superpose, w_state

H = 1 / math.sqrt(2)
unit = st.floats(0, 1, allow_nan=False)
phase = st.floats(-math.pi, math.pi, allow_nan=False)


def test_thm1_endpoint():
    # the symmetric form is the mean of the two asymmetric ones: (1.0 + 1.4) / 2
    f = thm1_upper_E(0.5, 0.7, 0.3, 0.9, 1.0, 0.0)
    assert f.sym == pytest.approx(1.2, abs=1e-15)
    assert f.asym1 == pytest.approx(1.0, abs=1e-15)
    assert f.asym2 == pytest.approx(1.4, abs=1e-15)
    assert f.best == f.asym1


def test_thm1_cross_term_only():
    assert thm1_upper_E(0, 0, 0, 0, H, H).sym == pytest.approx(2.0, abs=1e-12)


def test_thm1_ea_values():
    assert thm1_upper_Ea(0.4, 0.9, 1.0, 0.0) == pytest.approx(0.8)
    assert thm1_upper_Ea(1, 1, H, H) == pytest.approx(4.0, abs=1e-12)
    assert thm1_upper_Ea(0, 0, 0.6, 0.8) == pytest.approx(1.92, abs=1e-12)


def test_thm2_endpoint():
    f = thm2_upper_C(0.3, 0.7, 0.1, 0.2, 1.0, 0.0)
    assert f.sym == pytest.approx(0.5)
    assert f.sym >= 0.3
    assert f.best == pytest.approx(0.3)


def test_thm2_ca_values():
    assert thm2_upper_Ca(0.37, 0.9, 1.0, 0.0) == 0.37
    assert thm2_upper_Ca(1, 1, H, H) == pytest.approx(2.0, abs=1e-12)


def test_ghz_pair_bound():
    g = ghz()
    rep = bound_report(H, g, H, g)
    assert rep.scaled_actual("C") == 0.0
    assert rep.upper_sym["C"] == pytest.approx(1.5, abs=1e-12)


def test_rejects_unnormalized_coefficients():
    with pytest.raises(CoefficientError):
        thm2_upper_C(0, 0, 0, 0, 1.0, 1.0)


@settings(max_examples=100, deadline=None)
@given(unit, unit, unit, unit, unit, phase, phase)
def test_sym_is_mean_and_phase_free(m1, m2, m3, m4, s, pa, pb):
    a, b = math.cos(s * math.pi / 2), math.sin(s * math.pi / 2)
    for fn in (thm1_upper_E, thm2_upper_C):
        f = fn(m1, m2, m3, m4, a, b)
        assert abs(f.sym - 0.5 * (f.asym1 + f.asym2)) < 1e-12
        g = fn(m1, m2, m3, m4, a * complex(math.cos(pa), math.sin(pa)),
               b * complex(math.cos(pb), math.sin(pb)))
        np.testing.assert_allclose(g, f, atol=1e-12)


def test_unnormalized_unit_scale():
    m = (0.2, 0.5, 0.3, 0.6)
    assert bound_unnormalized(0.6, 0.8, m, "thm2_C") == thm2_upper_C(*m, 0.6, 0.8)
    assert bound_unnormalized(0.6, 0.8, m[:2], "thm2_Ca") == thm2_upper_Ca(*m[:2], 0.6, 0.8)


def test_unnormalized_scaling():
    m = (0.2, 0.5, 0.3, 0.6)
    one = bound_unnormalized(0.6, 0.8j, m, "thm1_E")
    four = bound_unnormalized(1.2, 1.6j, m, "thm1_E")
    np.testing.assert_allclose(np.array(four) / 4.0, one, atol=1e-14)


def test_unnormalized_vs_manual(rng):
    for _ in range(50):
        a, b = rng.standard_normal(2) * 3 + 1j * rng.standard_normal(2)
        m = tuple(rng.uniform(0, 1, 4))
        t = math.hypot(abs(a), abs(b))
        manual = thm2_upper_C(*m, a / t, b / t).scaled(t * t)
        np.testing.assert_allclose(bound_unnormalized(a, b, m, "thm2_C"), manual, rtol=1e-12)


def test_unnormalized_bad_kind():
    with pytest.raises(ValueError):
        bound_unnormalized(1, 0, (0, 0, 0, 0), "nope")


def test_lower_endpoint():
    assert lower_bounds_C(0.37, 0.8, 0.1, 0.2, 1.0, 1.0, 0.0) == pytest.approx(0.37, abs=1e-15)


def test_lower_zero_measures():
    assert lower_bounds_C(0, 0, 0, 0, 1.0, H, H) == 0.0


@settings(max_examples=100, deadline=None)
@given(unit, unit, unit, unit, unit, st.floats(0.05, 2.0))
def test_lower_matches_closed_form(c1, ca1, c2, ca2, s, norm):
    a, b = math.cos(s * math.pi / 2), math.sin(s * math.pi / 2)
    assert abs(lower_bounds_C(c1, ca1, c2, ca2, norm, a, b)
               - lower_bounds_C_closed(c1, ca1, c2, ca2, norm, a, b)) < 1e-12


def test_ghz_w_sandwich():
    a = 0.99
    b = math.sqrt(1 - a * a)
    rep = bound_report(a, ghz(), b, w_state())
    actual = rep.scaled_actual("C")
    assert rep.lower_best["C"] <= actual + 1e-12 <= rep.upper_best["C"] + 2e-12
    assert not rep.violations()


def test_fixture_sweep_dominance():
    phi, psi = load_fixture("phi33"), load_fixture("psi34")
    mp, mq = measures_of(phi), measures_of(psi)
    for x in np.linspace(0, 1, 101):
        rep = bound_report(x, phi, math.sqrt(1 - x * x), psi, m_phi=mp, m_psi=mq)
        assert rep.slack["C"] >= -1e-9
        assert rep.slack["Ca"] >= -1e-9
        assert rep.upper_sym["C"] >= rep.scaled_actual("C") - 1e-9


def test_report_entropy_needs_estimates():
    rep = bound_report(0.6, ghz(), 0.8, w_state())
    assert "E" not in rep.upper_best
    rep = bound_report(0.6, ghz(), 0.8, w_state(), ea_estimates=(1.0, 0.9))
    assert "E" in rep.upper_best


def test_multi_two_terms_is_pair_bound():
    x, y = sample_random((2, 2, 4), 1), sample_random((2, 2, 4), 2)
    mx, my = measures_of(x), measures_of(y)
    terms = [(0.6, x), (0.8j, y)]
    c = thm2_upper_C(mx.concurrence_C, mx.coa_Ca, my.concurrence_C, my.coa_Ca, 0.6, 0.8j)
    assert multi_term_upper(terms, "C") == pytest.approx(c.best, abs=1e-12)
    assert multi_term_upper(terms, "Ca") == pytest.approx(
        thm2_upper_Ca(mx.coa_Ca, my.coa_Ca, 0.6, 0.8j), abs=1e-12)


def test_multi_zero_third_term():
    x, y, z = (sample_random((2, 2, 4), s) for s in (3, 4, 5))
    two = multi_term_upper([(0.6, x), (0.8, y)], "C")
    three = multi_term_upper([(0.6, x), (0.8, y), (0.0, z)], "C")
    assert abs(two - three) < 1e-12


def test_multi_rejects():
    x = sample_random((2, 2, 4), 1)
    with pytest.raises(ValueError):
        multi_term_upper([(1.0, x)])
    with pytest.raises(CoefficientError):
        multi_term_upper([(1.0, x), (1.0, x)])
    with pytest.raises(ValueError):
        multi_term_upper([(0.6, x), (0.8, x)], "E")


def test_three_term_monte_carlo():
    c = 1 / math.sqrt(3)
    for seed in range(1000):
        xs = [sample_random((2, 2, 4), seed, index=i) for i in range(3)]
        terms = [(c, s) for s in xs]
        pi = superpose_many(terms)
        m = measures_of(pi)
        assert multi_term_upper(terms, "C") >= pi.norm_sq * m.concurrence_C - 1e-9
        assert multi_term_upper(terms, "Ca") >= pi.norm_sq * m.coa_Ca - 1e-9


def test_min_order_not_larger():
    c = 1 / math.sqrt(3)
    terms = [(c, sample_random((2, 2, 4), 9, index=i)) for i in range(3)]
    assert multi_term_upper_min_order(terms) <= multi_term_upper(terms) + 1e-15


def test_superpose_many_two_terms():
    x, y = sample_random((2, 2, 4), 1), sample_random((2, 2, 4), 2)
    np.testing.assert_allclose(superpose_many([(0.6, x), (0.8, y)]).amps,
                               superpose(0.6, x, 0.8, y).amps)
