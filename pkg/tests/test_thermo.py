import math

import numpy as np
import pytest

import oracles
from thermocasimir import materials as mat
from thermocasimir import thermo
from thermocasimir.engine import free_energy
from thermocasimir.errors import DomainError, ValidationError
from thermocasimir.reflection import Auto, DrudeLimit, IdealLike, n0_term_coefficients

P = mat.GOLD
IDEAL = mat.IdealMetal()
MATCHED = mat.ImpedanceMatched(P)


def test_temperature_correction_vanishes_at_low_T():
    tc = thermo.temperature_correction(1e-6, 1.0, IDEAL, Auto())
    assert abs(tc.relative) < 1e-4
    assert tc.delta_F == tc.free_energy - tc.zero_T
    assert tc.relative == tc.delta_F / abs(tc.zero_T)


@pytest.mark.parametrize("a, T", [(5e-7, 300.0), (1e-6, 300.0), (1e-6, 77.0)])
@pytest.mark.parametrize("model", [mat.Drude(P), MATCHED])
def test_prescription_difference_closed_form(a, T, model):
    hi = thermo.temperature_correction(a, T, model, IdealLike())
    lo = thermo.temperature_correction(a, T, model, DrudeLimit())
    assert hi.delta_F - lo.delta_F == pytest.approx(oracles.te_n0_difference(a, T),
                                                    abs=hi.error + lo.error)


def test_matched_correction_exceeds_fixed_infrared():
    a, T = 3e-7, 300.0
    matched = thermo.temperature_correction(a, T, MATCHED, Auto())
    fixed = thermo.temperature_correction(a, T, mat.ImpedanceInfrared(P), Auto())
    assert abs(matched.relative) > abs(fixed.relative)


def test_default_step():
    assert thermo.default_step(300.0) == 3.0
    assert thermo.default_step(10.0) == 0.5
    assert thermo.default_step(1.0) == 0.25


def test_entropy_definition_and_sign():
    a, T, h = 1e-6, 50.0, 0.5
    r = thermo.entropy(a, T, IDEAL, Auto(), h=h)
    F = lambda t: free_energy(a, t, IDEAL, Auto(), thermo.ENTROPY_SETTINGS).value
    assert r.coarse == -(F(T + h) - F(T - h)) / (2 * h)
    assert r.fine == -(F(T + h / 2) - F(T - h / 2)) / h
    assert r.S == (4 * r.fine - r.coarse) / 3
    assert r.richardson_error == abs(r.fine - r.coarse)
    assert r.S > 0


def test_ideal_entropy_suppressed_at_low_T():
    s2 = thermo.entropy(1e-6, 2.0, IDEAL, Auto())
    s50 = thermo.entropy(1e-6, 50.0, IDEAL, Auto())
    assert abs(s2.S) < 0.1 * abs(s50.S)


def test_ideal_entropy_low_T_law():
    # S = 3 zeta(3) k^3 T^2 / (2 pi hbar^2 c^2) up to exponentially small terms
    T = 5.0
    exact = 3 * 1.2020569031595942 * oracles.K_B ** 3 * T ** 2 / (
        2 * math.pi * oracles.HBAR ** 2 * oracles.C ** 2)
    assert thermo.entropy(1e-6, T, IDEAL, Auto()).S == pytest.approx(exact, rel=1e-4)


def test_matched_entropy_monotone_on_grid():
    S = [abs(thermo.entropy(1e-6, T, MATCHED, IdealLike()).S) for T in (1, 2, 5, 10, 20)]
    assert all(x > y for x, y in zip(S, S[1:]))


@pytest.mark.parametrize("a, T, model", [(1e-6, 300.0, mat.Drude(P)), (2e-6, 120.0, IDEAL),
                                         (5e-7, 200.0, mat.Plasma(P)),
                                         (1e-6, 80.0, mat.ImpedanceInfrared(P)),
                                         (3e-6, 250.0, mat.Drude(P))])
def test_richardson_error_is_second_order(a, T, model):
    h = 0.1 * T
    e1 = thermo.entropy(a, T, model, Auto(), h=h).richardson_error
    e2 = thermo.entropy(a, T, model, Auto(), h=h / 2).richardson_error
    assert 3.0 < e1 / e2 < 5.0


def test_entropy_step_warning():
    # at 5 K a Matsubara frequency crosses the sharp omega_tau regime boundary inside
    # the stencil, so F(T) jumps and the two step sizes disagree
    r = thermo.entropy(1e-6, 5.0, MATCHED, IdealLike())
    assert r.richardson_error > 0.1 * abs(r.S)
    assert r.warning is not None and "too large" in r.warning
    assert thermo.entropy(1e-6, 20.0, MATCHED, IdealLike()).warning is None


def test_entropy_rejects_bad_step():
    with pytest.raises(DomainError):
        thermo.entropy(1e-6, 1.0, IDEAL, Auto(), h=0.6)


@pytest.mark.parametrize("a", [5e-7, 1e-6, 5e-6])
def test_nernst_ideal_passes(a):
    rep = thermo.nernst_check(a, IDEAL, Auto())
    assert rep.passed
    assert rep.fit_T == (1.0, 2.0, 5.0, 10.0)
    assert abs(rep.S[0]) < 0.1 * abs(rep.S[-1])


def test_nernst_grid_too_short():
    with pytest.raises(ValidationError):
        thermo.nernst_check(1e-6, IDEAL, Auto(), T_grid=(1, 2, 5))


def test_nernst_drude_report():
    rep = thermo.nernst_check(1e-6, mat.Drude(P), Auto())
    assert math.isfinite(rep.intercept) and math.isfinite(rep.intercept_error)
    assert isinstance(rep.passed, bool)
    assert len(rep.S) == 6


def test_fit_recovers_known_intercept():
    T = np.array([1.0, 2.0, 5.0, 10.0])
    S = 3.0 + 2.0 * T ** 1.5
    s0, ds0, p, A = thermo._fit_intercept(T, S, np.full(4, 1e-6))
    assert s0 == pytest.approx(3.0, abs=1e-3) and p == pytest.approx(1.5, abs=0.011)


def test_comparison_table():
    a_values = [1e-7, 3e-7, 5e-7]
    rows = thermo.prescription_comparison(a_values, 300.0, P)
    assert len(rows) == 12
    assert [r.method for r in rows[:4]] == list(thermo.METHODS)
    for r in rows:
        assert 3e14 * 0.999 <= r.omega_c <= 1.5e15 * 1.001
    labels = {r.method: r.prescription for r in rows[:4]}
    assert labels == {"GKM-recipe": "plasma-like", "matched": "ideal-like",
                      "drude": "drude-limit", "plasma": "plasma-like"}
    for a in a_values:
        gkm = next(r for r in rows if r.a == a and r.method == "GKM-recipe")
        matched = next(r for r in rows if r.a == a and r.method == "matched")
        assert abs(matched.relative) > abs(gkm.relative)
    again = thermo.prescription_comparison(a_values, 300.0, P)
    assert again == rows


def test_fixed_infrared_and_plasma_share_zero_frequency_te():
    q = np.geomspace(1e5, 1e9, 10)
    a = n0_term_coefficients(Auto(), q, thermo.gkm_model(P, 3e-7))
    b = n0_term_coefficients(Auto(), q, mat.Plasma(P))
    assert np.array_equal(a.r_perp_sq, b.r_perp_sq)
    expected = ((P.omega_p - 299792458.0 * q) / (P.omega_p + 299792458.0 * q)) ** 2
    assert np.allclose(a.r_perp_sq, expected, rtol=1e-14, atol=0)


def test_gkm_model_follows_characteristic_frequency():
    assert isinstance(thermo.gkm_model(P, 3e-7), mat.ImpedanceInfrared)
    # omega_c = 6.0e13 lies in [omega_tau, Omega) = [5.3e13, 6.4e13)
    assert isinstance(thermo.gkm_model(P, 2.5e-6), mat.ImpedanceAnomalousSkin)
    assert isinstance(thermo.gkm_model(P, 1e-4), mat.ImpedanceNormalSkin)


def test_regime_tags_use_normal_skin_below_omega_tau():
    T = 2.0
    step = 2 * math.pi * oracles.K_B * T / oracles.HBAR
    n_terms = 2000
    tags = thermo.regime_runs(MATCHED, n_terms, T)
    first = tags.split(";")[0]
    name, span = first.split(":")
    last = int(span.split("-")[1])
    assert name == "normal-skin"
    # every n with zeta_n < omega_tau is tagged normal-skin, and only those
    assert last * step < P.omega_tau <= (last + 1) * step
    assert [t.split(":")[0] for t in tags.split(";")] == ["normal-skin", "anomalous-skin",
                                                          "infrared"]


def test_regime_tags_single_model():
    assert thermo.regime_runs(mat.Drude(P), 5, 300.0) == "drude:1-4"
    assert thermo.regime_runs(mat.Drude(P), 1, 300.0) == ""
