import math
import time

import numpy as np
import pytest
from dataclasses import replace

import oracles
from thermocasimir import engine
from thermocasimir import materials as mat
from thermocasimir.errors import ConvergenceError, DomainError, ValidationError
from thermocasimir.reflection import Auto, DrudeLimit, IdealLike, PlasmaLike

P = mat.GOLD
IDEAL = mat.IdealMetal()
DRUDE = mat.Drude(P)
PLASMA = mat.Plasma(P)
MATCHED = mat.ImpedanceMatched(P)


# settings and integrand ---------------------------------------------------------

@pytest.mark.parametrize("kwargs", [dict(rel_tol=0.0), dict(abs_tol=-1.0),
                                    dict(tail_cutoff=20.0), dict(max_terms=0),
                                    dict(matsubara_tail_tol=0.0), dict(max_subdivisions=0)])
def test_settings_validation(kwargs):
    with pytest.raises(ValidationError):
        engine.QuadratureSettings(**kwargs)


def test_settings_defaults():
    s = engine.DEFAULT_SETTINGS
    assert (s.rel_tol, s.abs_tol, s.max_subdivisions, s.tail_cutoff, s.matsubara_tail_tol,
            s.max_terms) == (1e-8, 1e-20, 200, 60.0, 1e-10, 1_000_000)


def test_log_integrand_examples():
    assert engine.log_integrand(0.0, 3.0) == 0.0
    assert engine.log_integrand(1.0, math.log(2.0)) == pytest.approx(-0.693147, rel=1e-6)
    assert engine.log_integrand(1.0, 60.0) == pytest.approx(-8.757e-27, rel=1e-3)
    with pytest.raises(DomainError):
        engine.log_integrand(1.0, 0.0)


def test_log_integrand_accuracy():
    import mpmath
    mpmath.mp.dps = 40
    for r in (1.0, 0.999999, 0.3, 1e-8):
        for x in (1e-12, 1e-5, 0.5, 5.0, 40.0):
            exact = float(mpmath.log(1 - mpmath.mpf(r) * mpmath.exp(-mpmath.mpf(x))))
            assert engine.log_integrand(r, x) == pytest.approx(exact, rel=1e-13)


# individual terms ------------------------------------------------------------

def test_ideal_n0_term():
    term = engine.matsubara_term(0, 1e-6, 300.0, IDEAL, Auto())
    assert term == pytest.approx(oracles.ideal_classical(1e-6, 300.0), rel=1e-9)
    assert term == pytest.approx(-1.981e-10, rel=1e-3)


def test_high_term_suppressed():
    a, T = 1e-6, 300.0
    wc = 299792458.0 / (2 * a)
    step = 2 * math.pi * oracles.K_B * T / oracles.HBAR
    n = math.ceil(1e3 * wc / step)
    for model in (IDEAL, DRUDE, MATCHED):
        t0 = engine.matsubara_term(0, a, T, model, Auto())
        tn = engine.matsubara_term(n, a, T, model, Auto())
        assert abs(tn) < 1e-25 * abs(t0)


@pytest.mark.parametrize("a, T", [(1e-7, 10.0), (1e-6, 300.0), (5e-6, 77.0)])
def test_drude_limit_is_half_ideal_like(a, T):
    for model in (DRUDE, IDEAL, MATCHED):
        half = engine.matsubara_term(0, a, T, model, DrudeLimit())
        full = engine.matsubara_term(0, a, T, model, IdealLike())
        assert half == pytest.approx(0.5 * full, rel=1e-12)


# free energy ----------------------------------------------------------------

@pytest.mark.parametrize("model, pair, n0", [
    (DRUDE, oracles.dielectric_pair(oracles.drude_eps), oracles.n0_pair("drude")),
    (PLASMA, oracles.dielectric_pair(oracles.plasma_eps), oracles.n0_pair("plasma")),
    (mat.ImpedanceInfrared(P), oracles.impedance_pair(oracles.z_infrared),
     oracles.n0_pair("plasma")),
    (mat.ImpedanceNormalSkin(P), oracles.impedance_pair(oracles.z_normal),
     oracles.n0_pair("ideal")),
    (mat.ImpedanceAnomalousSkin(P), oracles.impedance_pair(oracles.z_anomalous),
     oracles.n0_pair("ideal")),
])
@pytest.mark.parametrize("a, T", [(3e-7, 300.0), (2e-6, 50.0)])
def test_free_energy_against_direct_sum(model, pair, n0, a, T):
    ref = oracles.free_energy(a, T, pair, n0)
    got = engine.free_energy(a, T, model, Auto())
    assert got.value == pytest.approx(ref, rel=1e-8)
    assert got.value <= 0


def test_ideal_classical_limit():
    got = engine.free_energy(1e-5, 300.0, IDEAL, Auto())
    assert got.value == pytest.approx(oracles.ideal_classical(1e-5, 300.0), rel=1e-4)


def test_ideal_low_temperature():
    got = engine.free_energy(1e-6, 1.0, IDEAL, Auto())
    assert got.value == pytest.approx(oracles.ideal_energy(1e-6), rel=1e-3)
    assert got.value == pytest.approx(-4.33e-10, rel=1e-3)


@pytest.mark.parametrize("model, rule", [(IDEAL, Auto()), (DRUDE, Auto()), (DRUDE, IdealLike()),
                                         (PLASMA, Auto()), (MATCHED, Auto()),
                                         (MATCHED, DrudeLimit())])
def test_free_energy_negative_and_monotone_in_a(model, rule):
    a = np.geomspace(1e-7, 5e-6, 6)
    F = [engine.free_energy(x, 300.0, model, rule).value for x in a]
    assert all(f < 0 for f in F)
    assert all(abs(x) > abs(y) for x, y in zip(F, F[1:]))


def test_tail_certificate_invariant():
    s = engine.DEFAULT_SETTINGS
    for model in (IDEAL, DRUDE, MATCHED):
        r = engine.free_energy(4e-7, 300.0, model, Auto())
        assert r.tail_bound <= s.matsubara_tail_tol * abs(r.value)


def test_tail_bound_dominates_true_tail():
    a, T = 2e-7, 300.0
    terms = engine.free_energy_terms(a, T, IDEAL, Auto(),
                                     replace(engine.DEFAULT_SETTINGS, matsubara_tail_tol=1e-15))
    for N in (3, 10, 30):
        actual = abs(math.fsum(terms[N:]))
        assert actual <= engine.tail_bound(N, a, T)


def test_primed_weight_linearity():
    a, T = 1e-6, 300.0
    terms = engine.free_energy_terms(a, T, DRUDE, Auto())
    quarter = terms[0] / 2
    rebuilt = math.fsum([quarter, quarter] + list(terms[1:]))
    assert rebuilt == engine.free_energy(a, T, DRUDE, Auto()).value


def test_terms_match_matsubara_term():
    terms = engine.free_energy_terms(1e-6, 300.0, DRUDE, Auto())
    for n in (0, 1, 5):
        assert terms[n] == engine.matsubara_term(n, 1e-6, 300.0, DRUDE, Auto())


def test_worker_count_does_not_change_result(monkeypatch):
    a, T = 1e-7, 20.0  # a few thousand terms, several blocks
    ref = engine.free_energy(a, T, DRUDE, Auto(), workers=1)
    for w in (2, 4):
        got = engine.free_energy(a, T, DRUDE, Auto(), workers=w)
        assert got == ref
    monkeypatch.setenv("THERMOCASIMIR_THREADS", "3")
    assert engine.free_energy(a, T, DRUDE, Auto()) == ref


def test_max_terms_exceeded():
    s = replace(engine.DEFAULT_SETTINGS, max_terms=5)
    with pytest.raises(ConvergenceError) as info:
        engine.free_energy(1e-7, 300.0, DRUDE, Auto(), s)
    assert info.value.partial.n_terms == 5


def test_subdivision_failure_carries_partial():
    s = replace(engine.DEFAULT_SETTINGS, rel_tol=1e-15, abs_tol=1e-300, max_subdivisions=4)
    with pytest.raises(ConvergenceError) as info:
        engine.free_energy(1e-6, 300.0, DRUDE, Auto(), s)
    assert info.value.partial is not None


@pytest.mark.parametrize("a, T", [(0.0, 300.0), (1e-6, 0.0), (-1e-6, 300.0)])
def test_free_energy_domain(a, T):
    with pytest.raises(DomainError):
        engine.free_energy(a, T, IDEAL, Auto())


def test_plasma_approaches_zero_temperature():
    a = 1e-6
    # 2 pi k T 2a / (hbar c) < 0.05
    T = 0.04 * oracles.HBAR * oracles.C / (4 * math.pi * oracles.K_B * a)
    F = engine.free_energy(a, T, PLASMA, Auto()).value
    E = engine.zero_T_energy(a, PLASMA)
    assert abs(F / E - 1) < 1e-3


# zero temperature ----------------------------------------------------------------

@pytest.mark.parametrize("a", [1e-7, 1e-6, 1e-5])
def test_ideal_zero_T(a):
    t0 = time.perf_counter()
    E = engine.zero_T_energy(a, IDEAL)
    assert time.perf_counter() - t0 < 1.0
    assert E == pytest.approx(oracles.ideal_energy(a), rel=1e-6)


def test_ideal_zero_T_scaling():
    assert engine.zero_T_energy(2e-6, IDEAL) / engine.zero_T_energy(1e-6, IDEAL) == (
        pytest.approx(0.125, rel=1e-8))


def test_closed_forms():
    assert engine.ideal_zero_T_energy(1e-6) == pytest.approx(oracles.ideal_energy(1e-6), rel=1e-15)
    assert engine.ideal_zero_T_pressure(1e-6) == pytest.approx(oracles.ideal_pressure(1e-6),
                                                               rel=1e-15)
    assert engine.ideal_classical_energy(1e-6, 300.0) == pytest.approx(
        oracles.ideal_classical(1e-6, 300.0), rel=1e-15)


def test_plasma_large_omega_p_is_ideal():
    a = 1e-6
    wp = 1e3 * oracles.C / (2 * a)
    E = engine.zero_T_energy(a, mat.Plasma(mat.MaterialParams(wp)))
    assert E == pytest.approx(oracles.ideal_energy(a), rel=1e-2)


@pytest.mark.parametrize("model, pair", [
    (DRUDE, oracles.dielectric_pair(oracles.drude_eps)),
    (MATCHED, None),
])
def test_zero_T_against_nested_quadpack(model, pair):
    if pair is None:
        bp = MATCHED.breakpoints

        def z(zeta):
            if zeta < bp.ns_upper:
                return oracles.z_normal(zeta)
            if zeta < bp.as_upper:
                return oracles.z_anomalous(zeta)
            return oracles.z_infrared(zeta)
        pair = oracles.impedance_pair(z)
    a = 5e-7
    E, err = engine.zero_T_energy(a, model, full_output=True)
    ref = oracles.zero_T_energy(a, pair)
    assert E == pytest.approx(ref, rel=1e-7)
    assert err < 1e-6 * abs(E)


# pressure ----------------------------------------------------------------

def test_ideal_pressure_low_T():
    p = engine.pressure(1e-6, 1.0, IDEAL, Auto())
    assert p.analytic == pytest.approx(oracles.ideal_pressure(1e-6), rel=1e-3)
    assert p.analytic == pytest.approx(-1.30e-3, rel=1e-2)


def test_pressure_against_direct_sum():
    ref = oracles.pressure(1e-6, 300.0, oracles.dielectric_pair(oracles.drude_eps),
                           oracles.n0_pair("drude"))
    p = engine.pressure(1e-6, 300.0, DRUDE, Auto())
    assert p.analytic == pytest.approx(ref, rel=1e-8)
    assert p.discrepancy < 1e-4
    assert p.value == p.analytic


@pytest.mark.parametrize("model, rule", [(IDEAL, Auto()), (DRUDE, Auto()), (DRUDE, IdealLike()),
                                         (PLASMA, PlasmaLike(P.omega_p)), (MATCHED, Auto()),
                                         (mat.ImpedanceInfrared(P), DrudeLimit())])
def test_pressure_attractive(model, rule):
    p = engine.pressure(5e-7, 300.0, model, rule)
    assert p.analytic < 0 and p.finite_difference < 0
