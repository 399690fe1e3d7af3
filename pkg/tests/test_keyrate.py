import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import holevo_entanglement_based

from rpa_cvqkd.errors import NumericalError, ParameterError
from rpa_cvqkd.keyrate import g_entropy, holevo_bound, key_rate, mutual_information
from rpa_cvqkd.noise import solve_noise_budget
from rpa_cvqkd.params import AttackScenario, effective_v

# Holevo bound at 20 km, from the entanglement-based covariance oracle
CHI_BE_20KM = 0.4244723779037054


def test_g_entropy_values():
    assert g_entropy(0.0) == 0.0
    assert g_entropy(1.0) == 2.0
    assert g_entropy(0.5) == pytest.approx(1.5 * math.log2(1.5) + 0.5, rel=1e-15)
    assert g_entropy(0.5) == pytest.approx(1.37744375108173, rel=1e-13)


def test_g_entropy_domain():
    assert g_entropy(-1e-10) == 0.0
    with pytest.raises(ParameterError):
        g_entropy(-1e-6)


@given(st.floats(1e-9, 1e6), st.floats(1e-6, 10.0))
def test_g_entropy_increasing(x, dx):
    assert g_entropy(x) >= 0.0
    assert g_entropy(x + dx * x) > g_entropy(x)


def test_mutual_information_noiseless(paper):
    b = solve_noise_budget(paper.replace(xi_e=0.0), 0.0)
    object.__setattr__(b, "chi_total", 0.0)
    assert mutual_information(paper, b) == pytest.approx(math.log2(5.0))


def test_mutual_information_20km(paper):
    b = solve_noise_budget(paper, 20.0)
    chi = b.chi_total
    assert mutual_information(paper, b) == pytest.approx(math.log2((5 + chi) / (1 + chi)), rel=1e-15)
    assert mutual_information(paper, b) == pytest.approx(math.log2(14.26 / 10.26), abs=1e-3)


def test_mutual_information_vanishes_with_noise(paper):
    b = solve_noise_budget(paper, 20.0)
    object.__setattr__(b, "chi_total", 1e12)
    assert mutual_information(paper, b) < 1e-11


def test_holevo_identity_channel(paper):
    chi_be, eig = holevo_bound(paper, 1.0, 0.0, 0.0, 0.0)
    assert chi_be == pytest.approx(0.0, abs=1e-12)
    assert eig.lambdas == pytest.approx((1, 1, 1, 1, 1), abs=1e-7)


def test_holevo_20km_golden(paper):
    b = solve_noise_budget(paper, 20.0)
    chi_be, eig = holevo_bound(paper, b.t, b.chi_line, b.chi_het, b.chi_total)
    assert chi_be == pytest.approx(CHI_BE_20KM, abs=1e-12)
    assert eig.lambda5 == 1.0


@settings(max_examples=80, deadline=None)
@given(
    st.floats(0.0, 60.0),
    st.floats(0.0, 0.2),
    st.floats(0.2, 0.95),
    st.floats(0.0, 0.1),
    st.floats(0.5, 30.0),
)
def test_holevo_matches_covariance_oracle(length, xi, eta, v_ele, v_a):
    from rpa_cvqkd.params import preset

    p = preset().replace(eta=eta, v_ele=v_ele, v_a=v_a, xi_e=xi)
    t = 10 ** (-0.02 * length)
    chi_line = 1 / t - 1 + xi
    chi_het = (2 - eta + 2 * v_ele) / eta
    chi_t = chi_line + chi_het / t
    chi_be, eig = holevo_bound(p, t, chi_line, chi_het, chi_t)
    ref, nu_ab, nu_cond = holevo_entanglement_based(effective_v(p), t, xi, eta, v_ele)
    assert chi_be == pytest.approx(ref, abs=1e-8)
    assert sorted(eig.lambdas[:2]) == pytest.approx(sorted(nu_ab), abs=1e-6)
    assert sorted(eig.lambdas[2:]) == pytest.approx(sorted(nu_cond), abs=1e-6)


def test_holevo_rejects_bad_inputs(paper):
    with pytest.raises(ParameterError):
        holevo_bound(paper, 0.0, 0.1, 3.0, 3.1)
    with pytest.raises(ParameterError):
        holevo_bound(paper, 0.5, -0.1, 3.0, 3.1)


def test_holevo_unphysical_is_numerical_error(paper):
    # chi_line far below -1 + 1/T drives B past A^2/4
    with pytest.raises(NumericalError):
        holevo_bound(paper, 0.5, 0.0, 0.0, 1e-3)


def test_key_rate_ideal_lossless(ideal):
    rep = key_rate(ideal, AttackScenario(0.0, 0.0))
    v = effective_v(ideal)
    assert rep.chi_be == pytest.approx(0.0, abs=1e-9)
    # the heterodyne vacuum penalty leaves chi_t = 1 even with ideal devices
    assert rep.key_rate == pytest.approx(ideal.beta * math.log2((v + 1) / 2), abs=1e-9)
    assert rep.key_rate > 0


def test_key_rate_null_and_beyond(paper):
    assert abs(key_rate(paper, AttackScenario(27.6, 0.0)).key_rate) < 5e-3
    assert key_rate(paper, AttackScenario(40.0, 0.0)).key_rate < 0


def test_key_rate_identity_exact(paper):
    rep = key_rate(paper, AttackScenario(15.0, 0.0))
    assert rep.key_rate == paper.beta * rep.i_ab - rep.chi_be
    assert rep.i_ab >= 0 and rep.chi_be >= 0


def test_eigenvalue_ordering(paper):
    for length in np.linspace(0, 50, 51):
        e = key_rate(paper, AttackScenario(float(length), 0.0)).eigenset
        assert e.lambda1 >= e.lambda2 >= 1.0
        assert e.lambda3 >= e.lambda4 >= 1.0
        assert e.a_term**2 >= 4 * e.b_term
        assert e.c_term**2 >= 4 * e.d_term


def test_continuity_and_monotonicity(paper):
    lengths = np.round(np.arange(0, 50.0001, 0.01), 10)
    reps = [key_rate(paper, AttackScenario(float(x), 0.0)) for x in lengths]
    for name in ("i_ab", "chi_be", "key_rate"):
        vals = np.array([getattr(r, name) for r in reps])
        assert np.max(np.abs(np.diff(vals))) < 0.01
    k = np.array([r.key_rate for r in reps])
    assert np.all(np.diff(k) < 0)
