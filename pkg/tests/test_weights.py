import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthops.weights import (certify_normal, delta_norm, delta_norm_values, integral_at_one_finite,
                               nested_integral, nested_quadrature, standard_weight, tabulated_weight,
                               unit_weight)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0, 2.0])
def test_standard_weights_are_normal(alpha):
    rep = certify_normal(standard_weight(alpha))
    assert rep.passed, rep.summary()


def test_unit_weight_is_not_normal():
    rep = certify_normal(unit_weight())
    assert not rep.passed and not rep.w1_limit
    assert any(v[0] == "W1-limit" for v in rep.violations)


def test_bad_witnesses_rejected():
    with pytest.raises(ValueError):
        standard_weight(1.0, a=2.0, b=1.0)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 2.5), st.floats(0.05, 0.97), st.integers(1, 3))
def test_collapse_against_nested_quadrature(alpha, r, k):
    w = standard_weight(alpha)
    a, b = nested_integral(w, k, r), nested_quadrature(w, k, r)
    assert a == pytest.approx(b, rel=1e-6)


@given(st.floats(0.0, 0.999), st.integers(1, 5))
def test_unit_weight_closed_form(r, k):
    assert nested_integral(unit_weight(), k, r) == pytest.approx(r**k / math.factorial(k), rel=1e-12, abs=1e-300)


def test_nested_integral_closed_form_alpha_one():
    # 1/(1-t^2) integrates to artanh
    w = standard_weight(1.0)
    for r in (0.2, 0.9, 0.999):
        assert nested_integral(w, 1, r) == pytest.approx(math.atanh(r), rel=1e-9)


@given(st.floats(0.0, 0.99), st.floats(0.0, 0.99))
def test_nested_integral_monotone_in_radius(r1, r2):
    w = standard_weight(1.5)
    lo, hi = sorted((r1, r2))
    assert nested_integral(w, 2, lo) <= nested_integral(w, 2, hi) + 1e-15


@pytest.mark.parametrize("alpha,k,expect", [(0.5, 1, "Finite"), (1.0, 1, "Divergent"), (1.5, 2, "Finite"),
                                            (2.5, 2, "Divergent"), (0.5, 0, "Divergent")])
def test_finiteness_pattern(alpha, k, expect):
    # I^k(1) < inf exactly when alpha < k for standard weights
    assert integral_at_one_finite(standard_weight(alpha), k).verdict == expect


def test_delta_norm_table_matches_direct():
    w = standard_weight(1.5)
    r = np.array([0.0, 0.3, 0.8, 0.99, 0.9999])
    tab = delta_norm_values(w, 2, r)
    direct = np.array([delta_norm(w, 2, x) for x in r])
    # monotone-cubic interpolation between nodes
    assert np.allclose(tab, direct, rtol=1e-5)
    assert delta_norm_values(w, 0, np.array([0.5]))[0] == pytest.approx(1 / w(0.5))


def test_tabulated_weight_reproduces_power():
    t = np.linspace(0, 0.99, 40)
    w = tabulated_weight(t, (1 - t**2) ** 1.5, a=0.75, b=3.0)
    x = np.array([0.1, 0.5, 0.95])
    assert np.allclose(w(x), (1 - x**2) ** 1.5, rtol=1e-4)
    with pytest.raises(ValueError):
        tabulated_weight([0.5, 0.2], [1.0, 1.0], 0.5, 1.0)
