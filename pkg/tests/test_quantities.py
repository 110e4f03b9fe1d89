import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthops import verify
from growthops.quantities import (SymbolPair, apply_operator, dominance_ratio, faa_di_bruno_radial, frak_B,
                                  graded_norm, partial_bound_check, product_rule_radial, psi_phi_binomial,
                                  psi_phi_direct, psi_phi_literal, script_B)
from growthops.sampling import BallGrid
from growthops.symbols import MultiPoly, SelfMap
from growthops.weights import standard_weight


@st.composite
def cases(draw):
    seed = draw(st.integers(0, 10**6))
    return verify.corpus(size=1, seed=seed, points=6)[0]


@settings(max_examples=40, deadline=None)
@given(cases())
def test_chain_rule_against_symbolic(c):
    exact = c.f.compose(c.phi).radial(c.n)(c.Z)
    got = faa_di_bruno_radial(c.f, c.phi, c.n, c.Z)
    assert verify._rel(got, exact) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(cases())
def test_product_rule_against_symbolic(c):
    exact = (c.psi * c.f.compose(c.phi)).radial(c.n)(c.Z)
    assert verify._rel(product_rule_radial(c.psi, c.f, c.phi, c.n, c.Z), exact) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(cases(), st.integers(0, 4))
def test_binomial_expansion_of_psi_phi_power(c, j0):
    pair = SymbolPair(c.psi, c.phi, 1)
    j0 = min(j0, c.n)
    assert verify._rel(psi_phi_binomial(pair, c.n, j0, c.Z), psi_phi_direct(pair, c.n, j0, c.Z)) <= 1e-10


def test_unweighted_combination_matches_for_small_powers():
    c = verify.corpus(size=1, seed=3)[0]
    pair = SymbolPair(c.psi, c.phi, 1)
    for j0 in (0, 1):
        assert verify._rel(psi_phi_literal(pair, c.n, j0, c.Z), psi_phi_direct(pair, c.n, j0, c.Z)) <= 1e-10


def test_unweighted_combination_misses_binomials():
    # psi = 1, phi_p = z1, n = 2, j0 = 2: R^2 z1^2 = 4 z1^2, the unweighted sum gives 3 z1^2
    psi = MultiPoly.constant(1, 1)
    pair = SymbolPair(psi, SelfMap([MultiPoly.variable(1, 1)]), 1)
    z = np.array([[0.5]])
    assert psi_phi_direct(pair, 2, 2, z)[0] == pytest.approx(1.0)
    assert psi_phi_binomial(pair, 2, 2, z)[0] == pytest.approx(1.0)
    assert psi_phi_literal(pair, 2, 2, z)[0] == pytest.approx(0.75)


def test_frak_B_expansions_agree():
    c = verify.corpus(size=5, seed=9)
    for case in c:
        for i in range(1, 4):
            for j in range(1, i + 1):
                a = frak_B(case.phi, i, j, case.Z)
                b = frak_B(case.phi, i, j, case.Z, expand="literal")
                assert verify._rel(a, b) <= 1e-12


def test_script_B_zero_beyond_order():
    pair = SymbolPair(MultiPoly.constant(1, 2), SelfMap.scaled_identity(0.5, 2), 1)
    z = np.array([[0.2, 0.1]])
    assert np.all(script_B(pair, 2, 3, z) == 0)
    with pytest.raises(ValueError):
        script_B(pair, 2, 1, z, variant="other")


def test_apply_operator_is_product_of_composition():
    psi = MultiPoly({(0, 1): 1, (0, 0): 2}, 2)
    phi = SelfMap.scaled_identity(0.5, 2)
    f = MultiPoly({(2, 1): 1}, 2)
    g = apply_operator(psi, phi, f)
    z = np.array([[0.3, 0.4j]])
    assert g(z)[0] == pytest.approx((psi(z) * f(phi(z)))[0])


def test_partial_bound_ratios_are_moderate():
    w = standard_weight(1.0)
    f = MultiPoly({(3, 0): 1, (1, 1): 0.5}, 2)
    grid = BallGrid(2, dirs=32)
    Z = grid.points([0.5, 0.9]).reshape(-1, 2)
    for l in ([1], [1, 1], [1, 2, 1]):
        r = partial_bound_check(f, w, 1, l, Z, grid=grid)
        assert np.all(np.isfinite(r)) and np.max(r) < 50


def test_dominance_ratio_finite():
    w = standard_weight(1.0)
    pair = SymbolPair(MultiPoly.constant(1, 2), SelfMap.scaled_identity(0.5, 2), 1)
    f = MultiPoly({(2, 0): 1}, 2)
    grid = BallGrid(2, dirs=32)
    Z = grid.points([0.3, 0.9]).reshape(-1, 2)
    r = dominance_ratio(pair, f, w, w, 1, 1, Z, grid=grid)
    assert np.nanmax(r) < 10
    assert graded_norm(f, w, 2, grid) > 0


def test_pair_validation():
    with pytest.raises(ValueError):
        SymbolPair(MultiPoly.constant(1, 3), SelfMap.identity(2))
    with pytest.raises(ValueError):
        SymbolPair(MultiPoly.constant(1, 2), SelfMap.identity(2), p=3)
