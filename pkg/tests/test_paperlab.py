import warnings

import numpy as np
import pytest

from growthops import paperlab
from growthops.mobius import MobiusMap
from growthops.paperlab import (antiderivative_order_report, example1_shifted, gap2_holds, h_shifted,
                                lacunary_lowerbound_check, lemma31_transfer_check, lemma32_cgamma_check,
                                minimal_working_q, run_scenario, window_shells)
from growthops.sampling import BallGrid
from growthops.symbols import MultiPoly, SelfMap
from growthops.weights import standard_weight


@pytest.mark.parametrize("sid", ["lacunary-ratio", "lacunary-plus", "lacunary-plus-ex2", "lacunary-lower-bound",
                                 "lacunary-gap2", "mobius-identities"])
def test_scenarios_reproduce(sid):
    out = run_scenario(sid)
    assert out.ok, out.summary()


def test_unknown_scenario():
    with pytest.raises(KeyError, match="unknown scenario"):
        run_scenario("no-such-thing")


def test_registry_rejects_duplicates():
    s = next(iter(paperlab.SCENARIOS.values()))
    with pytest.raises(ValueError):
        paperlab.register(s)
    assert len(paperlab.list_scenarios()) == len(paperlab.SCENARIOS)


def test_example_maps_fix_their_shape():
    phi = paperlab.example1_map()
    assert np.allclose(phi([[-0.5, 0.0]]), 0)
    assert np.allclose(example1_shifted()(np.zeros((1, 2))), 0)
    assert paperlab.example3_index() == 2


def test_transfer_check_scaled_identity():
    phi = SelfMap.scaled_identity(0.5, 2)
    rep = lemma31_transfer_check(phi, 1, standard_weight(1.0), grid=BallGrid(2, dirs=32))
    assert rep.ratio == pytest.approx(1.0, abs=1e-12)


def test_transfer_check_shifted_example():
    nu = standard_weight(3.0)
    rep = lemma31_transfer_check(example1_shifted(), 1, nu, h=h_shifted(nu), j=2, grid=BallGrid(2, dirs=64))
    assert 1.0 - 1e-12 <= rep.ratio <= 1.05


def test_transfer_check_requires_fixed_origin():
    with pytest.raises(ValueError):
        lemma31_transfer_check(paperlab.example1_map(), 1, standard_weight(1.0))


def test_cgamma_identity_automorphism():
    corpus = [MultiPoly.monomial((1, 0)), MultiPoly.monomial((1, 2)), MultiPoly.monomial((0, 3))]
    rep = lemma32_cgamma_check(MobiusMap([0.0, 0.0]), standard_weight(1.0), 1, corpus=corpus,
                               grid=BallGrid(2, dirs=16, antipodal=True))
    assert rep.finite
    assert rep.max_forward == pytest.approx(1.0, abs=1e-9)
    assert rep.roundtrip_defect < 1e-9


def test_cgamma_nontrivial_automorphism_is_bounded_both_ways():
    corpus = [MultiPoly.monomial((1, 0)), MultiPoly.monomial((2, 1)), MultiPoly.monomial((0, 2))]
    rep = lemma32_cgamma_check(MobiusMap([0.3, 0.0]), standard_weight(1.0), 1, corpus=corpus,
                               grid=BallGrid(2, dirs=16, antipodal=True))
    assert rep.finite and rep.max_forward < 10 and rep.max_inverse < 10
    assert rep.roundtrip_defect < 1e-9


def test_lower_bound_margins_at_base_and_large_q():
    rep = lacunary_lowerbound_check(alpha=0.5, q=10, K=8)
    assert rep.ray_positive and rep.tail_ok
    assert all(w.Q1_bound_holds and w.Q2_bound_holds for w in rep.windows)
    # off the real ray the bound needs a larger gap ratio
    assert not rep.phase_positive
    big = lacunary_lowerbound_check(alpha=0.5, q=24, K=8)
    assert big.ray_positive and big.phase_positive and big.qsplit_positive


def test_lower_bound_rejects_small_q():
    with pytest.raises(ValueError):
        lacunary_lowerbound_check(q=5)


def test_minimal_working_q():
    assert minimal_working_q(0.5) == 24
    assert minimal_working_q(0.9) == 10


def test_gap2():
    assert gap2_holds(10, 3)
    assert all(gap2_holds(q, k) for q in (10, 20, 50) for k in range(2, 8))
    # (0.9)^11 < 1/3: the inequality needs q^k large enough
    assert not gap2_holds(10, 1)


def test_antiderivative_orders():
    reps = {r.order: r for r in antiderivative_order_report(n=2)}
    assert reps[1].exponents_match and reps[1].relative_defect < 1e-2
    assert reps[0].relative_defect > 0.5


def test_window_shells_stay_inside_windows():
    sh = window_shells(10, 8, 0.5, 1, 2, phases=8, per_window=3)
    for k, pts in zip(range(2, 7), sh.points):
        r = np.abs(pts[:, 0])
        assert np.all(r >= 1 - 10.0**-k - 1e-12)
        assert np.all(np.linalg.norm(pts, axis=1) <= 1 - 10.0 ** -(k + 0.5) + 1e-12)


def test_high_order_bound_reports_wide_windows():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        rep = lacunary_lowerbound_check(alpha=0.5, q=10, K=8, n=2, phases=16)
    assert rep.n == 2 and len(rep.windows) == 5
    assert rep.windows[0].s[-1] == pytest.approx(3.5)
