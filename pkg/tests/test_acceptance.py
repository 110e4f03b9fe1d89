"""Acceptance criteria, one test each.

Every test prints a ``PASS``/``FAIL`` line with the measured quantity and the
tolerance it is judged against, then asserts the same condition.
"""

import filecmp
import time

import numpy as np
import pytest

from conftest import report
from growthops import criteria, verify
from growthops.cli import main
from growthops.paperlab import lacunary_lowerbound_check, run_scenario
from growthops.quantities import SymbolPair, psi_phi_literal
from growthops.sampling import BallGrid
from growthops.specfile import BUILTINS, build_map, build_symbol, build_weight
from growthops.symbols import LacunarySeries
from growthops.weights import integral_at_one_finite, standard_weight


@pytest.fixture(scope="module")
def corpus():
    return verify.corpus(size=200, seed=0)


def test_faa_di_bruno_oracle(corpus):
    t0 = time.perf_counter()
    res = verify.check_faa_di_bruno(corpus, tol=1e-10)
    dt = time.perf_counter() - t0
    ok = res.passed and res.cases >= 200 and dt <= 60
    report(1, ok, f"{res.cases} cases x 20 points, max rel err {res.max_error:.3e} (tol 1e-10), {dt:.1f}s (limit 60s)")
    assert ok


def test_product_rule_oracle(corpus):
    res = verify.check_product_rule(corpus, tol=1e-10)
    ok = res.passed and res.cases >= 200
    report(2, ok, f"{res.cases} cases, max rel err {res.max_error:.3e} (tol 1e-10)")
    assert ok


def test_psi_phi_identity(corpus):
    # the combination exactly as stated, sum_i B^n_{j0-i}(psi; phi_p) phi_p^i, for j0 <= n
    res = verify.check_psi_phi(corpus, tol=1e-10, form=psi_phi_literal, name="psi_phi_literal")
    small = verify.check_psi_phi(corpus, tol=1e-10, form=psi_phi_literal, name="psi_phi_literal", j0_max=1)
    detail = (f"{res.cases} (case, j0) pairs, max rel err {res.max_error:.3e} (tol 1e-10); "
              f"restricted to j0 <= 1: max rel err {small.max_error:.3e}")
    if not res.passed:
        cex = res.counterexample
        detail += f"; first failure n={cex['n']} j0={cex['j0']} err={cex['error']:.3e}"
    report(3, res.passed, detail)
    assert res.passed


def test_mobius_identities():
    res = verify.check_mobius(samples=1000, seed=0)
    # errors are in units of their tolerances (1e-12 modulus, 1e-10 involution, 1e-12 endpoints)
    report(4, res.passed, f"{res.cases} (alpha, z) samples, worst error {res.max_error:.3e} tolerance units (<= 1)")
    assert res.passed and res.cases == 1000


def test_nested_integral_collapse():
    res = verify.check_nested_integral(radii=(0.3, 0.7, 0.95), kmax=3)
    ok = res.passed and len(verify.weight_corpus()) == 5
    report(5, ok, f"{res.cases} cases (5 weights x 3 radii x k<=3, plus unit weight), "
                  f"worst error {res.max_error:.3e} tolerance units (<= 1)")
    assert ok


def test_finiteness_classifier():
    got = {}
    for a in (0.25, 0.5, 1.5, 2.0):
        got[a] = integral_at_one_finite(standard_weight(a), 1).verdict
    expect = {a: ("Finite" if a < 1 else "Divergent") for a in got}
    ok = got == expect
    report(6, ok, ", ".join(f"alpha={a:g}: {v} (expected {expect[a]})" for a, v in got.items()))
    assert ok


def test_lacunary_ratio():
    psi = LacunarySeries(1, 1, q=10, alpha=0.5, K=8)
    worst = max(abs(d) for d in psi.log_ratio_defects())
    ok = worst <= 1e-12
    report(7, ok, f"max |log(a_k n_k^(1-alpha)) - (alpha/2) log q| = {worst:.3e} over k <= 8 (tol 1e-12)")
    assert ok


def test_lacunary_lower_bound():
    t0 = time.perf_counter()
    rep = lacunary_lowerbound_check(alpha=0.5, q=10, K=8, n=1)
    dt = time.perf_counter() - t0
    ray = min(float(w.ray.min()) for w in rep.windows)
    phase = min(float(w.phase.min()) for w in rep.windows)
    tail = max(w.tail_ratio for w in rep.windows)
    # every tested point: the real ray and 256 phases at each window radius
    ok = rep.ray_positive and rep.phase_positive and rep.tail_ok and dt <= 30
    report(8, ok, f"min margin on the real ray {ray:.4g}, min over sampled phases {phase:.4g} (must be > 0); "
                  f"tail/Q1 {tail:.2e} (<= 1e-2); {dt:.2f}s (limit 30s)")
    assert ok


@pytest.mark.parametrize("sid", ["stilde-ex1", "stilde-ex2", "stilde-ex3"])
def test_stilde_scenarios(sid):
    out = run_scenario(sid)
    report(9, out.ok, out.summary().replace("\n", " | "))
    assert out.ok


def _pair(cfg):
    return (build_weight(cfg.nu), build_weight(cfg.mu),
            SymbolPair(build_symbol(cfg.psi), build_map(cfg.phi), cfg.p))


def test_criterion_sanity():
    t0 = time.perf_counter()
    nu, mu, pair = _pair(BUILTINS["contraction"])
    grid = BallGrid(pair.N)
    got = {
        "A1": criteria.boundedness_A1(pair, nu, mu, 1, 1, grid).verdict,
        "A2": criteria.boundedness_A2(pair, nu, mu, 1, 1, grid).verdict,
        "C1": criteria.compactness_C1(pair, nu, mu, 1, 1, None, grid).verdict,
        "C2": criteria.compactness_C2(pair, nu, mu, 1, 1, None, grid).verdict,
    }
    nu, mu, pair = _pair(BUILTINS["identity-singular"])
    a2 = criteria.boundedness_A2(pair, nu, mu, 1, 1, grid)
    c2 = criteria.compactness_C2(pair, nu, mu, 1, 1, None, grid)
    dt = time.perf_counter() - t0
    singular = [t for t in a2.traces if t.quantity == "singular_k1"][0]
    expect = {"A1": "BoundedEvidence", "A2": "BoundedEvidence", "C1": "CompactEvidence", "C2": "CompactEvidence"}
    ok = (got == expect and a2.verdict == "DivergentEvidence" and singular.divergent()
          and c2.verdict == "NotCompactEvidence" and dt <= 300)
    report(10, ok, f"contraction {got}; identity A2 {a2.verdict} (singular_k1 slope {singular.slope:.3g}), "
                   f"C2 {c2.verdict}; {dt:.1f}s (limit 300s)")
    assert ok


def test_probe_consistency():
    lines, ok = [], True
    grid = BallGrid(2, dirs=64)
    for name, cfg in BUILTINS.items():
        nu, mu, pair = _pair(cfg)
        for th, fn in (("A1", criteria.boundedness_A1), ("A2", criteria.boundedness_A2)):
            rep = fn(pair, nu, mu, cfg.n, cfg.m, check_preconditions=False)
            pr = criteria.probe_ratio(pair, nu, mu, cfg.n, cfg.m, th, grid=grid,
                                      norm_representative=rep.norm_estimate)
            if rep.verdict == "BoundedEvidence":
                ok &= bool(pr.within)
                lines.append(f"{name}/{th} bounded: probe max {pr.max_ratio:.4g} vs 10 x {rep.norm_estimate:.4g}")
            elif rep.verdict == "DivergentEvidence":
                ok &= pr.growing
                lines.append(f"{name}/{th} divergent: ratio trace {pr.growth_trace[0]:.4g} -> "
                             f"{pr.growth_trace[-1]:.4g}, growing={pr.growing}")
    ok &= any("divergent" in x for x in lines)
    report(11, ok, "; ".join(lines))
    assert ok


def test_determinism(tmp_path):
    outs = []
    for i in range(2):
        d = tmp_path / f"run{i}"
        code = main(["analyze", "--config", "contraction", "--out", str(d), "--seed", "7", "--dirs", "64"])
        assert code == 0
        outs.append(d)
    same = filecmp.cmp(outs[0] / "criteria.csv", outs[1] / "criteria.csv", shallow=False)
    svgs = sorted(p.name for p in outs[0].glob("*.svg"))
    same_svg = all(filecmp.cmp(outs[0] / s, outs[1] / s, shallow=False) for s in svgs)
    ok = same and same_svg and len(svgs) > 0
    report(12, ok, f"criteria.csv byte-identical: {same}; {len(svgs)} SVGs identical: {same_svg}")
    assert ok
