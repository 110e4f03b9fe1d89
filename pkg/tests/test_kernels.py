import os
import subprocess
import sys

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from growthops import _kernels
from growthops.symbols import LacunarySeries, MultiPoly


def _random_case(rng, T=12, N=3, P=40):
    exps = rng.integers(0, 5, size=(T, N))
    coeffs = rng.normal(size=T) + 1j * rng.normal(size=T)
    Z = (rng.normal(size=(P, N)) + 1j * rng.normal(size=(P, N))) * 0.4
    return exps, coeffs, Z


def test_poly_eval_against_loop(kernel_path, rng):
    exps, coeffs, Z = _random_case(rng)
    got = _kernels.poly_eval(exps, coeffs, Z)
    ref = np.array([sum(c * np.prod(z ** e) for e, c in zip(exps, coeffs)) for z in Z])
    assert np.allclose(got, ref, rtol=1e-13, atol=1e-13)


def test_paths_agree(rng):
    exps, coeffs, Z = _random_case(rng, T=30, P=200)
    prev = _kernels.use_numba(True)
    try:
        a = _kernels.poly_eval(exps, coeffs, Z)
        zp = 0.99 * np.exp(1j * np.angle(Z[:, 0])) * rng.random(Z.shape[0])
        ga = _kernels.gap_eval(coeffs[:5], np.array([1.0, 10, 100, 1000, 1e4]), zp)
        _kernels.use_numba(False)
        b = _kernels.poly_eval(exps, coeffs, Z)
        gb = _kernels.gap_eval(coeffs[:5], np.array([1.0, 10, 100, 1000, 1e4]), zp)
    finally:
        _kernels.use_numba(prev)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-13)
    assert np.allclose(ga, gb, rtol=1e-12, atol=1e-13)


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.floats(0.0, 0.999), st.floats(-np.pi, np.pi))
def test_gap_eval_large_exponents(kernel_path, r, theta):
    s = LacunarySeries(1, 1, q=10, alpha=0.5, K=6)
    z = np.array([[r * np.exp(1j * theta)]])
    got = complex(s(z)[0])
    w = complex(r * np.exp(1j * theta))
    ref = sum(c * w**e for c, e in zip(s.coefficients, s.exponents))
    # log/exp evaluation carries a phase error of order e * 1e-16 per term
    scale = sum(abs(c) * r**e for c, e in zip(s.coefficients, s.exponents))
    assert abs(got - ref) <= 1e-9 * max(1.0, scale)


def test_empty_polynomial(kernel_path):
    f = MultiPoly.zero(2)
    assert np.all(f(np.zeros((3, 2))) == 0)


def test_env_flag_disables_numba():
    code = "from growthops import _kernels; print(_kernels.numba_enabled())"
    env = dict(os.environ, GROWTHOPS_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
    env.pop("GROWTHOPS_DISABLE_NUMBA")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == str(_kernels._HAVE_NUMBA)
