"""Oracle-equivalence and example suites behind ``growthops verify``.

Each check compares an implementation against an independent oracle on a
seeded corpus and records the worst error and the first failing case.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import multiindex
from .mobius import MobiusMap, random_ball_points
from .multiindex import weak_compositions
from .quantities import SymbolPair, faa_di_bruno_radial, product_rule_radial, psi_phi_binomial, psi_phi_direct
from .symbols import MultiPoly, SelfMap
from .weights import RadialWeight, nested_integral, nested_quadrature, standard_weight, unit_weight


@dataclass
class CheckResult:
    suite: str
    name: str
    cases: int
    max_error: float
    tol: float
    seconds: float
    counterexample: dict = None
    rows: list = field(default_factory=list)

    @property
    def passed(self):
        return self.counterexample is None


def poly_json(f):
    return [[c.real, c.imag, list(e)] for e, c in sorted((e, complex(c)) for e, c in f.terms.items())]


def random_poly(N, degree, rng, terms=4):
    mons = [b for d in range(degree + 1) for b in weak_compositions(d, N)]
    idx = rng.choice(len(mons), size=min(terms, len(mons)), replace=False)
    return MultiPoly({mons[i]: complex(*np.round(rng.normal(size=2), 3)) for i in idx}, N)


@dataclass
class CorpusCase:
    f: MultiPoly
    psi: MultiPoly
    phi: SelfMap
    n: int
    Z: np.ndarray

    def describe(self):
        return {"n": self.n, "f": poly_json(self.f), "psi": poly_json(self.psi),
                "phi": [poly_json(c) for c in self.phi.components]}


def corpus(size=200, seed=0, max_N=3, degree=3, max_n=4, points=20):
    """Random (f, psi, phi, n, points) with N <= 3, degrees <= 3, n <= 4.

    Map components are scaled by 0.3 so that phi sends the sampled points
    into a bounded region; the identities are algebraic and hold anyway.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(size):
        N = int(rng.integers(1, max_N + 1))
        n = int(rng.integers(1, max_n + 1))
        f = random_poly(N, degree, rng)
        phi = SelfMap([random_poly(N, degree, rng) * 0.3 for _ in range(N)])
        psi = random_poly(N, degree, rng)
        out.append(CorpusCase(f, psi, phi, n, random_ball_points(N, points, rng)))
    return out


def _rel(a, b):
    scale = float(np.max(np.abs(b)))
    err = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
    return err / scale if scale > 0 else err


def _run(suite, name, tol, cases):
    """``cases`` yields (error, description); stops recording at the first failure."""
    t0 = time.perf_counter()
    worst, count, cex, rows = 0.0, 0, None, []
    for err, desc in cases:
        count += 1
        worst = max(worst, err)
        rows.append((count, err))
        if cex is None and not err <= tol:
            cex = dict(desc, error=err, tol=tol)
    return CheckResult(suite, name, count, worst, tol, time.perf_counter() - t0, cex, rows)


def check_multinomial(max_n=8, max_parts=4):
    def cases():
        for n in range(max_n + 1):
            for j in range(1, max_parts + 1):
                for k in weak_compositions(n, j):
                    # product of binomials: C(n, k1) C(n-k1, k2) ...
                    rest, oracle = n, 1
                    for kt in k:
                        oracle *= math.comb(rest, kt)
                        rest -= kt
                    got = multiindex.multinomial(n, k)
                    yield float(abs(got - oracle)), {"n": n, "k": list(k), "got": got, "oracle": oracle}

    return _run("identities", "multinomial", 0.0, cases())


def check_faa_di_bruno(cases_=None, tol=1e-10):
    cs = corpus() if cases_ is None else cases_

    def cases():
        for c in cs:
            exact = c.f.compose(c.phi).radial(c.n)(c.Z)
            yield _rel(faa_di_bruno_radial(c.f, c.phi, c.n, c.Z), exact), c.describe()

    return _run("identities", "faa_di_bruno", tol, cases())


def check_product_rule(cases_=None, tol=1e-10):
    cs = corpus() if cases_ is None else cases_

    def cases():
        for c in cs:
            exact = (c.psi * c.f.compose(c.phi)).radial(c.n)(c.Z)
            yield _rel(product_rule_radial(c.psi, c.f, c.phi, c.n, c.Z), exact), c.describe()

    return _run("identities", "product_rule", tol, cases())


def check_psi_phi(cases_=None, tol=1e-10, form=psi_phi_binomial, name="psi_phi_binomial", j0_max=None):
    """sum over j of the B-quantities against R^(n)(psi phi_p^j0), j0 <= n (or <= j0_max)."""
    cs = corpus() if cases_ is None else cases_

    def cases():
        for c in cs:
            pair = SymbolPair(c.psi, c.phi, 1)
            top = c.n if j0_max is None else min(c.n, j0_max)
            for j0 in range(top + 1):
                err = _rel(form(pair, c.n, j0, c.Z), psi_phi_direct(pair, c.n, j0, c.Z))
                yield err, dict(c.describe(), j0=j0)

    return _run("identities", name, tol, cases())


def check_mobius(samples=1000, seed=0, tol_modulus=1e-12, tol_involution=1e-10, tol_ends=1e-12):
    """Modulus identity (absolute), involution and gamma(0) = alpha, gamma(alpha) = 0."""
    rng = np.random.default_rng(seed)

    def cases():
        for _ in range(samples):
            N = int(rng.integers(1, 4))
            alpha = random_ball_points(N, 1, rng, 0.95)[0]
            g = MobiusMap(alpha)
            z = random_ball_points(N, 1, rng, 0.999)
            gz = g.apply(z)
            lhs = 1 - np.sum(np.abs(gz) ** 2)
            rhs = (1 - g.norm2) * (1 - np.sum(np.abs(z) ** 2)) / abs(1 - g.pairing(z)[0]) ** 2
            e_mod = abs(lhs - rhs) / tol_modulus
            e_inv = float(np.max(np.abs(g.apply(gz) - z))) / tol_involution
            e_end = max(np.max(np.abs(g.apply(np.zeros(N)) - alpha)), np.max(np.abs(g.apply(alpha)))) / tol_ends
            yield max(e_mod, e_inv, e_end), {"alpha": [[a.real, a.imag] for a in alpha],
                                             "z": [[x.real, x.imag] for x in z[0]]}

    # errors are reported in units of their own tolerance
    return _run("identities", "mobius", 1.0, cases())


def weight_corpus():
    def power(t):
        return (1.0 - np.asarray(t, dtype=float)) ** 1.2

    plain = RadialWeight(power, 0.6, 2.4, 0.0, name="(1-t)^1.2")
    return [standard_weight(0.5), standard_weight(1.0), standard_weight(1.5), standard_weight(2.0), plain]


def check_nested_integral(radii=(0.3, 0.7, 0.95), kmax=3, tol=1e-6, tol_unit=1e-12):
    def cases():
        for w in weight_corpus():
            for r in radii:
                for k in range(1, kmax + 1):
                    a, b = nested_integral(w, k, r), nested_quadrature(w, k, r)
                    yield abs(a - b) / abs(b) / tol, {"weight": w.name, "k": k, "r": r, "collapsed": a, "nested": b}
        u = unit_weight()
        for r in radii:
            for k in range(1, kmax + 1):
                a, b = nested_integral(u, k, r), r**k / math.factorial(k)
                yield abs(a - b) / tol_unit, {"weight": "unit", "k": k, "r": r, "collapsed": a, "exact": b}

    return _run("identities", "nested_integral", 1.0, cases())


def identities_suite():
    cs = corpus()
    return [check_multinomial(), check_faa_di_bruno(cs), check_product_rule(cs), check_psi_phi(cs),
            check_mobius(), check_nested_integral()]


def examples_suite():
    from .paperlab import SCENARIOS, run_scenario

    out = []
    for sid in SCENARIOS:
        t0 = time.perf_counter()
        o = run_scenario(sid)
        cex = None
        if not o.ok:
            cex = {"scenario": sid, "diff": {k: [repr(e), repr(v)] for k, (e, v) in o.diff.items()}}
        rows = [(k, repr(v), repr(o.observed.get(k))) for k, v in o.expected.items()]
        out.append(CheckResult("examples", sid, len(o.expected), float(len(o.diff)), 0.0,
                               time.perf_counter() - t0, cex, rows))
    return out


SUITES = {"identities": identities_suite, "examples": examples_suite}


def run_suite(name):
    if name == "all":
        return identities_suite() + examples_suite()
    try:
        return SUITES[name]()
    except KeyError:
        raise KeyError(f"unknown suite {name!r}") from None
