"""Worked examples and lemma-level checks as named, runnable scenarios.

Each scenario builds its weights and symbols, runs the relevant checks and
compares the observed outcomes with the claims made for that example.
Expected outcomes are memberships, signs and verdicts only, never
magnitudes.
"""

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .criteria import covers, membership_class, stilde_membership
from .mobius import MobiusMap, involution_check, random_ball_points
from .quantities import faa_di_bruno_radial, graded_norm, norm_radii, sup_grid
from .sampling import BallGrid, Shells
from .symbols import LacunarySeries, MultiPoly, RaySymbol, SelfMap
from .weights import delta_norm_values, standard_weight

# ---------------------------------------------------------------------------
# example maps


def example1_map():
    """phi(z1, z2) = (z1/2 + 1/4, z2/4)."""
    x = MultiPoly.variable
    return SelfMap([Fraction(1, 2) * x(1, 2) + Fraction(1, 4), Fraction(1, 4) * x(2, 2)])


def example2_map():
    """phi(z1, z2, z3) = (3 z1/5, 3 z2^2/10 + i/5, z3/5)."""
    x = MultiPoly.variable
    return SelfMap([
        Fraction(3, 5) * x(1, 3),
        Fraction(3, 10) * x(2, 3) ** 2 + MultiPoly.constant(0.2j, 3),
        Fraction(1, 5) * x(3, 3),
    ])


def example3_map(a=(0.3, 0.6j, 0.2), angles=(0.3, 1.1, -0.4)):
    """Diagonal map z_k -> e^{i angle_k} a_k z_k."""
    a = np.asarray(a, dtype=np.complex128)
    if len(angles) != a.size:
        raise ValueError("one angle per coordinate")
    N = a.size
    return SelfMap([complex(np.exp(1j * t) * ak) * MultiPoly.variable(k + 1, N)
                    for k, (ak, t) in enumerate(zip(a, angles))])


def example3_index(a=(0.3, 0.6j, 0.2)):
    """1-based p with |a_p| maximal."""
    return int(np.argmax(np.abs(np.asarray(a)))) + 1


def example1_shifted():
    """The first example map precomposed with the automorphism sending 0 to its zero.

    phi vanishes at (-1/2, 0), and gamma_alpha(0) = alpha, so
    phi o gamma_alpha fixes the origin when alpha = (-1/2, 0).
    """
    phi = example1_map()
    gamma = MobiusMap([-0.5, 0.0])

    return PointMap(lambda Z: phi(gamma.apply(Z)), 2, "example 1 o gamma")


class PointMap:
    """A map of the ball known only through pointwise evaluation."""

    def __init__(self, func, dimension, name="map"):
        self.func = func
        self.dimension = int(dimension)
        self.name = name

    def __call__(self, Z):
        return self.func(np.asarray(Z, dtype=np.complex128))


# ---------------------------------------------------------------------------
# transfer and composition-operator checks


def h_one(Z):
    return np.ones(np.asarray(Z).shape[:-1])


def h_shifted(mu, shift=0.5):
    """h(z) = shift + mu(|z|): positive, bounded and with positive boundary limit."""

    def h(Z):
        return shift + np.asarray(mu.at(Z), dtype=float)

    return h


@dataclass
class TransferReport:
    j: int
    lhs: float  # sup h(z) ||delta_{phi(z)}||
    M: float  # sup h(w) ||delta_{phi_p(w)}||
    ratio: float
    points: int


def lemma31_transfer_check(phi, p, nu, h=h_one, j=1, grid=None, atol=1e-12):
    """Compare sup h ||delta_{phi(z)}|| with sup h ||delta_{phi_p(w)}|| on a grid.

    ``phi`` is any callable returning points of shape (..., N); the
    delta-norms are the representatives 1 + I^j_nu(|x|).
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    N = phi.dimension
    origin = np.asarray(phi(np.zeros((1, N))))
    if np.max(np.abs(origin)) > atol:
        raise ValueError("the transfer check requires phi(0) = 0")
    grid = grid if grid is not None else BallGrid(N, dirs=256)
    Z, _ = sup_grid(grid, norm_radii(grid))
    W = np.asarray(phi(Z))
    hz = np.asarray(h(Z), dtype=float)
    full = np.minimum(np.linalg.norm(W, axis=-1), 1 - 1e-15)
    comp = np.minimum(np.abs(W[:, p - 1]), 1 - 1e-15)
    lhs = float(np.max(hz * delta_norm_values(nu, j, full)))
    M = float(np.max(hz * delta_norm_values(nu, j, comp)))
    return TransferReport(j, lhs, M, lhs / M, Z.shape[0])


class ComposedSymbol:
    """f o phi for a polynomial f, with radial derivatives by the chain rule."""

    def __init__(self, f, phi):
        self.f = f
        self.phi = phi

    @property
    def dimension(self):
        return self.phi.dimension

    def __call__(self, Z):
        return self.f(self.phi(Z))

    def radial_eval(self, Z, n=0):
        if n == 0:
            return self(Z)
        return faa_di_bruno_radial(self.f, self.phi, n, Z)

    def at_origin(self):
        return complex(np.asarray(self.f(self.phi(np.zeros((1, self.dimension)))))[0])


def polynomial_corpus(N, degree=3, extra=4, seed=0):
    """All monomials of degree 1..degree plus ``extra`` seeded random combinations."""
    from .multiindex import weak_compositions

    rng = np.random.default_rng(seed)
    mons = [MultiPoly.monomial(b) for d in range(1, degree + 1) for b in weak_compositions(d, N)]
    out = list(mons)
    for _ in range(extra):
        c = rng.standard_normal(len(mons)) + 1j * rng.standard_normal(len(mons))
        f = MultiPoly.zero(N)
        for ck, m in zip(c, mons):
            f = f + complex(ck) * m
        out.append(f)
    return out


@dataclass
class CGammaReport:
    forward: list  # ||f o gamma|| / ||f|| per corpus element
    inverse: list  # ||f|| / ||f o gamma||
    max_forward: float
    max_inverse: float
    half_max_forward: float  # the same maxima over the first half of the corpus
    half_max_inverse: float
    roundtrip_defect: float  # max | ||f o gamma o gamma|| / ||f|| - 1 |

    @property
    def finite(self):
        return bool(np.isfinite(self.max_forward) and np.isfinite(self.max_inverse))

    def stable(self, factor=2.0):
        return (self.max_forward <= factor * self.half_max_forward
                and self.max_inverse <= factor * self.half_max_inverse)


def lemma32_cgamma_check(gamma, w, n, corpus=None, grid=None, roundtrip=True):
    """Norm ratios of the composition operator C_gamma on a polynomial corpus."""
    N = gamma.N
    corpus = polynomial_corpus(N) if corpus is None else list(corpus)
    grid = grid if grid is not None else BallGrid(N, dirs=64, antipodal=True)
    phi = gamma.as_selfmap()
    fwd, inv, rt = [], [], []
    for f in corpus:
        nf = graded_norm(f, w, n, grid)
        ng = graded_norm(ComposedSymbol(f, phi), w, n, grid)
        fwd.append(ng / nf)
        inv.append(nf / ng)
        if roundtrip:
            back = RaySymbol(lambda Z, f=f: f(gamma.apply(gamma.apply(Z))), N, gamma.ray_radius, 48)
            rt.append(abs(graded_norm(back, w, n, grid) / nf - 1.0))
    h = max(1, len(corpus) // 2)
    return CGammaReport(fwd, inv, max(fwd), max(inv), max(fwd[:h]), max(inv[:h]), max(rt) if rt else float("nan"))


# ---------------------------------------------------------------------------
# lacunary lower bound


def gap2_holds(q, k):
    """(1 - q^-k)^(q^k + 1) >= 1/3, evaluated in logs."""
    nk = float(q) ** k
    return (nk + 1) * math.log1p(-1.0 / nk) >= -math.log(3.0)


@dataclass
class WindowMargin:
    k: int
    s: np.ndarray  # window radii as -log_q(1 - r)
    ray: np.ndarray  # |R^n psi(r e_p)| - bound on the real ray
    phase: np.ndarray  # min over sampled phases of |R^n psi| - bound
    qsplit: np.ndarray  # Q1 - Q2 - Q3 - bound
    Q1: np.ndarray
    Q2: np.ndarray
    Q3: np.ndarray
    Q1_bound: float
    Q2_bound: float
    tail_ratio: float  # max truncation tail / Q1

    @property
    def Q1_bound_holds(self):
        return bool(np.all(self.Q1 >= self.Q1_bound * (1 - 1e-12)))

    @property
    def Q2_bound_holds(self):
        return bool(np.all(self.Q2 <= self.Q2_bound * (1 + 1e-12)))


@dataclass
class LowerBoundReport:
    alpha: float
    q: int
    K: int
    n: int
    windows: list
    warnings: list = field(default_factory=list)

    @property
    def ray_positive(self):
        return all(np.all(w.ray > 0) for w in self.windows)

    @property
    def phase_positive(self):
        return all(np.all(w.phase > 0) for w in self.windows)

    @property
    def qsplit_positive(self):
        return all(np.all(w.qsplit > 0) for w in self.windows)

    @property
    def tail_ok(self):
        return all(w.tail_ratio <= 0.01 for w in self.windows)

    def summary(self):
        lines = [f"lacunary lower bound alpha={self.alpha:g} q={self.q} K={self.K} n={self.n}"]
        for w in self.windows:
            lines.append(f"  k={w.k}: ray margin min {w.ray.min():.4g}, phase margin min {w.phase.min():.4g}, "
                         f"Q1-Q2-Q3 margin min {w.qsplit.min():.4g}, tail/Q1 {w.tail_ratio:.2e}, "
                         f"Q1 bound {'holds' if w.Q1_bound_holds else 'fails'}, "
                         f"Q2 bound {'holds' if w.Q2_bound_holds else 'fails'}")
        return "\n".join(lines)


def _window_offset(n):
    # (gap_1) closes at 1 - q^-(k+1/2); the higher-order window closes at 1 - q^-(k+3/2)
    return 0.5 if n <= 1 else 1.5


def lacunary_lowerbound_check(alpha=0.5, q=10, K=8, n=1, points=9, phases=256):
    """Margins of |R^(n) psi| against (1/4)(1 - |z|)^-alpha inside the gap windows.

    n = 1 uses the windows 1 - q^-k <= |z| <= 1 - q^-(k+1/2); n >= 2 uses the
    wider windows ending at 1 - q^-(k+3/2). Windows run over k = 2..K-2.
    Terms are summed in logs: z = (1 - eps) e^{i theta} with eps = q^-s.
    """
    if q < 10:
        raise ValueError("q must be at least 10")
    if K < 4:
        raise ValueError("K must be at least 4")
    lq = math.log(q)
    expo = [q**i for i in range(K + 1)]
    logc = [(i * (alpha - 1) + alpha / 2) * lq + n * i * lq for i in range(K + 1)]
    theta_idx = np.arange(phases)
    off = _window_offset(n)
    psi = LacunarySeries(1, 1, q, alpha, K)
    windows = []
    notes = []
    for k in range(2, K - 1):
        s_vals = np.linspace(k, k + off, points)
        ray, phase, qs, Q1s, Q2s, Q3s = [], [], [], [], [], []
        tail = 0.0
        for s in s_vals:
            eps = math.exp(-s * lq)
            lr = math.log1p(-eps)
            mags = np.array([math.exp(logc[i] + expo[i] * lr) for i in range(K + 1)])
            bound = 0.25 * eps ** (-alpha)
            ray.append(mags.sum() - bound)
            # exact phase reduction: n_i * 2 pi j / P mod 2 pi
            ph = np.array([(expo[i] % phases) * theta_idx % phases for i in range(K + 1)]) * (2 * np.pi / phases)
            vals = np.abs(np.sum(mags[:, None] * np.exp(1j * ph), axis=0))
            phase.append(vals.min() - bound)
            Q1 = math.exp(logc[k] + (expo[k] + 1) * lr)
            Q2 = mags[:k].sum()
            Q3 = mags[k + 1:].sum() + psi.tail_bound(1 - eps, n)
            qs.append(Q1 - Q2 - Q3 - bound)
            Q1s.append(Q1)
            Q2s.append(Q2)
            Q3s.append(Q3)
            tail = max(tail, psi.tail_bound(1 - eps, n) / Q1)
        if n <= 1:
            Q1b = q ** ((k + 0.5) * alpha) / 3
            Q2b = q ** ((k + 0.5) * alpha) / (q**alpha - 1)
        else:
            e = (k + 1) * (n - 1) + (k + 1.5) * alpha
            Q1b = q**e / 3
            Q2b = q**e / (q ** (n + alpha - 1) - 1)
        if tail > 0.01:
            msg = f"truncation tail exceeds 1% of Q1 in window k={k}"
            notes.append(msg)
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
        windows.append(WindowMargin(k, s_vals, np.array(ray), np.array(phase), np.array(qs), np.array(Q1s),
                                    np.array(Q2s), np.array(Q3s), Q1b, Q2b, tail))
    return LowerBoundReport(alpha, q, K, n, windows, notes)


def minimal_working_q(alpha, K=8, n=1, qs=range(10, 201)):
    """Smallest q whose Q1 - Q2 - Q3 margin is positive in every window (None if none)."""
    for q in qs:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            if lacunary_lowerbound_check(alpha, q, K, n, points=9, phases=4).qsplit_positive:
                return int(q)
    return None


@dataclass
class OrderReport:
    order: int
    exponents_match: bool
    relative_defect: float  # sup |R^n psi - R psi~ z_p^(n-1)| / sup |R^n psi| on window points


def antiderivative_order_report(alpha=0.5, q=10, K=8, n=2, orders=None):
    """Test R^(n) psi = R psi~ . z_p^(n-1) for psi the order-fold antiderivative of psi~."""
    orders = (n - 2, n - 1) if orders is None else orders
    base = LacunarySeries(1, 1, q, alpha, K)
    pts = _window_points(q, K, 0.5, 1, 1, phases=16, per_window=5)
    Z = np.concatenate(pts)
    target = base.radial_eval(Z, 1) * Z[:, 0] ** (n - 1)
    out = []
    for order in orders:
        if order < 0:
            continue
        psi = base.antiderivative_p(order)
        lhs = psi.radial_eval(Z, n)
        match = all(e + order == e + n - 1 for e in base.exponents)
        out.append(OrderReport(order, match, float(np.max(np.abs(lhs - target)) / np.max(np.abs(lhs)))))
    return out


# ---------------------------------------------------------------------------
# membership inside the gap windows


def _window_points(q, K, offset, p, N, phases=16, per_window=5, seed=0):
    """Points with 1 - q^-k <= |z_p| <= |z| <= 1 - q^-(k+offset), one array per k = 2..K-2."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(2, K - 1):
        hi = 1 - float(q) ** -(k + offset)
        pts = []
        for s in np.linspace(k, k + offset, per_window):
            rp = 1 - float(q) ** -s
            for j in range(phases):
                z = np.zeros(N, dtype=np.complex128)
                z[p - 1] = rp * np.exp(2j * np.pi * (j + 0.5 * rng.random()) / phases)
                if N > 1:
                    room = max(hi**2 - rp**2, 0.0)
                    other = np.sqrt(room) * rng.random()
                    z[p % N] = other * np.exp(2j * np.pi * rng.random())
                pts.append(z)
        out.append(np.array(pts))
    return out


def window_shells(q, K, offset, p, N, phases=16, per_window=5, seed=0):
    pts = _window_points(q, K, offset, p, N, phases, per_window, seed)
    radii = np.array([1 - float(q) ** -(k + offset) for k in range(2, K - 1)])
    return Shells(radii, pts)


# ---------------------------------------------------------------------------
# scenario registry


@dataclass(frozen=True)
class Scenario:
    id: str
    description: str
    build: Callable  # () -> dict of constructed objects
    check: Callable  # (built) -> (observed dict, detail text)
    expected: dict
    tolerances: dict = field(default_factory=dict)


@dataclass
class ScenarioOutcome:
    id: str
    expected: dict
    observed: dict
    diff: dict  # key -> (expected, observed)
    detail: str

    @property
    def ok(self):
        return not self.diff

    def summary(self):
        head = f"{self.id}: {'diff empty' if self.ok else 'DIFF'}"
        rows = [f"  {k}: expected {e!r}, observed {o!r}" for k, (e, o) in self.diff.items()]
        return "\n".join([head] + rows + ([self.detail] if self.detail else []))


def _stilde_check(probe=None, label=None):
    def check(b):
        ev = stilde_membership(b["phi"], b["p"])
        obs = {"stilde": bool(ev.stilde), "sstar": bool(ev.sstar)}
        if probe is not None:
            obs[f"covers {label}"] = bool(covers(b["phi"], b["p"], probe))
        return obs, ev.summary()

    return check


def _lacunary_ratio_check(b):
    d = b["psi"].log_ratio_defects()
    return {"log ratio constant": max(abs(x) for x in d) <= b["tol"]}, f"max log defect {max(abs(x) for x in d):.2e}"


def _lacunary_plus_check(b):
    res = membership_class(b["psi"], b["mu"], b["n"], shells=b["shells"], name="psi")
    detail = "inf trace over windows: " + ", ".join(f"{v:.4g}" for v in res.inf_trace.values)
    return {"psi membership": res.cls}, detail


def _lacunary_bound_check(b):
    rep = lacunary_lowerbound_check(b["alpha"], b["q"], b["K"], 1)
    return {"ray margins positive": rep.ray_positive, "tail within 1% of Q1": rep.tail_ok}, rep.summary()


def _gap2_check(b):
    return {"gap2": gap2_holds(b["q"], b["k"])}, ""


def _mobius_check(b):
    g = b["gamma"]
    rng = np.random.default_rng(0)
    Z = random_ball_points(g.N, 1000, rng, 0.99)
    inv = involution_check(g, 1000, 0, 0.99)
    mod = float(np.max(g.modulus_defect(Z)))
    ends = max(np.max(np.abs(g.apply(np.zeros(g.N)) - g.alpha)), np.max(np.abs(g.apply(g.alpha))))
    obs = {"involution": inv <= 1e-10, "modulus identity": mod <= 1e-12, "exchanges 0 and alpha": ends <= 1e-12}
    return obs, f"involution {inv:.2e}, modulus {mod:.2e}, endpoints {ends:.2e}"


def _lac_plus_build(offset, order_fn, radial_n):
    def build():
        n = 2
        alpha, q, K = 0.5, 10, 8
        base = LacunarySeries(1, 2, q, alpha, K)
        psi = order_fn(base, n)
        return {"psi": psi, "mu": standard_weight(alpha), "n": radial_n(n),
                "shells": window_shells(q, K, offset, 1, 2)}

    return build


SCENARIOS = {}


def register(s):
    if s.id in SCENARIOS:
        raise ValueError(f"duplicate scenario id {s.id!r}")
    SCENARIOS[s.id] = s
    return s


register(Scenario("stilde-ex1", "phi = (z1/2 + 1/4, z2/4), p = 1",
                  lambda: {"phi": example1_map(), "p": 1}, _stilde_check(-0.5j, "-i/2"),
                  {"stilde": True, "sstar": False, "covers -i/2": False}))
register(Scenario("stilde-ex2", "phi = (3z1/5, 3z2^2/10 + i/5, z3/5), p = 2",
                  lambda: {"phi": example2_map(), "p": 2}, _stilde_check(-0.5j, "-i/2"),
                  {"stilde": True, "sstar": False, "covers -i/2": False}))
register(Scenario("stilde-ex3", "diagonal map a = (0.3, 0.6i, 0.2), p = argmax |a_k|",
                  lambda: {"phi": example3_map(), "p": example3_index()}, _stilde_check(),
                  {"stilde": True, "sstar": False}))
register(Scenario("lacunary-ratio", "a_k n_k^(1-alpha) = q^(alpha/2), q = 10, alpha = 1/2, K = 8",
                  lambda: {"psi": LacunarySeries(1, 1, 10, 0.5, 8), "tol": 1e-12}, _lacunary_ratio_check,
                  {"log ratio constant": True}, {"log": 1e-12}))
register(Scenario("lacunary-plus", "antiderivative of order n-1 of the lacunary series, n = 2, gap windows",
                  _lac_plus_build(0.5, lambda base, n: base.antiderivative_p(n - 1), lambda n: n),
                  _lacunary_plus_check, {"psi membership": "Plus"}))
register(Scenario("lacunary-plus-ex2", "the lacunary series itself with R^(n), n = 2, wide gap windows",
                  _lac_plus_build(1.5, lambda base, n: base, lambda n: n),
                  _lacunary_plus_check, {"psi membership": "Plus"}))
register(Scenario("lacunary-lower-bound", "|R psi~| >= (1/4)(1-|z|)^-alpha on the gap windows, q = 10",
                  lambda: {"alpha": 0.5, "q": 10, "K": 8}, _lacunary_bound_check,
                  {"ray margins positive": True, "tail within 1% of Q1": True}))
register(Scenario("lacunary-gap2", "(1 - 1/q^k)^(q^k+1) >= 1/3 at q = 10, k = 3",
                  lambda: {"q": 10, "k": 3}, _gap2_check, {"gap2": True}))
register(Scenario("mobius-identities", "involution, modulus identity and gamma(0) = alpha for alpha = (0.3, 0.4i, 0.1)",
                  lambda: {"gamma": MobiusMap([0.3, 0.4j, 0.1])}, _mobius_check,
                  {"involution": True, "modulus identity": True, "exchanges 0 and alpha": True}))


def list_scenarios():
    return [(s.id, s.description) for s in SCENARIOS.values()]


def run_scenario(scenario_id):
    try:
        s = SCENARIOS[scenario_id]
    except KeyError:
        raise KeyError(f"unknown scenario {scenario_id!r}") from None
    observed, detail = s.check(s.build())
    diff = {k: (v, observed.get(k)) for k, v in s.expected.items() if observed.get(k) != v}
    return ScenarioOutcome(s.id, dict(s.expected), observed, diff, detail)


__all__ = [
    "Scenario", "ScenarioOutcome", "SCENARIOS", "register", "list_scenarios", "run_scenario",
    "example1_map", "example2_map", "example3_map", "example3_index", "example1_shifted",
    "PointMap", "h_one", "h_shifted", "TransferReport", "lemma31_transfer_check", "ComposedSymbol",
    "polynomial_corpus", "CGammaReport", "lemma32_cgamma_check", "gap2_holds", "WindowMargin",
    "LowerBoundReport", "lacunary_lowerbound_check", "minimal_working_q", "OrderReport",
    "antiderivative_order_report", "window_shells",
]
