"""Evidence-graded decision procedures for boundedness and compactness.

Suprema over the ball and limits at the sphere are replaced by radial
traces: at r_m = 1 - 2^-m the sup (or inf) over sampled directions, with a
slope d log(value) / d(-log(1-r)) fitted over the last four points.

Classification rules (every report carries them):

* bounded: slope <= 0.05 and all values finite
* divergent: slope >= 0.2 on the last four points and on the four before
* vanishing: last value <= 1e-4 and strictly decreasing over the last three
  points, or identically zero there (a sup over an empty set)
* Plus: directional inf >= 1e-3 over the last three radii
* Zero: sup <= 1e-4 at the last radius and decreasing (or identically zero)
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize
from scipy.spatial import cKDTree

from .errors import HypothesisMismatch
from .mobius import random_ball_points
from .quantities import SymbolPair, graded_norm, norm_radii, product_rule_radial, script_B_from_tables, sup_grid
from .sampling import BallGrid, Shells, coordinate_directions, sphere_directions
from .symbols import MultiPoly, multiply, power, radial_table
from .weights import delta_norm_values, integral_at_one_finite

BOUNDED_SLOPE = 0.05
DIVERGENT_SLOPE = 0.2
VANISH_LEVEL = 1e-4
EPS_PLUS = 1e-3
EPS_ZERO = 1e-4

THRESHOLDS = {
    "bounded_slope": BOUNDED_SLOPE,
    "divergent_slope": DIVERGENT_SLOPE,
    "vanish_level": VANISH_LEVEL,
    "eps_plus": EPS_PLUS,
    "eps_zero": EPS_ZERO,
}


def threshold_text():
    return ("thresholds: bounded slope<={bounded_slope}, divergent slope>={divergent_slope}, "
            "vanishing last<={vanish_level} and decreasing, plus inf>={eps_plus}, zero sup<={eps_zero}"
            ).format(**THRESHOLDS)


def _slope(radii, values):
    s = -np.log1p(-np.asarray(radii, dtype=float))
    v = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(v)):
        return np.inf
    if np.all(v == 0):
        return -np.inf
    if np.any(v <= 0):
        # mixed zeros: treat as collapsing to zero if the final value is zero
        return -np.inf if v[-1] == 0 else np.nan
    return float(np.polyfit(s, np.log(v), 1)[0])


@dataclass
class RadialTrace:
    quantity: str
    j: int
    radii: np.ndarray
    values: np.ndarray
    m: np.ndarray = None

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.m is None:
            self.m = -np.log2(1.0 - self.radii)
        if np.any(np.diff(self.radii) <= 0):
            raise ValueError("trace radii must increase strictly")

    @property
    def slope(self):
        if self.values.size < 2:
            return np.nan
        return _slope(self.radii[-4:], self.values[-4:])

    @property
    def previous_slope(self):
        if self.values.size < 8:
            return self.slope
        return _slope(self.radii[-8:-4], self.values[-8:-4])

    @property
    def last(self):
        return float(self.values[-1])

    @property
    def sup(self):
        return float(np.max(self.values)) if self.values.size else 0.0

    def bounded(self):
        if np.any(~np.isfinite(self.values)):
            return False
        s = self.slope
        return bool(s <= BOUNDED_SLOPE) if not np.isnan(s) else False

    def divergent(self):
        if np.any(~np.isfinite(self.values)):
            return True
        return bool(self.slope >= DIVERGENT_SLOPE and self.previous_slope >= DIVERGENT_SLOPE)

    def vanishing(self):
        v = self.values[-3:]
        if v.size < 3:
            return False
        if np.all(v == 0):
            return True
        return bool(v[-1] <= VANISH_LEVEL and np.all(np.diff(v) < 0))

    def classify(self):
        if self.vanishing():
            return "vanishing"
        if self.bounded():
            return "bounded"
        if self.divergent():
            return "divergent"
        return "inconclusive"


@dataclass
class CriterionReport:
    theorem: str
    traces: list
    verdict: str
    norm_estimate: float = None
    thresholds: dict = field(default_factory=lambda: dict(THRESHOLDS))
    preconditions: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    seed: int = None
    n0: int = None

    def summary(self):
        lines = [f"[{self.theorem}] verdict: {self.verdict}"]
        if self.n0 is not None:
            lines.append(f"  n0 = {self.n0}")
        if self.norm_estimate is not None:
            lines.append(f"  norm representative: {self.norm_estimate:.6g}")
        for t in self.traces:
            lines.append(f"  {t.quantity} j={t.j}: last={t.last:.6g} slope={t.slope:.4g} -> {t.classify()}")
        for k, v in self.preconditions.items():
            lines.append(f"  precondition {k}: {v}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        lines.append("  " + threshold_text())
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# membership classes


@dataclass
class MembershipResult:
    cls: str  # "Plus" | "Zero" | "Neither"
    inf_trace: RadialTrace
    sup_trace: RadialTrace


def _shell_values(fn, shells):
    infs, sups = [], []
    for pts in shells.points:
        if len(pts) == 0:
            infs.append(np.nan)
            sups.append(0.0)
            continue
        v = fn(np.asarray(pts))
        infs.append(float(np.min(v)))
        sups.append(float(np.max(v)))
    return np.array(infs), np.array(sups)


def classify_membership(inf_trace, sup_trace, eps_plus=EPS_PLUS, eps_zero=EPS_ZERO):
    iv = inf_trace.values[-3:]
    if iv.size == 3 and np.all(np.isfinite(iv)) and np.all(iv >= eps_plus):
        return "Plus"
    sv = sup_trace.values[-3:]
    if sv.size == 3 and (np.all(sv == 0) or (sv[-1] <= eps_zero and np.all(np.diff(sv) < 0))):
        return "Zero"
    return "Neither"


def default_membership_grid(N):
    return BallGrid(N, dirs=128, max_m=24)


def membership_class(f, w, n, grid=None, shells=None, name="f", eps_plus=EPS_PLUS, eps_zero=EPS_ZERO):
    """Classify omega(z)|R^(n) f(z)| near the sphere as Plus, Zero or Neither.

    ``shells`` overrides the sampled point sets (used for lacunary symbols,
    whose lower bounds hold only inside gap windows). The default grid runs
    to r = 1 - 2^-24 so that polynomial symbols can fall below the Zero
    level.
    """
    if shells is None:
        grid = grid if grid is not None else default_membership_grid(f.dimension)
        shells = Shells.from_grid(grid)

    def fn(P):
        return np.asarray(w.at(P), dtype=float) * np.abs(np.asarray(f.radial_eval(P, n)))

    infs, sups = _shell_values(fn, shells)
    it = RadialTrace(f"inf omega|R^{n} {name}|", 0, shells.radii, infs)
    st = RadialTrace(f"sup omega|R^{n} {name}|", 0, shells.radii, sups)
    return MembershipResult(classify_membership(it, st, eps_plus, eps_zero), it, st)


@dataclass
class ConditionReport:
    passed: bool
    n: int
    psi: MembershipResult
    products: list  # MembershipResult for psi*phi_p^j, j = 1..n

    def summary(self):
        parts = [f"psi: {self.psi.cls}"] + [f"psi*phi_p^{j + 1}: {r.cls}" for j, r in enumerate(self.products)]
        return f"({self.n}, mu)-condition {'holds' if self.passed else 'fails'}: " + ", ".join(parts)


def condition_n_mu(pair, w, n, grid=None, psi_shells=None, product_shells=None):
    """psi must be Plus and psi*phi_p^j Zero for j = 1..n."""
    ps = membership_class(pair.psi, w, n, grid, psi_shells, name="psi")
    prods = []
    for j in range(1, n + 1):
        g = multiply(pair.psi, power(pair.phi_p, j))
        prods.append(membership_class(g, w, n, grid, product_shells, name=f"psi*phi_p^{j}"))
    ok = ps.cls == "Plus" and all(r.cls == "Zero" for r in prods)
    return ConditionReport(ok, n, ps, prods)


@dataclass
class LambdaResult:
    found: bool
    lam: float
    inf_value: float
    message: str
    traces: dict


def lemma_inf_lambda(pair, w, n, j, grid=None, shells=None, lambdas=(0.5, 0.75, 0.9, 0.95, 0.99)):
    """Smallest lambda with inf_{|phi_p|>lambda} mu|script_B^n_j(psi; phi_p)| >= eps_plus near the sphere."""
    if shells is None:
        grid = grid if grid is not None else default_membership_grid(pair.N)
        shells = Shells.from_grid(grid)
    traces = {}
    for lam in lambdas:
        infs = []
        for pts in shells.points:
            P = np.asarray(pts)
            gp = np.abs(np.asarray(pair.phi_p(P)))
            P = P[gp > lam]
            if P.shape[0] == 0:
                infs.append(np.nan)
                continue
            psi_tab = radial_table(pair.psi, P, n)
            phi_tab = radial_table(pair.phi_p, P, n)
            b = script_B_from_tables(psi_tab, phi_tab, n, j)
            infs.append(float(np.min(np.asarray(w.at(P)) * np.abs(b))))
        infs = np.array(infs)
        traces[lam] = infs
        tail = infs[-3:]
        if tail.size == 3 and np.all(np.isfinite(tail)) and np.all(tail >= EPS_PLUS):
            return LambdaResult(True, lam, float(tail.min()), "lambda found", traces)
    return LambdaResult(False, float("nan"), float("nan"), "no lambda found at configured radii", traces)


# ---------------------------------------------------------------------------
# quantity families


def _phi_p_tables(pair, Z, order):
    psi_tab = radial_table(pair.psi, Z, order)
    phi_tab = radial_table(pair.phi_p, Z, order)
    return psi_tab, phi_tab


def _family_A1(pair, nu, mu, n, m, Z, js):
    """mu|script_B^n_j(psi; phi_p)| ||delta_{phi_p(z)}||_{H^(n+m-j)} for j in js."""
    psi_tab, phi_tab = _phi_p_tables(pair, Z, n)
    rz = np.linalg.norm(Z, axis=1)
    rp = np.abs(phi_tab[0])
    muz = np.asarray(mu(rz), dtype=float)
    out = {}
    for j in js:
        if j > n:
            out[("B", j)] = np.zeros(Z.shape[0])
            continue
        b = np.abs(script_B_from_tables(psi_tab, phi_tab, n, j))
        out[("B", j)] = muz * b * delta_norm_values(nu, n + m - j, rp)
    return out


def _family_A2(pair, nu, mu, n, m, Z, js=None):
    """Order-(n+m) quantities: delta-norm family for j <= n and singular factors k = 1..m."""
    order = n + m
    psi_tab, phi_tab = _phi_p_tables(pair, Z, order)
    rz = np.linalg.norm(Z, axis=1)
    rp = np.abs(phi_tab[0])
    muz = np.asarray(mu(rz), dtype=float)
    out = {}
    js = range(n + 1) if js is None else js
    for j in js:
        b = np.abs(script_B_from_tables(psi_tab, phi_tab, order, j))
        out[("B", j)] = muz * b * delta_norm_values(nu, n - j, rp)
    nup = np.asarray(nu(rp), dtype=float)
    for k in range(1, m + 1):
        b = np.abs(script_B_from_tables(psi_tab, phi_tab, order, n + k))
        out[("S", k)] = muz * b / (nup * (1.0 - rp * rp) ** k)
    return out


def _label(key, order):
    kind, idx = key
    if kind == "B":
        return f"B^{order}_{idx}"
    return f"singular_k{idx}"


def _sup_traces(values_by_radius, keys, radii, order):
    traces = []
    for key in keys:
        vals = np.array([np.max(v[key]) if v[key].size else 0.0 for v in values_by_radius])
        traces.append(RadialTrace(_label(key, order), key[1], radii, vals))
    return traces


def _grade_bounded(traces):
    if all(t.bounded() for t in traces):
        return "BoundedEvidence"
    if any(t.divergent() for t in traces):
        return "DivergentEvidence"
    return "Inconclusive"


def _grade_compact(traces):
    if all(t.vanishing() for t in traces):
        return "CompactEvidence"
    for t in traces:
        if t.last > VANISH_LEVEL and not (t.slope <= -BOUNDED_SLOPE):
            return "NotCompactEvidence"
    return "Inconclusive"


def _membership_preconditions(pair, mu, order, i_max, grid):
    """psi*phi_p^i in H^(order)_mu for i <= i_max, judged by bounded seminorm traces."""
    shells = Shells.from_grid(grid)
    res = {}
    for i in range(i_max + 1):
        g = pair.psi if i == 0 else multiply(pair.psi, power(pair.phi_p, i))
        _, st = _shell_values(
            lambda P: np.asarray(mu.at(P), dtype=float) * np.abs(np.asarray(g.radial_eval(P, order))), shells)
        res[i] = RadialTrace("member", i, shells.radii, st).bounded()
    return res


def _preconditions(pair, mu, order, grid, i_max):
    pre = {}
    cond = condition_n_mu(pair, mu, order)
    pre[f"({order},mu)-condition"] = cond.summary()
    mem = _membership_preconditions(pair, mu, order, i_max, grid)
    pre[f"psi*phi_p^i in H^({order})_mu, i<={i_max}"] = all(mem.values())
    return pre


def boundedness_A1(pair, nu, mu, n, m, grid=None, check_preconditions=True, i_max=None):
    """Bounded W: H^(n+m)_nu -> H^(n)_mu evidence from the B^n_j traces."""
    grid = grid if grid is not None else BallGrid(pair.N)
    js = list(range(n + 1))
    per_r = [_family_A1(pair, nu, mu, n, m, grid.shell(r), js) for r in grid.trace_radii]
    keys = [("B", j) for j in js]
    traces = _sup_traces(per_r, keys, grid.trace_radii, n)
    Z, _ = sup_grid(grid)
    fam = _family_A1(pair, nu, mu, n, m, Z, js)
    phi0 = np.linalg.norm(pair.phi.at_origin())
    norm = abs(pair.psi.at_origin()) * float(delta_norm_values(nu, n + m, np.array([phi0]))[0])
    norm += sum(float(np.max(fam[k])) for k in keys)
    rep = CriterionReport("A1", traces, _grade_bounded(traces), norm, seed=grid.seed)
    if check_preconditions:
        rep.preconditions = _preconditions(pair, mu, n, grid, n + 2 if i_max is None else i_max)
    return rep


def boundedness_A2(pair, nu, mu, n, m, grid=None, check_preconditions=True, i_max=None):
    """Bounded W: H^(n)_nu -> H^(n+m)_mu evidence: delta-norm and singular-factor traces."""
    grid = grid if grid is not None else BallGrid(pair.N)
    per_r = [_family_A2(pair, nu, mu, n, m, grid.shell(r)) for r in grid.trace_radii]
    keys = [("B", j) for j in range(n + 1)] + [("S", k) for k in range(1, m + 1)]
    traces = _sup_traces(per_r, keys, grid.trace_radii, n + m)
    Z, _ = sup_grid(grid)
    fam = _family_A2(pair, nu, mu, n, m, Z)
    p0 = abs(pair.phi_p.at_origin())
    norm = abs(pair.psi.at_origin()) * float(delta_norm_values(nu, n, np.array([p0]))[0])
    norm += sum(float(np.max(fam[k])) for k in keys)
    rep = CriterionReport("A2", traces, _grade_bounded(traces), norm, seed=grid.seed)
    if check_preconditions:
        rep.preconditions = _preconditions(pair, mu, n + m, grid, n + m + 2 if i_max is None else i_max)
    return rep


# ---------------------------------------------------------------------------
# compactness


_finite_cache = {}


def finiteness(nu, k):
    key = (nu.key(), k)
    if key not in _finite_cache:
        _finite_cache[key] = integral_at_one_finite(nu, k)
    return _finite_cache[key]


def pattern_holds(nu, top, n0):
    """I^(top - n0 + 1)_nu(1) < inf = I^(top - n0)_nu(1)."""
    return finiteness(nu, top - n0 + 1).finite and finiteness(nu, top - n0).divergent


def resolve_n0(nu, top, n, n0=None):
    """Validate a supplied n0 or scan 0..n+1 for the first matching pattern."""
    if n0 is not None:
        if not 0 <= n0 <= n + 1 or not pattern_holds(nu, top, n0):
            raise HypothesisMismatch(f"n0={n0} does not satisfy I^{{{top}-n0+1}}(1) < inf = I^{{{top}-n0}}(1)")
        return n0
    for cand in range(n + 2):
        if pattern_holds(nu, top, cand):
            return cand
    raise HypothesisMismatch(f"no n0 in 0..{n + 1} matches the finiteness pattern for order {top}")


def _restricted_traces(values, restrict_radius, thresholds, keys, order):
    traces = []
    for key in keys:
        v = values[key]
        vals = []
        for r in thresholds:
            sel = v[restrict_radius > r]
            vals.append(float(np.max(sel)) if sel.size else 0.0)
        traces.append(RadialTrace(_label(key, order), key[1], thresholds, np.array(vals)))
    return traces


def compactness_C1(pair, nu, mu, n, m, n0=None, grid=None, check_preconditions=True):
    """Compact W: H^(n+m)_nu -> H^(n)_mu evidence: restricted sups over {|phi_p| > r}."""
    grid = grid if grid is not None else BallGrid(pair.N)
    n0 = resolve_n0(nu, n + m, n, n0)
    js = list(range(n0, n + 2))
    Z, _ = sup_grid(grid)
    fam = _family_A1(pair, nu, mu, n, m, Z, js)
    rp = np.abs(np.asarray(pair.phi_p(Z)))
    traces = _restricted_traces(fam, rp, grid.trace_radii, [("B", j) for j in js], n)
    rep = CriterionReport("C1", traces, _grade_compact(traces), seed=grid.seed, n0=n0)
    if check_preconditions:
        rep.preconditions = _preconditions(pair, mu, n, grid, n + 2)
    return rep


def compactness_C2(pair, nu, mu, n, m, n0=None, grid=None, restrict="phi", check_preconditions=True):
    """Compact W: H^(n)_nu -> H^(n+m)_mu evidence.

    ``restrict='phi'`` takes the sups over {|phi(z)| > r}; ``'phi_p'`` uses
    {|phi_p(z)| > r} as in the order-lowering case.
    """
    grid = grid if grid is not None else BallGrid(pair.N)
    n0 = resolve_n0(nu, n, n, n0)
    Z, _ = sup_grid(grid)
    fam = _family_A2(pair, nu, mu, n, m, Z)
    if restrict == "phi":
        rr = np.linalg.norm(pair.phi(Z), axis=1)
    elif restrict == "phi_p":
        rr = np.abs(np.asarray(pair.phi_p(Z)))
    else:
        raise ValueError("restrict must be 'phi' or 'phi_p'")
    keys = [("B", j) for j in range(n + 1)] + [("S", k) for k in range(1, m + 1)]
    traces = _restricted_traces(fam, rr, grid.trace_radii, keys, n + m)
    rep = CriterionReport("C2", traces, _grade_compact(traces), seed=grid.seed, n0=n0)
    rep.notes.append(f"restriction over |{restrict}(z)| > r")
    if check_preconditions:
        rep.preconditions = _preconditions(pair, mu, n + m, grid, n + m + 2)
    return rep


# ---------------------------------------------------------------------------
# S-tilde / S-star evidence


def _ball_from_params(x, N):
    # R^{2N} -> open ball via tanh of the radius
    v = x[:N] + 1j * x[N:]
    nv = np.linalg.norm(v)
    if nv == 0:
        return v
    return np.tanh(nv) * v / nv


def _params_from_ball(z):
    z = np.asarray(z, dtype=np.complex128)
    nz = np.linalg.norm(z)
    if nz == 0:
        return np.zeros(2 * z.size)
    t = np.arctanh(min(nz, 1 - 1e-12))
    v = z / nz * t
    return np.concatenate([v.real, v.imag])


def sphere_sup(func, N, count=512, seed=0, refine=8):
    """sup over the unit sphere of |func(z)| (func maps (P, N) -> (P,) or (P, N)).

    Sampled on scrambled Halton directions plus e_p, then refined from the
    best ``refine`` samples by local optimisation on the sphere.
    """
    D = np.vstack([sphere_directions(N, count, seed), coordinate_directions(N)])

    def mod(P):
        v = np.asarray(func(P))
        return np.abs(v) if v.ndim == 1 else np.linalg.norm(v, axis=-1)

    vals = mod(D)
    best = float(vals.max())
    arg = D[int(np.argmax(vals))]
    for idx in np.argsort(vals)[::-1][:refine]:
        x0 = np.concatenate([D[idx].real, D[idx].imag])

        def neg(x):
            v = x[:N] + 1j * x[N:]
            nv = np.linalg.norm(v)
            if nv == 0:
                return 0.0
            return -float(mod((v / nv)[None, :])[0])

        res = minimize(neg, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
        if -res.fun > best:
            best = -res.fun
            v = res.x[:N] + 1j * res.x[N:]
            arg = v / np.linalg.norm(v)
    return best, arg


def solve_in_ball(func, target, N, starts=8, seed=0, tol=1e-9):
    """Find z in the open ball with func(z) = target (func scalar or vector valued).

    Returns (z, residual); residual <= tol means the target is attained.
    """
    rng = np.random.default_rng(seed)
    target = np.atleast_1d(np.asarray(target, dtype=np.complex128))
    best = (None, np.inf)

    def resid(x):
        z = _ball_from_params(x, N)
        v = np.atleast_1d(np.asarray(func(z[None, :]))).reshape(-1) - target
        return np.concatenate([v.real, v.imag])

    x0s = [np.zeros(2 * N)] + [rng.normal(scale=0.8, size=2 * N) for _ in range(starts - 1)]
    for x0 in x0s:
        res = least_squares(resid, x0, xtol=1e-14, ftol=1e-14, gtol=1e-14, max_nfev=2000)
        r = float(np.linalg.norm(res.fun))
        if r < best[1]:
            best = (_ball_from_params(res.x, N), r)
        if r <= tol:
            break
    return best


@dataclass
class StildeEvidence:
    p: int
    sup_phi: float
    sup_phi_p: float
    zero_found: bool
    zero_point: np.ndarray
    stilde: bool
    coverage: float
    sstar: bool
    uncovered_example: complex
    self_map_sup: float

    def summary(self):
        return (f"S~_{self.p}: {'yes' if self.stilde else 'no'} (sup|phi|={self.sup_phi:.6g}, "
                f"sup|phi_p|={self.sup_phi_p:.6g}, zero in image={self.zero_found}); "
                f"S*_{self.p}: {'yes' if self.sstar else 'no'} (disc coverage {self.coverage:.3f})")


def disc_mesh(rings=8, per_ring=24, rmax=0.95):
    pts = [0j]
    for i in range(1, rings + 1):
        r = rmax * i / rings
        th = 2 * np.pi * (np.arange(per_ring) + 0.5 * (i % 2)) / per_ring
        pts.extend(r * np.exp(1j * th))
    return np.array(pts)


def covers(phi, p, x, seed=0, tol=1e-9):
    """True if x is attained by phi_p on the ball (numerical root finding)."""
    comp = phi.component(p)
    _, r = solve_in_ball(lambda P: comp(P), x, phi.dimension, seed=seed, tol=tol)
    return r <= tol


def _image_coverage(comp, N, mesh, sup_p, samples, seed):
    """Fraction of mesh points with a sampled image of comp within the mesh spacing."""
    rng = np.random.default_rng(seed)
    Z = np.concatenate([random_ball_points(N, samples, rng),
                        random_ball_points(N, samples // 4, rng, on_sphere=True)])
    img = np.asarray(comp(Z))
    tree = cKDTree(np.column_stack([img.real, img.imag]))
    pts = np.column_stack([mesh.real, mesh.imag])
    d = np.sort(np.abs(mesh[:, None] - mesh[None, :]), axis=1)[:, 1]
    dist, _ = tree.query(pts)
    hit = (dist <= 0.6 * d) & (np.abs(mesh) <= sup_p + 1e-9)
    miss = np.flatnonzero(~hit)
    return float(np.mean(hit)), (complex(mesh[miss[0]]) if miss.size else None)


def stilde_membership(phi, p, count=512, seed=0, agree_tol=1e-3, mesh=None, samples=20000):
    """Evidence for phi in S~_p and in S*_p.

    S~_p: sup_{phi(B)} |z| and sup_{phi_p(B)} |x| agree within ``agree_tol``
    and 0 is attained. Both sups are taken on the sphere (maximum modulus).
    S*_p: the fraction of a disc mesh attained by phi_p; every mesh point
    must be attained.
    """
    N = phi.dimension
    sup_phi, _ = sphere_sup(phi, N, count, seed)
    comp = phi.component(p)
    sup_p, _ = sphere_sup(lambda P: comp(P), N, count, seed)
    z0, r0 = solve_in_ball(phi, np.zeros(phi.N), N, seed=seed)
    zero = r0 <= 1e-9
    st = zero and abs(sup_phi - sup_p) <= agree_tol
    mesh = disc_mesh() if mesh is None else np.asarray(mesh, dtype=np.complex128)
    cov, uncovered = _image_coverage(comp, N, mesh, sup_p, samples, seed)
    if uncovered is not None and covers(phi, p, uncovered, seed):
        # the sampled images missed a point the solver can reach
        cov, uncovered = max(cov, 1.0 - 1e-12), None
    return StildeEvidence(p, sup_phi, sup_p, zero, z0, st, cov, cov == 1.0, uncovered, sup_phi)


# ---------------------------------------------------------------------------
# probes of the operator itself


def operator_radial(pair, f, order, Z):
    return np.asarray(product_rule_radial(pair.psi, f, pair.phi, order, Z))


def probe_family(N, p=1, size=20):
    """Monomials z_p^s (s = 1, 2, 4, ...) and mixed monomials, ``size`` in all."""
    fam = []
    s = 1
    while len(fam) < size // 2:
        fam.append(MultiPoly.variable(p, N) ** s)
        s *= 2
    d = 1
    while len(fam) < size:
        beta = [0] * N
        for i in range(N):
            beta[i] = d if i % 2 == 0 else d // 2
        if sum(beta) == 0:
            beta[0] = 1
        fam.append(MultiPoly.monomial(beta))
        d += 1
    return fam


def operator_ratio(pair, f, nu, mu, target_order, source_order, grid=None):
    """sup mu|R^(target) W f| / ||f||_{H^(source)_nu} over the grid."""
    grid = grid if grid is not None else BallGrid(pair.N, dirs=64)
    radii = norm_radii(grid)
    Z, rr = sup_grid(grid, radii)
    lhs = np.asarray(mu(rr), dtype=float) * np.abs(operator_radial(pair, f, target_order, Z))
    fn = graded_norm(f, nu, source_order, grid, radii)
    return float(np.max(lhs)) / fn


@dataclass
class ProbeResult:
    ratios: list
    max_ratio: float
    norm_representative: float
    within: bool
    growth_trace: np.ndarray = None
    growing: bool = None


def probe_ratio(pair, nu, mu, n, m, theorem="A1", grid=None, size=20, factor=10.0, norm_representative=None,
                growth_steps=10):
    """Compare the sampled operator ratio with the norm representative.

    For A1 the operator runs H^(n+m)_nu -> H^(n)_mu, for A2 H^(n)_nu ->
    H^(n+m)_mu. ``growth_trace`` holds the ratios for f_s = z_p^s,
    s = 2^i, i = 1..growth_steps; ``growing`` says whether it increases
    strictly and by more than a factor 10 overall.
    """
    if theorem == "A1":
        target, source = n, n + m
    elif theorem == "A2":
        target, source = n + m, n
    else:
        raise ValueError("theorem must be 'A1' or 'A2'")
    grid = grid if grid is not None else BallGrid(pair.N, dirs=64)
    ratios = [operator_ratio(pair, f, nu, mu, target, source, grid) for f in probe_family(pair.N, pair.p, size)]
    mx = max(ratios)
    within = None
    if norm_representative is not None:
        within = mx <= factor * norm_representative
    zp = MultiPoly.variable(pair.p, pair.N)
    trace = np.array([operator_ratio(pair, zp ** (2**i), nu, mu, target, source, grid)
                      for i in range(1, growth_steps + 1)])
    growing = bool(np.all(np.diff(trace) > 0) and trace[-1] > 10 * trace[0])
    return ProbeResult(ratios, mx, norm_representative, within, trace, growing)


def compact_probe(pair, nu, mu, n, m, grid=None, steps=10):
    """||W f_s|| for f_s = z_p^s / ||z_p^s||_{H^(n+m)_nu}, s = 2^i."""
    grid = grid if grid is not None else BallGrid(pair.N, dirs=64)
    radii = norm_radii(grid)
    Z, rr = sup_grid(grid, radii)
    zp = MultiPoly.variable(pair.p, pair.N)
    out = []
    for i in range(1, steps + 1):
        f = zp ** (2**i)
        fn = graded_norm(f, nu, n + m, grid, radii)
        Wf = operator_radial(pair, f, n, Z)
        w0 = abs(pair.psi.at_origin() * f(pair.phi.at_origin()))
        out.append((w0 + float(np.max(np.asarray(mu(rr)) * np.abs(Wf)))) / fn)
    return np.array(out)


__all__ = [
    "RadialTrace", "CriterionReport", "MembershipResult", "membership_class", "condition_n_mu",
    "lemma_inf_lambda", "boundedness_A1", "boundedness_A2", "compactness_C1", "compactness_C2",
    "stilde_membership", "StildeEvidence", "probe_ratio", "compact_probe", "resolve_n0", "SymbolPair",
    "threshold_text", "THRESHOLDS", "covers", "sphere_sup", "solve_in_ball",
]
