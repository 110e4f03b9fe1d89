"""Radial weights, their normality certificates and the iterated integrals I^k.

A weight is a positive radial profile t -> omega(t) on [0, 1), extended to
the ball by omega(z) = omega(|z|). Normality is witnessed by 0 < a < b and
delta in [0, 1): omega(t)/(1-t)^a must decrease to 0 and omega(t)/(1-t)^b
must increase to infinity on [delta, 1).

All point-evaluation norms here are the comparability representatives
1/omega (order 0) and 1 + I^n_omega (order n >= 1), with constants set to 1.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.interpolate import PchipInterpolator

from .errors import QuadratureError


@dataclass(frozen=True, eq=False)
class RadialWeight:
    """A radial weight with normality witnesses (a, b, delta).

    ``profile`` must accept floats and numpy arrays. ``kind`` and ``params``
    describe how the weight was built so that it can be written back to a
    config file.
    """

    profile: object
    a: float
    b: float
    delta: float = 0.0
    name: str = "weight"
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 < self.a < self.b:
            raise ValueError("witnesses must satisfy 0 < a < b")
        if not 0 <= self.delta < 1:
            raise ValueError("delta must lie in [0, 1)")

    def __call__(self, t):
        return self.profile(t)

    def at(self, Z):
        """omega(|z|) for points Z of shape (..., N)."""
        return self.profile(np.linalg.norm(np.asarray(Z), axis=-1))

    def __repr__(self):
        return f"RadialWeight({self.name}, a={self.a}, b={self.b}, delta={self.delta})"

    def key(self):
        """Hashable identity used for caching tables."""
        if self.kind == "custom":
            return ("custom", id(self))
        return (self.kind, tuple(sorted((k, _freeze(v)) for k, v in self.params.items())), self.a, self.b, self.delta)


def _freeze(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return tuple(_freeze(x) for x in v)
    return v


def standard_weight(alpha, a=None, b=None, delta=None):
    """omega(t) = (1 - t^2)^alpha.

    Default witnesses are a = alpha/2 and b = 2 alpha. With these,
    omega/(1-t)^a = (1+t)^alpha (1-t)^(alpha-a) decreases only for
    t >= a/(2 alpha - a), so that value (1/3 for the default a) is the
    default delta.
    """
    alpha = float(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    a = alpha / 2 if a is None else float(a)
    b = 2 * alpha if b is None else float(b)
    if delta is None:
        delta = max(0.0, a / (2 * alpha - a)) if a < alpha else 0.0

    def profile(t):
        return ((1.0 - t) * (1.0 + t)) ** alpha

    return RadialWeight(profile, a, b, float(delta), name=f"standard({alpha:g})", kind="standard",
                        params={"alpha": alpha})


def unit_weight(a=0.5, b=1.0):
    """The constant profile omega = 1. Not normal: (W1) fails at the limit."""

    def profile(t):
        return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0

    return RadialWeight(profile, a, b, 0.0, name="unit", kind="unit", params={})


def tabulated_weight(t, values, a, b, delta=0.0, name="tabulated"):
    """Monotone-cubic interpolation of (t, omega(t)) pairs.

    Interpolation runs in the coordinates s = -log(1 - t), log omega, where
    power-type profiles are close to linear; beyond the last node the last
    slope is continued.
    """
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    if t.ndim != 1 or t.shape != values.shape or t.size < 2:
        raise ValueError("need matching one-dimensional t and omega arrays with >= 2 points")
    if np.any(np.diff(t) <= 0) or t[0] < 0 or t[-1] >= 1:
        raise ValueError("t must be strictly increasing inside [0, 1)")
    if np.any(values <= 0):
        raise ValueError("omega values must be positive")
    s = -np.log1p(-t)
    lv = np.log(values)
    interp = PchipInterpolator(s, lv, extrapolate=False)
    last_slope = float(interp.derivative()(s[-1]))
    s0, s1, lv0, lv1 = s[0], s[-1], lv[0], lv[-1]

    def profile(x):
        x = np.asarray(x, dtype=float)
        sx = -np.log1p(-np.minimum(x, 1 - 1e-300))
        out = interp(np.clip(sx, s0, s1))
        out = np.where(sx > s1, lv1 + last_slope * (sx - s1), out)
        out = np.where(sx < s0, lv0, out)
        res = np.exp(out)
        return float(res) if res.ndim == 0 else res

    return RadialWeight(profile, float(a), float(b), float(delta), name=name, kind="tabulated",
                        params={"t": [float(x) for x in t], "omega": [float(x) for x in values]})


# ---------------------------------------------------------------------------
# normality certificate


@dataclass
class NormalityReport:
    passed: bool
    w1_monotone: bool
    w2_monotone: bool
    w1_limit: bool
    w2_limit: bool
    w1_slope: float
    w2_slope: float
    violations: list

    def summary(self):
        state = "pass" if self.passed else "fail"
        return (f"normality {state}: W1 monotone={self.w1_monotone} limit={self.w1_limit} "
                f"(slope {self.w1_slope:.3g}); W2 monotone={self.w2_monotone} limit={self.w2_limit} "
                f"(slope {self.w2_slope:.3g}); {len(self.violations)} violating pairs")


def certify_normal(w, grid_size=256, m_max=48, rtol=1e-12, limit_slope=0.01):
    """Check (W1)/(W2) on a grid of [delta, 1).

    The grid holds ``grid_size`` uniform points of [delta, 1) and the points
    1 - 2^-m lying in [delta, 1) for m <= m_max. Monotonicity is checked on
    consecutive pairs in log form. Limits are judged from the slope of
    log(omega/(1-t)^c) against -log(1-t) over the last eight geometric points:
    it must be <= -limit_slope for (W1) and >= +limit_slope for (W2).
    Each violation is recorded as (condition, t_i, t_{i+1}).
    """
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    d = w.delta
    uni = d + (1 - d) * np.arange(grid_size) / grid_size
    m = np.arange(1, m_max + 1)
    geo = 1.0 - 2.0 ** (-m.astype(float))
    geo = geo[geo >= d]
    t = np.unique(np.concatenate([uni, geo]))
    s = -np.log1p(-t)
    lw = np.log(np.asarray(w(t), dtype=float))
    g1 = lw + w.a * s
    g2 = lw + w.b * s
    tol = rtol * np.maximum(1.0, np.abs(g1))
    viol = []
    bad1 = np.nonzero(np.diff(g1) > tol[1:])[0]
    bad2 = np.nonzero(np.diff(g2) < -rtol * np.maximum(1.0, np.abs(g2[1:])))[0]
    viol += [("W1", float(t[i]), float(t[i + 1])) for i in bad1]
    viol += [("W2", float(t[i]), float(t[i + 1])) for i in bad2]

    sg = -np.log1p(-geo[-8:]) if geo.size >= 8 else s[-8:]
    lwg = np.log(np.asarray(w(geo[-8:] if geo.size >= 8 else t[-8:]), dtype=float))
    slope1 = float(np.polyfit(sg, lwg + w.a * sg, 1)[0])
    slope2 = float(np.polyfit(sg, lwg + w.b * sg, 1)[0])
    lim1 = slope1 <= -limit_slope
    lim2 = slope2 >= limit_slope
    if not lim1:
        viol.append(("W1-limit", float(geo[-8] if geo.size >= 8 else t[-8]), float(geo[-1] if geo.size else t[-1])))
    if not lim2:
        viol.append(("W2-limit", float(geo[-8] if geo.size >= 8 else t[-8]), float(geo[-1] if geo.size else t[-1])))
    ok = bad1.size == 0 and bad2.size == 0 and lim1 and lim2
    return NormalityReport(ok, bad1.size == 0, bad2.size == 0, lim1, lim2, slope1, slope2, viol)


# ---------------------------------------------------------------------------
# iterated integrals


def _breakpoints(r):
    # geometric splits towards r: 1 - t doubles from 1 - r on each piece
    pts = [r]
    gap = 1.0 - r
    while True:
        gap *= 2.0
        t = 1.0 - gap
        if t <= 0:
            break
        pts.append(t)
    pts.append(0.0)
    return sorted(set(pts))


def nested_integral(w, k, r, epsrel=1e-9):
    """I^k_omega(r) by the Cauchy collapse int_0^r (r-t)^(k-1)/(k-1)! / omega(t) dt.

    Raises :class:`QuadratureError` if scipy's adaptive quadrature reports an
    error estimate above ten times the requested relative tolerance.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    r = float(r)
    if not 0 <= r < 1:
        raise ValueError("r must lie in [0, 1)")
    if r == 0.0:
        return 0.0
    fk = math.factorial(k - 1)

    def integrand(t):
        return (r - t) ** (k - 1) / fk / w(t)

    total = 0.0
    err = 0.0
    pts = _breakpoints(r)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for lo, hi in zip(pts[:-1], pts[1:]):
            val, e = quad(integrand, lo, hi, epsabs=0.0, epsrel=epsrel, limit=200)
            total += val
            err += e
    if not np.isfinite(total) or err > 10 * epsrel * abs(total) + 1e-300:
        raise QuadratureError(f"integrand too singular at configured tolerance (k={k}, r={r}, err={err:.3g})")
    return total


def nested_quadrature(w, k, r, epsrel=1e-10):
    """I^k_omega(r) as the literal k-fold iterated integral (reference oracle).

    F_1(s) = int_0^s dt/omega(t), F_j(s) = int_0^s F_{j-1}(t) dt. Cost grows
    like (quadrature nodes)^k; meant for k <= 3.
    """
    if k < 1:
        raise ValueError("k must be >= 1")

    def F(j, s):
        if s == 0.0:
            return 0.0
        if j == 1:
            return quad(lambda t: 1.0 / w(t), 0.0, s, epsabs=0.0, epsrel=epsrel, limit=200)[0]
        return quad(lambda t: F(j - 1, t), 0.0, s, epsabs=0.0, epsrel=epsrel, limit=200)[0]

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return F(k, float(r))


@dataclass
class FinitenessVerdict:
    verdict: str  # "Finite" | "Divergent" | "Inconclusive"
    k: int
    radii: np.ndarray
    values: np.ndarray
    limit: float
    reason: str

    @property
    def finite(self):
        return self.verdict == "Finite"

    @property
    def divergent(self):
        return self.verdict == "Divergent"


def integral_at_one_finite(w, k, m_min=3, m_max=16, cauchy_tol=1e-6, slope_div=0.2,
                           ratio_div=0.98, ratio_geo=0.95):
    """Classify I^k_omega(1) as Finite, Divergent or Inconclusive.

    Values v_m = I^k(1 - 2^-m), m = m_min..m_max. With increments d_m:

    * Finite if the last four increments are below ``cauchy_tol`` relative,
      or if they decay geometrically (ratio < ``ratio_geo``) and the last
      three Aitken extrapolants agree to ``cauchy_tol`` (one pass, or a
      second pass over the first extrapolants).
    * Divergent if log v_m grows with slope >= ``slope_div`` per unit m over
      the last four points, or if the increments stop shrinking
      (ratio >= ``ratio_div`` over the last three), which catches
      logarithmic growth.

    For k <= 0 the verdict is Divergent: I^0 stands for 1/omega, which is
    unbounded for any weight tending to 0.
    """
    m = np.arange(m_min, m_max + 1)
    radii = 1.0 - 2.0 ** (-m.astype(float))
    if k <= 0:
        return FinitenessVerdict("Divergent", k, radii, np.full(radii.shape, np.inf), math.inf,
                                 "order <= 0 is the unbounded 1/omega")
    vals = np.array([nested_integral(w, k, r) for r in radii])
    d = np.diff(vals)
    last = vals[-1]
    if np.all(np.abs(d[-4:]) <= cauchy_tol * max(abs(last), 1e-300)):
        return FinitenessVerdict("Finite", k, radii, vals, float(last), "Cauchy increments below tolerance")
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = d[1:] / d[:-1]
    lv = np.log(np.maximum(vals[-4:], 1e-300))
    slope = float(np.polyfit(m[-4:].astype(float), lv, 1)[0])
    if slope >= slope_div:
        return FinitenessVerdict("Divergent", k, radii, vals, math.inf, f"log-value slope {slope:.3g} per unit m")
    if np.all(rho[-3:] >= ratio_div):
        return FinitenessVerdict("Divergent", k, radii, vals, math.inf,
                                 f"increments not shrinking (ratios {np.round(rho[-3:], 4).tolist()})")
    seq = vals
    for depth in (1, 2):
        ds = np.diff(seq)
        with np.errstate(divide="ignore", invalid="ignore"):
            rs = ds[1:] / ds[:-1]
        if seq.size < 6 or not np.all((rs[-3:] > 0) & (rs[-3:] < ratio_geo)):
            break
        seq = _aitken(seq)
        tail = seq[-3:]
        if np.max(np.abs(tail - tail[-1])) <= cauchy_tol * abs(tail[-1]):
            return FinitenessVerdict("Finite", k, radii, vals, float(tail[-1]),
                                     f"geometric increments (ratio {rs[-1]:.3g}); "
                                     f"Aitken limits agree after {depth} pass(es)")
    return FinitenessVerdict("Inconclusive", k, radii, vals, float("nan"), "no rule fired")


def _aitken(x):
    # Delta^2 extrapolation from consecutive triples
    d1 = x[1:-1] - x[:-2]
    d2 = x[2:] - x[1:-1]
    den = d2 - d1
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den != 0, x[2:] - d2 * d2 / den, x[2:])
    return out


def delta_norm(w, n, r):
    """Representative of the point-evaluation norm at |z| = r on H^(n)_omega."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1.0 / float(w(float(r)))
    return 1.0 + nested_integral(w, n, r)


# ---------------------------------------------------------------------------
# tabulated delta norms for grid evaluation


class DeltaNormTable:
    """Interpolated r -> 1 + I^n_omega(r) for vectorised evaluation.

    Nodes are 48 uniform radii in [0, 0.9] plus radii 1 - 0.1 * 2^(-i/4);
    interpolation is monotone cubic in (-log(1-r), log(1 + I)). Radii past
    the last node fall back to direct quadrature.
    """

    def __init__(self, w, n, s_max=24.0):
        if n < 1:
            raise ValueError("tables are for n >= 1; use 1/omega for n = 0")
        self.w = w
        self.n = n
        uni = np.linspace(0.0, 0.9, 48)
        i = np.arange(1, int(4 * s_max) + 1)
        geo = 1.0 - 0.1 * 2.0 ** (-i / 4.0)
        geo = geo[geo < 1.0]
        r = np.unique(np.concatenate([uni, geo]))
        vals = np.array([1.0 + nested_integral(w, n, x) for x in r])
        self.r_max = float(r[-1])
        self._s = -np.log1p(-r)
        self._interp = PchipInterpolator(self._s, np.log(vals), extrapolate=False)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.empty(r.shape)
        inside = r <= self.r_max
        out[inside] = np.exp(self._interp(-np.log1p(-r[inside])))
        for idx in zip(*np.nonzero(~inside)):
            out[idx] = 1.0 + nested_integral(self.w, self.n, float(r[idx]))
        return out


_table_cache = {}


def delta_norm_table(w, n):
    key = (w.key(), n)
    tab = _table_cache.get(key)
    if tab is None:
        tab = DeltaNormTable(w, n)
        _table_cache[key] = tab
    return tab


def delta_norm_values(w, n, r):
    """Vectorised delta_norm: 1/omega(r) for n = 0, else the cached table."""
    r = np.asarray(r, dtype=float)
    if n == 0:
        return 1.0 / np.asarray(w(r), dtype=float)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return delta_norm_table(w, n)(r)
