"""Involutive automorphisms gamma_alpha of the unit ball.

gamma_alpha(z) = (alpha - P(z) - s Q(z)) / (1 - <z, alpha>) with
s = sqrt(1 - |alpha|^2), P(z) = <z, alpha>/|alpha|^2 alpha and Q(z) = z - P(z);
gamma_0(z) = -z. The pairing <z, w> = sum z_i conj(w_i) is Hermitian.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .sampling import BallGrid
from .symbols import MultiPoly, RaySymbol, SelfMap, central_ray_derivative, ray_derivatives

POLE_TOL = 1e-12


def random_ball_points(N, count, rng, rmax=1.0, on_sphere=False):
    """Points uniformly distributed in the ball of radius ``rmax`` (or on its sphere)."""
    g = rng.standard_normal((count, N)) + 1j * rng.standard_normal((count, N))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    if on_sphere:
        return rmax * g
    r = rmax * rng.random(count) ** (1.0 / (2 * N))
    return r[:, None] * g


class MobiusMap:
    def __init__(self, alpha):
        alpha = np.atleast_1d(np.asarray(alpha, dtype=np.complex128))
        if alpha.ndim != 1:
            raise ValueError("alpha must be a point of C^N")
        self.alpha = alpha
        self.norm = float(np.linalg.norm(alpha))
        self.norm2 = self.norm**2
        if self.norm2 >= 1.0:
            raise ValueError("alpha must lie in the open unit ball")
        self.s = float(np.sqrt(1.0 - self.norm2))

    @property
    def N(self):
        return self.alpha.size

    dimension = N

    def __repr__(self):
        return f"MobiusMap(alpha={self.alpha.tolist()})"

    def pairing(self, Z):
        """<z, alpha> for points Z of shape (..., N)."""
        return np.asarray(Z, dtype=np.complex128) @ np.conj(self.alpha)

    def __call__(self, Z):
        return self.apply(Z)

    def apply(self, Z):
        Z = np.asarray(Z, dtype=np.complex128)
        if self.norm == 0.0:
            return -Z
        za = self.pairing(Z)
        den = 1.0 - za
        if np.any(np.abs(den) < POLE_TOL):
            warnings.warn("evaluation within 1e-12 of the pole <z, alpha> = 1", RuntimeWarning, stacklevel=2)
        # project on the unit vector so that tiny alpha does not underflow |alpha|^2
        u = self.alpha / self.norm
        P = (Z @ np.conj(u))[..., None] * u
        Q = Z - P
        return (self.alpha - P - self.s * Q) / den[..., None]

    def component_func(self, p):
        def f(Z):
            return self.apply(Z)[..., p - 1]

        return f

    @property
    def ray_radius(self):
        """Radius rho keeping the rays {t z: |t - 1| <= rho, |z| <= 1} off the pole."""
        a = np.sqrt(self.norm2)
        if a == 0:
            return 0.5
        return min(0.5, 0.5 * (1.0 / a - 1.0))

    def component(self, p):
        """gamma_p as a symbol (polynomial when alpha = 0)."""
        if self.norm == 0.0:
            return -MultiPoly.variable(p, self.N)
        return RaySymbol(self.component_func(p), self.N, ray_radius=self.ray_radius, nodes=48,
                         name=f"gamma_{p}")

    def as_selfmap(self):
        return SelfMap(self.component(p) for p in range(1, self.N + 1))

    def modulus_defect(self, Z):
        """Relative defect of 1 - |gamma(z)|^2 = (1-|alpha|^2)(1-|z|^2)/|1-<z,alpha>|^2."""
        Z = np.asarray(Z, dtype=np.complex128)
        lhs = 1.0 - np.sum(np.abs(self.apply(Z)) ** 2, axis=-1)
        rhs = (1.0 - self.norm2) * (1.0 - np.sum(np.abs(Z) ** 2, axis=-1)) / np.abs(1.0 - self.pairing(Z)) ** 2
        return np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-300)

    def radial_table(self, Z, kmax, method="contour"):
        """R^(k) gamma at Z for k = 0..kmax, shape (kmax+1, P, N)."""
        Z = np.asarray(Z, dtype=np.complex128).reshape(-1, self.N)
        if method == "contour":
            out = np.empty((kmax + 1, Z.shape[0], self.N), dtype=np.complex128)
            for p in range(1, self.N + 1):
                out[:, :, p - 1] = ray_derivatives(self.component_func(p), Z, kmax, self.ray_radius, 48)
            return out
        if method == "central":
            if kmax > 2:
                raise ValueError("central stencils cover k <= 2")
            out = [self.apply(Z)]
            for k in range(1, kmax + 1):
                out.append(central_ray_derivative(self.apply, Z, k))
            return np.stack(out)
        raise ValueError("method must be 'contour' or 'central'")


def involution_check(gamma, samples=100, seed=0, rmax=0.99, on_sphere=False):
    """max |gamma(gamma(z)) - z| over sampled points with |z| <= rmax."""
    rng = np.random.default_rng(seed)
    Z = random_ball_points(gamma.N, samples, rng, rmax, on_sphere)
    return float(np.max(np.abs(gamma.apply(gamma.apply(Z)) - Z)))


def radial_derivative_sup(gamma, k, grid=None, radii=None, method="contour"):
    """Estimate M^(k) = sup over the closed ball of |R^(k) gamma(z)|.

    The sup runs over grid directions at the given radii (default: 33
    uniform radii in [0, 1], the closed ball being allowed since gamma is
    holomorphic across the sphere).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    grid = grid if grid is not None else BallGrid(gamma.N, dirs=256)
    radii = np.linspace(0.0, 1.0, 33) if radii is None else np.asarray(radii, dtype=float)
    Z = grid.points(radii).reshape(-1, gamma.N)
    vals = gamma.radial_table(Z, k, method=method)[k]
    return float(np.max(np.linalg.norm(vals, axis=-1)))


@dataclass
class RatioTrend:
    radii: np.ndarray
    ratio: np.ndarray  # sup over directions of nu(z)/nu(gamma(z)) per radius
    coordinate_ratio: np.ndarray  # sup of nu(z_p)/nu(gamma_p(z))
    sup: float
    coordinate_sup: float
    decreasing: bool


def weight_ratio_trend(w, gamma, radii=None, directions=None, p=1):
    """Trace of nu(z)/nu(gamma(z)) and nu(z_p)/nu(gamma_p(z)) along rays.

    For a standard weight the first ratio has the closed form
    (|1 - <z, alpha>|^2 / (1 - |alpha|^2))^alpha, so its boundary values
    depend on the direction and are not zero in general.
    """
    if radii is None:
        radii = 1.0 - 2.0 ** -np.arange(3, 15, dtype=float)
    radii = np.asarray(radii, dtype=float)
    if directions is None:
        directions = np.eye(gamma.N, dtype=np.complex128)
    directions = np.asarray(directions, dtype=np.complex128).reshape(-1, gamma.N)
    ratio = []
    cratio = []
    for r in radii:
        Z = r * directions
        G = gamma.apply(Z)
        ratio.append(np.max(w.at(Z) / w.at(G)))
        cratio.append(np.max(w(np.abs(Z[:, p - 1])) / w(np.abs(G[:, p - 1]))))
    ratio = np.array(ratio)
    cratio = np.array(cratio)
    dec = bool(np.all(np.diff(ratio) <= 1e-15 * np.maximum(1, ratio[:-1])))
    return RatioTrend(radii, ratio, cratio, float(ratio.max()), float(cratio.max()), dec)


@dataclass
class ComponentBoundReport:
    samples: int
    violations: int
    max_excess: float
    Ap2: float
    A2: float
    constants_below_one: bool


def component_bound_constants(gamma, p):
    a = np.sqrt(gamma.norm2)
    Ap2 = 2 * abs(gamma.alpha[p - 1]) ** 2 / (a * (1 + a))
    A2 = (1 - a) / (1 + a)
    return float(Ap2), float(A2)


def component_bound_check(gamma, p, samples=2000, seed=0, rtol=1e-12):
    """Test |gamma_p(z)|^2 <= A_p^2 + A^2 |z'_p|^2 on random z.

    z' is the point with gamma(z') = gamma_p(z) e_p, i.e. z' = gamma(gamma_p(z) e_p)
    by the involution property. Reports how many samples violate the bound
    and whether A_p^2 + A^2 < 1.
    """
    if gamma.norm == 0:
        raise ValueError("the bound is stated for alpha != 0")
    rng = np.random.default_rng(seed)
    Z = random_ball_points(gamma.N, samples, rng, 0.999)
    gp = gamma.apply(Z)[:, p - 1]
    E = np.zeros_like(Z)
    E[:, p - 1] = gp
    Zp = gamma.apply(E)
    Ap2, A2 = component_bound_constants(gamma, p)
    lhs = np.abs(gp) ** 2
    rhs = Ap2 + A2 * np.abs(Zp[:, p - 1]) ** 2
    excess = lhs - rhs
    bad = excess > rtol
    return ComponentBoundReport(samples, int(np.sum(bad)), float(max(excess.max(), 0.0)), Ap2, A2, Ap2 + A2 < 1)
