"""Holomorphic symbols on the unit ball of C^N and their calculus.

Every symbol exposes the same small surface:

* ``dimension``
* ``__call__(Z)`` -- values at points (``Z`` of shape ``(..., N)``)
* ``radial_eval(Z, n)`` -- the n-th radial derivative R^(n) f at ``Z``,
  where R f(z) = sum_i z_i df/dz_i (unconjugated pairing)

:class:`MultiPoly` is exact and symbolic. :class:`GapSeries` holds a truncated
one-coordinate power series with sparse exponents (the lacunary symbols).
:class:`RaySymbol` wraps any holomorphic callable and obtains radial
derivatives from a contour stencil along the complex ray t -> f(t z).
"""

import math
from fractions import Fraction
from functools import cached_property
from math import comb

import numpy as np

from . import _kernels
from .errors import DomainError, ResourceCapError

DEFAULT_TERM_CAP = 10**6


def _as_points(Z, N):
    Z = np.asarray(Z, dtype=np.complex128)
    if Z.shape[-1] != N:
        raise ValueError(f"points must have trailing dimension {N}, got {Z.shape}")
    return Z


def _flat_call(fn, Z, N):
    Z = _as_points(Z, N)
    shape = Z.shape[:-1]
    out = fn(Z.reshape(-1, N))
    if shape == ():
        return complex(out[0])
    return out.reshape(shape)


def _clean(c):
    """Normalise a coefficient: keep ints/Fractions exact, fold integral complex."""
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, np.integer):
        return int(c)
    if isinstance(c, (float, np.floating)):
        return float(c)
    c = complex(c)
    return c


class MultiPoly:
    """Sparse polynomial in z_1, ..., z_N with exact-where-possible coefficients.

    ``terms`` maps exponent tuples beta in N_0^N to coefficients. Zero
    coefficients are never stored. Integer and Fraction coefficients stay
    exact through every operation; floats and complex numbers are carried as
    Python complex (double precision).
    """

    __slots__ = ("_terms", "_N", "__dict__")

    def __init__(self, terms, dimension=None):
        items = dict(terms)
        if dimension is None:
            if not items:
                raise ValueError("dimension required for the zero polynomial")
            dimension = len(next(iter(items)))
        clean = {}
        for beta, c in items.items():
            beta = tuple(int(b) for b in beta)
            if len(beta) != dimension:
                raise ValueError("exponent length does not match dimension")
            if any(b < 0 for b in beta):
                raise ValueError("negative exponent")
            c = _clean(c)
            if c != 0:
                clean[beta] = clean.get(beta, 0) + c
                if clean[beta] == 0:
                    del clean[beta]
        self._terms = clean
        self._N = int(dimension)

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c, dimension):
        return cls({(0,) * dimension: c}, dimension)

    @classmethod
    def zero(cls, dimension):
        return cls({}, dimension)

    @classmethod
    def variable(cls, p, dimension):
        """The coordinate function z_p (1-based p)."""
        if not 1 <= p <= dimension:
            raise ValueError("coordinate out of range")
        beta = [0] * dimension
        beta[p - 1] = 1
        return cls({tuple(beta): 1}, dimension)

    @classmethod
    def monomial(cls, beta, c=1):
        return cls({tuple(beta): c}, len(beta))

    # -- basic properties ---------------------------------------------------

    @property
    def dimension(self):
        return self._N

    @property
    def terms(self):
        return dict(self._terms)

    @property
    def degree(self):
        if not self._terms:
            return -1
        return max(sum(b) for b in self._terms)

    def is_zero(self):
        return not self._terms

    def coefficient(self, beta):
        return self._terms.get(tuple(beta), 0)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self._N == other._N and self._terms == other._terms
        if isinstance(other, (int, float, complex, Fraction)):
            return self == MultiPoly.constant(other, self._N)
        return NotImplemented

    def __hash__(self):
        return hash((self._N, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"MultiPoly(0, N={self._N})"
        parts = []
        for beta in sorted(self._terms):
            mon = "*".join(f"z{i + 1}^{b}" if b > 1 else f"z{i + 1}" for i, b in enumerate(beta) if b)
            parts.append(f"({self._terms[beta]})" + (f"*{mon}" if mon else ""))
        return "MultiPoly(" + " + ".join(parts) + ")"

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other._N != self._N:
                raise ValueError("dimension mismatch")
            return other
        if isinstance(other, (int, float, complex, Fraction, np.number)):
            return MultiPoly.constant(other, self._N)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for beta, c in other._terms.items():
            out[beta] = out.get(beta, 0) + c
        return MultiPoly(out, self._N)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({b: -c for b, c in self._terms.items()}, self._N)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for b1, c1 in self._terms.items():
            for b2, c2 in other._terms.items():
                beta = tuple(x + y for x, y in zip(b1, b2))
                out[beta] = out.get(beta, 0) + c1 * c2
        return MultiPoly(out, self._N)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.constant(1, self._N)
        base = self
        k = int(k)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- calculus -----------------------------------------------------------

    def partial(self, l):
        """Iterated partial derivative d^j / dz_{l_1} ... dz_{l_j} (1-based l)."""
        counts = [0] * self._N
        for li in l:
            if not 1 <= li <= self._N:
                raise ValueError("coordinate out of range")
            counts[li - 1] += 1
        out = {}
        for beta, c in self._terms.items():
            if any(b < k for b, k in zip(beta, counts)):
                continue
            factor = 1
            for b, k in zip(beta, counts):
                for s in range(k):
                    factor *= b - s
            out[tuple(b - k for b, k in zip(beta, counts))] = c * factor
        return MultiPoly(out, self._N)

    def radial(self, n=1):
        """R^(n) f, using R z^beta = |beta| z^beta."""
        if n < 0:
            raise ValueError("order must be nonnegative")
        if n == 0:
            return self
        return MultiPoly({b: c * sum(b) ** n for b, c in self._terms.items()}, self._N)

    def gradient_pairing(self):
        """sum_i z_i * df/dz_i computed from partials (the unrolled definition)."""
        out = MultiPoly.zero(self._N)
        for i in range(1, self._N + 1):
            out = out + MultiPoly.variable(i, self._N) * self.partial((i,))
        return out

    def compose(self, phi, cap=DEFAULT_TERM_CAP):
        """f o phi for a polynomial self-map (or any sequence of MultiPoly)."""
        comps = phi.components if isinstance(phi, SelfMap) else tuple(phi)
        if len(comps) != self._N:
            raise ValueError("f dimension must equal the number of components")
        if not all(isinstance(c, MultiPoly) for c in comps):
            raise TypeError("symbolic composition needs polynomial components")
        M = comps[0].dimension
        powers = [[MultiPoly.constant(1, M)] for _ in comps]

        def power(i, k):
            while len(powers[i]) <= k:
                powers[i].append(powers[i][-1] * comps[i])
                if len(powers[i][-1]) > cap:
                    raise ResourceCapError(f"intermediate term count exceeds cap {cap}")
            return powers[i][k]

        out = {}
        for beta, c in self._terms.items():
            term = MultiPoly.constant(c, M)
            for i, b in enumerate(beta):
                if b:
                    term = term * power(i, b)
            for g, v in term._terms.items():
                out[g] = out.get(g, 0) + v
            if len(out) > cap:
                raise ResourceCapError(f"term count exceeds cap {cap}")
        return MultiPoly(out, M)

    # -- evaluation ---------------------------------------------------------

    @cached_property
    def _arrays(self):
        if not self._terms:
            return np.zeros((0, self._N), dtype=np.int64), np.zeros(0, dtype=np.complex128)
        keys = sorted(self._terms)
        exps = np.array(keys, dtype=np.int64).reshape(len(keys), self._N)
        coeffs = np.array([complex(self._terms[k]) for k in keys], dtype=np.complex128)
        return exps, coeffs

    def _eval_flat(self, Zf):
        exps, coeffs = self._arrays
        if exps.shape[0] == 0:
            return np.zeros(Zf.shape[0], dtype=np.complex128)
        return _kernels.poly_eval(exps, coeffs, Zf)

    def __call__(self, Z):
        return _flat_call(self._eval_flat, Z, self._N)

    def eval_exact(self, z):
        """Exact evaluation at a point with Fraction / Gaussian-rational entries.

        ``z`` entries may be ints, Fractions or (re, im) pairs of those;
        returns a (re, im) pair of Fractions. Requires exact coefficients.
        """
        pts = []
        for x in z:
            if isinstance(x, tuple):
                pts.append((Fraction(x[0]), Fraction(x[1])))
            else:
                pts.append((Fraction(x), Fraction(0)))
        re_acc, im_acc = Fraction(0), Fraction(0)
        for beta, c in self._terms.items():
            if isinstance(c, complex):
                raise TypeError("exact evaluation needs integer or Fraction coefficients")
            mr, mi = Fraction(c), Fraction(0)
            for (xr, xi), b in zip(pts, beta):
                for _ in range(b):
                    mr, mi = mr * xr - mi * xi, mr * xi + mi * xr
            re_acc += mr
            im_acc += mi
        return re_acc, im_acc

    def radial_eval(self, Z, n=0):
        return self._radial_cached(n)(Z)

    def _radial_cached(self, n):
        cache = self.__dict__.setdefault("_radial_cache", {})
        if n not in cache:
            cache[n] = self.radial(n)
        return cache[n]

    def at_origin(self):
        return complex(self._terms.get((0,) * self._N, 0))


class GapSeries:
    """Truncated series sum_k c_k z_p**e_k in the single coordinate z_p.

    Exponents are kept as Python integers (they may be as large as q**K).
    Evaluation is only defined on the open ball.
    """

    def __init__(self, p, dimension, coefficients, exponents):
        if not 1 <= p <= dimension:
            raise ValueError("coordinate out of range")
        if len(coefficients) != len(exponents):
            raise ValueError("coefficients and exponents differ in length")
        self.p = int(p)
        self._N = int(dimension)
        self.coefficients = tuple(complex(c) if isinstance(c, complex) else float(c) for c in coefficients)
        self.exponents = tuple(int(e) for e in exponents)
        if any(e < 0 for e in self.exponents):
            raise ValueError("negative exponent")

    @property
    def dimension(self):
        return self._N

    def __len__(self):
        return len(self.coefficients)

    def __repr__(self):
        return f"GapSeries(p={self.p}, N={self._N}, terms={len(self)})"

    @cached_property
    def _coeff_array(self):
        return np.array(self.coefficients, dtype=np.complex128)

    @cached_property
    def _exp_array(self):
        return np.array(self.exponents, dtype=np.float64)

    def _check_domain(self, Zf):
        if Zf.size and np.max(np.linalg.norm(Zf, axis=1)) >= 1.0:
            raise DomainError("series symbols are only defined for |z| < 1")

    def _eval_scaled(self, Zf, n):
        self._check_domain(Zf)
        c = self._coeff_array
        if n:
            c = c * self._exp_array ** n
        return _kernels.gap_eval(c, self._exp_array, Zf[:, self.p - 1])

    def __call__(self, Z):
        return _flat_call(lambda Zf: self._eval_scaled(Zf, 0), Z, self._N)

    def radial_eval(self, Z, n=0):
        """R^(n) of the series at Z: term-wise scaling by e_k**n."""
        return _flat_call(lambda Zf: self._eval_scaled(Zf, n), Z, self._N)

    radial_series = radial_eval

    def radial(self, n=1):
        c = [ck * float(e) ** n for ck, e in zip(self.coefficients, self.exponents)]
        return GapSeries(self.p, self._N, c, self.exponents)

    def antiderivative_p(self, order):
        """``order``-fold integral from 0 in the variable z_p.

        c z_p^e  ->  c / ((e+1)...(e+order)) z_p^(e+order).
        """
        if order < 0:
            raise ValueError("order must be nonnegative")
        coeffs = []
        for c, e in zip(self.coefficients, self.exponents):
            denom = 1.0
            for s in range(1, order + 1):
                denom *= e + s
            coeffs.append(c / denom)
        return GapSeries(self.p, self._N, coeffs, [e + order for e in self.exponents])

    def at_origin(self):
        return complex(sum(c for c, e in zip(self.coefficients, self.exponents) if e == 0))


class LacunarySeries(GapSeries):
    """sum_{k<=K} a_k z_p^(q^k) with a_k = q^(k(alpha-1) + alpha/2)."""

    def __init__(self, p=1, dimension=1, q=10, alpha=0.5, K=8):
        if q < 2 or int(q) != q:
            raise ValueError("q must be an integer >= 2")
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        self.q = int(q)
        self.alpha = float(alpha)
        self.K = int(K)
        ks = range(self.K + 1)
        coeffs = [self.q ** (k * (self.alpha - 1) + self.alpha / 2) for k in ks]
        exps = [self.q**k for k in ks]
        super().__init__(p, dimension, coeffs, exps)

    def __repr__(self):
        return f"LacunarySeries(p={self.p}, N={self._N}, q={self.q}, alpha={self.alpha}, K={self.K})"

    def log_ratio_defects(self):
        """log(a_k n_k^(1-alpha)) - (alpha/2) log q for k = 0..K (should vanish)."""
        lq = math.log(self.q)
        return [
            math.log(a) + (1 - self.alpha) * math.log(e) - 0.5 * self.alpha * lq
            for a, e in zip(self.coefficients, self.exponents)
        ]

    def tail_bound(self, r, n=0, extra=60):
        """sum_{k>K} a_k n_k^n r^(n_k), the truncation error of R^(n) at radius r."""
        if not 0 <= r < 1:
            raise DomainError("radius must lie in [0, 1)")
        if r == 0:
            return 0.0
        lr = math.log(r)
        total = 0.0
        for k in range(self.K + 1, self.K + 1 + extra):
            nk = float(self.q) ** k
            logterm = (k * (self.alpha - 1) + self.alpha / 2) * math.log(self.q) + n * math.log(nk) + nk * lr
            if logterm < -745:
                break
            total += math.exp(logterm)
        return total


# ---------------------------------------------------------------------------
# contour stencils along complex rays


def _stirling2_table(n):
    S = [[0] * (n + 1) for _ in range(n + 1)]
    S[0][0] = 1
    for i in range(1, n + 1):
        for k in range(1, i + 1):
            S[i][k] = k * S[i - 1][k] + S[i - 1][k - 1]
    return S


def ray_derivatives(func, Z, kmax, radius=0.5, nodes=32):
    """R^(k) func at each row of Z for k = 0..kmax.

    h(t) = func(t z) is sampled on the circle |t - 1| = radius; its Taylor
    coefficients at t = 1 follow from a discrete Fourier transform, and
    (t d/dt)^k = sum_i S(k, i) t^i (d/dt)^i converts them to radial
    derivatives. ``func`` must be holomorphic on the closed disc of rays.
    Returns an array of shape (kmax + 1, P).
    """
    Z = np.asarray(Z, dtype=np.complex128)
    P, N = Z.shape
    w = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    t = 1.0 + radius * w
    pts = (t[:, None, None] * Z[None, :, :]).reshape(-1, N)
    h = np.asarray(func(pts), dtype=np.complex128).reshape(nodes, P)
    coeffs = np.fft.fft(h, axis=0) / nodes
    m = np.arange(kmax + 1)
    taylor = coeffs[: kmax + 1] / radius ** m[:, None]
    S = _stirling2_table(kmax)
    out = np.zeros((kmax + 1, P), dtype=np.complex128)
    for k in range(kmax + 1):
        for i in range(k + 1):
            if S[k][i]:
                out[k] += S[k][i] * math.factorial(i) * taylor[i]
    return out


def central_ray_derivative(func, Z, k, h=1e-4, richardson=True):
    """R^(k) func for k in {1, 2} from real central differences along t -> func(t z).

    R f = h'(1) and R^2 f = h''(1) + h'(1). With ``richardson`` the step-h
    and step-h/2 estimates are combined to cancel the O(h^2) term.
    """
    if k not in (1, 2):
        raise ValueError("central stencils are provided for k = 1, 2")
    Z = np.asarray(Z, dtype=np.complex128)

    def est(step):
        fp = func((1 + step) * Z)
        fm = func((1 - step) * Z)
        d1 = (fp - fm) / (2 * step)
        if k == 1:
            return d1
        f0 = func(Z)
        d2 = (fp - 2 * f0 + fm) / step**2
        return d2 + d1

    a = est(h)
    if not richardson:
        return a
    b = est(h / 2)
    return b + (b - a) / 3.0


class RaySymbol:
    """A holomorphic function given by a vectorised callable ``func(Z) -> values``.

    Radial derivatives use :func:`ray_derivatives`; ``ray_radius`` must keep
    the rays {t z : |t - 1| <= ray_radius} inside the function's domain.
    """

    def __init__(self, func, dimension, ray_radius=0.5, nodes=32, name="ray"):
        self.func = func
        self._N = int(dimension)
        self.ray_radius = float(ray_radius)
        self.nodes = int(nodes)
        self.name = name

    @property
    def dimension(self):
        return self._N

    def __repr__(self):
        return f"RaySymbol({self.name}, N={self._N})"

    def __call__(self, Z):
        return _flat_call(lambda Zf: np.asarray(self.func(Zf), dtype=np.complex128), Z, self._N)

    def radial_eval(self, Z, n=0):
        if n == 0:
            return self(Z)

        def fn(Zf):
            return ray_derivatives(self.func, Zf, n, self.ray_radius, self.nodes)[n]

        return _flat_call(fn, Z, self._N)

    def radial_table(self, Z, kmax):
        """Array (kmax+1, ...) of R^(k) at Z in one stencil pass."""
        Z = _as_points(Z, self._N)
        shape = Z.shape[:-1]
        out = ray_derivatives(self.func, Z.reshape(-1, self._N), kmax, self.ray_radius, self.nodes)
        return out.reshape((kmax + 1,) + shape)

    def at_origin(self):
        return complex(self(np.zeros(self._N)))


class ProductSymbol:
    """Pointwise product of two symbols; radial derivatives by the Leibniz rule."""

    def __init__(self, a, b):
        if a.dimension != b.dimension:
            raise ValueError("dimension mismatch")
        self.a = a
        self.b = b

    @property
    def dimension(self):
        return self.a.dimension

    def __repr__(self):
        return f"ProductSymbol({self.a!r}, {self.b!r})"

    def __call__(self, Z):
        return self.a(Z) * self.b(Z)

    def radial_eval(self, Z, n=0):
        total = 0
        for i in range(n + 1):
            total = total + comb(n, i) * self.a.radial_eval(Z, n - i) * self.b.radial_eval(Z, i)
        return total

    def at_origin(self):
        return self.a.at_origin() * self.b.at_origin()


def multiply(a, b):
    """Product of two symbols, symbolic when both are polynomials."""
    if isinstance(a, MultiPoly) and isinstance(b, MultiPoly):
        return a * b
    return ProductSymbol(a, b)


def power(a, j):
    """a**j as a symbol (j >= 0)."""
    if isinstance(a, MultiPoly):
        return a**j
    out = MultiPoly.constant(1, a.dimension)
    for _ in range(j):
        out = multiply(out, a)
    return out


def radial_table(symbol, Z, kmax):
    """Stack of R^(k) symbol at Z for k = 0..kmax."""
    if isinstance(symbol, RaySymbol):
        return symbol.radial_table(Z, kmax)
    return np.stack([np.asarray(symbol.radial_eval(Z, k)) for k in range(kmax + 1)])


class SelfMap:
    """phi = (phi_1, ..., phi_N), a holomorphic map of the ball into itself.

    Components are symbols of a common dimension (polynomials in practice;
    rational components enter as :class:`RaySymbol`).
    """

    def __init__(self, components):
        comps = tuple(components)
        if not comps:
            raise ValueError("a self-map needs at least one component")
        dims = {c.dimension for c in comps}
        if len(dims) != 1:
            raise ValueError("components must share one dimension")
        self.components = comps

    @classmethod
    def identity(cls, N):
        return cls(MultiPoly.variable(i, N) for i in range(1, N + 1))

    @classmethod
    def scaled_identity(cls, c, N):
        return cls(c * MultiPoly.variable(i, N) for i in range(1, N + 1))

    @property
    def dimension(self):
        return self.components[0].dimension

    @property
    def N(self):
        return len(self.components)

    def is_polynomial(self):
        return all(isinstance(c, MultiPoly) for c in self.components)

    def component(self, p):
        """phi_p (1-based)."""
        return self.components[p - 1]

    def __call__(self, Z):
        return np.stack([np.asarray(c(Z)) for c in self.components], axis=-1)

    def radial_eval(self, Z, k):
        return np.stack([np.asarray(c.radial_eval(Z, k)) for c in self.components], axis=-1)

    def at_origin(self):
        return np.array([c.at_origin() for c in self.components])

    def __repr__(self):
        return f"SelfMap({list(self.components)!r})"

    def self_map_evidence(self, directions=None, count=2048, seed=0):
        """Sampled sup of |phi| over the unit sphere (max modulus gives the ball sup).

        Returns ``(sup, margin)`` with margin = 1 - sup. Polynomial maps with
        sup <= 1 on the sphere send the open ball into the closed ball, and
        into the open ball unless constant.
        """
        from .sampling import coordinate_directions, sphere_directions

        if directions is None:
            directions = np.vstack([sphere_directions(self.dimension, count, seed),
                                    coordinate_directions(self.dimension)])
        r = 1.0 if self.is_polynomial() else 1.0 - 1e-9
        vals = np.linalg.norm(self(r * directions), axis=-1)
        sup = float(np.max(vals))
        return sup, 1.0 - sup


def eval_point(symbol, z):
    """Scalar value of a symbol at a single point."""
    return complex(symbol(np.asarray(z, dtype=np.complex128)))


def unit_disc_mobius(a):
    """The one-variable map w -> (w - a) / (1 - conj(a) w)."""
    a = complex(a)

    def f(w):
        return (w - a) / (1 - np.conj(a) * w)

    return f


def coordinate_mobius(p, dimension, a, nodes=32):
    """phi_p(z) = (z_p - a) / (1 - z_p conj(a)) as a ray-evaluated symbol."""
    g = unit_disc_mobius(a)
    radius = 0.5 if abs(a) <= 0.5 else 0.5 * (1.0 / abs(a) - 1.0)

    def func(Z):
        return g(Z[:, p - 1])

    return RaySymbol(func, dimension, ray_radius=radius, nodes=nodes, name=f"mobius_z{p}({a})")
