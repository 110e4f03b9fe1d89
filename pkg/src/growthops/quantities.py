"""Growth-space norms, the higher-order chain rule and the B-quantities.

Conventions:

* ``Z`` is an array of points of shape (P, N) (a single point of shape (N,)
  is accepted and gives scalars back).
* ``R^(k) phi`` tables have shape (k_max + 1, P, N) for maps and
  (k_max + 1, P) for scalar symbols.
* frak_B(i, j) = sum over compositions k of i into j parts and coordinate
  tuples l of C^i_k prod_t R^(k_t) phi_{l_t}; its component form fixes
  every l_t = p. script_B^n_j = sum_{i=j}^n C(n, i) R^(n-i) psi frak_B(i, j),
  with script_B^n_0 = R^(n) psi.

The chain rule itself carries a 1/j! in front of the j-th block (the
multinomials C^n_k count ordered blocks):

    R^(n)(f o phi) = sum_j 1/j! sum_l d^j f(phi)/dz_l sum_k C^n_k prod_t R^(k_t) phi_{l_t}.
"""

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .multiindex import compositions, coordinate_tuples, multinomial
from .sampling import BallGrid
from .symbols import MultiPoly, SelfMap, multiply, power, radial_table
from .weights import delta_norm_values


def _points(Z, N):
    Z = np.asarray(Z, dtype=np.complex128)
    single = Z.ndim == 1
    return Z.reshape(-1, N), single


def _out(v, single):
    return complex(v[0]) if single else v


@dataclass(frozen=True)
class SymbolPair:
    """The data (psi, phi, p) of a weighted composition operator W_{psi, phi}."""

    psi: object
    phi: SelfMap
    p: int = 1

    def __post_init__(self):
        if self.psi.dimension != self.phi.dimension:
            raise ValueError("psi and phi must act on the same ball")
        if not 1 <= self.p <= self.phi.N:
            raise ValueError("p must lie in 1..N")

    @property
    def N(self):
        return self.phi.dimension

    @property
    def phi_p(self):
        return self.phi.component(self.p)


def map_table(phi, Z, kmax):
    """R^(k) phi_l(Z) for k = 0..kmax and every component, shape (kmax+1, P, N)."""
    return np.stack([radial_table(c, Z, kmax) for c in phi.components], axis=-1)


def sup_grid(grid, radii=None):
    """Points for sup-over-ball estimates, shape (M, N), with their radii."""
    radii = grid.all_radii if radii is None else np.asarray(radii, dtype=float)
    pts = grid.points(radii)
    rr = np.repeat(radii, grid.directions.shape[0])
    return pts.reshape(-1, grid.N), rr


def norm_radii(grid):
    """Dense radii for norm estimates: 128 uniform plus the boundary sequence."""
    return np.unique(np.concatenate([np.linspace(0.0, 1.0, 129)[:-1], grid.all_radii]))


def graded_norm(f, w, n, grid=None, radii=None):
    """|f(0)| + sup over the grid of omega(|z|) |R^(n) f(z)|."""
    N = f.dimension
    grid = grid if grid is not None else BallGrid(N, dirs=64)
    Z, rr = sup_grid(grid, norm_radii(grid) if radii is None else radii)
    vals = np.abs(np.asarray(f.radial_eval(Z, n))) * np.asarray(w(rr), dtype=float)
    return abs(f.at_origin()) + float(np.max(vals))


def seminorm_trace(f, w, n, grid=None, radii=None):
    """sup over directions of omega(r)|R^(n) f| at each radius."""
    N = f.dimension
    grid = grid if grid is not None else BallGrid(N, dirs=64)
    radii = grid.all_radii if radii is None else np.asarray(radii, dtype=float)
    out = []
    for r in radii:
        v = np.abs(np.asarray(f.radial_eval(grid.shell(r), n)))
        out.append(float(w(r)) * float(v.max()))
    return radii, np.array(out)


# ---------------------------------------------------------------------------
# chain rule


def faa_di_bruno_radial(f, phi, n, Z):
    """R^(n)(f o phi) at Z via the higher-order chain rule."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not isinstance(f, MultiPoly):
        raise TypeError("f must be a polynomial")
    N = phi.N
    Zf, single = _points(Z, phi.dimension)
    T = map_table(phi, Zf, n)
    W = T[0]
    total = np.zeros(Zf.shape[0], dtype=np.complex128)
    partial_cache = {}
    for j in range(1, n + 1):
        ks = compositions(n, j)
        coeff = [multinomial(n, k) for k in ks]
        block = np.zeros_like(total)
        for l in coordinate_tuples(j, N):
            key = tuple(sorted(l))
            if key not in partial_cache:
                d = f.partial(key)
                partial_cache[key] = None if d.is_zero() else d(W)
            dv = partial_cache[key]
            if dv is None:
                continue
            s = np.zeros_like(total)
            for c, k in zip(coeff, ks):
                prod = np.full(Zf.shape[0], c, dtype=np.complex128)
                for kt, lt in zip(k, l):
                    prod *= T[kt, :, lt - 1]
                s += prod
            block += dv * s
        total += block / factorial(j)
    return _out(total, single)


def composed_radial_table(f, phi, n, Z):
    """R^(i)(f o phi)(Z) for i = 0..n, shape (n+1, P)."""
    Zf, _ = _points(Z, phi.dimension)
    rows = [np.asarray(f(phi(Zf)))]
    for i in range(1, n + 1):
        rows.append(np.asarray(faa_di_bruno_radial(f, phi, i, Zf)))
    return np.stack(rows)


def product_rule_radial(psi, f, phi, n, Z):
    """R^(n)(psi * (f o phi)) by the Leibniz rule over the chain-rule values."""
    if n < 0:
        raise ValueError("n must be >= 0")
    Zf, single = _points(Z, phi.dimension)
    comp = composed_radial_table(f, phi, n, Zf)
    ps = radial_table(psi, Zf, n)
    total = np.zeros(Zf.shape[0], dtype=np.complex128)
    for i in range(n + 1):
        total += comb(n, i) * ps[n - i] * comp[i]
    return _out(total, single)


def apply_operator(psi, phi, f, cap=None):
    """Exact psi * (f o phi) for polynomial data."""
    kw = {} if cap is None else {"cap": cap}
    comp = f.compose(phi, **kw)
    return multiply(psi, comp)


# ---------------------------------------------------------------------------
# the B-quantities


def frak_B_table(rtab, i, j):
    """frak_B(i, j) from a scalar table rtab[k] (k = 0..i) of radial derivatives.

    With rtab = R^(k) phi_p this is the component form; with
    rtab = sum_l R^(k) phi_l it is the full form, because the sum over
    coordinate tuples factorises over the slots.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    if i < j:
        return np.zeros_like(np.asarray(rtab[0], dtype=np.complex128))
    out = np.zeros_like(np.asarray(rtab[0], dtype=np.complex128))
    for k in compositions(i, j):
        prod = np.full(out.shape, multinomial(i, k), dtype=np.complex128)
        for kt in k:
            prod = prod * rtab[kt]
        out += prod
    return out


def frak_B(phi, i, j, Z, p=None, expand="factorized"):
    """frak_B(i, j) at Z for the full map (p=None) or its component p.

    ``phi`` may also be a scalar symbol, read as the component itself.
    ``expand='literal'`` sums the coordinate tuples term by term (N^j terms).
    """
    if isinstance(phi, SelfMap):
        Zf, single = _points(Z, phi.dimension)
        T = map_table(phi, Zf, i)
        if p is not None:
            return _out(frak_B_table(T[..., p - 1], i, j), single)
        if expand == "factorized":
            return _out(frak_B_table(T.sum(axis=-1), i, j), single)
        out = np.zeros(Zf.shape[0], dtype=np.complex128)
        if i < j:
            return _out(out, single)
        for k in compositions(i, j):
            c = multinomial(i, k)
            for l in coordinate_tuples(j, phi.N):
                prod = np.full(Zf.shape[0], c, dtype=np.complex128)
                for kt, lt in zip(k, l):
                    prod *= T[kt, :, lt - 1]
                out += prod
        return _out(out, single)
    Zf, single = _points(Z, phi.dimension)
    return _out(frak_B_table(radial_table(phi, Zf, i), i, j), single)


def script_B_from_tables(psi_tab, phi_tab, n, j):
    """script_B^n_j from R^(k) psi (k <= n) and a scalar table for frak_B."""
    if j == 0:
        return np.asarray(psi_tab[n], dtype=np.complex128)
    out = np.zeros_like(np.asarray(psi_tab[0], dtype=np.complex128))
    for i in range(j, n + 1):
        out += comb(n, i) * psi_tab[n - i] * frak_B_table(phi_tab, i, j)
    return out


def script_B_all(psi, phi_star, n, Z, full=False):
    """script_B^n_j for j = 0..n at Z, shape (n+1, P).

    ``phi_star`` is a SelfMap (full form when ``full`` is true) or a scalar
    component symbol.
    """
    Zf, _ = _points(Z, psi.dimension)
    psi_tab = radial_table(psi, Zf, n)
    if isinstance(phi_star, SelfMap):
        T = map_table(phi_star, Zf, n)
        if not full:
            raise ValueError("pass a component symbol, or full=True for the map")
        phi_tab = T.sum(axis=-1)
    else:
        phi_tab = radial_table(phi_star, Zf, n)
    return np.stack([script_B_from_tables(psi_tab, phi_tab, n, j) for j in range(n + 1)])


def script_B(pair, n, j, Z, variant="component"):
    """script_B^n_j(psi; phi_*) at Z; variant 'component' uses phi_p, 'full' uses phi."""
    if not 0 <= j:
        raise ValueError("j must be >= 0")
    Zf, single = _points(Z, pair.N)
    if j > n:
        return _out(np.zeros(Zf.shape[0], dtype=np.complex128), single)
    if variant == "component":
        tab = script_B_all(pair.psi, pair.phi_p, n, Zf)
    elif variant == "full":
        tab = script_B_all(pair.psi, pair.phi, n, Zf, full=True)
    else:
        raise ValueError("variant must be 'component' or 'full'")
    return _out(tab[j], single)


def psi_phi_literal(pair, n, j0, Z):
    """sum_{i=0}^{j0} script_B^n_{j0-i}(psi; phi_p) phi_p^i, the combination without binomials."""
    Zf, single = _points(Z, pair.N)
    tab = script_B_all(pair.psi, pair.phi_p, max(n, j0), Zf) if j0 > n else script_B_all(pair.psi, pair.phi_p, n, Zf)
    g = np.asarray(pair.phi_p(Zf))
    out = np.zeros(Zf.shape[0], dtype=np.complex128)
    for i in range(j0 + 1):
        jj = j0 - i
        if jj <= n:
            out += tab[jj] * g**i
    return _out(out, single)


def psi_phi_binomial(pair, n, j0, Z):
    """sum_{j=0}^{j0} C(j0, j) script_B^n_j(psi; phi_p) phi_p^(j0-j).

    This is the expansion of R^(n)(psi phi_p^j0) that follows from the chain
    rule applied to w -> w^j0.
    """
    Zf, single = _points(Z, pair.N)
    tab = script_B_all(pair.psi, pair.phi_p, n, Zf)
    g = np.asarray(pair.phi_p(Zf))
    out = np.zeros(Zf.shape[0], dtype=np.complex128)
    for j in range(min(j0, n) + 1):
        out += comb(j0, j) * tab[j] * g ** (j0 - j)
    return _out(out, single)


def psi_phi_direct(pair, n, j0, Z):
    """R^(n)(psi * phi_p^j0) at Z computed from the product symbol."""
    Zf, single = _points(Z, pair.N)
    prod = multiply(pair.psi, power(pair.phi_p, j0))
    return _out(np.asarray(prod.radial_eval(Zf, n)), single)


# ---------------------------------------------------------------------------
# bound checks


def partial_bound_check(f, w, n, l, Z, fnorm=None, grid=None):
    """|d^j f(z)/dz_l| over its bound representative, j = len(l).

    For j <= n the bound is ||delta_z||_{H^(n-j)} ||f||_{H^(n)}; for
    j = n + k it is ||f||_{H^(n)} / (omega(z)(1-|z|^2)^k).
    """
    Zf, single = _points(Z, f.dimension)
    j = len(l)
    fnorm = graded_norm(f, w, n, grid) if fnorm is None else fnorm
    d = np.abs(np.asarray(f.partial(l)(Zf)))
    r = np.linalg.norm(Zf, axis=1)
    if fnorm == 0:
        return _out(np.zeros(Zf.shape[0]), single)
    if j <= n:
        bound = delta_norm_values(w, n - j, r) * fnorm
    else:
        k = j - n
        bound = fnorm / (np.asarray(w(r), dtype=float) * (1 - r * r) ** k)
    res = d / bound
    return float(res[0]) if single else res


def dominance_ratio(pair, f, nu, mu, n, m, Z, fnorm=None, grid=None):
    """LHS/RHS of mu|R^(n) W f| <~ sum_j mu|script_B^n_j(psi; phi)| ||delta_{phi(z)}||_{H^(n+m-j)} ||f||.

    Points where the right-hand side vanishes are reported as NaN.
    """
    Zf, _ = _points(Z, pair.N)
    fnorm = graded_norm(f, nu, n + m, grid) if fnorm is None else fnorm
    lhs = np.abs(np.asarray(product_rule_radial(pair.psi, f, pair.phi, n, Zf)))
    tab = script_B_all(pair.psi, pair.phi, n, Zf, full=True)
    rphi = np.linalg.norm(pair.phi(Zf), axis=1)
    rhs = np.zeros(Zf.shape[0])
    for j in range(n + 1):
        rhs += np.abs(tab[j]) * delta_norm_values(nu, n + m - j, rphi)
    rhs *= fnorm
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(rhs > 0, lhs / rhs, np.nan)
