"""Deterministic sampling of the unit ball of C^N.

Directions come from a scrambled Halton sequence on the real (2N-1)-sphere
(pushed through the normal quantile and normalised) together with the N
coordinate directions e_p. Radii near the boundary follow r_m = 1 - 2**-m.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm, qmc


def boundary_radii(m_min=3, m_max=14):
    """r_m = 1 - 2**-m for m = m_min..m_max."""
    m = np.arange(m_min, m_max + 1, dtype=float)
    return 1.0 - 2.0 ** (-m)


def sphere_directions(N, count, seed=0):
    """``count`` unit vectors in C^N from a scrambled Halton sequence."""
    if count <= 0:
        return np.zeros((0, N), dtype=np.complex128)
    sampler = qmc.Halton(d=2 * N, scramble=True, seed=seed)
    u = sampler.random(count)
    u = np.clip(u, 1e-12, 1 - 1e-12)
    g = norm.ppf(u)
    v = g[:, :N] + 1j * g[:, N:]
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v


def coordinate_directions(N):
    return np.eye(N, dtype=np.complex128)


@dataclass(frozen=True)
class BallGrid:
    """Directions and radii used to estimate sup/inf over spheres |z| = r.

    ``max_m`` is the last trace radius 1 - 2**-max_m. Sup-over-ball estimates
    additionally use uniform interior radii and ``extra_m`` radii beyond the
    last trace radius so that restricted suprema at the final threshold are
    taken over a nonempty set.
    """

    N: int
    dirs: int = 256
    seed: int = 0
    m_min: int = 3
    max_m: int = 14
    extra_m: int = 4
    interior: int = 16
    antipodal: bool = False
    directions: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = np.vstack([sphere_directions(self.N, self.dirs, self.seed), coordinate_directions(self.N)])
        if self.antipodal:
            d = np.vstack([d, -d])
        object.__setattr__(self, "directions", d)

    @property
    def trace_radii(self):
        return boundary_radii(self.m_min, self.max_m)

    @property
    def trace_m(self):
        return np.arange(self.m_min, self.max_m + 1)

    @property
    def all_radii(self):
        """Radii for sup-over-ball estimates, increasing."""
        inner = np.linspace(0.0, 1.0, self.interior + 1)[:-1]
        outer = boundary_radii(1, self.max_m + self.extra_m)
        return np.unique(np.concatenate([inner, outer]))

    def shell(self, r):
        return r * self.directions

    def points(self, radii):
        """Array of shape (len(radii), n_directions, N)."""
        radii = np.asarray(radii, dtype=float)
        return radii[:, None, None] * self.directions[None, :, :]


@dataclass
class Shells:
    """Point sets grouped by radius: ``points[i]`` lies on |z| = ``radii[i]``
    (or, for window samplers, is indexed by ``radii[i]``)."""

    radii: np.ndarray
    points: list

    @classmethod
    def from_grid(cls, grid, radii=None):
        radii = grid.trace_radii if radii is None else np.asarray(radii, dtype=float)
        return cls(radii=radii, points=[grid.shell(r) for r in radii])
