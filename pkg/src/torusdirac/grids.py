"""Uniform 1-D grids, sampled complex functions, and difference stencils.

Everything downstream (operator application, residual checks, eigensolves)
runs on these two containers.  Periodic grids sample [0, 2pi) without the
right endpoint; Dirichlet grids sample the open interior of (x_min, x_max)
so that the homogeneous boundary values never appear as unknowns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Grid:
    """Uniform grid with n points and a boundary kind ('periodic' or 'dirichlet')."""

    n: int
    x_min: float = 0.0
    x_max: float = TWO_PI
    boundary: str = "periodic"

    def __post_init__(self):
        if self.n < 16:
            raise ValueError(f"grid needs n >= 16, got n={self.n}")
        if not self.x_min < self.x_max:
            raise ValueError("grid needs x_min < x_max")
        if self.boundary not in ("periodic", "dirichlet"):
            raise ValueError(f"unknown boundary kind {self.boundary!r}")
        if self.boundary == "periodic":
            if abs(self.x_min) > 1e-12 or abs(self.x_max - TWO_PI) > 1e-12:
                raise ValueError("periodic grids must span exactly [0, 2pi)")

    @property
    def h(self) -> float:
        if self.boundary == "periodic":
            return (self.x_max - self.x_min) / self.n
        return (self.x_max - self.x_min) / (self.n + 1)

    @property
    def points(self) -> np.ndarray:
        if self.boundary == "periodic":
            return self.x_min + self.h * np.arange(self.n)
        return self.x_min + self.h * (1.0 + np.arange(self.n))

    def refined(self, factor: int = 2) -> "Grid":
        """Same interval with factor-times as many points."""
        return Grid(self.n * factor, self.x_min, self.x_max, self.boundary)


@dataclass
class GridFunction:
    """Complex samples on a grid."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n,):
            raise GridMismatch(
                f"value array of length {self.values.shape} does not fit grid n={self.grid.n}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid function contains non-finite samples")

    def norm(self) -> float:
        """Discrete L2 norm with the uniform weight h."""
        return float(np.sqrt(self.grid.h) * np.linalg.norm(self.values))

    @classmethod
    def from_callable(cls, grid: Grid, f) -> "GridFunction":
        return cls(grid, np.asarray(f(grid.points), dtype=complex))


def same_grid(*gfs: GridFunction) -> Grid:
    g0 = gfs[0].grid
    for gf in gfs[1:]:
        if gf.grid != g0:
            raise GridMismatch("grid functions live on different grids")
    return g0


# ---------------------------------------------------------------------------
# second-order central stencils
# ---------------------------------------------------------------------------

def diff1(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Central first derivative; periodic wraparound or zero-padded Dirichlet."""
    v = np.asarray(values)
    h2 = 2.0 * grid.h
    if grid.boundary == "periodic":
        return (np.roll(v, -1) - np.roll(v, 1)) / h2
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / h2
    out[0] = v[1] / h2          # ghost value 0 at x_min
    out[-1] = -v[-2] / h2       # ghost value 0 at x_max
    return out


def diff2(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Standard three-point second derivative, same boundary handling."""
    v = np.asarray(values)
    hh = grid.h * grid.h
    if grid.boundary == "periodic":
        return (np.roll(v, -1) - 2.0 * v + np.roll(v, 1)) / hh
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / hh
    out[0] = (v[1] - 2.0 * v[0]) / hh
    out[-1] = (-2.0 * v[-1] + v[-2]) / hh
    return out


def diff2_fourth_order(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Five-point O(h^4) second derivative for residual measurements.

    Dirichlet grids fall back to the three-point stencil on the two points
    nearest each wall.
    """
    v = np.asarray(values)
    hh = 12.0 * grid.h * grid.h
    if grid.boundary == "periodic":
        return (
            -np.roll(v, -2) + 16.0 * np.roll(v, -1) - 30.0 * v
            + 16.0 * np.roll(v, 1) - np.roll(v, 2)
        ) / hh
    out = np.empty_like(v)
    out[2:-2] = (-v[4:] + 16.0 * v[3:-1] - 30.0 * v[2:-2] + 16.0 * v[1:-3] - v[:-4]) / hh
    three = diff2(v, grid)
    out[:2] = three[:2]
    out[-2:] = three[-2:]
    return out


# ---------------------------------------------------------------------------
# reproducible test functions for oracles and residual checks
# ---------------------------------------------------------------------------

def band_limited(grid: Grid, modes, rng=None, n_functions: int = 1) -> list[GridFunction]:
    """Random smooth periodic functions supported on the given Fourier modes."""
    rng = np.random.default_rng(rng)
    x = grid.points
    out = []
    for _ in range(n_functions):
        v = np.zeros(grid.n, dtype=complex)
        for m in modes:
            c = rng.standard_normal() + 1j * rng.standard_normal()
            v += c * np.exp(1j * m * x)
        out.append(GridFunction(grid, v))
    return out


def bump_window(grid: Grid, lo: float, hi: float) -> np.ndarray:
    """C-infinity bump equal to 1 well inside (lo, hi) and identically 0 outside.

    Used to compactly support test functions away from interval endpoints,
    e.g. when an operator coefficient is not periodic.
    """
    x = grid.points
    u = (2.0 * (x - lo) / (hi - lo)) - 1.0  # maps (lo, hi) -> (-1, 1)
    w = np.zeros_like(x)
    inside = np.abs(u) < 1.0
    w[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
    return w


def compact_test_functions(grid: Grid, modes, rng=None, n_functions: int = 1,
                           margin: float = 0.5) -> list[GridFunction]:
    """Band-limited functions multiplied by a bump vanishing near the interval ends."""
    w = bump_window(grid, grid.x_min + margin, grid.x_max - margin)
    return [
        GridFunction(grid, gf.values * w)
        for gf in band_limited(grid, modes, rng, n_functions)
    ]
