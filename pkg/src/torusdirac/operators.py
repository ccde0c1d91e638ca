"""Torus Dirac kernel and its reduction to second-order problems.

After the exp(i k u) ansatz the operator acts on two-component functions of
x alone.  Its off-diagonal entries combine a first derivative with the
multiplicative coefficients

    W1(x) = (a/2) sin x - (i e / a) A_x(x)
    W2(x) = -i e a A_u(x) / R(x)
    Q(x)  = (k + e a A_u(x)) / R(x)      (the reduced angular + gauge term)

Two assembly conventions exist because the source system is printed with an
ambiguous second row.  'matrix_literal' uses -(1/a) d/dx in both rows;
'fg' (default) negates the second row, which is the reading whose square
reproduces the decoupled equations with a positive eigenvalue scale.  The
decoupled coefficients themselves are identical either way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateGeometry, GridMismatch, VelocityZero
from .fields import (
    FermiVelocity,
    GaugeField,
    eval_fermi_velocity,
    eval_gauge,
    eval_gauge_derivatives,
)
from .geometry import TorusParams, radius_derivative, radius_profile
from .grids import Grid, GridFunction, diff1, same_grid

CONVENTIONS = ("fg", "matrix_literal")


@dataclass(frozen=True)
class W12Pair:
    """Sampled off-diagonal coefficients W1 and W2."""

    w1: complex
    w2: complex


@dataclass
class SpinorGF:
    """Two-component spinor sampled on a common grid."""

    psi1: GridFunction
    psi2: GridFunction

    def __post_init__(self):
        same_grid(self.psi1, self.psi2)

    @property
    def grid(self) -> Grid:
        return self.psi1.grid

    def norm(self) -> float:
        return float(np.sqrt(self.psi1.norm() ** 2 + self.psi2.norm() ** 2))


@dataclass
class SLProblem:
    """Second-order problem  -psi'' + sigma psi' + rho psi = eigen_scale * lam * w(x) * psi.

    `weight` is None for the constant-velocity case (w = 1); the
    position-dependent case carries w = 1/V_F^2 with eigen_scale = a^2 and
    lam = E^2.
    """

    grid: Grid
    sector: str  # 'plus' or 'minus'
    sigma: np.ndarray = field(repr=False)
    rho: np.ndarray = field(repr=False)
    eigen_scale: float = 1.0
    weight: Optional[np.ndarray] = field(default=None, repr=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.sigma = np.asarray(self.sigma, dtype=complex)
        self.rho = np.asarray(self.rho, dtype=complex)
        if self.sigma.shape != (self.grid.n,) or self.rho.shape != (self.grid.n,):
            raise GridMismatch("coefficient samples do not match the grid")
        if not (np.all(np.isfinite(self.sigma)) and np.all(np.isfinite(self.rho))):
            raise ValueError("non-finite coefficients on interior grid points")
        if self.eigen_scale <= 0:
            raise ValueError("eigen_scale must be positive")

    def apply(self, gf: GridFunction, second_derivative: str = "d2") -> GridFunction:
        """Apply -d2 + sigma d1 + rho with the chosen second-derivative stencil.

        'd1d1' composes the central first-derivative stencil with itself,
        which is the discrete operator a squared first-order system actually
        produces; 'd2' is the standard three-point Laplacian.
        """
        if gf.grid != self.grid:
            raise GridMismatch("operand grid differs from problem grid")
        v = gf.values
        if second_derivative == "d1d1":
            dd = diff1(diff1(v, self.grid), self.grid)
        else:
            from .grids import diff2

            dd = diff2(v, self.grid)
        return GridFunction(self.grid, -dd + self.sigma * diff1(v, self.grid) + self.rho * v)


def _check_ring(params: TorusParams, x: np.ndarray) -> np.ndarray:
    r = radius_profile(params, x)
    if np.min(np.abs(r)) < 1e-12:
        raise DegenerateGeometry("ring radius vanishes on the grid")
    return r


def dirac_offdiag(params: TorusParams, gauge: GaugeField, x) -> W12Pair:
    """W1 and W2 at a single angle."""
    xs = np.asarray([x], dtype=float)
    r = _check_ring(params, xs)[0]
    ax, au = eval_gauge(gauge, params, xs)
    w1 = 0.5 * params.a * np.sin(x) - 1j * gauge.e / params.a * ax[0]
    w2 = -1j * gauge.e * params.a * au[0] / r
    return W12Pair(w1=complex(w1), w2=complex(w2))


def _w1_q(params: TorusParams, gauge: GaugeField, k: int, e: float, x: np.ndarray):
    """Return (W1, Q) sampled on x."""
    r = _check_ring(params, x)
    ax, au = eval_gauge(gauge, params, x)
    w1 = 0.5 * params.a * np.sin(x) - 1j * e / params.a * ax
    q = (k + e * params.a * au) / r
    return w1, q


def _coefficients(params: TorusParams, gauge: GaugeField, k: int, e: float,
                  x: np.ndarray):
    """Return (W1, Q, W1', Q') sampled on x."""
    r = _check_ring(params, x)
    rp = radius_derivative(params, x)
    w1, q = _w1_q(params, gauge, k, e, x)
    _, au = eval_gauge(gauge, params, x)
    axp, aup = eval_gauge_derivatives(gauge, params, x)
    w1p = 0.5 * params.a * np.cos(x) - 1j * e / params.a * axp
    qp = e * params.a * aup / r - (k + e * params.a * au) * rp / r ** 2
    return w1, q, w1p, qp


def apply_dirac(params: TorusParams, gauge: GaugeField, k: int, grid: Grid,
                spinor: SpinorGF, convention: str = "fg") -> SpinorGF:
    """Apply the reduced Dirac operator to a spinor on a periodic grid."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if grid.boundary != "periodic":
        raise GridMismatch("the Dirac kernel is applied on periodic grids")
    if spinor.grid != grid:
        raise GridMismatch("spinor grid differs from the requested grid")
    x = grid.points
    w1, q = _w1_q(params, gauge, k, gauge.e, x)
    inv_a = 1.0 / params.a
    d1 = diff1(spinor.psi1.values, grid)
    d2 = diff1(spinor.psi2.values, grid)
    out1 = -inv_a * d2 + (w1 - q) * spinor.psi2.values
    out2 = -inv_a * d1 + (w1 + q) * spinor.psi1.values
    if convention == "fg":
        out2 = -out2
    return SpinorGF(GridFunction(grid, out1), GridFunction(grid, out2))


def decouple_constant_vf(params: TorusParams, gauge: GaugeField, k: int, e: float,
                         grid: Grid):
    """Decoupled plus/minus problems for constant Fermi velocity.

    sigma = a^2 sin x - 2 i e A_x
    rho_plus  = a (W1 + Q)' - a^2 (W1 - Q)(W1 + Q)
    rho_minus = a (W1 - Q)' - a^2 (W1 - Q)(W1 + Q)

    so that the minus sector is exactly the k -> -k, A_u -> -A_u image of
    the plus sector.  Eigenvalue normalization: lam = (E/V_F - Delta)^2 with
    eigen_scale = a^2.
    """
    x = grid.points
    r = _check_ring(params, x)
    w1, q, w1p, qp = _coefficients(params, gauge, k, e, x)
    a = params.a
    m, p = w1 - q, w1 + q
    mp = m * p
    sigma = 2.0 * a * w1
    rho_plus = a * (w1p + qp) - a * a * mp
    rho_minus = a * (w1p - qp) - a * a * mp
    meta = {"k": k, "e": e, "gauge_kind": gauge.kind,
            "eigen_relation": "lam = (E/V_F - Delta)^2",
            "square_sign": {"fg": +1, "matrix_literal": -1}}
    return (
        SLProblem(grid, "plus", sigma, rho_plus, eigen_scale=a * a, meta=dict(meta)),
        SLProblem(grid, "minus", sigma, rho_minus, eigen_scale=a * a, meta=dict(meta)),
    )


def decouple_pdfv(params: TorusParams, gauge: GaugeField, k: int, e: float,
                  vf: FermiVelocity, grid: Grid):
    """Decoupled problems for position-dependent Fermi velocity.

    Dividing the squared system by V_F^2 gives

        -psi'' + (sigma - V'/V) psi' + (F + G V'/V) psi = (a^2 E^2 / V_F^2) psi

    with F identical to the constant-velocity rho and G = a (W1 +- Q).
    F and G are recorded in the problem metadata for inspection.
    """
    x = grid.points
    v, vp = eval_fermi_velocity(vf, params, x)
    if np.min(np.abs(v)) < 1e-12:
        raise VelocityZero("V_F vanishes on an interior grid point; choose a grid avoiding it")
    w1, q, w1p, qp = _coefficients(params, gauge, k, e, x)
    a = params.a
    mp = (w1 - q) * (w1 + q)
    sigma = 2.0 * a * w1
    f_plus = a * (w1p + qp) - a * a * mp
    f_minus = a * (w1p - qp) - a * a * mp
    g_plus = a * (w1 + q)
    g_minus = a * (w1 - q)
    t = vp / v
    weight = 1.0 / v ** 2
    meta = {"k": k, "e": e, "gauge_kind": gauge.kind, "vf_kind": vf.kind,
            "eigen_relation": "lam = E^2, weight = 1/V_F^2"}
    plus = SLProblem(grid, "plus", sigma - t, f_plus + g_plus * t,
                     eigen_scale=a * a, weight=weight,
                     meta={**meta, "F": f_plus, "G": g_plus})
    minus = SLProblem(grid, "minus", sigma - t, f_minus + g_minus * t,
                      eigen_scale=a * a, weight=weight,
                      meta={**meta, "F": f_minus, "G": g_minus})
    return plus, minus


# ---------------------------------------------------------------------------
# certification helpers
# ---------------------------------------------------------------------------

def squaring_discrepancy(params: TorusParams, gauge: GaugeField, k: int,
                         grid: Grid, spinor: SpinorGF,
                         convention: str = "fg") -> float:
    """Relative mismatch between a^2 * H(H psi) and the decoupled operators.

    The decoupled problems are applied with the composed first-derivative
    stencil ('d1d1') so the comparison isolates the coefficient algebra from
    the choice of Laplacian stencil.  The 'matrix_literal' assembly squares
    to the negative of the decoupled operators; the sign is accounted for.
    """
    plus, minus = decouple_constant_vf(params, gauge, k, gauge.e, grid)
    hh = apply_dirac(params, gauge, k, grid,
                     apply_dirac(params, gauge, k, grid, spinor, convention),
                     convention)
    sign = plus.meta["square_sign"][convention]
    a2 = params.a ** 2
    lhs1 = sign * a2 * hh.psi1.values
    lhs2 = sign * a2 * hh.psi2.values
    rhs1 = plus.apply(spinor.psi1, second_derivative="d1d1").values
    rhs2 = minus.apply(spinor.psi2, second_derivative="d1d1").values
    num = np.sqrt(np.linalg.norm(lhs1 - rhs1) ** 2 + np.linalg.norm(lhs2 - rhs2) ** 2)
    den = np.sqrt(np.linalg.norm(rhs1) ** 2 + np.linalg.norm(rhs2) ** 2)
    return float(num / den)


def hermiticity_defect(params: TorusParams, gauge: GaugeField, k: int, grid: Grid,
                       pairs, convention: str = "fg",
                       measure: str = "flat") -> float:
    """max |<f, H g> - <H f, g>| / (|f| |g|) over the supplied spinor pairs.

    `measure` is 'flat' (uniform weights) or 'curved' (weight a R(x) dx).
    """
    x = grid.points
    if measure == "curved":
        w = params.a * radius_profile(params, x)
    else:
        w = np.ones_like(x)

    def inner(f: SpinorGF, g: SpinorGF) -> complex:
        return grid.h * (
            np.sum(w * np.conj(f.psi1.values) * g.psi1.values)
            + np.sum(w * np.conj(f.psi2.values) * g.psi2.values)
        )

    worst = 0.0
    for f, g in pairs:
        hf = apply_dirac(params, gauge, k, grid, f, convention)
        hg = apply_dirac(params, gauge, k, grid, g, convention)
        d = abs(inner(f, hg) - inner(hf, g)) / (f.norm() * g.norm())
        worst = max(worst, float(d))
    return worst


def sl_coefficient_table(problem: SLProblem):
    """(header, rows) for CSV export of the sampled coefficients."""
    header = ["x", "re_sigma", "im_sigma", "re_rho", "im_rho"]
    x = problem.grid.points
    rows = [
        (x[i], problem.sigma[i].real, problem.sigma[i].imag,
         problem.rho[i].real, problem.rho[i].imag)
        for i in range(problem.grid.n)
    ]
    return header, rows
