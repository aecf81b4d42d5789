"""Jost and regular solutions of the radial equation at unit energy.

The stationary equation on (r0, infinity) is

    -u'' + ( (nu_R^2 - 1/4)/r^2 + q_nu(r) ) u = u,      nu_R = nu - gamma(R),

with q_nu compactly supported in [r0, R].  Because the support is compact
the boundary data of the Jost solutions transfer exactly to r = R:
F+-(r, nu) equals the free closed form there, and the "infinite" upper
limit of the scattering integral equation is exactly R.  The primary
solver back-integrates the ODE from R with an adaptive Dormand-Prince
pair (uniformly stable for all complex nu); the Picard iteration of the
integral equation is kept as an independent oracle for Re(nu_R) >= 0.

The regular solution solves the same ODE forward from the obstacle with
Dirichlet data Phi(r0) = 0, Phi'(r0) = -2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NoConvergence
from .fields import EffectivePotential
from .integrate import solve_oscillator
from .quadrature import gl_rule, integrate_piecewise
from .specfun import BesselValue, _check_order, _hankel_arrays, bessel_h

BATCH_BLOCK = 16   # fixed batching unit: results never depend on thread count
DEFAULT_RTOL = 1e-12


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing radii from r0 to R; a single point if R <= r0."""

    r_points: np.ndarray
    method: str = "adaptive_rk"

    def __post_init__(self):
        pts = np.asarray(self.r_points, dtype=float)
        if pts.ndim != 1 or pts.size == 0 or np.any(np.diff(pts) <= 0.0):
            raise ValueError("grid radii must be strictly increasing")
        if self.method not in ("adaptive_rk", "fixed_rk"):
            raise ValueError(f"unknown grid method {self.method!r}")
        if self.method == "fixed_rk" and pts.size < 256:
            raise ValueError("fixed-step grids need at least 256 points")
        object.__setattr__(self, "r_points", pts)

    @property
    def r0(self) -> float:
        return float(self.r_points[0])

    @property
    def R(self) -> float:
        return float(self.r_points[-1])

    @property
    def degenerate(self) -> bool:
        return self.r_points.size == 1

    def refined(self) -> "RadialGrid":
        """Grid with midpoints inserted (used by stability-under-refinement checks)."""
        p = self.r_points
        if p.size == 1:
            return self
        mid = 0.5 * (p[:-1] + p[1:])
        return RadialGrid(np.sort(np.concatenate([p, mid])), self.method)


def make_grid(r0: float, R: float, n: int = 1024, include=(),
              method: str = "adaptive_rk") -> RadialGrid:
    """Geometric-uniform hybrid grid on [r0, R] with breakpoints snapped to nodes.

    For R <= r0 (medium entirely inside the obstacle) the grid degenerates
    to the single point r0 and solvers return free solutions.
    """
    if R <= r0:
        return RadialGrid(np.array([r0]), method)
    t = np.linspace(0.0, 1.0, n)
    pts = 0.5 * (r0 + t * (R - r0)) + 0.5 * r0 * (R / r0) ** t
    pts[0], pts[-1] = r0, R
    for b in include:
        if r0 < b < R:
            i = int(np.argmin(np.abs(pts - b)))
            if 0 < i < n - 1:
                pts[i] = b
    return RadialGrid(np.sort(pts), method)


def grid_for(q: EffectivePotential, n: int = 1024,
             method: str = "adaptive_rk") -> RadialGrid:
    """Default solver grid for a medium: breakpoints of q become nodes."""
    return make_grid(q.r0, q.R, n, include=q.breakpoints(), method=method)


# ---------------------------------------------------------------------------
# free solutions
# ---------------------------------------------------------------------------

def _free_pair(sign: str, nu_R: complex, r: np.ndarray):
    """Free Jost solution and derivative at an array of radii."""
    _, _, h1, h2, _, dh1, dh2 = _hankel_arrays(nu_R, r)
    if sign == "plus":
        phase = np.exp(1j * (nu_R + 0.5) * math.pi / 2.0)
        h, dh = h1, dh1
    elif sign == "minus":
        phase = np.exp(-1j * (nu_R + 0.5) * math.pi / 2.0)
        h, dh = h2, dh2
    else:
        raise ValueError("sign must be 'plus' or 'minus'")
    root = np.sqrt(0.5 * math.pi * r)
    f = phase * root * h
    df = phase * (root * dh + 0.5 * root / r * h)
    return f, df


def free_jost(sign: str, nu: complex, r, flux: float = 0.0):
    """Closed-form free Jost solution F0+- and its radial derivative.

    F0+(r, nu) = e^{i (nu_R + 1/2) pi/2} sqrt(pi r / 2) H1_{nu_R}(r) and the
    conjugate-phase H2 form for the minus sign; both tend to e^{+-ir} at
    large r.
    """
    nu_R = _check_order(complex(nu) - flux)
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    f, df = _free_pair(sign, nu_R, r_arr)
    if np.ndim(r) == 0:
        return complex(f[0]), complex(df[0])
    return f, df


# ---------------------------------------------------------------------------
# solution containers
# ---------------------------------------------------------------------------

def _solution_to_csv(path, grid, values, derivs) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["r", "re_F", "im_F", "re_dF", "im_dF"])
        for r, v, d in zip(grid.r_points, values, derivs):
            w.writerow([f"{r:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}",
                        f"{d.real:.17g}", f"{d.imag:.17g}"])


@dataclass(frozen=True)
class JostSolution:
    """F+- on a grid: values, radial derivatives, and the free data at R."""

    sign: str
    nu: complex
    flux: float
    grid: RadialGrid
    values: np.ndarray
    derivs: np.ndarray
    boundary: BesselValue
    info: dict = field(default_factory=dict)

    @property
    def nu_R(self) -> complex:
        return self.nu - self.flux

    def at_r0(self):
        return complex(self.values[0]), complex(self.derivs[0])

    def to_csv(self, path) -> None:
        _solution_to_csv(path, self.grid, self.values, self.derivs)


@dataclass(frozen=True)
class RegularSolution:
    """Phi on a grid: Phi(r0) = 0, Phi'(r0) = -2."""

    nu: complex
    flux: float
    grid: RadialGrid
    values: np.ndarray
    derivs: np.ndarray

    def at_R(self):
        return complex(self.values[-1]), complex(self.derivs[-1])

    def to_csv(self, path) -> None:
        _solution_to_csv(path, self.grid, self.values, self.derivs)


def wronskian(f, df, g, dg):
    """W(f, g) = f g' - f' g."""
    return f * dg - df * g


def wronskian_residual(plus: JostSolution, minus: JostSolution) -> float:
    """Worst deviation of W(F+, F-) from -2i over the grid.

    The deviation is measured relative to the size of the products forming
    the Wronskian (floored at 1), since for |nu_R| beyond ~5 the solutions
    reach 1e10..1e70 and the constant -2i sits far below the cancellation
    noise of any double-precision subtraction.
    """
    w = wronskian(plus.values, plus.derivs, minus.values, minus.derivs)
    scale = np.maximum(1.0, np.maximum(
        np.abs(plus.values * minus.derivs), np.abs(plus.derivs * minus.values)))
    return float(np.max(np.abs(w + 2j) / scale))


# ---------------------------------------------------------------------------
# ODE solvers
# ---------------------------------------------------------------------------

def _coefficient_fn(q: EffectivePotential, nus: np.ndarray):
    """c(r) for the batch: (nu_R^2 - 1/4)/r^2 + q_nu(r) - 1."""
    flux = q.flux_over_2pi
    nu_R = nus - flux
    cent = nu_R * nu_R - 0.25
    V = q.medium.V
    gauge = q.gauge
    R = q.R

    def c_fn(r: float):
        rr = r * r
        if r >= R:
            return (cent / rr) - 1.0
        gmf = gauge.gamma_minus_flux(r)
        q_r = gmf * (gmf + 2.0 * flux) / rr + V(r) - 2.0 * gmf / rr * nus
        return (cent / rr) + q_r - 1.0

    return c_fn


def _free_block(sign, nus, flux, r_pts):
    vals = np.empty((len(r_pts), len(nus)), dtype=complex)
    ders = np.empty_like(vals)
    for j, nu in enumerate(nus):
        f, df = _free_pair(sign, complex(nu) - flux, r_pts)
        vals[:, j], ders[:, j] = f, df
    return vals, ders


def _jost_block(q, sign, nus, grid, rtol, descending_out):
    """One batched back-integration from R; returns values at the grid points."""
    nus = np.asarray(nus, dtype=complex)
    flux = q.flux_over_2pi
    R = grid.R
    f_R, df_R = _free_block(sign, nus, flux, np.array([R]))
    if grid.degenerate:
        f0, df0 = _free_block(sign, nus, flux, grid.r_points)
        return f0, df0
    r_out = grid.r_points[::-1] if descending_out else np.array([grid.r0])
    step = None
    if grid.method == "fixed_rk":
        step = float(np.min(np.diff(grid.r_points)))
    U, DU = solve_oscillator(_coefficient_fn(q, nus), R, grid.r0,
                             f_R[0], df_R[0], r_out=r_out, rtol=rtol,
                             fixed_step=step)
    if descending_out:
        return U[::-1], DU[::-1]
    return U, DU


def jost_solve(q: EffectivePotential, sign: str, nu: complex,
               grid: RadialGrid, rtol: float = DEFAULT_RTOL) -> JostSolution:
    """Jost solution by adaptive back-integration from r = R.

    For r >= R the solution is the free one exactly, so the initial data
    at R are the free closed forms and no far-field truncation error
    exists.  Local tolerance rtol, scale-relative.
    """
    nu = complex(nu)
    _check_order(nu - q.flux_over_2pi)
    U, DU = _jost_block(q, sign, [nu], grid, rtol, descending_out=True)
    return JostSolution(sign, nu, q.flux_over_2pi, grid, U[:, 0], DU[:, 0],
                        boundary=bessel_h(nu - q.flux_over_2pi, grid.R))


def jost_solve_many(q: EffectivePotential, sign: str, nus, grid: RadialGrid,
                    rtol: float = DEFAULT_RTOL):
    """Grid values and derivatives of F+- for a list of orders.

    Returns (values, derivs) of shape (n_grid, n_nu); orders are batched
    in fixed blocks of BATCH_BLOCK sharing adaptive steps.
    """
    nus = np.asarray(list(nus), dtype=complex)
    vals = np.empty((grid.r_points.size, len(nus)), dtype=complex)
    ders = np.empty_like(vals)
    for lo in range(0, len(nus), BATCH_BLOCK):
        blk = nus[lo:lo + BATCH_BLOCK]
        U, DU = _jost_block(q, sign, blk, grid, rtol, descending_out=True)
        vals[:, lo:lo + BATCH_BLOCK] = U
        ders[:, lo:lo + BATCH_BLOCK] = DU
    return vals, ders


def jost_endpoints(q: EffectivePotential, sign: str, nus,
                   rtol: float = DEFAULT_RTOL, grid: RadialGrid | None = None):
    """F+-(r0) and F+-'(r0) for a list of orders, batched in fixed blocks.

    Blocks of BATCH_BLOCK share adaptive steps (deterministic for a given
    nu ordering regardless of how calls are threaded).
    """
    nus = np.asarray(list(nus), dtype=complex)
    for nu in nus:
        _check_order(nu - q.flux_over_2pi)
    if grid is None:
        grid = grid_for(q, n=2)
    f = np.empty(len(nus), dtype=complex)
    df = np.empty_like(f)
    for lo in range(0, len(nus), BATCH_BLOCK):
        blk = nus[lo:lo + BATCH_BLOCK]
        U, DU = _jost_block(q, sign, blk, grid, rtol, descending_out=False)
        f[lo:lo + BATCH_BLOCK] = U[0]
        df[lo:lo + BATCH_BLOCK] = DU[0]
    return f, df


def regular_solve(q: EffectivePotential, nu: complex, grid: RadialGrid,
                  rtol: float = DEFAULT_RTOL) -> RegularSolution:
    """Regular solution by forward integration from (Phi, Phi') = (0, -2) at r0."""
    nu = complex(nu)
    _check_order(nu - q.flux_over_2pi)
    if grid.degenerate:
        return RegularSolution(nu, q.flux_over_2pi, grid,
                               np.array([0j]), np.array([-2.0 + 0j]))
    U, DU = solve_oscillator(_coefficient_fn(q, np.array([nu])), grid.r0,
                             grid.R, [0.0], [-2.0], r_out=grid.r_points,
                             rtol=rtol)
    return RegularSolution(nu, q.flux_over_2pi, grid, U[:, 0], DU[:, 0])


def regular_endpoints(q: EffectivePotential, nus, rtol: float = DEFAULT_RTOL,
                      grid: RadialGrid | None = None):
    """Phi(R) and Phi'(R) for a list of orders, batched in fixed blocks."""
    nus = np.asarray(list(nus), dtype=complex)
    if grid is None:
        grid = grid_for(q, n=2)
    if grid.degenerate:
        z = np.zeros(len(nus), dtype=complex)
        return z, z - 2.0
    f = np.empty(len(nus), dtype=complex)
    df = np.empty_like(f)
    zeros = np.zeros(BATCH_BLOCK, dtype=complex)
    for lo in range(0, len(nus), BATCH_BLOCK):
        blk = nus[lo:lo + BATCH_BLOCK]
        U, DU = solve_oscillator(_coefficient_fn(q, blk), grid.r0, grid.R,
                                 zeros[:len(blk)], zeros[:len(blk)] - 2.0,
                                 r_out=[grid.R], rtol=rtol)
        f[lo:lo + BATCH_BLOCK] = U[0]
        df[lo:lo + BATCH_BLOCK] = DU[0]
    return f, df


# ---------------------------------------------------------------------------
# Volterra-Picard oracle
# ---------------------------------------------------------------------------

class PanelQuadrature:
    """Gauss-Legendre panels between grid nodes with cubic node interpolation.

    Panels never straddle a support breakpoint (the grid carries them as
    nodes), so piecewise-smooth integrands stay smooth per panel and the
    composite rule keeps its full order.  Grid-sampled functions are
    carried to the panel nodes by 4-point Lagrange stencils confined to
    the smooth segment containing each panel.
    """

    def __init__(self, grid: RadialGrid, breakpoints=(), n_gl: int = 4):
        pts = grid.r_points
        if pts.size < 4:
            raise ValueError("panel quadrature needs at least 4 grid nodes")
        self.nodes = pts
        n_panel = pts.size - 1
        x, w = gl_rule(n_gl)
        half = 0.5 * np.diff(pts)
        mid = 0.5 * (pts[:-1] + pts[1:])
        self.r_gl = mid[:, None] + half[:, None] * x[None, :]
        self.w_gl = half[:, None] * w[None, :]

        seg_edges = [0]
        for b in breakpoints:
            i = int(np.searchsorted(pts, b))
            if 0 < i < pts.size - 1 and not any(abs(i - e) < 1 for e in seg_edges):
                seg_edges.append(i)
        seg_edges.append(pts.size - 1)
        seg_edges = sorted(set(seg_edges))

        idx = np.empty((n_panel, 4), dtype=int)
        wts = np.empty((n_panel, n_gl, 4))
        for (lo, hi) in zip(seg_edges[:-1], seg_edges[1:]):
            width = hi - lo
            for p in range(lo, hi):
                if width >= 3:
                    s = min(max(p - 1, lo), hi - 3)
                else:
                    s = min(max(p - 1, 0), pts.size - 4)
                idx[p] = np.arange(s, s + 4)
                xs = pts[s:s + 4]
                for m in range(4):
                    num = np.ones(n_gl)
                    den = 1.0
                    for jj in range(4):
                        if jj != m:
                            num *= self.r_gl[p] - xs[jj]
                            den *= xs[m] - xs[jj]
                    wts[p, :, m] = num / den
        self.idx = idx
        self.wts = wts

    def interpolate(self, f_nodes: np.ndarray) -> np.ndarray:
        """Grid-node samples -> values at every panel Gauss node."""
        return np.einsum("pgm,pm->pg", self.wts, f_nodes[self.idx])

    def panel_integrals(self, f_gl: np.ndarray) -> np.ndarray:
        return np.sum(self.w_gl * f_gl, axis=1)

    def integrate(self, f_gl: np.ndarray) -> complex:
        return complex(np.sum(self.w_gl * f_gl))

    def cumulative_right(self, f_gl: np.ndarray) -> np.ndarray:
        """I_i = integral from node i to the last node."""
        per = self.panel_integrals(f_gl)
        out = np.zeros(self.nodes.size, dtype=per.dtype)
        out[:-1] = np.cumsum(per[::-1])[::-1]
        return out


def jost_solve_volterra(q: EffectivePotential, sign: str, nu: complex,
                        grid: RadialGrid, max_iter: int = 60,
                        tol: float = 1e-10) -> JostSolution:
    """Picard iteration of F = F0 + int_r^R N(r,s) q_nu(s) F(s) ds.

    Independent oracle for jost_solve in the half plane Re(nu_R) >= 0
    where the kernel bounds guarantee convergence.  The kernel factorizes,
    N(r,s) = u(r)v(s) - u(s)v(r), so each sweep costs two cumulative
    integrals instead of a double sum.  Stops when successive iterates
    differ by less than tol in the scale-relative sup norm.
    """
    nu = complex(nu)
    flux = q.flux_over_2pi
    nu_R = _check_order(nu - flux)
    if nu_R.real < -1e-12:
        raise DomainError("Picard oracle requires Re(nu_R) >= 0")
    if grid.degenerate:
        return jost_solve(q, sign, nu, grid)

    pts = grid.r_points
    pq = PanelQuadrature(grid, q.breakpoints())
    root = np.sqrt(0.5 * math.pi * pts)
    j_n, _, h1_n, _, dj_n, dh1_n, _ = _hankel_arrays(nu_R, pts)
    u_n, v_n = root * j_n, -1j * root * h1_n
    du_n = root * dj_n + 0.5 * root / pts * j_n
    dv_n = -1j * (root * dh1_n + 0.5 * root / pts * h1_n)

    r_flat = pq.r_gl.ravel()
    j_g, _, h1_g, _, _, _, _ = _hankel_arrays(nu_R, r_flat)
    root_g = np.sqrt(0.5 * math.pi * r_flat)
    u_g = (root_g * j_g).reshape(pq.r_gl.shape)
    v_g = (-1j * root_g * h1_g).reshape(pq.r_gl.shape)
    q_g = q(nu, r_flat).reshape(pq.r_gl.shape)

    f0, df0 = _free_pair(sign, nu_R, pts)
    F = f0.copy()
    iterations = 0
    for it in range(1, max_iter + 1):
        iterations = it
        F_gl = pq.interpolate(F)
        A = pq.cumulative_right(v_g * q_g * F_gl)
        B = pq.cumulative_right(u_g * q_g * F_gl)
        F_new = f0 + u_n * A - v_n * B
        delta = float(np.max(np.abs(F_new - F)))
        scale = float(np.max(np.abs(F_new)))
        F = F_new
        if delta <= tol * max(1.0, scale):
            break
    else:
        raise NoConvergence(f"Picard did not converge in {max_iter} sweeps")

    F_gl = pq.interpolate(F)
    A = pq.cumulative_right(v_g * q_g * F_gl)
    B = pq.cumulative_right(u_g * q_g * F_gl)
    dF = df0 + du_n * A - dv_n * B
    return JostSolution(sign, nu, flux, grid, F, dF,
                        boundary=bessel_h(nu_R, grid.R),
                        info={"iterations": iterations})


# ---------------------------------------------------------------------------
# bounds and asymptotic factors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularBoundReport:
    """Empirical constant for |Phi| <= C/(1+|nu_R|) (r/r0)^{Re nu_R}."""

    c_emp: float
    c_emp_refined: float
    grid_size: int
    nu_samples: tuple

    @property
    def stable(self) -> bool:
        lo, hi = sorted((self.c_emp, self.c_emp_refined))
        return math.isfinite(hi) and hi <= 2.0 * lo

    @property
    def passed(self) -> bool:
        return self.stable

    def to_dict(self) -> dict:
        return {"grid": self.grid_size, "C_emp": self.c_emp,
                "C_emp_refined": self.c_emp_refined, "pass": self.stable}


def _regular_weighted_sup(q, nu_list, grid, rtol) -> float:
    worst = 0.0
    r0 = grid.r0
    logr = np.log(grid.r_points / r0)
    for nu in nu_list:
        nu_R = complex(nu) - q.flux_over_2pi
        sol = regular_solve(q, nu, grid, rtol=rtol)
        w = np.exp(-nu_R.real * logr)
        worst = max(worst, float(np.max(np.abs(sol.values) * w)) * (1.0 + abs(nu_R)))
    return worst


def verify_regular_bound(q: EffectivePotential, nu_list, grid: RadialGrid,
                         rtol: float = 1e-10) -> RegularBoundReport:
    """Scan |Phi| (1+|nu_R|) (r0/r)^{Re nu_R}; requires Re(nu_R) >= 0."""
    nu_list = tuple(complex(n) for n in nu_list)
    for nu in nu_list:
        if (nu - q.flux_over_2pi).real < -1e-12:
            raise ValueError("regular bound scan requires Re(nu_R) >= 0")
    c = _regular_weighted_sup(q, nu_list, grid, rtol)
    c_ref = _regular_weighted_sup(q, nu_list, grid.refined(), rtol)
    return RegularBoundReport(c, c_ref, grid.r_points.size, nu_list)


def c_r_factor(q: EffectivePotential, r: float) -> float:
    """C_r = exp( int_r^R (gamma(R) - gamma(s))/s ds ); equals 1 for r >= R.

    The large-order limit of F+(r, nu)/F0+(r, nu) on the real axis.  The
    sign matches the first Picard sweep of the integral equation: the
    kernel-weighted tail integral enters with + and the order-coupled part
    of q contributes -2 nu (gamma - gamma(R))/s^2, so positive flux acts
    repulsively and the ratio exceeds 1 (WKB gives the same exponent).
    """
    if r >= q.R:
        return 1.0
    f = lambda s: -q.gauge.gamma_minus_flux(s) / s
    val = integrate_piecewise(f, r, q.R, q.medium.breakpoints(), tol=1e-13)
    return math.exp(val)
