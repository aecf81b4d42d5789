"""Jost functions, the Regge interpolation function, and phase shifts.

For each order nu the regular solution expands over the Jost pair,
Phi = alpha F+ + beta F-, with

    alpha(nu) = i F-(r0, nu),        beta(nu) = -i F+(r0, nu),

and the Regge interpolation function

    sigma(nu) = e^{i pi (nu + 1/2)} alpha(nu) / beta(nu)

is unimodular for real nu and interpolates the physical scattering
coefficients sigma(l) = e^{2 i delta_l} at integer angular momenta.
Phase shifts are returned as a continuous-in-l branch anchored at the
largest computed l, where sigma approaches its flux-determined limit
e^{+i pi gamma(R)} (the limits at l -> +-infinity are e^{+-i pi gamma(R)},
matching the closed free form and the classical Aharonov-Bohm shifts).

Negative angular momenta are never evaluated directly: the reflected
medium (b -> -b) satisfies F_{gamma}(r, nu) = F_{-gamma}(r, -nu), so
sigma_gamma(-l) = sigma_{-gamma}(l) and only nonnegative orders reach the
Bessel series.
"""

from __future__ import annotations

import cmath
import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BetaZero, CamscatError
from .fields import EffectivePotential, effective_potential, mirror
from .radial import (DEFAULT_RTOL, BATCH_BLOCK, RadialGrid,
                     jost_endpoints, regular_endpoints, free_jost, wronskian)
from .specfun import _check_order, _hankel_arrays

SCHEMA_VERSION = 1
BRANCH_ANCHOR = ("principal value at the largest computed l, continued "
                 "downward by nearest-branch steps; interpolated values "
                 "between integers are convention-dependent")

_BETA_FLOOR = 1e-300


# ---------------------------------------------------------------------------
# free closed forms
# ---------------------------------------------------------------------------

def sigma_free(nu: complex, flux: float, r0: float) -> complex:
    """Closed-form free Regge function -e^{i pi gamma} H2_{nu_R}(r0)/H1_{nu_R}(r0)."""
    nu = complex(nu)
    nu_R = _check_order(nu - flux)
    _, _, h1, h2, _, _, _ = _hankel_arrays(nu_R, np.array([float(r0)]))
    if abs(h1[0]) < _BETA_FLOOR:
        raise BetaZero(f"free beta vanishes at nu = {nu:g}")
    return complex(-cmath.exp(1j * math.pi * (nu - nu_R)) * h2[0] / h1[0])


def jost_functions_free(nu: complex, flux: float, r0: float):
    """Free Jost functions (alpha0, beta0) = (i F0-(r0), -i F0+(r0))."""
    fp, _ = free_jost("plus", nu, r0, flux)
    fm, _ = free_jost("minus", nu, r0, flux)
    return 1j * fm, -1j * fp


# ---------------------------------------------------------------------------
# Jost functions from the solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JostFunctions:
    """alpha, beta from boundary values, with the Wronskian cross-check."""

    nu: complex
    alpha: complex
    beta: complex
    alpha_wronskian: complex
    beta_wronskian: complex

    @property
    def agreement(self) -> float:
        """Scaled distance between the boundary-value and Wronskian routes."""
        ea = abs(self.alpha - self.alpha_wronskian) / max(1.0, abs(self.alpha))
        eb = abs(self.beta - self.beta_wronskian) / max(1.0, abs(self.beta))
        return max(ea, eb)


def jost_functions_many(q: EffectivePotential, nus, grid: RadialGrid | None = None,
                        rtol: float = DEFAULT_RTOL):
    """Batched jost_functions over a list of orders."""
    nus = [complex(n) for n in nus]
    fp, _ = jost_endpoints(q, "plus", nus, rtol=rtol, grid=grid)
    fm, _ = jost_endpoints(q, "minus", nus, rtol=rtol, grid=grid)
    phi_R, dphi_R = regular_endpoints(q, nus, rtol=rtol, grid=grid)
    R = q.R if grid is None else grid.R
    out = []
    for i, nu in enumerate(nus):
        alpha = 1j * fm[i]
        beta = -1j * fp[i]
        f0p, df0p = free_jost("plus", nu, R, q.flux_over_2pi)
        f0m, df0m = free_jost("minus", nu, R, q.flux_over_2pi)
        alpha_w = 0.5j * wronskian(phi_R[i], dphi_R[i], f0m, df0m)
        beta_w = -0.5j * wronskian(phi_R[i], dphi_R[i], f0p, df0p)
        out.append(JostFunctions(nu, alpha, beta, alpha_w, beta_w))
    return out


def jost_functions(q: EffectivePotential, nu: complex, grid: RadialGrid | None = None,
                   rtol: float = DEFAULT_RTOL) -> JostFunctions:
    """alpha(nu), beta(nu) computed two independent ways.

    (a) boundary values of the Jost solutions at the obstacle,
    (b) Wronskians of the regular solution with F-+ at r = R.
    Both are returned; .agreement measures their scaled distance.
    """
    return jost_functions_many(q, [nu], grid=grid, rtol=rtol)[0]


def _sigma_from_endpoints(nu: complex, f_plus_r0: complex, f_minus_r0: complex) -> complex:
    beta = -1j * f_plus_r0
    if abs(beta) < _BETA_FLOOR:
        raise BetaZero(f"beta(nu) = 0 at nu = {nu:g}")
    alpha = 1j * f_minus_r0
    return cmath.exp(1j * math.pi * (nu + 0.5)) * alpha / beta


def sigma_many(q: EffectivePotential, nus, rtol: float = DEFAULT_RTOL,
               threads: int = 1, collect_errors: bool = False):
    """sigma(nu) over a list of orders, block-batched and optionally threaded.

    Orders are processed in fixed blocks of BATCH_BLOCK in the given
    sequence, so results are bit-identical for any thread count.  With
    collect_errors, BetaZero points come back as None plus an exclusion
    list instead of raising.
    """
    nus = [complex(n) for n in nus]
    blocks = [nus[i:i + BATCH_BLOCK] for i in range(0, len(nus), BATCH_BLOCK)]

    def run(block):
        fp, _ = jost_endpoints(q, "plus", block, rtol=rtol)
        fm, _ = jost_endpoints(q, "minus", block, rtol=rtol)
        out = []
        for nu, p, m in zip(block, fp, fm):
            try:
                out.append(_sigma_from_endpoints(nu, p, m))
            except BetaZero:
                if not collect_errors:
                    raise
                out.append(None)
        return out

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    flat = [s for part in parts for s in part]
    if not collect_errors:
        return flat
    excluded = [nu for nu, s in zip(nus, flat) if s is None]
    return flat, excluded


def regge_sigma(q: EffectivePotential, nu: complex, grid: RadialGrid | None = None,
                rtol: float = DEFAULT_RTOL) -> complex:
    """sigma(nu) = e^{i pi (nu + 1/2)} alpha/beta; unimodular for real nu."""
    nu = complex(nu)
    fp, _ = jost_endpoints(q, "plus", [nu], rtol=rtol, grid=grid)
    fm, _ = jost_endpoints(q, "minus", [nu], rtol=rtol, grid=grid)
    sigma = _sigma_from_endpoints(nu, fp[0], fm[0])
    if nu.imag == 0.0 and abs(abs(sigma) - 1.0) > 1e-8:
        raise CamscatError(
            f"|sigma| = {abs(sigma):.12f} off the unit circle at real nu = {nu.real:g}")
    return sigma


# ---------------------------------------------------------------------------
# phase shifts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseShiftRecord:
    l: int
    sigma: complex
    delta: float


@dataclass(frozen=True)
class ScatteringData:
    """Per-l records {sigma(l), delta_l} plus the flux of the medium."""

    flux_over_2pi: float
    records: tuple
    branch_anchor: str = BRANCH_ANCHOR

    def sigma(self, l: int) -> complex:
        for rec in self.records:
            if rec.l == l:
                return rec.sigma
        raise KeyError(l)

    def delta(self, l: int) -> float:
        for rec in self.records:
            if rec.l == l:
                return rec.delta
        raise KeyError(l)

    @property
    def l_values(self):
        return [rec.l for rec in self.records]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["l", "re_sigma", "im_sigma", "delta"])
            for rec in self.records:
                w.writerow([rec.l, f"{rec.sigma.real:.17g}",
                            f"{rec.sigma.imag:.17g}", f"{rec.delta:.17g}"])

    def to_json(self, path) -> None:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "flux_over_2pi": self.flux_over_2pi,
            "branch_anchor": self.branch_anchor,
            "records": [
                {"l": rec.l, "re_sigma": rec.sigma.real,
                 "im_sigma": rec.sigma.imag, "delta": rec.delta}
                for rec in self.records
            ],
        }
        with open(path, "w") as f:
            json.dump(doc, f, indent=1)
            f.write("\n")


def unwrap_deltas(sigmas_desc):
    """Continuous delta branch through sigma = e^{2 i delta}, descending in l.

    Starts at the principal value for the first (largest-l) entry and
    continues by the nearest mod-pi representative, so consecutive shifts
    never jump by more than pi/2.
    """
    deltas = []
    prev = None
    for s in sigmas_desc:
        if prev is None:
            d = 0.5 * cmath.phase(s)
        else:
            d = prev + 0.5 * cmath.phase(s * cmath.exp(-2j * prev))
        deltas.append(d)
        prev = d
    return deltas


def phase_shifts(q: EffectivePotential, l_range, grid: RadialGrid | None = None,
                 rtol: float = DEFAULT_RTOL, threads: int = 1) -> ScatteringData:
    """sigma(l) and unwrapped delta_l for integer l in [l_min, l_max].

    Negative l are computed on the reflected medium via
    sigma_gamma(-l) = sigma_{-gamma}(l).
    """
    l_min, l_max = int(l_range[0]), int(l_range[1])
    if l_max < l_min:
        raise ValueError("empty l range")
    ls = list(range(l_min, l_max + 1))
    pos = [l for l in ls if l >= 0]
    neg = [l for l in ls if l < 0]
    sig = {}
    if pos:
        for l, s in zip(pos, sigma_many(q, pos, rtol=rtol, threads=threads)):
            sig[l] = s
    if neg:
        q_neg = effective_potential(mirror(q.medium))
        mapped = sorted(-l for l in neg)
        for m, s in zip(mapped, sigma_many(q_neg, mapped, rtol=rtol, threads=threads)):
            sig[-m] = s
    sigmas_desc = [sig[l] for l in reversed(ls)]
    deltas_desc = unwrap_deltas(sigmas_desc)
    records = tuple(
        PhaseShiftRecord(l, sig[l], d)
        for l, d in zip(reversed(ls), deltas_desc)
    )[::-1]
    return ScatteringData(q.flux_over_2pi, records)


def sigma_tail_negative(q: EffectivePotential, l_list, rtol: float = DEFAULT_RTOL,
                        threads: int = 1):
    """sigma(l) for negative l through the reflection symmetry route."""
    l_list = [int(l) for l in l_list]
    if any(l >= 0 for l in l_list):
        raise ValueError("sigma_tail_negative expects negative l only")
    q_neg = effective_potential(mirror(q.medium))
    mapped = [-l for l in l_list]
    return sigma_many(q_neg, mapped, rtol=rtol, threads=threads)


# ---------------------------------------------------------------------------
# complex angular momentum scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CamScan:
    """sigma sampled over a complex-order grid, with beta-zero exclusions."""

    nu_grid: tuple
    sigma: tuple             # None where excluded
    excluded: tuple

    def to_json(self, path) -> None:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "points": [
                {"re_nu": nu.real, "im_nu": nu.imag,
                 "re_sigma": None if s is None else s.real,
                 "im_sigma": None if s is None else s.imag}
                for nu, s in zip(self.nu_grid, self.sigma)
            ],
            "excluded": [[nu.real, nu.imag] for nu in self.excluded],
        }
        with open(path, "w") as f:
            json.dump(doc, f, indent=1)
            f.write("\n")


def cam_scan(q: EffectivePotential, nu_grid, rtol: float = DEFAULT_RTOL,
             threads: int = 1) -> CamScan:
    """sigma(nu) over an arbitrary complex-order grid.

    Points where beta vanishes are reported in .excluded rather than
    aborting the scan.
    """
    nus = [complex(n) for n in nu_grid]
    sig, excluded = sigma_many(q, nus, rtol=rtol, threads=threads,
                               collect_errors=True)
    return CamScan(tuple(nus), tuple(sig), tuple(excluded))
