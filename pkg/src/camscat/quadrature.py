"""Gauss-Legendre quadrature helpers shared by the gauge builder and solvers."""

from __future__ import annotations

import functools

import numpy as np

from .errors import QuadratureError


@functools.lru_cache(maxsize=None)
def gl_rule(n: int):
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gl_panel(f, a: float, b: float, n: int) -> float:
    x, w = gl_rule(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(np.dot(w, f(mid + half * x)))


def adaptive_gl(f, a: float, b: float, tol: float = 1e-13,
                n: int = 8, max_depth: int = 30) -> float:
    """Adaptive Gauss-Legendre integral of f over [a, b].

    Bisects until the n vs 2n point estimates agree within the local
    tolerance share; raises QuadratureError at the depth cap.
    """
    if b <= a:
        return 0.0

    def recurse(lo, hi, budget, depth):
        coarse = gl_panel(f, lo, hi, n)
        fine = gl_panel(f, lo, hi, 2 * n)
        if abs(fine - coarse) <= budget:
            return fine
        if depth >= max_depth:
            raise QuadratureError(
                f"adaptive quadrature stalled on [{lo:g}, {hi:g}]"
            )
        mid = 0.5 * (lo + hi)
        half = 0.5 * budget
        return recurse(lo, mid, half, depth + 1) + recurse(mid, hi, half, depth + 1)

    return recurse(a, b, tol, 0)


def split_panels(a: float, b: float, breakpoints=(), max_width: float = np.inf):
    """Sorted panel edges over [a, b] honoring interior breakpoints.

    Panels never straddle a breakpoint, so piecewise-smooth integrands are
    smooth on every panel.
    """
    edges = [a, b]
    for p in breakpoints:
        if a < p < b:
            edges.append(float(p))
    edges = sorted(set(edges))
    out = [edges[0]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = max(1, int(np.ceil((hi - lo) / max_width)))
        out.extend(np.linspace(lo, hi, m + 1)[1:].tolist())
    return np.asarray(out)


def integrate_piecewise(f, a: float, b: float, breakpoints=(),
                        tol: float = 1e-13) -> float:
    """Adaptive integral of a piecewise-smooth f with known breakpoints."""
    edges = split_panels(a, b, breakpoints)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += adaptive_gl(f, float(lo), float(hi), tol=tol)
    return total
