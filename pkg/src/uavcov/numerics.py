"""Adaptive quadrature and scalar minimization used by the analytic formulas.

Tolerance policy lives here: every closed form in the package integrates with
``RTOL``/``ATOL`` unless a caller asks otherwise.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

RTOL = 1e-9
ATOL = 1e-12
MAX_SUBDIVISIONS = 4000

# Gauss-Kronrod 7/15 abscissae on [0, 1] (positive half) and weights.
_XK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_W = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_W = np.zeros(15)
GAUSS_W[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __float__(self) -> float:
        return self.value


class QuadratureError(ArithmeticError):
    """Raised when the subdivision budget runs out; ``partial`` holds the best result."""

    def __init__(self, message: str, partial: QuadratureResult):
        super().__init__(message)
        self.partial = partial


def _gk15(f, a: float, b: float, vectorized: bool):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * NODES
    if vectorized:
        y = np.asarray(f(x), dtype=float)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape)
    else:
        y = np.array([f(float(xi)) for xi in x], dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError(f"integrand is not finite on [{a}, {b}]")
    kronrod = half * float(KRONROD_W @ y)
    gauss = half * float(GAUSS_W @ y)
    resabs = abs(half) * float(KRONROD_W @ np.abs(y))
    # |K - G| is a pessimistic bound for smooth f; the floor covers roundoff.
    err = max(abs(kronrod - gauss), 50.0 * _EPS * resabs)
    return kronrod, err


def integrate(f: Callable, lower: float, upper: float, rel_tol: float = RTOL,
              abs_tol: float = ATOL, *, vectorized: bool = False, points=(),
              max_subdivisions: int = MAX_SUBDIVISIONS) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod (7, 15) quadrature of ``f`` over [lower, upper].

    The interval with the largest error estimate is bisected until the summed
    estimate drops below ``max(abs_tol, rel_tol * |value|)``.

    Parameters
    ----------
    f : callable
        Integrand. With ``vectorized=True`` it receives a 1-D array of nodes
        and must return an array of the same shape.
    lower, upper : float
        Finite limits with ``lower < upper``.
    points : sequence of float
        Interior break points (kinks, steep transitions) that seed the
        initial partition. Points outside (lower, upper) are ignored.

    Raises
    ------
    QuadratureError
        If ``max_subdivisions`` bisections do not meet the tolerance.
    """
    if not (math.isfinite(lower) and math.isfinite(upper)):
        raise ValueError("integration limits must be finite")
    if not lower < upper:
        raise ValueError(f"need lower < upper, got [{lower}, {upper}]")

    edges = [lower, *sorted({float(p) for p in points if lower < p < upper}), upper]
    heap = []
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = _gk15(f, a, b, vectorized)
        heap.append((-e, a, b, v))
    heapq.heapify(heap)
    evaluations = 15 * len(heap)
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    splits = 0
    while total_err > max(abs_tol, rel_tol * abs(total)):
        if splits >= max_subdivisions:
            partial = QuadratureResult(total, total_err, evaluations)
            raise QuadratureError(
                f"no convergence after {splits} subdivisions "
                f"(value {total:.12g}, error estimate {total_err:.3g})", partial)
        _, a, b, _ = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        for lo, hi in ((a, mid), (mid, b)):
            v, e = _gk15(f, lo, hi, vectorized)
            heapq.heappush(heap, (-e, lo, hi, v))
        evaluations += 30
        splits += 1
        total = math.fsum(item[3] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)
    return QuadratureResult(total, total_err, evaluations)


def integrate_semi_infinite(f: Callable, lower: float, rel_tol: float = RTOL,
                            abs_tol: float = ATOL, *, scale: float = 1.0,
                            vectorized: bool = False,
                            max_subdivisions: int = MAX_SUBDIVISIONS) -> QuadratureResult:
    """Integrate ``f`` over [lower, inf) via x = lower + scale * t / (1 - t).

    ``scale`` should be roughly the length over which ``f`` decays; the
    default of 1 suits integrands on unit scale.
    """
    if not scale > 0:
        raise ValueError("scale must be positive")

    # Kronrod nodes never touch t = 1, so the Jacobian stays finite.
    def g(t):
        s = 1.0 - t
        return f(lower + scale * t / s) * (scale / (s * s))

    return integrate(g, 0.0, 1.0, rel_tol, abs_tol, vectorized=vectorized,
                     max_subdivisions=max_subdivisions)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_scalar(f: Callable[[float], float], lo: float, hi: float,
                    x_tol: float = 1e-10) -> tuple[float, float]:
    """Golden-section search for the minimum of a unimodal ``f`` on [lo, hi].

    Unimodality is the caller's responsibility. Returns ``(argmin, f(argmin))``.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > x_tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    # Minimum on the boundary: the bracket collapses onto an end point.
    for edge in (lo, hi):
        fe = f(edge)
        if fe < fx:
            x, fx = edge, fe
    return x, fx
