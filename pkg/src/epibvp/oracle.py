"""Independent cross-check: shoot the equation as an initial value problem.

The equation is integrated in first-order form

    w' = v,      v' = v / r + w**2 / (2 r**2) + lam r**2 / 2

by classic fourth-order Runge-Kutta at a fixed step.  The origin is
singular, so integration starts from a small handoff radius r0 where the
two-term series

    w = a r**2 + c4 r**4,      c4 = (a**2 + lam) / 16

supplies the state; the series truncation enters only at O(r0**6).

Nothing here shares code with the polynomial solver: profiles are
recovered by trapezoidal quadrature of w / r over the stored trajectory,
and branch roots are re-derived from the endpoint state.  Agreement with
the iterative solver is therefore genuine two-method validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "IvpOverflow",
    "IvpConfig",
    "BLOWUP_GUARD",
    "series_start",
    "ivp_integrate",
    "ivp_trajectory",
    "profile_from_trajectory",
    "oracle_branches",
    "step_halving_order",
]

BLOWUP_GUARD = 1e12


class IvpOverflow(ArithmeticError):
    """Trajectory exceeded the blow-up guard before reaching r = 1.

    Expected for shooting parameters far from a genuine branch; reported so
    sweeps can skip the trajectory rather than abort.
    """


@dataclass(frozen=True)
class IvpConfig:
    """Integrator settings: series handoff radius, step size, series order."""

    r0: float = 1e-4
    h: float = 1e-4
    series_terms: int = 2

    def __post_init__(self):
        if not 0.0 < self.r0 < 1.0:
            raise ValueError("handoff radius must lie in (0, 1)")
        if not 0.0 < self.h <= 1e-3:
            raise ValueError("step size must lie in (0, 1e-3]")
        if self.series_terms not in (1, 2):
            raise ValueError("series_terms must be 1 or 2")


def series_start(a: float, lam: float, r0: float, series_terms: int = 2):
    """Series state (w, w') at the handoff radius."""
    w = a * r0 * r0
    wp = 2.0 * a * r0
    if series_terms >= 2:
        c4 = (a * a + lam) / 16.0
        w += c4 * r0 ** 4
        wp += 4.0 * c4 * r0 ** 3
    return w, wp


def _steps(cfg: IvpConfig):
    n = max(1, int(round((1.0 - cfg.r0) / cfg.h)))
    return n, (1.0 - cfg.r0) / n


def ivp_integrate(a: float, lam: float, cfg: IvpConfig | None = None):
    """Integrate to r = 1; returns the endpoint pair (w(1), w'(1)).

    Raises :class:`IvpOverflow` if |w| passes the blow-up guard on the way.
    """
    cfg = cfg or IvpConfig()
    n, h = _steps(cfg)
    w, v = series_start(a, lam, cfg.r0, cfg.series_terms)
    r = cfg.r0
    half = 0.5 * h
    lam2 = 0.5 * lam
    for _ in range(n):
        k1v = v / r + w * w / (2.0 * r * r) + lam2 * r * r
        rm = r + half
        w2 = w + half * v
        v2 = v + half * k1v
        k2v = v2 / rm + w2 * w2 / (2.0 * rm * rm) + lam2 * rm * rm
        w3 = w + half * v2
        v3 = v + half * k2v
        k3v = v3 / rm + w3 * w3 / (2.0 * rm * rm) + lam2 * rm * rm
        re = r + h
        w4 = w + h * v3
        v4 = v + h * k3v
        k4v = v4 / re + w4 * w4 / (2.0 * re * re) + lam2 * re * re
        w += h * (v + 2.0 * v2 + 2.0 * v3 + v4) / 6.0
        v += h * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        r = re
        if not abs(w) <= BLOWUP_GUARD:
            raise IvpOverflow(f"|w| exceeded {BLOWUP_GUARD:g} at r = {r:.6f}")
    return w, v


def ivp_trajectory(a: float, lam: float, cfg: IvpConfig | None = None):
    """Integrate to r = 1 storing the state at every node.

    Returns arrays (r, w, w'); dense output feeds the quadrature-based
    profile recovery.
    """
    cfg = cfg or IvpConfig()
    n, h = _steps(cfg)
    w, v = series_start(a, lam, cfg.r0, cfg.series_terms)
    rs = np.empty(n + 1)
    ws = np.empty(n + 1)
    vs = np.empty(n + 1)
    rs[0], ws[0], vs[0] = cfg.r0, w, v
    r = cfg.r0
    half = 0.5 * h
    lam2 = 0.5 * lam
    for i in range(n):
        k1v = v / r + w * w / (2.0 * r * r) + lam2 * r * r
        rm = r + half
        w2 = w + half * v
        v2 = v + half * k1v
        k2v = v2 / rm + w2 * w2 / (2.0 * rm * rm) + lam2 * rm * rm
        w3 = w + half * v2
        v3 = v + half * k2v
        k3v = v3 / rm + w3 * w3 / (2.0 * rm * rm) + lam2 * rm * rm
        re = r + h
        w4 = w + h * v3
        v4 = v + h * k3v
        k4v = v4 / re + w4 * w4 / (2.0 * re * re) + lam2 * re * re
        w += h * (v + 2.0 * v2 + 2.0 * v3 + v4) / 6.0
        v += h * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        r = re
        if not abs(w) <= BLOWUP_GUARD:
            raise IvpOverflow(f"|w| exceeded {BLOWUP_GUARD:g} at r = {r:.6f}")
        rs[i + 1], ws[i + 1], vs[i + 1] = r, w, v
    return rs, ws, vs


def profile_from_trajectory(rs: np.ndarray, ws: np.ndarray) -> np.ndarray:
    """Recover the height profile on the trajectory nodes.

    phi(r) = -integral of w/t from r to 1, by composite trapezoid; this
    deliberately avoids the polynomial recovery it cross-checks.
    """
    integrand = ws / rs
    segments = 0.5 * (integrand[1:] + integrand[:-1]) * np.diff(rs)
    tail = np.concatenate([np.cumsum(segments[::-1])[::-1], [0.0]])
    return -tail


def _integrate_batch(a_values: np.ndarray, lam: float, cfg: IvpConfig):
    """Endpoint states for many shooting parameters at once.

    Columns whose trajectory blows up (or leaves the finite range) are
    reported as NaN instead of raising.
    """
    n, h = _steps(cfg)
    a = np.asarray(a_values, dtype=float)
    c4 = (a * a + lam) / 16.0
    w = a * cfg.r0 ** 2
    v = 2.0 * a * cfg.r0
    if cfg.series_terms >= 2:
        w = w + c4 * cfg.r0 ** 4
        v = v + 4.0 * c4 * cfg.r0 ** 3
    r = cfg.r0
    half = 0.5 * h
    lam2 = 0.5 * lam
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            k1v = v / r + w * w / (2.0 * r * r) + lam2 * r * r
            rm = r + half
            w2 = w + half * v
            v2 = v + half * k1v
            k2v = v2 / rm + w2 * w2 / (2.0 * rm * rm) + lam2 * rm * rm
            w3 = w + half * v2
            v3 = v + half * k2v
            k3v = v3 / rm + w3 * w3 / (2.0 * rm * rm) + lam2 * rm * rm
            re = r + h
            w4 = w + h * v3
            v4 = v + h * k3v
            k4v = v4 / re + w4 * w4 / (2.0 * re * re) + lam2 * re * re
            w = w + h * (v + 2.0 * v2 + 2.0 * v3 + v4) / 6.0
            v = v + h * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
            r = re
            bad = ~(np.abs(w) <= BLOWUP_GUARD)
            if bad.any():
                w = np.where(bad, np.nan, w)
                v = np.where(bad, np.nan, v)
    return w, v


def oracle_branches(lam: float, bc, window=(-120.0, 20.0), *,
                    cfg: IvpConfig | None = None, grid_points: int = 320,
                    root_tol: float = 1e-10) -> list:
    """Roots of the boundary functional built from the integrator.

    Scans the window, skips blown-up stretches, and bisects each
    sign-change bracket to ``root_tol`` in the shooting parameter.  An
    empty list mirrors branch non-existence above the critical rate.
    """
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise ValueError("window must satisfy lo < hi")
    cfg = cfg or IvpConfig()
    xs = np.linspace(lo, hi, grid_points)
    w1, v1 = _integrate_batch(xs, lam, cfg)
    fs = np.array([
        bc.residual(wi, vi) if math.isfinite(wi) and math.isfinite(vi)
        else np.nan
        for wi, vi in zip(w1, v1)
    ])

    def residual(a: float) -> float:
        w, v = ivp_integrate(a, lam, cfg)
        return bc.residual(w, v)

    roots = []
    for i in range(grid_points - 1):
        f_lo, f_hi = fs[i], fs[i + 1]
        if not (math.isfinite(f_lo) and math.isfinite(f_hi)):
            continue
        if f_lo == 0.0:
            roots.append(float(xs[i]))
            continue
        if f_hi == 0.0 or f_lo * f_hi > 0.0:
            continue
        b_lo, b_hi = float(xs[i]), float(xs[i + 1])
        g_lo = f_lo
        while b_hi - b_lo > root_tol:
            mid = 0.5 * (b_lo + b_hi)
            if mid == b_lo or mid == b_hi:
                break
            f_mid = residual(mid)
            if f_mid == 0.0:
                b_lo = b_hi = mid
                break
            if g_lo * f_mid < 0.0:
                b_hi = mid
            else:
                b_lo, g_lo = mid, f_mid
        roots.append(0.5 * (b_lo + b_hi))
    if fs.size and fs[-1] == 0.0:
        roots.append(float(xs[-1]))
    return sorted(roots)


def step_halving_order(a: float, lam: float, cfg: IvpConfig | None = None):
    """Empirical convergence order from endpoints at h, h/2 and h/4.

    Returns (order, coarse difference, fine difference); for a fourth-order
    scheme the coarse difference is about sixteen times the fine one.
    """
    cfg = cfg or IvpConfig(r0=1e-2, h=1e-3)
    w_h = ivp_integrate(a, lam, cfg)[0]
    w_h2 = ivp_integrate(a, lam, IvpConfig(cfg.r0, cfg.h / 2, cfg.series_terms))[0]
    w_h4 = ivp_integrate(a, lam, IvpConfig(cfg.r0, cfg.h / 4, cfg.series_terms))[0]
    d1 = abs(w_h - w_h2)
    d2 = abs(w_h2 - w_h4)
    order = math.log2(d1 / d2) if d2 > 0.0 else math.inf
    return order, d1, d2
