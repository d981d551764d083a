"""Shooting on the free coefficient of the quadratic start term.

The left boundary behaviour (w'(0) = 0, w -> 0) is built into the iterates,
so the only degree of freedom is the coefficient ``a`` of w0 = a r**2.  The
right boundary condition turns into a scalar equation B(a) = 0 which is
scanned on a grid, bracketed and bisected.

Two genuine solution branches coexist below the critical deposition rate;
the truncated iterate polynomial additionally develops spurious
sign changes of B at large |a| where the iteration no longer converges.
Candidate roots are therefore accepted only if the converged iterate
actually satisfies the differential equation to a sanity bound
(``residual_cap``) on the standard residual grid; the spurious crossings
fail that check by many orders of magnitude.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np

from . import recover
from .polyring import RPoly, evaluate
from .vim import _defect_coeffs, _iterate_coeffs

__all__ = [
    "BoundaryKind",
    "BranchLabel",
    "BranchRoot",
    "AmbiguousClassification",
    "boundary_residual",
    "find_branches",
    "classify_branch",
    "DEFAULT_WINDOW",
    "DEFAULT_GRID_POINTS",
    "DEFAULT_ROOT_TOL",
    "DEFAULT_RESIDUAL_CAP",
]

DEFAULT_WINDOW = (-120.0, 20.0)
DEFAULT_GRID_POINTS = 4000
DEFAULT_ROOT_TOL = 1e-11
DEFAULT_RESIDUAL_CAP = 10.0

# residual grid on which genuineness is judged (matches the residual tables)
_TABLE_GRID = np.linspace(0.0, 0.9, 10)


class AmbiguousClassification(RuntimeError):
    """Branch profiles are too close to order; the pair has merged (fold)."""


class BoundaryKind(Enum):
    """The three right-boundary conditions on w at r = 1."""

    DIRICHLET = "dirichlet"
    NAVIER_ONE = "navier1"
    NAVIER_TWO = "navier2"

    @classmethod
    def parse(cls, text: str) -> "BoundaryKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(kind.value for kind in cls)
            raise ValueError(f"unknown boundary kind {text!r}; expected one of {names}")

    def residual(self, w1: float, w1_prime: float) -> float:
        """Boundary functional on the endpoint pair (w(1), w'(1))."""
        if self is BoundaryKind.DIRICHLET:
            return w1
        if self is BoundaryKind.NAVIER_ONE:
            return w1_prime
        return w1 - w1_prime

    @property
    def default_iterations(self) -> int:
        """Iteration depth used for this condition unless overridden."""
        return 6 if self is BoundaryKind.DIRICHLET else 7

    @property
    def linear_root_coefficient(self) -> int:
        """c in the small-|lam| closed form w = lam/16 r**2 (r**2 - c)."""
        if self is BoundaryKind.DIRICHLET:
            return 1
        if self is BoundaryKind.NAVIER_ONE:
            return 2
        return 3


class BranchLabel(Enum):
    LOWER = "lower"
    UPPER = "upper"
    POSITIVE = "positive"
    NEGATIVE = "negative"

    @classmethod
    def parse(cls, text: str) -> "BranchLabel":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(label.value for label in cls)
            raise ValueError(f"unknown branch label {text!r}; expected one of {names}")


@dataclass(frozen=True)
class BranchRoot:
    """One resolved solution branch at fixed (lam, bc)."""

    a_star: float
    bc: BoundaryKind
    lam: float
    label: BranchLabel
    bracket: tuple


@lru_cache(maxsize=None)
def _kindex(n: int) -> np.ndarray:
    out = np.arange(n, dtype=float)
    out.setflags(write=False)
    return out


def _endpoint_pair(c: np.ndarray):
    # w(1) and w'(1) as plain coefficient sums
    k = _kindex(c.size)
    return float(c.sum()), float(np.dot(k, c))


def boundary_residual(a: float, lam: float, bc: BoundaryKind,
                      n_iter: int | None = None) -> float:
    """Right-boundary functional of the n_iter-step iterate started at a r**2."""
    n = bc.default_iterations if n_iter is None else n_iter
    w1, w1p = _endpoint_pair(_iterate_coeffs(a, lam, n))
    return bc.residual(w1, w1p)


def _residual_noise_floor(c: np.ndarray, bc: BoundaryKind) -> float:
    # rounding-error bound for evaluating the boundary functional: on steep
    # branches the coefficients cancel massively, and |B| cannot be resolved
    # below eps times the absolute coefficient mass
    k = _kindex(c.size)
    s0 = float(np.abs(c).sum())
    s1 = float(np.dot(k, np.abs(c)))
    if bc is BoundaryKind.DIRICHLET:
        scale = s0
    elif bc is BoundaryKind.NAVIER_ONE:
        scale = s1
    else:
        scale = s0 + s1
    return 8.0 * np.finfo(float).eps * scale


def _table_residual_max(a: float, lam: float, n: int) -> float:
    c = _iterate_coeffs(a, lam, n)
    defect = _defect_coeffs(c, lam, True)
    acc = np.zeros_like(_TABLE_GRID)
    for ck in defect[::-1]:
        acc = acc * _TABLE_GRID + ck
    return float(np.max(np.abs(acc)))


def _table_residual_excess(a: float, lam: float, n: int) -> float:
    """Largest defect reading beyond its own evaluation-noise bound.

    On the steepest branch the defect coefficients cancel so massively near
    r = 0.9 that the computed residual there is pure rounding noise; such
    points carry no evidence either way, so each grid point only counts by
    the amount it exceeds eps times its absolute coefficient mass.
    """
    c = _iterate_coeffs(a, lam, n)
    defect = _defect_coeffs(c, lam, True)
    acc = np.zeros_like(_TABLE_GRID)
    mass = np.zeros_like(_TABLE_GRID)
    for ck in defect[::-1]:
        acc = acc * _TABLE_GRID + ck
        mass = mass * _TABLE_GRID + abs(ck)
    noise = 8.0 * np.finfo(float).eps * mass
    return float(np.max(np.abs(acc) - noise))


def _bisect(f, lo: float, hi: float, f_lo: float):
    """Bisect a sign-change bracket down to floating-point resolution.

    Returns (root, achieved |f|).  If the bracket straddles zero the exact
    candidate a = 0 is probed first so that the trivial branch is reported
    as an exact zero root.
    """
    if lo < 0.0 < hi:
        if f(0.0) == 0.0:
            return 0.0, 0.0
    best_x, best_f = lo, abs(f_lo)
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = f(mid)
        if abs(f_mid) < best_f:
            best_x, best_f = mid, abs(f_mid)
        if f_mid == 0.0:
            return mid, 0.0
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return best_x, best_f


def _sup_norm(phi: RPoly) -> float:
    grid = np.linspace(0.0, 1.0, 101)
    return float(np.max(np.abs(evaluate(phi, grid))))


def classify_branch(root: BranchRoot, phi: RPoly,
                    partner_phi: RPoly | None = None) -> BranchRoot:
    """Attach the branch label implied by the recovered profile.

    For lam < 0 the label is the sign of phi at r = 1/2 (positive or
    negative solution); a profile that changes sign on [0, 1] triggers a
    soft warning, since sign-definiteness is expected but not enforced.
    For lam >= 0 the two coexisting branches are ordered by the sup norm
    of phi, so the partner profile is required to tell lower from upper;
    when the two sup norms agree to within 1e-9 the branches have merged
    and :class:`AmbiguousClassification` is raised.  Without a partner the
    single branch is labelled lower.
    """
    grid = np.linspace(0.0, 1.0, 101)
    if root.lam < 0.0:
        midvalue = evaluate(phi, 0.5)
        label = BranchLabel.POSITIVE if midvalue >= 0.0 else BranchLabel.NEGATIVE
        values = evaluate(phi, grid)
        tol = 1e-9 * max(1.0, float(np.max(np.abs(values))))
        if (values > tol).any() and (values < -tol).any():
            warnings.warn(
                f"branch at a={root.a_star:.6g} is not sign-definite on [0, 1]",
                RuntimeWarning,
                stacklevel=2,
            )
        return replace(root, label=label)
    if partner_phi is None:
        return replace(root, label=BranchLabel.LOWER)
    mine, theirs = _sup_norm(phi), _sup_norm(partner_phi)
    if abs(mine - theirs) < 1e-9:
        raise AmbiguousClassification(
            f"branch sup norms coincide to {abs(mine - theirs):.3e}; fold"
        )
    label = BranchLabel.LOWER if mine < theirs else BranchLabel.UPPER
    lower_vals, upper_vals = (
        (evaluate(phi, grid), evaluate(partner_phi, grid))
        if label is BranchLabel.LOWER
        else (evaluate(partner_phi, grid), evaluate(phi, grid))
    )
    slack = 1e-9 * max(1.0, float(np.max(np.abs(upper_vals))))
    if np.any(lower_vals > upper_vals + slack):
        warnings.warn(
            "branch profiles are not pointwise ordered on [0, 1]",
            RuntimeWarning,
            stacklevel=2,
        )
    return replace(root, label=label)


def _assign_labels(roots, phis, lam):
    if not roots:
        return []
    if lam < 0.0:
        return [classify_branch(root, phi) for root, phi in zip(roots, phis)]
    if len(roots) == 1:
        return [classify_branch(roots[0], phis[0])]
    if len(roots) == 2:
        try:
            return [
                classify_branch(roots[0], phis[0], phis[1]),
                classify_branch(roots[1], phis[1], phis[0]),
            ]
        except AmbiguousClassification:
            # merged pair: keep both, order arbitrarily by sup norm then a
            pass
    order = sorted(range(len(roots)), key=lambda i: (_sup_norm(phis[i]), i))
    labelled = []
    for rank, i in enumerate(order):
        label = BranchLabel.LOWER if rank == 0 else BranchLabel.UPPER
        labelled.append(replace(roots[i], label=label))
    labelled.sort(key=lambda root: root.a_star)
    return labelled


def find_branches(lam: float, bc: BoundaryKind,
                  window: tuple = DEFAULT_WINDOW,
                  grid_points: int = DEFAULT_GRID_POINTS,
                  *,
                  n_iter: int | None = None,
                  root_tol: float = DEFAULT_ROOT_TOL,
                  residual_cap: float = DEFAULT_RESIDUAL_CAP) -> list:
    """Locate and label every genuine solution branch inside the a-window.

    Scans the boundary functional on a uniform grid, bisects each
    sign-change bracket, and keeps a root only when the iterate at that
    root satisfies the differential equation to ``residual_cap`` on the
    standard residual grid.  An empty list is the expected non-existence
    signal above the critical deposition rate, not a failure.

    Roots are accepted when the boundary functional is below ``root_tol``
    or below the floating-point noise floor of its own evaluation,
    whichever is larger; the steep branch at large |a| is resolved to
    machine precision but its functional cannot be evaluated below the
    cancellation noise of its coefficients.
    """
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise ValueError("window must satisfy lo < hi")
    if grid_points < 100:
        raise ValueError("grid_points must be at least 100")
    n = bc.default_iterations if n_iter is None else n_iter

    def residual(a: float) -> float:
        return boundary_residual(a, lam, bc, n)

    xs = np.linspace(lo, hi, grid_points)
    fs = np.array([residual(x) for x in xs])

    brackets = []
    for i in range(grid_points - 1):
        if fs[i] == 0.0:
            brackets.append((xs[i], xs[i]))
        elif fs[i + 1] != 0.0 and fs[i] * fs[i + 1] < 0.0:
            brackets.append((xs[i], xs[i + 1]))
    if fs[-1] == 0.0:
        brackets.append((xs[-1], xs[-1]))

    # where the iteration diverges, the truncated functional oscillates and
    # produces dense bands of meaningless crossings; genuine branches are
    # isolated, or form one close pair near the fold
    centres = [0.5 * (b_lo + b_hi) for b_lo, b_hi in brackets]

    def crowded(centre: float) -> bool:
        return sum(1 for other in centres if abs(other - centre) <= 1.5) >= 3

    wild_cap = 100.0 * residual_cap
    rough_cap = 10.0 * residual_cap
    roots = []
    for b_lo, b_hi in brackets:
        mid = 0.5 * (b_lo + b_hi)
        if crowded(mid):
            continue
        mid_residual = _table_residual_max(mid, lam, n)
        if mid_residual > wild_cap:
            continue
        f_lo, f_hi = residual(b_lo), residual(b_hi)
        credible = (
            abs(f_lo) > _residual_noise_floor(_iterate_coeffs(b_lo, lam, n), bc)
            or abs(f_hi) > _residual_noise_floor(_iterate_coeffs(b_hi, lam, n), bc)
        )
        # a crossing below the evaluation noise of the functional is only
        # trusted when the iterate is well-behaved across the whole bracket
        if not credible and mid_residual > rough_cap:
            continue
        if b_lo == b_hi:
            a_star, achieved = b_lo, abs(f_lo)
        else:
            a_star, achieved = _bisect(residual, b_lo, b_hi, f_lo)
        floor = _residual_noise_floor(_iterate_coeffs(a_star, lam, n), bc)
        if achieved > max(root_tol, floor):
            warnings.warn(
                f"bracket [{b_lo:.6g}, {b_hi:.6g}] did not resolve below "
                f"tolerance (|B| = {achieved:.3e}); dropping",
                RuntimeWarning,
                stacklevel=2,
            )
            continue
        if _table_residual_excess(a_star, lam, n) > residual_cap:
            continue
        roots.append((a_star, (b_lo, b_hi)))

    deduped = []
    for a_star, bracket in sorted(roots):
        if deduped and abs(a_star - deduped[-1][0]) <= 1e-12 * max(1.0, abs(a_star)):
            continue
        deduped.append((a_star, bracket))

    unlabelled = [
        BranchRoot(a_star=float(a), bc=bc, lam=lam, label=BranchLabel.LOWER,
                   bracket=(float(br[0]), float(br[1])))
        for a, br in deduped
    ]
    phis = [
        recover.recover_phi(RPoly(_iterate_coeffs(root.a_star, lam, n)))
        for root in unlabelled
    ]
    labelled = _assign_labels(unlabelled, phis, lam)
    labelled.sort(key=lambda root: root.a_star)
    return labelled
