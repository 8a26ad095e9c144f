"""Zero location for Delta_N: the dimension on the real axis, complex zero
atlases from grid-launched Newton iteration, and an argument-principle
counter used to cross-validate the atlases.

Rectangles live in the closed upper half plane (im_min >= 0).  When
im_min = 0 the counting contour is taken over the conjugate-symmetric
rectangle and real-axis zeros are counted separately, so the returned
count is the number of zeros with Im(s) in [im_min, im_max] exactly as a
Newton atlas of the same rectangle reports them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dynamics import SystemParams, derivative_extrema, make_system
from .errors import BracketError, ContourError, ConvergenceError, JuliaZetaError
from .zeta import ZetaApproximant, approximant, build_trace_table

NEWTON_MAX_ITER = 50
NEWTON_RESIDUAL = 1e-10
POLISH_RESIDUAL = 1e-12
DEDUP_DISTANCE = 1e-6
SCAN_STEP = 1e-3
BISECT_WIDTH = 1e-6
CONTOUR_BASE_PANELS = 256  # 16-node panels -> 4096 nodes per side
CONTOUR_INTEGRALITY = 1e-3
CONTOUR_PERTURBATIONS = (0.0, 0.0054321, -0.0054321, 0.0154321)

_G16 = np.polynomial.legendre.leggauss(16)
_G8 = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class Zero:
    """A located zero with its residual and the Newton effort spent."""

    s: complex
    residual: float
    newton_iterations: int
    order_N: int


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self) -> None:
        if not self.re_min < self.re_max:
            raise ValueError(f"re_min {self.re_min} must be < re_max {self.re_max}")
        if not 0.0 <= self.im_min < self.im_max:
            raise ValueError(
                f"need 0 <= im_min < im_max (got {self.im_min}, {self.im_max})"
            )

    def contains(self, s: complex, slack: float = 1e-12) -> bool:
        return (
            self.re_min - slack <= s.real <= self.re_max + slack
            and self.im_min - slack <= s.imag <= self.im_max + slack
        )


def _real_values(zeta: ZetaApproximant, xs: np.ndarray) -> np.ndarray:
    values, _ = zeta.evaluate(xs.astype(complex))
    return values.real


def _newton_polish_real(zeta: ZetaApproximant, x: float, target: float) -> tuple[float, float, int]:
    for it in range(NEWTON_MAX_ITER):
        value, deriv = zeta.evaluate(np.array([complex(x)]))
        residual = abs(value[0])
        if residual < target:
            return x, residual, it
        if deriv[0] == 0:
            break
        x = x - (value[0] / deriv[0]).real
    raise ConvergenceError(f"Newton polish stalled at x = {x} (residual {residual})")


def largest_real_zero(
    zeta: ZetaApproximant, bracket: tuple[float, float] = (0.01, 1.2)
) -> Zero:
    """Largest real zero of Delta_N in the bracket.

    Scans downward from the top in steps of 1e-3 for the first sign change
    (so smaller real zeros cannot shadow the largest one), bisects to width
    1e-6, then Newton-polishes to residual < 1e-12.
    """
    lo, hi = bracket
    if not lo < hi:
        raise ValueError(f"invalid bracket {bracket!r}")
    xs = np.arange(hi, lo - SCAN_STEP / 2, -SCAN_STEP)
    values = _real_values(zeta, xs)
    change = np.nonzero(values[:-1] * values[1:] <= 0.0)[0]
    if change.size == 0:
        raise BracketError(f"no sign change of Delta_N on [{lo}, {hi}]")
    i = int(change[0])
    a, b = float(xs[i + 1]), float(xs[i])  # a < b, sign change inside
    fa = float(_real_values(zeta, np.array([a]))[0])
    while b - a > BISECT_WIDTH:
        mid = 0.5 * (a + b)
        fm = float(_real_values(zeta, np.array([mid]))[0])
        if fa * fm <= 0.0:
            b = mid
        else:
            a, fa = mid, fm
    x, residual, iterations = _newton_polish_real(zeta, 0.5 * (a + b), POLISH_RESIDUAL)
    return Zero(
        s=complex(x),
        residual=residual,
        newton_iterations=iterations,
        order_N=zeta.order_N,
    )


def _pressure_root(ratios: np.ndarray) -> float:
    """Solve sum(ratios**s) = 1 for s > 0 by bisection (sum is decreasing)."""
    lo, hi = 0.0, 2.0
    while np.sum(ratios**hi) > 1.0:
        hi *= 2.0
        if hi > 64:
            raise ConvergenceError("pressure root escaped beyond s = 64")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if np.sum(ratios**mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def moran_bracket(n: int, sys: SystemParams) -> tuple[float, float]:
    """Two-sided dimension bounds from sampled branch-derivative extrema.

    lo solves sum over |w| = n of (min |g_w'|)^s = 1 and hi the same with
    max |g_w'|; bounded distortion puts the dimension between them.
    """
    mins, maxs = derivative_extrema(n, sys)
    return _pressure_root(mins), _pressure_root(maxs)


def _normalize_upper(points: np.ndarray) -> np.ndarray:
    """Snap near-real points to the axis and reflect lower-half points up."""
    pts = points.copy()
    tiny = np.abs(pts.imag) < 1e-12
    pts[tiny] = pts[tiny].real
    lower = pts.imag < 0
    pts[lower] = np.conj(pts[lower])
    return pts


def find_zeros_rectangle(
    zeta: ZetaApproximant, rect: Rectangle, grid_step: float
) -> list[Zero]:
    """Newton iteration from every grid node of the rectangle.

    Converged points (residual < 1e-10) are snapped to the upper half
    plane, filtered to the rectangle, deduplicated at distance 1e-6 and
    sorted by (Im, Re).
    """
    if not grid_step > 0:
        raise ValueError(f"grid_step must be positive (got {grid_step})")
    res = np.arange(rect.re_min, rect.re_max + grid_step / 2, grid_step)
    ims = np.arange(rect.im_min, rect.im_max + grid_step / 2, grid_step)
    starts = (res[None, :] + 1j * ims[:, None]).ravel()

    current = starts.copy()
    found = np.full(starts.shape, np.nan + 0j)
    iterations = np.zeros(starts.shape, dtype=int)
    active = np.arange(starts.size)
    # generous wandering box; iterates leaving it cannot converge back into rect
    box = (rect.re_min - 2.0, rect.re_max + 2.0, -rect.im_max - 2.0, rect.im_max + 2.0)
    for it in range(NEWTON_MAX_ITER):
        if active.size == 0:
            break
        value, deriv = zeta.evaluate(current[active])
        converged = np.abs(value) < NEWTON_RESIDUAL
        found[active[converged]] = current[active[converged]]
        iterations[active[converged]] = it
        with np.errstate(all="ignore"):
            step = np.where(deriv != 0, value / deriv, np.inf)
            proposed = current[active] - step
        inside = (
            np.isfinite(proposed)
            & (proposed.real > box[0])
            & (proposed.real < box[1])
            & (proposed.imag > box[2])
            & (proposed.imag < box[3])
        )
        keep = ~converged & inside
        current[active[keep]] = proposed[keep]
        active = active[keep]

    hits = np.isfinite(found)
    points = _normalize_upper(found[hits])
    its = iterations[hits]
    order = np.lexsort((points.real, points.imag))
    zeros: list[Zero] = []
    for idx in order:
        s = complex(points[idx])
        if not rect.contains(s):
            continue
        if any(abs(s - z.s) < DEDUP_DISTANCE for z in zeros):
            continue
        value, _ = zeta.evaluate(np.array([s]))
        zeros.append(
            Zero(
                s=s,
                residual=float(abs(value[0])),
                newton_iterations=int(its[idx]),
                order_N=zeta.order_N,
            )
        )
    return zeros


def _segment_integrals(
    zeta: ZetaApproximant, a: np.ndarray, b: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """GL-16 integral of Delta'/Delta on segments [a_i, b_i] plus an
    embedded GL-8 error estimate."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes16 = (mid[:, None] + half[:, None] * _G16[0][None, :]).ravel()
    nodes8 = (mid[:, None] + half[:, None] * _G8[0][None, :]).ravel()
    value, deriv = zeta.evaluate(np.concatenate([nodes16, nodes8]))
    with np.errstate(all="ignore"):
        f = deriv / value
    n = a.size
    f16 = f[: 16 * n].reshape(n, 16)
    f8 = f[16 * n :].reshape(n, 8)
    integral = (f16 @ _G16[1]) * half
    coarse = (f8 @ _G8[1]) * half
    return integral, np.abs(integral - coarse)


def _winding_number(
    zeta: ZetaApproximant,
    corners: list[complex],
    tol: float,
    base_panels: int = CONTOUR_BASE_PANELS,
    max_passes: int = 40,
) -> tuple[float, float]:
    """(1/2*pi*i) * contour integral of Delta'/Delta over a closed polygon.

    Adaptive composite Gauss-Legendre: panels whose embedded error estimate
    exceeds their share of tol are bisected (locally doubling the rule)
    until the total estimate is below tol.  Returns (real winding, error
    estimate); the caller applies the integrality test.
    """
    a_list = []
    b_list = []
    for i, start in enumerate(corners):
        end = corners[(i + 1) % len(corners)]
        edges = start + (end - start) * np.arange(base_panels + 1) / base_panels
        a_list.append(edges[:-1])
        b_list.append(edges[1:])
    a = np.concatenate(a_list)
    b = np.concatenate(b_list)
    perimeter = float(np.sum(np.abs(b - a)))
    integral, err = _segment_integrals(zeta, a, b)
    total = integral.sum()
    total_err = float(err.sum())
    for _ in range(max_passes):
        if total_err <= tol:
            break
        local_tol = tol * np.abs(b - a) / perimeter
        bad = err > local_tol
        if not bad.any():
            break
        a_bad, b_bad = a[bad], b[bad]
        mid = 0.5 * (a_bad + b_bad)
        a = np.concatenate([a_bad, mid])
        b = np.concatenate([mid, b_bad])
        refined, err_children = _segment_integrals(zeta, a, b)
        total = total - integral[bad].sum() + refined.sum()
        total_err = total_err - float(err[bad].sum()) + float(err_children.sum())
        integral, err = refined, err_children
    count = total / (2j * np.pi)
    return float(count.real), total_err


def _count_real_zeros(zeta: ZetaApproximant, lo: float, hi: float) -> int:
    xs = np.arange(lo, hi + SCAN_STEP / 2, SCAN_STEP)
    if xs.size < 2:
        return 0
    values = _real_values(zeta, xs)
    return int(np.count_nonzero(values[:-1] * values[1:] < 0.0))


def count_zeros_argument(zeta: ZetaApproximant, rect: Rectangle) -> int:
    """Number of zeros in the closed rectangle by the argument principle.

    For im_min = 0, integrates over the conjugate-symmetric rectangle and
    combines with a real-axis sign scan: symmetric winding = 2 * (strictly
    upper zeros) + (real zeros).  The integrality check (< 1e-3) is
    retried over deterministically perturbed rectangles before raising
    ContourError.
    """
    count, _ = _count_zeros_argument_detail(zeta, rect)
    return count


def _count_zeros_argument_detail(
    zeta: ZetaApproximant, rect: Rectangle
) -> tuple[int, Rectangle]:
    failures = []
    for offset in CONTOUR_PERTURBATIONS:
        r = replace(
            rect,
            re_min=rect.re_min - offset,
            re_max=rect.re_max + offset,
            im_max=rect.im_max + offset,
            im_min=rect.im_min if rect.im_min == 0.0 else rect.im_min + offset,
        )
        if r.im_min == 0.0:
            corners = [
                complex(r.re_min, -r.im_max),
                complex(r.re_max, -r.im_max),
                complex(r.re_max, r.im_max),
                complex(r.re_min, r.im_max),
            ]
            winding, err = _winding_number(zeta, corners, tol=2e-4)
            n_real = _count_real_zeros(zeta, r.re_min, r.re_max)
            nearest = round(winding)
            if (
                abs(winding - nearest) < CONTOUR_INTEGRALITY
                and (nearest + n_real) % 2 == 0
            ):
                return (nearest + n_real) // 2, r
            failures.append((winding, n_real))
        else:
            corners = [
                complex(r.re_min, r.im_min),
                complex(r.re_max, r.im_min),
                complex(r.re_max, r.im_max),
                complex(r.re_min, r.im_max),
            ]
            winding, err = _winding_number(zeta, corners, tol=2e-4)
            nearest = round(winding)
            if abs(winding - nearest) < CONTOUR_INTEGRALITY:
                return nearest, r
            failures.append((winding, None))
    raise ContourError(
        f"argument-principle count failed integrality after "
        f"{len(CONTOUR_PERTURBATIONS)} rectangle perturbations: {failures}"
    )


@dataclass(frozen=True)
class SweepRow:
    c: float
    order_N: int
    delta: float
    residual: float
    bracket_lo: float
    bracket_hi: float
    error: str | None = None


def dimension_sweep(
    c_min: float,
    c_max: float,
    step: float,
    N: int,
    bracket_order: int = 10,
) -> list[SweepRow]:
    """One dimension solve per c on the closed grid [c_min, c_max].

    Rows that fail record their error message and the sweep continues.
    """
    if not (c_min < c_max):
        raise ValueError(f"empty sweep range [{c_min}, {c_max}]")
    if not c_max < -2:
        raise ValueError(f"sweep requires c_max < -2 (got {c_max})")
    rows: list[SweepRow] = []
    c_values = np.arange(c_min, c_max + step / 2, step)
    for c in c_values:
        c = float(c)
        try:
            sys = make_system(c)
            zeta = approximant(build_trace_table(N, sys))
            zero = largest_real_zero(zeta)
            lo, hi = moran_bracket(min(bracket_order, N), sys)
            rows.append(
                SweepRow(
                    c=c,
                    order_N=N,
                    delta=zero.s.real,
                    residual=zero.residual,
                    bracket_lo=lo,
                    bracket_hi=hi,
                )
            )
        except JuliaZetaError as exc:
            rows.append(
                SweepRow(
                    c=c,
                    order_N=N,
                    delta=float("nan"),
                    residual=float("nan"),
                    bracket_lo=float("nan"),
                    bracket_hi=float("nan"),
                    error=f"{type(exc).__name__}: {exc}",
                )
            )
    return rows
