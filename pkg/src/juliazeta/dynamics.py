"""Dynamics of f(z) = z^2 + c for real c < -2.

The map is hyperbolic on its (Cantor, real) Julia set.  Everything here is
built from the two inverse branches

    g_+(z) = sqrt(z - c),    g_-(z) = -sqrt(z - c),

with the square root taken on the plane cut along (-inf, 0].  A word over
the alphabet {+,-} selects the composition

    g_w = g_{w_n} o ... o g_{w_1},

i.e. the FIRST letter of the word is applied FIRST.  The unique fixed point
of g_w is a periodic point of f of period n = |w|.

Orbit/letter convention (easy to get backwards): the fixed point z* of g_w
sits in the image of the outermost branch, so the sign of the j-th orbit
point x_j = f^j(z*) is the letter w_{n-j}.  Worked example with w = "+-",
c = -4: z* = g_-(g_+(z*)) = (-1 - sqrt(13))/2 < 0 has sign w_2 = '-', and
f(z*) = (-1 + sqrt(13))/2 > 0 has sign w_1 = '+'.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

from .errors import BranchCutError, CapacityError, ConvergenceError, DomainError

ALPHABET = ("-", "+")
MAX_ORDER = 16
FIXED_POINT_TOL = 1e-14
FIXED_POINT_MAX_ITER = 200
SAMPLES_PER_INTERVAL = 512


@dataclass(frozen=True)
class SystemParams:
    """Derived constants of one parameter c < -2.

    zeta_c is the largest fixed point of f; i_plus and i_minus are the two
    closed intervals trapping the positive and negative half of the Julia
    set; radius_R is a working disc radius in (zeta_c, -c); theta0 and eta0
    are the endpoint values of |x / (2(x - c))| at -zeta_c and zeta_c.
    """

    c: float
    zeta_c: float
    radius_R: float
    i_plus: tuple[float, float]
    i_minus: tuple[float, float]
    theta0: float
    eta0: float

    @property
    def branch_point(self) -> float:
        """sqrt(-zeta_c - c), the inner endpoint shared by i_plus/-i_minus."""
        return self.i_plus[0]

    def hull_grid(self, samples_per_interval: int = SAMPLES_PER_INTERVAL) -> np.ndarray:
        """Equispaced sample points covering i_minus then i_plus."""
        lo_m, hi_m = self.i_minus
        lo_p, hi_p = self.i_plus
        return np.concatenate(
            [
                np.linspace(lo_m, hi_m, samples_per_interval),
                np.linspace(lo_p, hi_p, samples_per_interval),
            ]
        )


@dataclass(frozen=True)
class PeriodicOrbit:
    """The fixed point of g_w together with its f-orbit and multiplier."""

    word: str
    point: float
    orbit: np.ndarray
    multiplier: float

    @property
    def period(self) -> int:
        return len(self.word)

    @property
    def itinerary(self) -> str:
        """Signs of x_0, x_1, ... in orbit order (the word reversed)."""
        return self.word[::-1]


def validate_word(word: str) -> str:
    if not word:
        raise ValueError("word must have length >= 1")
    for ch in word:
        if ch not in ("+", "-"):
            raise ValueError(f"invalid letter {ch!r}; alphabet is '+', '-'")
    return word


def word_sort_key(word: str) -> tuple[int, ...]:
    """Sort key realising lexicographic order with '-' < '+'."""
    return tuple(0 if ch == "-" else 1 for ch in word)


def words_of_length(n: int) -> Iterator[str]:
    """All words of length n in lexicographic order ('-' < '+')."""
    for letters in product(ALPHABET, repeat=n):
        yield "".join(letters)


def make_system(c: float) -> SystemParams:
    """Build SystemParams for c < -2; radius_R is the midpoint of (zeta_c, -c)."""
    if not c < -2:
        raise DomainError(f"c must be < -2 (got c = {c!r})")
    zeta_c = (math.sqrt(1.0 - 4.0 * c) + 1.0) / 2.0
    branch_point = math.sqrt(-zeta_c - c)
    return SystemParams(
        c=float(c),
        zeta_c=zeta_c,
        radius_R=(zeta_c + (-c)) / 2.0,
        i_plus=(branch_point, zeta_c),
        i_minus=(-zeta_c, -branch_point),
        theta0=zeta_c / (2.0 * (-zeta_c - c)),
        eta0=zeta_c / (2.0 * (zeta_c - c)),
    )


def apply_f(z: complex | float, sys: SystemParams) -> complex | float:
    """f(z) = z^2 + c."""
    return z * z + sys.c


def _check_cut(z: complex | float, c: float) -> None:
    w = z - c
    if isinstance(w, complex):
        if w.imag == 0.0 and w.real <= 0.0:
            raise BranchCutError(f"z - c = {w!r} lies on the cut (-inf, 0]")
    elif w <= 0.0:
        raise BranchCutError(f"z - c = {w!r} lies on the cut (-inf, 0]")


def inverse_branch(sign: str, z: complex | float, sys: SystemParams) -> complex | float:
    """g_sign(z) = sign * sqrt(z - c).  Raises BranchCutError on the cut.

    Float input with z - c > 0 stays float; complex input stays complex.
    """
    if sign not in ("+", "-"):
        raise ValueError(f"branch sign must be '+' or '-' (got {sign!r})")
    _check_cut(z, sys.c)
    if isinstance(z, complex):
        root = cmath.sqrt(z - sys.c)
    else:
        root = math.sqrt(z - sys.c)
    return root if sign == "+" else -root


def compose_inverse(word: str, z: complex | float, sys: SystemParams) -> complex | float:
    """g_w(z) = g_{w_n}(... g_{w_1}(z) ...): first letter applied first."""
    validate_word(word)
    out = z
    for ch in word:
        out = inverse_branch(ch, out, sys)
    return out


def branch_derivative(word: str, z: complex | float, sys: SystemParams) -> complex | float:
    """g_w'(z) = prod_j 1 / (2 x_j) over the intermediate points x_j = g_{w<=j}(z)."""
    validate_word(word)
    x = z
    deriv: complex | float = 1.0
    for ch in word:
        x = inverse_branch(ch, x, sys)
        deriv = deriv / (2.0 * x)
    return deriv


def _letter_signs(word: str) -> np.ndarray:
    return np.array([1.0 if ch == "+" else -1.0 for ch in word])


def periodic_point(word: str, sys: SystemParams) -> PeriodicOrbit:
    """Fixed point of g_w by fixed-point iteration from the seed zeta_c.

    Iterates until successive points differ by less than FIXED_POINT_TOL;
    the composition is eventually contracting so convergence is geometric.
    """
    validate_word(word)
    signs = _letter_signs(word)
    c = sys.c
    z = sys.zeta_c
    for _ in range(FIXED_POINT_MAX_ITER):
        z_new = z
        for s in signs:
            z_new = s * math.sqrt(z_new - c)
        if abs(z_new - z) < FIXED_POINT_TOL:
            z = z_new
            break
        z = z_new
    else:
        raise ConvergenceError(
            f"fixed point of g_w for word {word!r} did not converge in "
            f"{FIXED_POINT_MAX_ITER} iterations (c = {c})"
        )
    return _orbit_from_point(word, z, sys)


def _orbit_from_point(word: str, z: float, sys: SystemParams) -> PeriodicOrbit:
    n = len(word)
    orbit = np.empty(n)
    orbit[0] = z
    for k in range(1, n):
        orbit[k] = orbit[k - 1] ** 2 + sys.c
    multiplier = float(np.prod(2.0 * orbit))
    orbit.flags.writeable = False
    return PeriodicOrbit(word=word, point=float(z), orbit=orbit, multiplier=multiplier)


def enumerate_orbits(n: int, sys: SystemParams) -> list[PeriodicOrbit]:
    """All 2^n periodic orbits of period n, one per word, lexicographic order.

    The batch of fixed-point iterations runs in lockstep over a vector of
    all words; the returned order is the word order and does not depend on
    how the work is scheduled.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1 (got {n})")
    if n > MAX_ORDER:
        raise CapacityError(f"order {n} exceeds the maximum {MAX_ORDER}")
    words = list(words_of_length(n))
    signs = np.array([_letter_signs(w) for w in words])  # (2^n, n)
    c = sys.c
    z = np.full(len(words), sys.zeta_c)
    for _ in range(FIXED_POINT_MAX_ITER):
        z_new = z
        for j in range(n):
            z_new = signs[:, j] * np.sqrt(z_new - c)
        if np.max(np.abs(z_new - z)) < FIXED_POINT_TOL:
            z = z_new
            break
        z = z_new
    else:
        raise ConvergenceError(
            f"orbit batch at order {n} did not converge in "
            f"{FIXED_POINT_MAX_ITER} iterations (c = {c})"
        )
    return [_orbit_from_point(w, zw, sys) for w, zw in zip(words, z)]


def derivative_extrema_by_length(
    n_max: int,
    sys: SystemParams,
    samples_per_interval: int = SAMPLES_PER_INTERVAL,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Sampled min/max of |g_w'| over the hull grid for every word length.

    Walks the word tree depth-first ('-' child before '+') so memory stays
    O(n_max * grid).  Returns, for each length 1..n_max, a pair of arrays
    (mins, maxs) indexed by word in lexicographic order.
    """
    if n_max > MAX_ORDER:
        raise CapacityError(f"order {n_max} exceeds the maximum {MAX_ORDER}")
    grid = sys.hull_grid(samples_per_interval)
    c = sys.c
    mins: list[list[float]] = [[] for _ in range(n_max)]
    maxs: list[list[float]] = [[] for _ in range(n_max)]

    def walk(z: np.ndarray, deriv: np.ndarray, depth: int) -> None:
        for s in (-1.0, 1.0):
            z_child = s * np.sqrt(z - c)
            d_child = deriv / (2.0 * z_child)
            abs_d = np.abs(d_child)
            mins[depth].append(float(abs_d.min()))
            maxs[depth].append(float(abs_d.max()))
            if depth + 1 < n_max:
                walk(z_child, d_child, depth + 1)

    walk(grid, np.ones_like(grid), 0)
    return [(np.asarray(mins[d]), np.asarray(maxs[d])) for d in range(n_max)]


def derivative_extrema(
    n: int,
    sys: SystemParams,
    samples_per_interval: int = SAMPLES_PER_INTERVAL,
) -> tuple[np.ndarray, np.ndarray]:
    """Sampled min/max of |g_w'| per word of length exactly n."""
    return derivative_extrema_by_length(n, sys, samples_per_interval)[n - 1]


def contraction_rate(n: int, sys: SystemParams,
                     samples_per_interval: int = SAMPLES_PER_INTERVAL) -> float:
    """sup over |w| = n of the sampled sup of |g_w'| on the hull."""
    _, maxs = derivative_extrema(n, sys, samples_per_interval)
    return float(maxs.max())


def contraction_order(sys: SystemParams, n_limit: int = 8) -> int:
    """Smallest n with sup_w sup |g_w'| < 1 over words of length n.

    Raises ConvergenceError if no n <= n_limit is contracting (c too close
    to -2 for this limit).
    """
    for n in range(1, n_limit + 1):
        if contraction_rate(n, sys) < 1.0:
            return n
    raise ConvergenceError(f"no contracting order found up to n = {n_limit}")
