"""Trace coefficients and the truncated zeta approximant Delta_N.

Per period n the trace data is one (ln|L|, L^2/(L-1)^2) pair per orbit,
with L the orbit multiplier.  The degree-N approximant is the truncation
of exp(-A) for A(s) = sum_n a_n(s):

    d_0 = 1,   d_n = -(1/n) * sum_{k=1..n} k a_k d_{n-k},
    Delta_N = d_0 + ... + d_N,

algebraically equal to the ordered-composition sum
1 + sum_n sum_{n_1+...+n_m=n} ((-1)^m / m!) prod_l a_{n_l}, which is kept
as a cross-check oracle for N <= 10.

All per-level sums run over orbits in lexicographic word order through an
explicit pairwise (halving) tree, so results are bit-stable regardless of
how callers schedule work.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import factorial

import numpy as np

from .dynamics import MAX_ORDER, SystemParams, enumerate_orbits
from .errors import CapacityError

WEIGHT_IDENTITY_RTOL = 1e-12
COMPOSITION_MAX_ORDER = 10


def pairwise_sum(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Sum by repeated pairing of adjacent elements (fixed reduction tree)."""
    a = np.ascontiguousarray(np.moveaxis(np.asarray(values), axis, -1))
    while a.shape[-1] > 1:
        n = a.shape[-1]
        tail = a[..., -1:] if n % 2 else None
        paired = a[..., : n - n % 2].reshape(a.shape[:-1] + ((n - n % 2) // 2, 2))
        a = paired.sum(axis=-1)
        if tail is not None:
            a = np.concatenate([a, tail], axis=-1)
    return a[..., 0]


@dataclass(frozen=True)
class TraceLevel:
    """Per-orbit multiplier data for one period, lexicographic word order."""

    log_abs_multiplier: np.ndarray
    weight: np.ndarray
    sign: np.ndarray


@dataclass(frozen=True)
class TraceTable:
    """Cached orbit data for periods 1..order_N."""

    order_N: int
    params: SystemParams
    levels: tuple[TraceLevel, ...]

    def level(self, n: int) -> TraceLevel:
        if not 1 <= n <= self.order_N:
            raise ValueError(f"level {n} outside 1..{self.order_N}")
        return self.levels[n - 1]


@dataclass(frozen=True)
class ZetaApproximant:
    """Delta_N evaluator over a trace table, with analytic s-derivative."""

    table: TraceTable
    order_N: int

    def __post_init__(self) -> None:
        if not 0 <= self.order_N <= self.table.order_N:
            raise ValueError(
                f"order_N = {self.order_N} outside 0..{self.table.order_N}"
            )

    @cached_property
    def _packed(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Per level: (ln|L|, columns [weight, -ln|L|*weight]) for one-pass
        evaluation of a_n and a_n'."""
        out = []
        for lv in self.table.levels[: self.order_N]:
            ln = lv.log_abs_multiplier
            out.append((ln, np.stack([lv.weight, -ln * lv.weight], axis=1)))
        return out

    def evaluate(
        self, s: np.ndarray, chunk: int = 512
    ) -> tuple[np.ndarray, np.ndarray]:
        """(Delta_N(s), dDelta_N/ds) for an array of complex points.

        Work is chunked to bound the (points x orbits) intermediates; the
        chunk size does not affect the results.
        """
        s_arr = np.asarray(s, dtype=complex)
        flat = np.atleast_1d(s_arr).ravel()
        values = np.empty(flat.shape, dtype=complex)
        derivs = np.empty(flat.shape, dtype=complex)
        for start in range(0, flat.size, chunk):
            sl = slice(start, start + chunk)
            values[sl], derivs[sl] = _evaluate_many(flat[sl], self._packed)
        shape = np.atleast_1d(s_arr).shape
        return values.reshape(shape), derivs.reshape(shape)


def build_trace_table(N: int, sys: SystemParams) -> TraceTable:
    """Enumerate orbits for n = 1..N and cache their trace data.

    The weight L^2/(L-1)^2 is checked on every entry against its other
    algebraic form (1 + (1-2L)/L^2)^(-1); a violation signals a broken
    multiplier and raises ArithmeticError.
    """
    if not 1 <= N <= MAX_ORDER:
        raise CapacityError(f"order {N} outside 1..{MAX_ORDER}")
    levels = []
    for n in range(1, N + 1):
        orbits = enumerate_orbits(n, sys)
        mult = np.array([orb.multiplier for orb in orbits])
        if np.any(np.abs(mult) <= 1.0):
            raise ArithmeticError(
                f"non-hyperbolic multiplier at period {n} (c = {sys.c})"
            )
        weight = mult**2 / (mult - 1.0) ** 2
        printed_form = 1.0 / (1.0 + (1.0 - 2.0 * mult) / mult**2)
        rel = np.abs(weight - printed_form) / np.abs(weight)
        if np.any(rel >= WEIGHT_IDENTITY_RTOL):
            raise ArithmeticError(
                f"weight identity violated at period {n}: max rel diff {rel.max()}"
            )
        for arr in (mult, weight):
            arr.flags.writeable = False
        log_abs = np.log(np.abs(mult))
        sign = np.sign(mult)
        log_abs.flags.writeable = False
        sign.flags.writeable = False
        levels.append(
            TraceLevel(log_abs_multiplier=log_abs, weight=weight, sign=sign)
        )
    return TraceTable(order_N=N, params=sys, levels=tuple(levels))


def approximant(table: TraceTable, order_N: int | None = None) -> ZetaApproximant:
    return ZetaApproximant(table=table, order_N=table.order_N if order_N is None else order_N)


def trace_coefficient(n: int, s: complex, table: TraceTable) -> complex:
    """a_n(s) = (1/n) sum over period-n orbits of |L|^{-s} L^2/(L-1)^2."""
    lv = table.level(n)
    terms = np.exp(-s * lv.log_abs_multiplier) * lv.weight
    return complex(pairwise_sum(terms)) / n


def trace_coefficient_derivative(n: int, s: complex, table: TraceTable) -> complex:
    """d a_n / ds = (1/n) sum of -ln|L| |L|^{-s} L^2/(L-1)^2."""
    lv = table.level(n)
    terms = -lv.log_abs_multiplier * np.exp(-s * lv.log_abs_multiplier) * lv.weight
    return complex(pairwise_sum(terms)) / n


def _power_kernel(s_flat: np.ndarray, ln: np.ndarray) -> np.ndarray:
    """exp(-s ln) as an (M, K) array; real s skips the angular factors."""
    radial = np.exp(np.multiply.outer(-s_flat.real, ln))
    if not s_flat.imag.any():
        return radial
    angle = np.multiply.outer(s_flat.imag, ln)
    return radial * np.cos(angle) - 1j * (radial * np.sin(angle))


def _evaluate_many(
    s: np.ndarray, packed: list[tuple[np.ndarray, np.ndarray]]
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised Delta_N and derivative over a flat array of points."""
    s_flat = np.atleast_1d(s).ravel()
    M = s_flat.size
    N = len(packed)
    a = np.zeros((N + 1, M), dtype=complex)
    a_prime = np.zeros((N + 1, M), dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        for n, (ln, cols) in enumerate(packed, start=1):
            kernel = _power_kernel(s_flat, ln)
            terms = kernel[:, :, None] * cols[None, :, :]
            both = pairwise_sum(terms, axis=1)
            a[n] = both[:, 0] / n
            a_prime[n] = both[:, 1] / n
        d = np.zeros((N + 1, M), dtype=complex)
        d_prime = np.zeros((N + 1, M), dtype=complex)
        d[0] = 1.0
        for n in range(1, N + 1):
            acc = np.zeros(M, dtype=complex)
            acc_prime = np.zeros(M, dtype=complex)
            for k in range(1, n + 1):
                acc += k * a[k] * d[n - k]
                acc_prime += k * (a_prime[k] * d[n - k] + a[k] * d_prime[n - k])
            d[n] = -acc / n
            d_prime[n] = -acc_prime / n
    value = pairwise_sum(d, axis=0)
    deriv = pairwise_sum(d_prime, axis=0)
    shape = np.atleast_1d(s).shape
    return value.reshape(shape), deriv.reshape(shape)


def delta_N(s: complex, zeta: ZetaApproximant) -> complex:
    """Delta_N(s) via the exponential recursion."""
    value, _ = zeta.evaluate(np.array([s], dtype=complex))
    return complex(value[0])


def delta_N_derivative(s: complex, zeta: ZetaApproximant) -> complex:
    """dDelta_N/ds via the same recursion with product-rule propagation."""
    _, deriv = zeta.evaluate(np.array([s], dtype=complex))
    return complex(deriv[0])


def delta_N_composition(s: complex, zeta: ZetaApproximant) -> complex:
    """Direct ordered-composition evaluation of Delta_N (oracle, N <= 10).

    Enumerates every ordered tuple (n_1, ..., n_m) of positive integers
    with sum <= N and accumulates ((-1)^m / m!) prod a_{n_l}.
    """
    N = zeta.order_N
    if N > COMPOSITION_MAX_ORDER:
        raise CapacityError(
            f"composition oracle limited to N <= {COMPOSITION_MAX_ORDER}"
        )
    a = [0j] + [trace_coefficient(n, s, zeta.table) for n in range(1, N + 1)]
    total = 1.0 + 0j
    for n in range(1, N + 1):
        for m in range(1, n + 1):
            coeff = (-1.0) ** m / factorial(m)
            for composition in product(range(1, n - m + 2), repeat=m):
                if sum(composition) != n:
                    continue
                prod_a = 1.0 + 0j
                for part in composition:
                    prod_a *= a[part]
                total += coeff * prod_a
    return total
