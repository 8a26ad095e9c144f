"""Word-set combinatorics: partitions, phase derivatives, separation checks.

The phase of a branch composition is phi_w = log|g_w'|.  Its derivative has
the closed form

    phi_w'(x) = sum_i s_i,   s_i = -1 / (2^i x_1 ... x_{i-1} x_i^2),

where x_i = g_{w<=i}(x), and the second derivative follows from the
identity g_v'' = g_v' * sum_j (-g_{v<=j}' / x_j).  Both are evaluated by
accumulating the running derivative product, never by forming 2^i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dynamics import (
    MAX_ORDER,
    SystemParams,
    branch_derivative,
    validate_word,
    word_sort_key,
    words_of_length,
)
from .errors import CapacityError, RelationError

PREFIX_SAMPLES = 512


@dataclass(frozen=True)
class WordStats:
    """Per-word partition data: image geometry and derivative range."""

    word: str
    interval_length: float
    deriv_min: float
    deriv_max: float
    image_minus: tuple[float, float]
    image_plus: tuple[float, float]


@dataclass(frozen=True)
class Partition:
    """A prefix-free covering word set Z(tau) with per-word statistics."""

    tau: float
    params: SystemParams
    words: tuple[str, ...]
    stats: tuple[WordStats, ...]

    def stats_for(self, word: str) -> WordStats:
        return self.stats[self.words.index(word)]

    def to_json_dict(self) -> dict:
        return {
            "tau": self.tau,
            "words": list(self.words),
            "stats": {
                s.word: {
                    "interval_length": s.interval_length,
                    "deriv_min": s.deriv_min,
                    "deriv_max": s.deriv_max,
                }
                for s in self.stats
            },
        }


@dataclass(frozen=True)
class PhaseData:
    """phi_w' and phi_w'' at one real point."""

    word: str
    x: float
    phi_prime: float
    phi_second: float


def split_index(w: str, v: str) -> tuple[int, bool]:
    """Largest m with w_{<m} = v_{<m}, and whether w ~ v.

    m - 1 is the length of the common prefix: m = 1 when the first letters
    differ, m = min(|w|,|v|) + 1 when one word extends (or equals) the
    other.  The pair is related (w ~ v) unless m <= min(|w|,|v|) - 1.
    """
    validate_word(w)
    validate_word(v)
    common = 0
    for a, b in zip(w, v):
        if a != b:
            break
        common += 1
    m = common + 1
    related = not (m <= min(len(w), len(v)) - 1)
    return m, related


def branch_image_intervals(
    word: str, sys: SystemParams
) -> tuple[tuple[float, float], tuple[float, float]]:
    """(g_w(i_minus), g_w(i_plus)) as closed intervals via endpoint images.

    Each branch is monotone on real intervals right of the cut, so the
    image of an interval is the sorted image of its endpoints.
    """
    validate_word(word)
    c = sys.c

    def image(lo: float, hi: float) -> tuple[float, float]:
        a, b = lo, hi
        for ch in word:
            sgn = 1.0 if ch == "+" else -1.0
            a = sgn * np.sqrt(a - c)
            b = sgn * np.sqrt(b - c)
        return (a, b) if a <= b else (b, a)

    return image(*sys.i_minus), image(*sys.i_plus)


def hull_image_length(word: str, sys: SystemParams) -> float:
    """|I_w| := |g_w(zeta_c) - g_w(-zeta_c)|, the hull-endpoint image span."""
    c = sys.c
    a, b = -sys.zeta_c, sys.zeta_c
    for ch in word:
        sgn = 1.0 if ch == "+" else -1.0
        a = sgn * np.sqrt(a - c)
        b = sgn * np.sqrt(b - c)
    return abs(b - a)


def _word_stats(word: str, sys: SystemParams, grid: np.ndarray) -> WordStats:
    c = sys.c
    z = grid
    deriv = np.ones_like(grid)
    for ch in word:
        sgn = 1.0 if ch == "+" else -1.0
        z = sgn * np.sqrt(z - c)
        deriv = deriv / (2.0 * z)
    abs_d = np.abs(deriv)
    img_minus, img_plus = branch_image_intervals(word, sys)
    return WordStats(
        word=word,
        interval_length=hull_image_length(word, sys),
        deriv_min=float(abs_d.min()),
        deriv_max=float(abs_d.max()),
        image_minus=img_minus,
        image_plus=img_plus,
    )


def build_partition(
    tau: float,
    sys: SystemParams,
    samples_per_interval: int = PREFIX_SAMPLES,
) -> Partition:
    """Z(tau): split words breadth-first until their hull image drops below tau.

    A word enters the partition once |I_w| < tau; while |I_w| >= tau it is
    replaced by its two one-letter extensions.  Raises CapacityError if a
    word would have to grow beyond MAX_ORDER.
    """
    if not (tau > 0.0 and np.isfinite(tau)):
        raise ValueError(f"tau must be positive and finite (got {tau!r})")
    queue = ["-", "+"]
    leaves: list[str] = []
    while queue:
        word = queue.pop(0)
        if hull_image_length(word, sys) < tau:
            leaves.append(word)
            continue
        if len(word) >= MAX_ORDER:
            raise CapacityError(
                f"partition word {word!r} reached order {MAX_ORDER} with "
                f"|I_w| >= tau = {tau}"
            )
        queue.append(word + "-")
        queue.append(word + "+")
    leaves.sort(key=word_sort_key)
    grid = sys.hull_grid(samples_per_interval)
    stats = tuple(_word_stats(w, sys, grid) for w in leaves)
    return Partition(tau=float(tau), params=sys, words=tuple(leaves), stats=stats)


def is_prefix_free(words: Iterable[str]) -> bool:
    ws = sorted(words, key=word_sort_key)
    for i, w in enumerate(ws):
        for v in ws[i + 1 :]:
            if v.startswith(w) and len(v) > len(w):
                return False
    return True


def covers_all_words(partition: Partition) -> bool:
    """Every word longer than the deepest partition word has exactly one
    prefix in the partition (checked exhaustively at depth max+1)."""
    depth = max(len(w) for w in partition.words) + 1
    wordset = set(partition.words)
    for w in words_of_length(depth):
        hits = sum(1 for j in range(1, len(w) + 1) if w[:j] in wordset)
        if hits != 1:
            return False
    return True


def _phase_terms(word: str, x: float, sys: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Per-step terms s_i and intermediate points x_i along the composition."""
    c = sys.c
    z = float(x)
    deriv = 1.0
    s_terms = np.empty(len(word))
    points = np.empty(len(word))
    for i, ch in enumerate(word):
        sgn = 1.0 if ch == "+" else -1.0
        z = sgn * np.sqrt(z - c)
        deriv = deriv / (2.0 * z)
        s_terms[i] = -deriv / z
        points[i] = z
    return s_terms, points


def phase_derivatives(word: str, x: float, sys: SystemParams) -> PhaseData:
    """phi_w'(x) and phi_w''(x) from the explicit per-step sums."""
    validate_word(word)
    s_terms, _ = _phase_terms(word, x, sys)
    running = np.cumsum(s_terms)
    phi_prime = float(s_terms.sum())
    phi_second = float(np.sum(s_terms * (running + s_terms)))
    return PhaseData(word=word, x=float(x), phi_prime=phi_prime, phi_second=phi_second)


def separation_ratio(w: str, v: str, x: float, sys: SystemParams) -> float:
    """|phi_w'(x) - phi_v'(x)| normalised by |g'_{w<=m+1}(x)|.

    Only defined for unrelated pairs; raises RelationError otherwise.
    """
    m, related = split_index(w, v)
    if related:
        raise RelationError(f"words {w!r} and {v!r} are related (m = {m})")
    num = abs(
        phase_derivatives(w, x, sys).phi_prime
        - phase_derivatives(v, x, sys).phi_prime
    )
    den = abs(branch_derivative(w[: m + 1], x, sys))
    return num / den


def second_derivative_ratio(w: str, v: str, x: float, sys: SystemParams) -> float:
    """|phi_w''(x) - phi_v''(x)| / |g'_{w<=m+1}(x)| for unrelated pairs."""
    m, related = split_index(w, v)
    if related:
        raise RelationError(f"words {w!r} and {v!r} are related (m = {m})")
    num = abs(
        phase_derivatives(w, x, sys).phi_second
        - phase_derivatives(v, x, sys).phi_second
    )
    den = abs(branch_derivative(w[: m + 1], x, sys))
    return num / den


def orthogonality_stats(partition: Partition) -> tuple[int, int]:
    """(max_related, max_point_multiplicity) for a built partition.

    max_related counts, for the worst word w, the partition words v with
    |v| >= |w| related to w (w itself included).  max_point_multiplicity is
    the largest number of word images g_w(I) covering a single sampled
    point of the hull.
    """
    words = partition.words
    max_related = 0
    for w in words:
        count = 0
        for v in words:
            if len(v) < len(w):
                continue
            _, related = split_index(w, v)
            if related:
                count += 1
        max_related = max(max_related, count)

    grid = partition.params.hull_grid(PREFIX_SAMPLES)
    multiplicity = np.zeros(grid.shape, dtype=int)
    for s in partition.stats:
        for lo, hi in (s.image_minus, s.image_plus):
            multiplicity += (grid >= lo) & (grid <= hi)
    return max_related, int(multiplicity.max())
