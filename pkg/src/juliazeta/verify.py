"""Numerical certification of the closed-form threshold inequalities.

Everything here is a pure function of c built from the endpoint ratio

    rho(x) = |x / (2(x - c))|,

which is monotone on each branch interval, so suprema and infima are
endpoint evaluations: theta0 = rho(-zeta_c), eta0 = rho(zeta_c), and the
inner endpoint lambda = -sqrt(-zeta_c - c) gives the i_minus infimum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dynamics import (
    SystemParams,
    compose_inverse,
    derivative_extrema_by_length,
    inverse_branch,
)


@dataclass(frozen=True)
class VerificationReport:
    """All threshold quantities and their verdicts for one parameter."""

    c: float
    theta0: float
    eta0: float
    ratio_sqrt5: float
    lhs_152: float
    nn2_triple: tuple[float, float, float]
    verdicts: dict[str, bool]


def endpoint_ratio(x: float, sys: SystemParams) -> float:
    """rho(x) = |x / (2(x - c))|."""
    return abs(x / (2.0 * (x - sys.c)))


def check_contraction_ratio(sys: SystemParams) -> tuple[float, bool]:
    """theta0 = sup over the hull of rho, attained at -zeta_c; holds iff < 1."""
    return sys.theta0, sys.theta0 < 1.0


def check_sqrt5_threshold(sys: SystemParams) -> tuple[float, bool]:
    """theta0 / (1 - eta0); drops below 1 exactly at c = -2 - sqrt(5)."""
    ratio = sys.theta0 / (1.0 - sys.eta0)
    return ratio, ratio < 1.0


def check_152(sys: SystemParams) -> tuple[float, bool]:
    """Two-bracket endpoint inequality whose negativity sharpens the
    phase-separation threshold from -2 - sqrt(5) to -3.75.

    With lam = -sqrt(-zeta_c - c) and rho as above:

      first  = theta0 * (1 + q / (1 - eta0)) - 1,
               q = rho at g_+(g_-(-lam)),
      second = (rho(lam) / eta0) * (r * (1 + p / (1 - eta0)) - 1),
               r = rho at g_-(lam),  p = rho at g_+(lam).

    holds iff first + second < 0.
    """
    lam = -sys.branch_point
    theta0, eta0 = sys.theta0, sys.eta0
    inner = compose_inverse("-+", -lam, sys)  # g_+(g_-(-lam))
    q = inner / (2.0 * (inner - sys.c))
    first = theta0 * (1.0 + q / (1.0 - eta0)) - 1.0
    scale = (-lam / (2.0 * (lam - sys.c))) / eta0
    g_minus = inverse_branch("-", lam, sys)
    r = -g_minus / (2.0 * (g_minus - sys.c))
    g_plus = inverse_branch("+", lam, sys)
    p = g_plus / (2.0 * (g_plus - sys.c))
    second = scale * (r * (1.0 + p / (1.0 - eta0)) - 1.0)
    lhs = first + second
    return lhs, lhs < 0.0


def check_nn2(sys: SystemParams) -> tuple[float, float, bool]:
    """Endpoint infimum of rho on i_minus versus its supremum on i_plus.

    rho is increasing and sign-definite on each interval, so the i_minus
    infimum sits at the inner endpoint -sqrt(-zeta_c - c) and the i_plus
    supremum at zeta_c (= eta0).  holds iff inf_minus > sup_plus: the
    branch-interval ratios separate.
    """
    inf_minus = endpoint_ratio(-sys.branch_point, sys)
    sup_plus = sys.eta0
    return inf_minus, sup_plus, inf_minus > sup_plus


def estimate_distortion(n_max: int, sys: SystemParams) -> float:
    """Empirical distortion constant: worst max/min of sampled |g_w'| over
    the hull, across all words of length <= n_max (<= 14)."""
    if n_max > 14:
        raise ValueError(f"distortion estimate limited to n_max <= 14 (got {n_max})")
    worst = 1.0
    for mins, maxs in derivative_extrema_by_length(n_max, sys):
        worst = max(worst, float((maxs / mins).max()))
    return worst


def build_report(sys: SystemParams) -> VerificationReport:
    theta0, contraction_holds = check_contraction_ratio(sys)
    ratio, sqrt5_holds = check_sqrt5_threshold(sys)
    lhs, eq152_holds = check_152(sys)
    inf_minus, sup_plus, nn2_holds = check_nn2(sys)
    return VerificationReport(
        c=sys.c,
        theta0=theta0,
        eta0=sys.eta0,
        ratio_sqrt5=ratio,
        lhs_152=lhs,
        nn2_triple=(inf_minus, 0.5, sup_plus),
        verdicts={
            "contraction_ratio_below_one": contraction_holds,
            "sqrt5_ratio_below_one": sqrt5_holds,
            "eq152_negative": eq152_holds,
            "interval_ratios_separated": nn2_holds,
        },
    )
