"""Closed-form lower bounds on interaction count M* and length ℓ*.

Two modes: ``asymptotic`` evaluates the max-expressions with unit
constants; ``explicit`` uses the constants the proofs actually produce, so
the hypothesis flags can be decided on concrete parameters.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, asdict
from functools import lru_cache
from typing import Dict

logger = logging.getLogger(__name__)

SUBSYSTEM = "subsystem"
PROJECTOR = "projector"
ASYMPTOTIC = "asymptotic"
EXPLICIT = "explicit"
DISTANCE_BRANCH = "distance-branch"
DIMENSION_BRANCH = "dimension-branch"

TIE_TOLERANCE = 1e-12


@lru_cache(maxsize=16)
def ball_volume(D: int) -> float:
    if D < 1:
        raise ValueError(f"dimension must be at least 1, got {D}")
    return math.pi ** (D / 2) / math.gamma(D / 2 + 1)


@dataclass
class BoundReport:
    D: int
    n: float
    k: float
    d: float
    code_class: str
    mode: str
    M_star: float
    ell_star: float
    c0: float
    c1: float
    c1_distance: float
    distance_branch: float
    dimension_branch: float
    regime: str
    hypothesis_met: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return asdict(self)


def _validate(n, k, d, D) -> None:
    problems = []
    if int(D) != D or D < 2:
        problems.append(f"D must be an integer >= 2, got {D}")
    if not 1 <= k <= n:
        problems.append(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    if not 1 <= d <= n:
        problems.append(f"d must satisfy 1 <= d <= n, got d={d}, n={n}")
    if problems:
        error_msg = "; ".join(problems)
        logger.error(error_msg)
        raise ValueError(error_msg)


def _pick(distance_value: float, dimension_value: float) -> str:
    if math.isclose(distance_value, dimension_value, rel_tol=TIE_TOLERANCE) or distance_value > dimension_value:
        return DISTANCE_BRANCH
    return DIMENSION_BRANCH


def sweep_length_scale(n: float, d: float, D: int) -> Dict:
    """Length scale of the sweep argument and whether it lies in the proof's range."""
    vol = ball_volume(D)
    ell = vol * d / (6 ** D * D * n ** ((D - 1) / D))
    upper = n ** (1 / D) / (4 ** D * D)
    return {"ell": ell, "upper": upper, "in_range": 1 < ell < upper}


def _distance_constants(n, d, D):
    vol = ball_volume(D)
    c1 = 2 * (6 ** D * D / vol) ** (D / (D - 1))
    return c1, sweep_length_scale(n, d, D)["ell"]


def _report(n, k, d, D, mode, code_class) -> BoundReport:
    _validate(n, k, d, D)
    if mode not in (ASYMPTOTIC, EXPLICIT):
        raise ValueError(f"unknown mode {mode!r}")
    D = int(D)
    power = 1 if code_class == SUBSYSTEM else 2
    outer = (D - 1) / D if code_class == SUBSYSTEM else (D - 1) / (2 * D)
    distance_ratio = d / n ** ((D - 1) / D)
    dimension_ratio = k * d ** (power / (D - 1)) / n
    distance_value = distance_ratio
    dimension_value = dimension_ratio ** outer

    if mode == ASYMPTOTIC:
        regime = _pick(distance_value, dimension_value)
        return BoundReport(
            D=D, n=n, k=k, d=d, code_class=code_class, mode=mode,
            M_star=max(k, d),
            ell_star=max(distance_value, dimension_value),
            c0=1.0, c1=1.0, c1_distance=1.0,
            distance_branch=distance_value, dimension_branch=dimension_value,
            regime=regime,
            hypothesis_met={
                "dimension_regime": dimension_ratio >= 1.0,
                "distance_regime": distance_ratio >= 1.0,
            },
        )

    vol = ball_volume(D)
    if code_class == SUBSYSTEM:
        c0 = vol ** (1 / D) / (400 * D)
        c1 = (1 / c0) ** (D / (D - 1))
        dimension_M = c0 * k
    else:
        c0 = vol ** (1 / D) / (800 * D ** 2)
        c1 = (1 / c0) ** (2 * D / (D - 1))
        dimension_M = c0 * max(k, d)
    c1_distance, distance_ell = _distance_constants(n, d, D)
    dimension_ell = c0 * dimension_value
    regime = _pick(distance_ell, dimension_ell)
    if regime == DISTANCE_BRANCH:
        ell_star, M_star = distance_ell, d / 4
    else:
        ell_star, M_star = dimension_ell, dimension_M

    return BoundReport(
        D=D, n=n, k=k, d=d, code_class=code_class, mode=mode,
        M_star=M_star, ell_star=ell_star,
        c0=c0, c1=c1, c1_distance=c1_distance,
        distance_branch=distance_ell, dimension_branch=dimension_ell,
        regime=regime,
        hypothesis_met={
            "dimension_regime": dimension_ratio >= c1,
            "distance_regime": d >= c1_distance * n ** ((D - 1) / D),
        },
    )


def subsystem_bounds(n, k, d, D, mode: str = ASYMPTOTIC) -> BoundReport:
    return _report(n, k, d, D, mode, SUBSYSTEM)


def projector_bounds(n, k, d, D, mode: str = ASYMPTOTIC) -> BoundReport:
    return _report(n, k, d, D, mode, PROJECTOR)


def bounds_for(code_class: str, n, k, d, D, mode: str = ASYMPTOTIC) -> BoundReport:
    if code_class not in (SUBSYSTEM, PROJECTOR):
        raise ValueError(f"unknown code class {code_class!r}")
    return _report(n, k, d, D, mode, code_class)


@dataclass
class RegimeReport:
    family: str
    bravyi_ratio: float
    bpt_ratio: float
    distance_ratio: float
    local: bool

    def to_dict(self) -> Dict:
        return asdict(self)


def regime_check(n, k, d, D, family: str = "bravyi") -> RegimeReport:
    _validate(n, k, d, D)
    if family not in ("bravyi", "bpt"):
        raise ValueError(f"unknown family {family!r}")
    bravyi = k * d ** (1 / (D - 1)) / n
    bpt = k * d ** (2 / (D - 1)) / n
    distance_ratio = d / n ** ((D - 1) / D)
    relevant = bravyi if family == "bravyi" else bpt
    limit = 1.0 + TIE_TOLERANCE
    return RegimeReport(family, bravyi, bpt, distance_ratio, relevant <= limit and distance_ratio <= limit)


@dataclass
class ProofConstants:
    w0: float
    ell: float
    alpha: float
    c: float
    ineq1: bool
    ineq2: bool
    ineq3: bool
    ineq2_hypothesis: bool
    ineq1_lhs: float
    ineq1_rhs: float

    def to_dict(self) -> Dict:
        return asdict(self)


def proof_constants(d: float, ell: float, D: int, alpha: float = 1.0) -> ProofConstants:
    if d <= 0 or ell <= 0 or alpha < 1 or D < 2:
        error_msg = f"need d, ell > 0, alpha >= 1, D >= 2; got d={d}, ell={ell}, alpha={alpha}, D={D}"
        logger.error(error_msg)
        raise ValueError(error_msg)
    vol = ball_volume(D)
    w0 = (vol / (2 * 4 ** (D + 1) * D) * d / ell) ** (1 / (D - 1))
    c = vol ** (1 / D) / (400 * alpha * D)
    lhs = 2 ** D / vol * (2 * w0) ** (D - 1) * ell
    rhs = d / (16 * D)
    return ProofConstants(
        w0=w0,
        ell=ell,
        alpha=alpha,
        c=c,
        ineq1=math.isclose(lhs, rhs, rel_tol=1e-9),
        ineq2=w0 >= 100 * alpha * D * ell,
        ineq3=w0 >= (d / ell) ** (1 / (D - 1)) / (90 * math.sqrt(D)),
        ineq2_hypothesis=ell <= c * d ** (1 / D),
        ineq1_lhs=lhs,
        ineq1_rhs=rhs,
    )


def interaction_verdict(interactions, report: BoundReport) -> Dict:
    """Compare the embedded code's long interactions against (M*, ℓ*)."""
    ell = max(report.ell_star, 1.0)
    M, _ = interactions.count_long(ell)
    return {
        "ell_star": report.ell_star,
        "M_star": report.M_star,
        "measured_long_interactions": M,
        "meets_count": M >= report.M_star,
        "max_length": interactions.max_length,
    }
