"""Interference-regime classification and the relay power threshold."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

from .af_relay import alignment_det, _check_det, _check_direct
from .channel import ChannelGains, PowerBudget
from .exceptions import DegenerateChannel

COLLINEAR_TOL = 1e-9


class Regime(enum.Enum):
    """Which rate expression applies, strongest claim first."""

    VERY_STRONG_CAPACITY = "VeryStrongCapacity"
    STRONG_CAPACITY = "StrongCapacity"
    STRONG_OUTER_ONLY = "StrongOuterOnly"
    GENERAL = "General"


def is_strong(gains: ChannelGains) -> bool:
    """Strong interference test: |h11| <= |h21| and |h22| <= |h12|.

    Comparisons are exact; the gains are given constants, not estimates.
    """
    return abs(gains.h11) <= abs(gains.h21) and abs(gains.h22) <= abs(gains.h12)


def is_very_strong(gains: ChannelGains, budget: PowerBudget) -> bool:
    """Very strong interference test at sender power P.

    Both cross paths must be strong enough that each destination can
    decode the interfering message first, treating its own as noise:

        (h11^2 + hR1^2) P <= (h21 h22 + hR1 hR2)^2 P
                             / ((h22^2 + hR2^2)^2 P + h22^2 + hR2^2)

    and the counterpart with the roles of the users swapped.  Both
    inequalities are non-strict.
    """
    g = gains
    P = budget.P
    s1 = g.h11 ** 2 + g.hR1 ** 2
    s2 = g.h22 ** 2 + g.hR2 ** 2
    if s1 == 0.0 or s2 == 0.0:
        raise DegenerateChannel("very-strong test needs h11^2 + hR1^2 > 0 and h22^2 + hR2^2 > 0")
    c1 = g.h21 * g.h22 + g.hR1 * g.hR2
    c2 = g.h11 * g.h12 + g.hR1 * g.hR2
    ok1 = s1 * P <= c1 ** 2 * P / (s2 ** 2 * P + s2)
    ok2 = s2 * P <= c2 ** 2 * P / (s1 ** 2 * P + s1)
    return ok1 and ok2


def _parallel(u: tuple[float, float], v: tuple[float, float], tol: float) -> bool:
    # Zero vectors count as parallel to everything.
    cross = u[0] * v[1] - u[1] * v[0]
    scale = math.hypot(*u) * math.hypot(*v)
    return abs(cross) <= tol * scale


def is_collinear(gains: ChannelGains, tol: float = COLLINEAR_TOL) -> bool:
    """True when (h11, h12), (h21, h22), (hR1, hR2) are pairwise parallel.

    Each pairwise 2x2 determinant must vanish to within tol times the
    product of the row norms.
    """
    g = gains
    rows = ((g.h11, g.h12), (g.h21, g.h22), (g.hR1, g.hR2))
    return (
        _parallel(rows[0], rows[1], tol)
        and _parallel(rows[0], rows[2], tol)
        and _parallel(rows[1], rows[2], tol)
    )


def pr_threshold(gains: ChannelGains, budget: PowerBudget) -> float:
    """Minimum relay power that supports the aligned gain pair.

    Closed form of af_power_required at the solved gains; with
    D = h1R_2 h2R_1 - h1R_1 h2R_2 it reads

        [(h2R_1 h22 hR1 - h1R_1 h11 hR2)^2 + (h2R_2 h22 hR1 - h1R_2 h11 hR2)^2]
        / (D^2 h11^2 h22^2) * ((hR1^2 + hR2^2) P + 1).
    """
    _check_direct(gains)
    _check_det(gains)
    g = gains
    d = alignment_det(gains)
    num = (
        (g.h2R_1 * g.h22 * g.hR1 - g.h1R_1 * g.h11 * g.hR2) ** 2
        + (g.h2R_2 * g.h22 * g.hR1 - g.h1R_2 * g.h11 * g.hR2) ** 2
    )
    den = d ** 2 * g.h11 ** 2 * g.h22 ** 2
    received = (g.hR1 ** 2 + g.hR2 ** 2) * budget.P + 1.0
    return num / den * received


@dataclass(frozen=True)
class ClassificationReport:
    """Regime flags plus the relay power threshold for one channel."""

    is_strong: bool
    is_very_strong: bool
    is_collinear: bool
    pr_threshold: float
    pr_feasible: bool
    regime: Regime

    def to_dict(self) -> dict:
        return {
            "is_strong": self.is_strong,
            "is_very_strong": self.is_very_strong,
            "is_collinear": self.is_collinear,
            "pr_threshold": self.pr_threshold,
            "pr_feasible": self.pr_feasible,
            "regime": self.regime.value,
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(), **kwargs)


def classify(gains: ChannelGains, budget: PowerBudget, tol: float = COLLINEAR_TOL) -> ClassificationReport:
    """Evaluate all regime tests and pick the strongest applicable claim.

    Very strong interference with a feasible relay budget gives the
    box-shaped capacity region; strong plus collinear rows with a
    feasible budget gives the matched inner/outer region; strong alone
    still carries the genie outer bound; anything else is General.
    """
    strong = is_strong(gains)
    very_strong = is_very_strong(gains, budget)
    collinear = is_collinear(gains, tol)
    threshold = pr_threshold(gains, budget)
    feasible = budget.P_R >= threshold
    if very_strong and feasible:
        regime = Regime.VERY_STRONG_CAPACITY
    elif strong and collinear and feasible:
        regime = Regime.STRONG_CAPACITY
    elif strong:
        regime = Regime.STRONG_OUTER_ONLY
    else:
        regime = Regime.GENERAL
    return ClassificationReport(
        is_strong=strong,
        is_very_strong=very_strong,
        is_collinear=collinear,
        pr_threshold=threshold,
        pr_feasible=feasible,
        regime=regime,
    )
