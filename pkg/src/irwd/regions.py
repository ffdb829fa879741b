"""Rate regions: inner bound, outer bounds, and exact capacity regions.

All regions here are intersections of halfspaces a1 R1 + a2 R2 <= b in
the nonnegative quadrant, with b of the form (1/2) log(1 + snr).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .af_relay import _check_direct
from .channel import ChannelGains, PowerBudget
from .classify import Regime, classify, is_strong
from .exceptions import AfInfeasible, DegenerateChannel, NotInRegime

VERTEX_TOL = 1e-10
CONTAIN_TOL = 1e-12

_LN_BASE = {"bits": math.log(2.0), "nats": 1.0}


def half_log(snr: float, base: str = "bits") -> float:
    """(1/2) log(1 + snr) in the requested base."""
    return 0.5 * math.log1p(snr) / _LN_BASE[base]


@dataclass(frozen=True)
class Halfspace:
    """Constraint a1 R1 + a2 R2 <= b."""

    a1: float
    a2: float
    b: float


@dataclass(frozen=True)
class RatePair:
    r1: float
    r2: float


@dataclass(frozen=True)
class RateRegion:
    """Intersection of halfspaces with R1, R2 >= 0 implicit."""

    halfspaces: tuple[Halfspace, ...]
    label: str
    base: str = "bits"


def _boosted(gains: ChannelGains) -> tuple[float, float, float, float]:
    # Direct-path SNR coefficients and cross terms of the aligned network.
    g = gains
    s1 = g.h11 ** 2 + g.hR1 ** 2
    s2 = g.h22 ** 2 + g.hR2 ** 2
    c1 = g.h21 * g.h22 + g.hR1 * g.hR2
    c2 = g.h11 * g.h12 + g.hR1 * g.hR2
    return s1, s2, c1, c2


def _require_feasible(gains: ChannelGains, budget: PowerBudget) -> None:
    from .classify import pr_threshold

    needed = pr_threshold(gains, budget)
    if budget.P_R < needed:
        raise AfInfeasible(
            f"relay budget {budget.P_R} is below the required power {needed}"
        )


def achievable_region(gains: ChannelGains, budget: PowerBudget, base: str = "bits") -> RateRegion:
    """Rates achievable with the aligned relay and joint decoding.

    Each destination decodes its own message while tolerating any value
    of the other (simultaneous decoding without requiring uniqueness of
    the interferer), giving per-user bounds at the boosted direct SNRs
    and one sum bound per destination:

        R1 <= (1/2) log(1 + (h11^2 + hR1^2) P)
        R2 <= (1/2) log(1 + (h22^2 + hR2^2) P)
        R1 + R2 <= (1/2) log(1 + (s1 + c2^2 / s1) P)   at destination 1
        R1 + R2 <= (1/2) log(1 + (s2 + c1^2 / s2) P)   at destination 2

    with s1, s2 the boosted direct coefficients and c1, c2 the cross
    terms.  Requires the relay budget to cover the aligned gains.
    """
    _check_direct(gains)
    _require_feasible(gains, budget)
    s1, s2, c1, c2 = _boosted(gains)
    P = budget.P
    return RateRegion(
        halfspaces=(
            Halfspace(1.0, 0.0, half_log(s1 * P, base)),
            Halfspace(0.0, 1.0, half_log(s2 * P, base)),
            Halfspace(1.0, 1.0, half_log((s1 + c2 ** 2 / s1) * P, base)),
            Halfspace(1.0, 1.0, half_log((s2 + c1 ** 2 / s2) * P, base)),
        ),
        label="achievable",
        base=base,
    )


def redundancy_check(gains: ChannelGains, budget: PowerBudget) -> bool:
    """True when the sum bounds cannot bind: b1 + b2 <= both sum bounds.

    Holds exactly when the very-strong test passes, up to rounding; a
    1e-12 slack absorbs ties.
    """
    _check_direct(gains)
    s1, s2, c1, c2 = _boosted(gains)
    if s1 == 0.0 or s2 == 0.0:
        raise DegenerateChannel("sum bounds need s1 > 0 and s2 > 0")
    P = budget.P
    singles = half_log(s1 * P) + half_log(s2 * P)
    sum1 = half_log((s1 + c2 ** 2 / s1) * P)
    sum2 = half_log((s2 + c1 ** 2 / s2) * P)
    return singles <= sum1 + 1e-12 and singles <= sum2 + 1e-12


def very_strong_capacity(gains: ChannelGains, budget: PowerBudget, base: str = "bits") -> RateRegion:
    """Capacity region under very strong interference: a box.

    Only valid when classification lands in VeryStrongCapacity (very
    strong test passes and the relay budget covers the aligned gains).
    """
    report = classify(gains, budget)
    if report.regime is not Regime.VERY_STRONG_CAPACITY:
        raise NotInRegime(f"regime is {report.regime.value}, need VeryStrongCapacity")
    s1, s2, _, _ = _boosted(gains)
    P = budget.P
    return RateRegion(
        halfspaces=(
            Halfspace(1.0, 0.0, half_log(s1 * P, base)),
            Halfspace(0.0, 1.0, half_log(s2 * P, base)),
        ),
        label="very_strong_capacity",
        base=base,
    )


def strong_outer_bound(gains: ChannelGains, budget: PowerBudget, base: str = "bits") -> RateRegion:
    """Outer bound valid for any relay strategy under strong interference.

    A genie hands each destination the relay's observation, so the sum
    rate is limited by the two-antenna vector channel at either one:

        R1 + R2 <= (1/2) log(1 + (h11^2 + h12^2 + hR1^2 + hR2^2) P
                    + ((h11^2 + h12^2)(hR1^2 + hR2^2)
                       - (h11 hR1 + h12 hR2)^2) P^2)

    and the counterpart built from (h21, h22).
    """
    if not is_strong(gains):
        raise NotInRegime("outer bound requires strong interference")
    g = gains
    P = budget.P
    s1, s2, _, _ = _boosted(gains)
    hr = g.hR1 ** 2 + g.hR2 ** 2
    d1 = g.h11 ** 2 + g.h12 ** 2
    d2 = g.h21 ** 2 + g.h22 ** 2
    q1 = d1 * hr - (g.h11 * g.hR1 + g.h12 * g.hR2) ** 2
    q2 = d2 * hr - (g.h21 * g.hR1 + g.h22 * g.hR2) ** 2
    return RateRegion(
        halfspaces=(
            Halfspace(1.0, 0.0, half_log(s1 * P, base)),
            Halfspace(0.0, 1.0, half_log(s2 * P, base)),
            Halfspace(1.0, 1.0, half_log((d1 + hr) * P + q1 * P * P, base)),
            Halfspace(1.0, 1.0, half_log((d2 + hr) * P + q2 * P * P, base)),
        ),
        label="strong_outer",
        base=base,
    )


def strong_capacity(gains: ChannelGains, budget: PowerBudget, base: str = "bits") -> RateRegion:
    """Capacity region for strong interference with collinear gain rows.

    When all three gain rows point along one direction the genie bound
    loses its quadratic term and the joint-decoding inner bound meets it:

        R1 + R2 <= (1/2) log(1 + (h11^2 + h12^2 + hR1^2 + hR2^2) P)

    plus the per-user bounds and the (h21, h22) counterpart.  Requires
    classification to land in StrongCapacity.
    """
    report = classify(gains, budget)
    if report.regime is not Regime.STRONG_CAPACITY:
        raise NotInRegime(f"regime is {report.regime.value}, need StrongCapacity")
    g = gains
    P = budget.P
    s1, s2, _, _ = _boosted(gains)
    hr = g.hR1 ** 2 + g.hR2 ** 2
    return RateRegion(
        halfspaces=(
            Halfspace(1.0, 0.0, half_log(s1 * P, base)),
            Halfspace(0.0, 1.0, half_log(s2 * P, base)),
            Halfspace(1.0, 1.0, half_log((g.h11 ** 2 + g.h12 ** 2 + hr) * P, base)),
            Halfspace(1.0, 1.0, half_log((g.h21 ** 2 + g.h22 ** 2 + hr) * P, base)),
        ),
        label="strong_capacity",
        base=base,
    )


def _line_intersection(p: Halfspace, q: Halfspace) -> tuple[float, float] | None:
    det = p.a1 * q.a2 - p.a2 * q.a1
    scale = math.hypot(p.a1, p.a2) * math.hypot(q.a1, q.a2)
    if abs(det) <= 1e-12 * max(scale, 1.0):
        return None
    r1 = (p.b * q.a2 - p.a2 * q.b) / det
    r2 = (p.a1 * q.b - p.b * q.a1) / det
    return (r1, r2)


def vertices(region: RateRegion, tol: float = VERTEX_TOL) -> list[RatePair]:
    """Corner points of the region, counterclockwise from the origin.

    The region must be bounded, which every region built here is (both
    single-rate constraints are always present).  Candidates come from
    pairwise intersections of the constraint lines and the axes; points
    violating any constraint by more than tol are dropped and
    near-duplicates are merged.
    """
    lines = list(region.halfspaces) + [Halfspace(1.0, 0.0, 0.0), Halfspace(0.0, 1.0, 0.0)]
    if not any(h.a1 > 0 for h in region.halfspaces) or not any(h.a2 > 0 for h in region.halfspaces):
        raise ValueError("region is unbounded")
    cands: list[tuple[float, float]] = [(0.0, 0.0)]
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            pt = _line_intersection(lines[i], lines[j])
            if pt is not None:
                cands.append(pt)

    def feasible(r1: float, r2: float) -> bool:
        if r1 < -tol or r2 < -tol:
            return False
        return all(h.a1 * r1 + h.a2 * r2 <= h.b + tol for h in region.halfspaces)

    pts: list[tuple[float, float]] = []
    for r1, r2 in cands:
        if not feasible(r1, r2):
            continue
        # max with 0.0 first also canonicalizes -0.0
        r1, r2 = max(0.0, r1), max(0.0, r2)
        if not any(abs(r1 - u) <= tol and abs(r2 - v) <= tol for u, v in pts):
            pts.append((r1, r2))
    if len(pts) == 1:
        return [RatePair(*pts[0])]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    start = min(range(len(pts)), key=lambda k: pts[k][0] ** 2 + pts[k][1] ** 2)
    pts = pts[start:] + pts[:start]
    return [RatePair(r1, r2) for r1, r2 in pts]


def contains(region: RateRegion, point: RatePair, tol: float = CONTAIN_TOL) -> bool:
    """Point membership with absolute slack tol on every constraint."""
    if point.r1 < -tol or point.r2 < -tol:
        return False
    return all(h.a1 * point.r1 + h.a2 * point.r2 <= h.b + tol for h in region.halfspaces)


def is_subset(inner: RateRegion, outer: RateRegion, tol: float = VERTEX_TOL) -> bool:
    """True when every vertex of inner lies in outer (both are convex)."""
    return all(contains(outer, v, tol) for v in vertices(inner))


def region_to_dict(region: RateRegion) -> dict:
    """JSON-ready form: halfspaces plus the enumerated vertex cycle."""
    return {
        "label": region.label,
        "base": region.base,
        "halfspaces": [{"a1": h.a1, "a2": h.a2, "b": h.b} for h in region.halfspaces],
        "vertices": [[v.r1, v.r2] for v in vertices(region)],
    }


def region_to_json(region: RateRegion, **kwargs) -> str:
    kwargs.setdefault("sort_keys", True)
    return json.dumps(region_to_dict(region), **kwargs)


def region_to_csv(region: RateRegion) -> str:
    """Vertex cycle as CSV with header r1,r2."""
    rows = ["r1,r2"]
    rows += [f"{v.r1!r},{v.r2!r}" for v in vertices(region)]
    return "\n".join(rows) + "\n"
