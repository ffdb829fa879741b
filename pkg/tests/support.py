"""Shared fixtures: the two worked channel settings and random samplers."""

from __future__ import annotations

import math

import numpy as np

from irwd import ChannelGains, PowerBudget, alignment_det, is_strong, pr_threshold

# Worked setting A: symmetric direct and relay gains, strong cross links.
# Very strong interference; capacity is the box with corner (1/2) log2 3.
CHANNEL_A = ChannelGains(
    h11=1.0, h12=5.0, h21=5.0, h22=1.0, hR1=1.0, hR2=1.0,
    h1R_1=1.0, h1R_2=2.0, h2R_1=2.0, h2R_2=1.0,
)
BUDGET_A = PowerBudget(P=1.0, P_R=1.0)

# Worked setting B: all gain rows along (1, 2).  Strong and collinear;
# the sum-rate bound (1/2) log2 11 is tight.
CHANNEL_B = ChannelGains(
    h11=1.0, h12=2.0, h21=1.0, h22=2.0, hR1=1.0, hR2=2.0,
    h1R_1=1.0, h1R_2=3.0, h2R_1=3.0, h2R_2=3.0,
)
BUDGET_B = PowerBudget(P=1.0, P_R=1.0)

HALF_LOG2_3 = 0.5 * math.log2(3.0)
HALF_LOG2_9 = 0.5 * math.log2(9.0)
HALF_LOG2_11 = 0.5 * math.log2(11.0)
HALF_LOG2_21 = 0.5 * math.log2(21.0)


def _well_conditioned(g: ChannelGains, floor: float) -> bool:
    scale = math.hypot(g.h1R_1, g.h1R_2) * math.hypot(g.h2R_1, g.h2R_2)
    return abs(alignment_det(g)) >= floor * scale


def random_channel(rng: np.random.Generator) -> ChannelGains:
    """Generic nonsingular channel: all ten gains uniform in [-2, 2],
    rejecting tiny direct gains and near-parallel relay rows."""
    while True:
        v = rng.uniform(-2.0, 2.0, size=10)
        g = ChannelGains(
            h11=v[0], h12=v[1], h21=v[2], h22=v[3], hR1=v[4], hR2=v[5],
            h1R_1=v[6], h1R_2=v[7], h2R_1=v[8], h2R_2=v[9],
        )
        if abs(g.h11) < 0.1 or abs(g.h22) < 0.1:
            continue
        if not _well_conditioned(g, 1e-2):
            continue
        return g


def random_strong_channel(rng: np.random.Generator) -> ChannelGains:
    """Strong-interference channel: direct gains drawn as fractions of
    the cross gains, relay rows rejected when near parallel."""
    while True:
        h21 = rng.uniform(0.5, 2.0) * rng.choice([-1, 1])
        h12 = rng.uniform(0.5, 2.0) * rng.choice([-1, 1])
        h11 = h21 * rng.uniform(0.2, 1.0) * rng.choice([-1, 1])
        h22 = h12 * rng.uniform(0.2, 1.0) * rng.choice([-1, 1])
        hR1, hR2 = rng.uniform(0.2, 1.5, 2) * rng.choice([-1, 1], 2)
        rest = rng.uniform(-2.0, 2.0, 4)
        g = ChannelGains(
            h11=h11, h12=h12, h21=h21, h22=h22, hR1=hR1, hR2=hR2,
            h1R_1=rest[0], h1R_2=rest[1], h2R_1=rest[2], h2R_2=rest[3],
        )
        if not _well_conditioned(g, 5e-2):
            continue
        assert is_strong(g)
        return g


def feasible_budget(g: ChannelGains, rng: np.random.Generator,
                    p_lo: float = 0.2, p_hi: float = 3.0) -> PowerBudget:
    """Random sender power with a relay budget above the threshold."""
    P = rng.uniform(p_lo, p_hi)
    threshold = pr_threshold(g, PowerBudget(P=P, P_R=0.0))
    return PowerBudget(P=P, P_R=threshold * rng.uniform(1.0, 2.0))


def random_very_strong(rng: np.random.Generator) -> tuple[ChannelGains, PowerBudget]:
    """Construct a very-strong instance directly: pick the direct and
    relay receive gains, then size each cross gain just above the level
    the very-strong inequalities demand (margin 1.05 to 1.8)."""
    while True:
        h11, h22, hR1, hR2 = rng.uniform(0.3, 1.2, 4)
        P = rng.uniform(0.4, 2.0)
        s1 = h11 ** 2 + hR1 ** 2
        s2 = h22 ** 2 + hR2 ** 2
        c1 = math.sqrt(s1 * (s2 ** 2 * P + s2)) * rng.uniform(1.05, 1.8)
        c2 = math.sqrt(s2 * (s1 ** 2 * P + s1)) * rng.uniform(1.05, 1.8)
        h21 = (c1 - hR1 * hR2) / h22
        h12 = (c2 - hR1 * hR2) / h11
        rest = rng.uniform(-2.0, 2.0, 4)
        g = ChannelGains(
            h11=h11, h12=h12, h21=h21, h22=h22, hR1=hR1, hR2=hR2,
            h1R_1=rest[0], h1R_2=rest[1], h2R_1=rest[2], h2R_2=rest[3],
        )
        if not _well_conditioned(g, 5e-2):
            continue
        threshold = pr_threshold(g, PowerBudget(P=P, P_R=0.0))
        return g, PowerBudget(P=P, P_R=threshold * rng.uniform(1.0, 2.0))


def random_collinear_strong(rng: np.random.Generator) -> tuple[ChannelGains, PowerBudget]:
    """Strong channel with all three gain rows along one direction.

    Strong interference forces |h11| = |h21| and |h22| = |h12| under
    collinearity, so the destination rows agree up to a sign.
    """
    while True:
        u1, u2 = rng.uniform(0.3, 2.0, 2) * rng.choice([-1, 1], 2)
        relay_scale = rng.uniform(0.2, 2.0) * rng.choice([-1, 1])
        sign = rng.choice([-1.0, 1.0])
        rest = rng.uniform(-2.0, 2.0, 4)
        g = ChannelGains(
            h11=sign * u1, h12=sign * u2, h21=u1, h22=u2,
            hR1=relay_scale * u1, hR2=relay_scale * u2,
            h1R_1=rest[0], h1R_2=rest[1], h2R_1=rest[2], h2R_2=rest[3],
        )
        if not _well_conditioned(g, 5e-2):
            continue
        P = rng.uniform(0.2, 3.0)
        threshold = pr_threshold(g, PowerBudget(P=P, P_R=0.0))
        return g, PowerBudget(P=P, P_R=threshold * rng.uniform(1.0, 2.0))
