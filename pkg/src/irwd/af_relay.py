"""Instantaneous amplify-and-forward gain design.

The relay sends x_R = (alpha1 y_R, alpha2 y_R).  Choosing the pair so
that

    h1R . alpha = hR1 / h11      and      h2R . alpha = hR2 / h22

makes each destination see the relay path as a scaled copy of its own
direct path, which turns the network into an ordinary two-user
interference channel with boosted direct gains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelGains, PowerBudget
from .exceptions import DegenerateChannel, SingularRelayGeometry

# |det| below this multiple of the row-norm product counts as singular.
SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class AfGains:
    """Relay scaling pair; antenna k transmits alpha_k * y_R."""

    alpha1: float
    alpha2: float

    @property
    def norm_sq(self) -> float:
        return self.alpha1 ** 2 + self.alpha2 ** 2


@dataclass(frozen=True)
class EquivalentChannel:
    """Interference channel seen by the destinations under aligned gains.

    y_1 = g11 x1 + g12 x2 + v1 and y_2 = g21 x1 + g22 x2 + v2 with
    independent-of-input Gaussian v_i of variance n i _var.  Note v1 and
    v2 are correlated across destinations (both contain the relay noise).
    """

    g11: float
    g12: float
    g21: float
    g22: float
    n1_var: float
    n2_var: float


def alignment_det(gains: ChannelGains) -> float:
    """Determinant of the relay-to-destination gain matrix [[h1R],[h2R]]."""
    return gains.h1R_2 * gains.h2R_1 - gains.h1R_1 * gains.h2R_2


def _check_direct(gains: ChannelGains) -> None:
    if gains.h11 == 0.0 or gains.h22 == 0.0:
        raise DegenerateChannel("alignment needs nonzero direct gains h11 and h22")


def _check_det(gains: ChannelGains) -> float:
    d = alignment_det(gains)
    scale = math.hypot(gains.h1R_1, gains.h1R_2) * math.hypot(gains.h2R_1, gains.h2R_2)
    if abs(d) <= SINGULAR_RTOL * scale:
        raise SingularRelayGeometry(
            f"relay gain matrix is singular (det {d:.3e}, row-norm product {scale:.3e})"
        )
    return d


def solve_af_gains(gains: ChannelGains) -> AfGains:
    """Unique gain pair meeting both alignment targets.

    Closed form of the 2x2 solve; raises DegenerateChannel when h11 or
    h22 is zero and SingularRelayGeometry when the relay gain rows are
    (numerically) parallel.
    """
    _check_direct(gains)
    d = _check_det(gains)
    g = gains
    den = g.h11 * g.h22 * d
    alpha1 = (g.h11 * g.hR2 * g.h1R_2 - g.h22 * g.hR1 * g.h2R_2) / den
    alpha2 = (g.h22 * g.hR1 * g.h2R_1 - g.h11 * g.hR2 * g.h1R_1) / den
    return AfGains(alpha1=alpha1, alpha2=alpha2)


def af_residuals(gains: ChannelGains, relay: AfGains) -> tuple[float, float]:
    """Alignment errors of a gain pair, relative to the target scale.

    Residual i is |hiR . alpha - target_i| divided by the larger target
    magnitude (this keeps the measure meaningful when one target is
    near zero while the other is not).  Both are ~1e-15 for pairs from
    solve_af_gains on well-conditioned geometry.
    """
    _check_direct(gains)
    g = gains
    t1 = g.hR1 / g.h11
    t2 = g.hR2 / g.h22
    r1 = g.h1R_1 * relay.alpha1 + g.h1R_2 * relay.alpha2 - t1
    r2 = g.h2R_1 * relay.alpha1 + g.h2R_2 * relay.alpha2 - t2
    denom = max(abs(t1), abs(t2), math.ulp(0.0))
    return (abs(r1) / denom, abs(r2) / denom)


def af_power_required(relay: AfGains, gains: ChannelGains, budget: PowerBudget) -> float:
    """Average relay transmit power spent by the pair.

    The relay input has power (hR1^2 + hR2^2) P + 1, and both antennas
    scale that same input, so the total is (alpha1^2 + alpha2^2) times it.
    """
    received = (gains.hR1 ** 2 + gains.hR2 ** 2) * budget.P + 1.0
    return relay.norm_sq * received


def equivalent_channel(gains: ChannelGains) -> EquivalentChannel:
    """Interference channel equivalent to the network under aligned gains.

    Substituting the alignment targets into the destination equations
    gives

        g11 = (h11^2 + hR1^2) / h11     g12 = (h11 h12 + hR1 hR2) / h11
        g21 = (h21 h22 + hR1 hR2) / h22 g22 = (h22^2 + hR2^2) / h22

    with noise variances 1 + (hR1/h11)^2 and 1 + (hR2/h22)^2.
    """
    _check_direct(gains)
    g = gains
    return EquivalentChannel(
        g11=(g.h11 ** 2 + g.hR1 ** 2) / g.h11,
        g12=(g.h11 * g.h12 + g.hR1 * g.hR2) / g.h11,
        g21=(g.h21 * g.h22 + g.hR1 * g.hR2) / g.h22,
        g22=(g.h22 ** 2 + g.hR2 ** 2) / g.h22,
        n1_var=1.0 + (g.hR1 / g.h11) ** 2,
        n2_var=1.0 + (g.hR2 / g.h22) ** 2,
    )
