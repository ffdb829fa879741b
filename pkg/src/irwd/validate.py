"""Monte Carlo validation of the closed-form rate expressions.

Mutual informations of the jointly Gaussian per-symbol signals are
computed two ways: exactly, from the covariance implied by the gains,
and empirically, from sampled blocks.  Both go through the same
log-determinant formula, so a disagreement beyond bootstrap error
points at the model, not the estimator.

Note on conditioning: the relay transmit signals are deterministic
scalings of yR, so a covariance over (yR, xR1, xR2) is singular by
construction.  Queries should condition on yR alone; adding xR1 or xR2
changes no information value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .af_relay import AfGains, EquivalentChannel, af_power_required, equivalent_channel, solve_af_gains
from .channel import COMPONENTS, ChannelGains, PowerBudget, derive_seed, sample_blocks
from .exceptions import AfInfeasible, SingularCovariance

_LN_BASE = {"bits": math.log(2.0), "nats": 1.0}
_LOG_DET_FLOOR = math.log(1e-12)

MIN_MC_SAMPLES = 10_000
MIN_REGRESSION_SAMPLES = 100_000
MIN_RESAMPLES = 30


@dataclass(frozen=True)
class MiQuery:
    """Mutual information I(left; right | given) between signal groups."""

    left: tuple[str, ...]
    right: tuple[str, ...]
    given: tuple[str, ...] = ()

    def label(self) -> str:
        s = f"I({','.join(self.left)};{','.join(self.right)}"
        if self.given:
            s += f"|{','.join(self.given)}"
        return s + ")"

    def names(self) -> tuple[str, ...]:
        return _union(self.left, self.right, self.given)


@dataclass(frozen=True)
class NamedCovariance:
    """Covariance matrix with named rows/columns."""

    names: tuple[str, ...]
    matrix: np.ndarray

    def block(self, names: tuple[str, ...]) -> np.ndarray:
        idx = [self.names.index(n) for n in names]
        return self.matrix[np.ix_(idx, idx)]


@dataclass(frozen=True)
class MiEstimate:
    value: float
    stderr: float
    n: int


def _union(*groups: tuple[str, ...]) -> tuple[str, ...]:
    out: list[str] = []
    for group in groups:
        for name in group:
            if name not in out:
                out.append(name)
    return tuple(out)


def _loading_rows(gains: ChannelGains, relay: AfGains) -> dict[str, np.ndarray]:
    # Every signal as a linear map of the independent sources
    # (x1, x2, zR, z1, z2).
    g = gains
    c1 = g.h1R_1 * relay.alpha1 + g.h1R_2 * relay.alpha2
    c2 = g.h2R_1 * relay.alpha1 + g.h2R_2 * relay.alpha2
    yr = np.array([g.hR1, g.hR2, 1.0, 0.0, 0.0])
    return {
        "x1": np.array([1.0, 0.0, 0.0, 0.0, 0.0]),
        "x2": np.array([0.0, 1.0, 0.0, 0.0, 0.0]),
        "zR": np.array([0.0, 0.0, 1.0, 0.0, 0.0]),
        "z1": np.array([0.0, 0.0, 0.0, 1.0, 0.0]),
        "z2": np.array([0.0, 0.0, 0.0, 0.0, 1.0]),
        "yR": yr,
        "xR1": relay.alpha1 * yr,
        "xR2": relay.alpha2 * yr,
        "y1": np.array([g.h11, g.h12, 0.0, 1.0, 0.0]) + c1 * yr,
        "y2": np.array([g.h21, g.h22, 0.0, 0.0, 1.0]) + c2 * yr,
    }


def exact_covariance(
    gains: ChannelGains,
    budget: PowerBudget,
    relay: AfGains,
    names: tuple[str, ...] = COMPONENTS,
) -> NamedCovariance:
    """Covariance of the named signals implied by gains and powers."""
    rows = _loading_rows(gains, relay)
    load = np.array([rows[name] for name in names])
    nv = budget.noise_var
    src = np.diag([budget.P, budget.P, nv, nv, nv])
    return NamedCovariance(names=tuple(names), matrix=load @ src @ load.T)


def _logdet(cov: NamedCovariance, names: tuple[str, ...]) -> float:
    if not names:
        return 0.0
    sign, logdet = np.linalg.slogdet(cov.block(names))
    if sign <= 0 or logdet <= _LOG_DET_FLOOR:
        raise SingularCovariance(f"covariance block {names} is singular")
    return logdet


def gaussian_mi_closed_form(cov: NamedCovariance, query: MiQuery, base: str = "bits") -> float:
    """I(left; right | given) for jointly Gaussian signals.

    Uses the log-determinant identity

        I(A; B | C) = (1/2) log( det S_AC det S_BC / (det S_C det S_ABC) )

    where S_G is the covariance block of the signals in G.  Groups are
    deduplicated, so conditioning a signal out of itself gives zero.
    Raises SingularCovariance when a needed block determinant is not
    positive (or is below 1e-12).
    """
    a, b, c = query.left, query.right, query.given
    if not a or not b:
        return 0.0
    nats = 0.5 * (
        _logdet(cov, _union(a, c))
        + _logdet(cov, _union(b, c))
        - _logdet(cov, _union(c))
        - _logdet(cov, _union(a, b, c))
    )
    return float(nats / _LN_BASE[base])


def _default_blocks(n: int) -> int:
    return max(10, min(100, n // 1000))


def _block_moments(
    gains: ChannelGains,
    budget: PowerBudget,
    relay: AfGains,
    names: tuple[str, ...],
    n: int,
    seed: int,
    n_blocks: int,
    workers: int | None = None,
):
    """Per-block sums: first moments, raw second moments, counts."""
    blocks = sample_blocks(gains, budget, (relay.alpha1, relay.alpha2), n, seed, n_blocks, workers)
    s1 = np.empty((n_blocks, len(names)))
    s2 = np.empty((n_blocks, len(names), len(names)))
    counts = np.empty(n_blocks)
    for b, block in enumerate(blocks):
        mat = block.matrix(names)
        s1[b] = mat.sum(axis=0)
        s2[b] = mat.T @ mat
        counts[b] = mat.shape[0]
    return s1, s2, counts


def _cov_from_moments(s1: np.ndarray, s2: np.ndarray, count: float) -> np.ndarray:
    mean = s1 / count
    return (s2 - count * np.outer(mean, mean)) / (count - 1.0)


def _bootstrap_weights(seed: int, n_blocks: int, resamples: int) -> np.ndarray:
    # Stream index n_blocks is reserved for the bootstrap; sampling only
    # uses indices 0 .. n_blocks-1.
    rng = np.random.default_rng(derive_seed(seed, n_blocks))
    idx = rng.integers(0, n_blocks, size=(resamples, n_blocks))
    return np.stack([np.bincount(row, minlength=n_blocks) for row in idx]).astype(float)


def estimate_mi_mc(
    gains: ChannelGains,
    budget: PowerBudget,
    relay: AfGains,
    query: MiQuery,
    n: int,
    seed: int,
    base: str = "bits",
    resamples: int = 50,
    workers: int | None = None,
) -> MiEstimate:
    """Sample-covariance estimate of a mutual information with a
    block-bootstrap standard error.

    The n uses are drawn in blocks with per-block seeds, so the result
    is reproducible and independent of worker count.  Needs n >= 10^4
    and at least 30 bootstrap resamples.
    """
    if n < MIN_MC_SAMPLES:
        raise ValueError(f"need n >= {MIN_MC_SAMPLES} for a stable estimate, got {n}")
    if resamples < MIN_RESAMPLES:
        raise ValueError(f"need at least {MIN_RESAMPLES} bootstrap resamples, got {resamples}")
    names = query.names()
    nb = _default_blocks(n)
    s1, s2, counts = _block_moments(gains, budget, relay, names, n, seed, nb, workers)
    cov = NamedCovariance(names, _cov_from_moments(s1.sum(0), s2.sum(0), counts.sum()))
    value = gaussian_mi_closed_form(cov, query, base)
    weights = _bootstrap_weights(seed, nb, resamples)
    reps = np.empty(resamples)
    for r in range(resamples):
        w = weights[r]
        cov_r = _cov_from_moments(w @ s1, np.tensordot(w, s2, axes=1), w @ counts)
        reps[r] = gaussian_mi_closed_form(NamedCovariance(names, cov_r), query, base)
    return MiEstimate(value=float(value), stderr=float(np.std(reps, ddof=1)), n=n)


_REGRESS_NAMES = ("x1", "x2", "y1", "y2")


def _regress(s2: np.ndarray, names: tuple[str, ...], y_name: str, count: float):
    """Least squares of y on (x1, x2) through the origin, from raw moments."""
    ix1, ix2, iy = names.index("x1"), names.index("x2"), names.index(y_name)
    mxx = s2[np.ix_((ix1, ix2), (ix1, ix2))]
    mxy = s2[(ix1, ix2), iy]
    beta = np.linalg.solve(mxx, mxy)
    rss = s2[iy, iy] - beta @ mxy
    resvar = rss / (count - 2.0)
    se = np.sqrt(resvar * np.diag(np.linalg.inv(mxx)))
    return beta, resvar, se


def empirical_equivalent_channel(
    gains: ChannelGains,
    budget: PowerBudget,
    n: int,
    seed: int,
    workers: int | None = None,
) -> EquivalentChannel:
    """Equivalent-channel coefficients recovered from sampled data.

    Runs the aligned relay, regresses each destination output on the two
    inputs, and reports coefficients and residual variances.  Needs
    n >= 10^5 so the 1 to 2 percent comparisons downstream are
    meaningful.
    """
    if n < MIN_REGRESSION_SAMPLES:
        raise ValueError(f"need n >= {MIN_REGRESSION_SAMPLES} for the regression, got {n}")
    relay = solve_af_gains(gains)
    nb = _default_blocks(n)
    _, s2, counts = _block_moments(gains, budget, relay, _REGRESS_NAMES, n, seed, nb, workers)
    total2, count = s2.sum(0), counts.sum()
    beta1, resvar1, _ = _regress(total2, _REGRESS_NAMES, "y1", count)
    beta2, resvar2, _ = _regress(total2, _REGRESS_NAMES, "y2", count)
    return EquivalentChannel(
        g11=float(beta1[0]), g12=float(beta1[1]),
        g21=float(beta2[0]), g22=float(beta2[1]),
        n1_var=float(resvar1), n2_var=float(resvar2),
    )


def standard_queries() -> tuple[MiQuery, ...]:
    """The four informations matching the rate-region bounds.

    Conditioned single-user rates at the boosted SNRs and the two joint
    informations matching the genie sum bounds.
    """
    return (
        MiQuery(("x1",), ("y1", "yR"), ("x2",)),
        MiQuery(("x2",), ("y2", "yR"), ("x1",)),
        MiQuery(("x1", "x2"), ("y1", "yR")),
        MiQuery(("x1", "x2"), ("y2", "yR")),
    )


@dataclass(frozen=True)
class CheckResult:
    """One validation comparison; `passed` is the tolerance verdict."""

    query: str
    closed_form: float
    mc_value: float
    stderr: float
    n: int
    seed: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "query": self.query,
            "closed_form": self.closed_form,
            "mc_value": self.mc_value,
            "stderr": self.stderr,
            "n": self.n,
            "seed": self.seed,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"checks": [c.to_dict() for c in self.checks], "pass": self.passed}


def run_validation(
    gains: ChannelGains,
    budget: PowerBudget,
    n: int,
    seed: int,
    base: str = "bits",
    resamples: int = 50,
    workers: int | None = None,
) -> ValidationReport:
    """Full Monte Carlo cross-check of one channel.

    Compares the four standard informations against their exact values
    (agreement within 3 bootstrap standard errors) and the regression
    recovery of the equivalent channel against the closed form
    (coefficients to 1 percent, noise variances to 2 percent).  Raises
    AfInfeasible when the relay budget cannot support the aligned gains.
    """
    if n < MIN_REGRESSION_SAMPLES:
        raise ValueError(f"need n >= {MIN_REGRESSION_SAMPLES} for the full validation, got {n}")
    if resamples < MIN_RESAMPLES:
        raise ValueError(f"need at least {MIN_RESAMPLES} bootstrap resamples, got {resamples}")
    relay = solve_af_gains(gains)
    needed = af_power_required(relay, gains, budget)
    if needed > budget.P_R:
        raise AfInfeasible(f"aligned gains need power {needed}, budget is {budget.P_R}")

    names = _union(("x1", "x2", "yR", "y1", "y2"))
    nb = _default_blocks(n)
    s1, s2, counts = _block_moments(gains, budget, relay, names, n, seed, nb, workers)
    total1, total2, count = s1.sum(0), s2.sum(0), counts.sum()
    sample_cov = NamedCovariance(names, _cov_from_moments(total1, total2, count))
    truth = exact_covariance(gains, budget, relay, names)
    weights = _bootstrap_weights(seed, nb, resamples)

    checks: list[CheckResult] = []
    for query in standard_queries():
        cf = gaussian_mi_closed_form(truth, query, base)
        mc = gaussian_mi_closed_form(sample_cov, query, base)
        reps = np.empty(len(weights))
        for r, w in enumerate(weights):
            cov_r = _cov_from_moments(w @ s1, np.tensordot(w, s2, axes=1), w @ counts)
            reps[r] = gaussian_mi_closed_form(NamedCovariance(names, cov_r), query, base)
        stderr = float(np.std(reps, ddof=1))
        checks.append(CheckResult(
            query=query.label(), closed_form=cf, mc_value=mc, stderr=stderr,
            n=n, seed=seed, passed=abs(mc - cf) <= 3.0 * stderr,
        ))

    eq = equivalent_channel(gains)
    for y_name, coeffs, var_name in (("y1", ("g11", "g12"), "n1_var"), ("y2", ("g21", "g22"), "n2_var")):
        beta, resvar, se = _regress(total2, names, y_name, count)
        for j, coeff in enumerate(coeffs):
            target = getattr(eq, coeff)
            ok = abs(beta[j] - target) <= 0.01 * max(abs(target), 0.1)
            checks.append(CheckResult(
                query=f"regress[{coeff}]", closed_form=float(target), mc_value=float(beta[j]),
                stderr=float(se[j]), n=n, seed=seed, passed=bool(ok),
            ))
        target = getattr(eq, var_name)
        ok = abs(resvar - target) <= 0.02 * target
        checks.append(CheckResult(
            query=f"regress[{var_name}]", closed_form=float(target), mc_value=float(resvar),
            stderr=float(target * math.sqrt(2.0 / (count - 2.0))), n=n, seed=seed, passed=bool(ok),
        ))
    return ValidationReport(checks=tuple(checks))
