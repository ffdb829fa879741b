"""Small-blocklength link simulation of the aligned relay scheme.

Fresh Gaussian codebooks each trial, joint minimum-distance decoding at
each destination over all codeword pairs, and an error counted only
when a destination's own message is wrong (the interferer's index is
free to be anything).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .af_relay import af_power_required, equivalent_channel, solve_af_gains
from .channel import ChannelGains, PowerBudget, derive_seed, resolve_workers
from .exceptions import AfInfeasible, CodebookTooLarge

# Exhaustive pair decoding caps the codebook size per user.
MAX_CODEBOOK = 2 ** 14


@dataclass(frozen=True)
class SimConfig:
    """One operating point: blocklength n, rates in bits per use."""

    n: int
    r1: float
    r2: float
    trials: int
    seed: int


@dataclass(frozen=True)
class SimResult:
    """Per-user error frequencies over the simulated trials."""

    p_err1: float
    p_err2: float
    trials: int


@dataclass(frozen=True)
class SweepPoint:
    scale: float
    r1: float
    r2: float
    result: SimResult


def codebook_size(rate: float, n: int) -> int:
    """Number of messages at `rate` bits per use and blocklength n.

    ceil(2^(n rate)), with a tiny relative fuzz so exact powers of two
    survive the float exponentiation.
    """
    if not math.isfinite(rate) or rate < 0:
        raise ValueError(f"rate must be finite and nonnegative, got {rate!r}")
    if n < 1:
        raise ValueError("n must be at least 1")
    exponent = n * rate
    if exponent > 62:
        raise CodebookTooLarge(f"2^{exponent:.1f} codewords requested; cap is 2^{int(math.log2(MAX_CODEBOOK))}")
    m = 2.0 ** exponent
    return max(1, math.ceil(m * (1.0 - 1e-9)))


def wilson_interval(p_hat: float, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for an error frequency."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    denom = 1.0 + z * z / trials
    center = (p_hat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p_hat * (1.0 - p_hat) / trials + z * z / (4.0 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))


def _decode_pair(y: np.ndarray, a: np.ndarray, b: np.ndarray) -> tuple[int, int]:
    # Index pair minimizing ||y - a_j - b_k||^2; constant ||y||^2 dropped.
    u = np.einsum("ij,ij->i", a, a) - 2.0 * (a @ y)
    v = np.einsum("ij,ij->i", b, b) - 2.0 * (b @ y)
    dist = u[:, None] + v[None, :] + 2.0 * (a @ b.T)
    flat = int(np.argmin(dist))
    return flat // b.shape[0], flat % b.shape[0]


def _run_trials(gains, budget, cfg, eq, relay, m1, m2, pipeline, trial_ids) -> tuple[int, int]:
    g = gains
    sx = math.sqrt(budget.P)
    sz = math.sqrt(budget.noise_var)
    # Per-destination noise std for the collapsed channel; the relay
    # noise it absorbs scales with noise_var like everything else.
    s1 = math.sqrt(budget.noise_var * eq.n1_var)
    s2 = math.sqrt(budget.noise_var * eq.n2_var)
    err1 = err2 = 0
    for t in trial_ids:
        rng = np.random.default_rng(derive_seed(cfg.seed, t))
        c1 = sx * rng.standard_normal((m1, cfg.n))
        c2 = sx * rng.standard_normal((m2, cfg.n))
        sent1 = int(rng.integers(m1))
        sent2 = int(rng.integers(m2))
        x1, x2 = c1[sent1], c2[sent2]
        if pipeline == "equivalent":
            y1 = eq.g11 * x1 + eq.g12 * x2 + s1 * rng.standard_normal(cfg.n)
            y2 = eq.g21 * x1 + eq.g22 * x2 + s2 * rng.standard_normal(cfg.n)
        else:
            zr = sz * rng.standard_normal(cfg.n)
            z1 = sz * rng.standard_normal(cfg.n)
            z2 = sz * rng.standard_normal(cfg.n)
            yr = g.hR1 * x1 + g.hR2 * x2 + zr
            xr1, xr2 = relay.alpha1 * yr, relay.alpha2 * yr
            y1 = g.h11 * x1 + g.h12 * x2 + g.h1R_1 * xr1 + g.h1R_2 * xr2 + z1
            y2 = g.h21 * x1 + g.h22 * x2 + g.h2R_1 * xr1 + g.h2R_2 * xr2 + z2
        got1, _ = _decode_pair(y1, eq.g11 * c1, eq.g12 * c2)
        _, got2 = _decode_pair(y2, eq.g21 * c1, eq.g22 * c2)
        err1 += got1 != sent1
        err2 += got2 != sent2
    return err1, err2


def simulate(
    gains: ChannelGains,
    budget: PowerBudget,
    cfg: SimConfig,
    pipeline: str = "equivalent",
    workers: int | None = None,
) -> SimResult:
    """Error frequencies of both users at one rate point.

    pipeline selects how channel outputs are produced: "equivalent"
    draws from the collapsed interference channel, "two_hop" runs the
    relay explicitly; the two give identically distributed outputs per
    destination.  Decoding always uses the collapsed coefficients.
    Trial t uses the stream derive_seed(cfg.seed, t) with draws in the
    order (codebook 1, codebook 2, messages, noises), so results do not
    depend on worker count.
    """
    if pipeline not in ("equivalent", "two_hop"):
        raise ValueError(f"unknown pipeline {pipeline!r}")
    if cfg.trials < 1:
        raise ValueError("trials must be at least 1")
    m1 = codebook_size(cfg.r1, cfg.n)
    m2 = codebook_size(cfg.r2, cfg.n)
    if m1 > MAX_CODEBOOK or m2 > MAX_CODEBOOK:
        raise CodebookTooLarge(
            f"codebook sizes ({m1}, {m2}) exceed the exhaustive-decoding cap {MAX_CODEBOOK}"
        )
    relay = solve_af_gains(gains)
    needed = af_power_required(relay, gains, budget)
    if needed > budget.P_R:
        raise AfInfeasible(f"aligned gains need power {needed}, budget is {budget.P_R}")
    eq = equivalent_channel(gains)

    w = resolve_workers(workers)
    ids = list(range(cfg.trials))
    if w == 1:
        err1, err2 = _run_trials(gains, budget, cfg, eq, relay, m1, m2, pipeline, ids)
    else:
        chunks = [ids[k::w] for k in range(w) if ids[k::w]]
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(
                lambda chunk: _run_trials(gains, budget, cfg, eq, relay, m1, m2, pipeline, chunk),
                chunks,
            ))
        err1 = sum(p[0] for p in parts)
        err2 = sum(p[1] for p in parts)
    return SimResult(p_err1=err1 / cfg.trials, p_err2=err2 / cfg.trials, trials=cfg.trials)


def sweep_boundary(
    gains: ChannelGains,
    budget: PowerBudget,
    ray: tuple[float, float],
    scales,
    n: int,
    trials: int,
    seed: int,
    pipeline: str = "equivalent",
    workers: int | None = None,
) -> list[SweepPoint]:
    """Error rates along a ray of rate points, ordered by scale.

    ray is a nonnegative, nonzero rate direction (bits per use); each
    scale s simulates the point (s ray1, s ray2).  Scale 1.0 is the ray
    itself, so passing a region corner sweeps across its boundary.
    """
    d1, d2 = float(ray[0]), float(ray[1])
    if not (math.isfinite(d1) and math.isfinite(d2)) or d1 < 0 or d2 < 0 or (d1 == 0 and d2 == 0):
        raise ValueError("ray must be nonnegative, finite, and nonzero")
    out = []
    for s in sorted(float(s) for s in scales):
        if not math.isfinite(s) or s < 0:
            raise ValueError(f"scale must be finite and nonnegative, got {s!r}")
        cfg = SimConfig(n=n, r1=s * d1, r2=s * d2, trials=trials, seed=seed)
        out.append(SweepPoint(scale=s, r1=cfg.r1, r2=cfg.r2, result=simulate(gains, budget, cfg, pipeline, workers)))
    return out
