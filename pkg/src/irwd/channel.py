"""Two-user Gaussian interference channel with an instantaneous relay.

The relay hears both senders through one receive antenna and forwards a
scaled copy of its current input over two mutually isolated transmit
antennas, one aimed at each destination.  With unit-variance noise at
every receiver the per-symbol model is

    y_R = hR1 x1 + hR2 x2 + z_R
    x_R = (alpha1 y_R, alpha2 y_R)              (set by the relay design)
    y_1 = h11 x1 + h12 x2 + h1R . x_R + z_1
    y_2 = h21 x1 + h22 x2 + h2R . x_R + z_2

All gains are real constants.  Senders use average power P, the relay
has budget P_R.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import ChannelSpecError

# Canonical ordering of the per-symbol signals, used wherever a joint
# covariance over a subset of them is assembled.
COMPONENTS = ("x1", "x2", "zR", "z1", "z2", "yR", "xR1", "xR2", "y1", "y2")


def _require_finite(name: str, value: float) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return v


@dataclass(frozen=True)
class ChannelGains:
    """Real gains of the channel.

    h11, h12, h21, h22 are destination-from-sender gains (hij is the gain
    from sender j into destination i), hR1 and hR2 feed the relay's
    receive antenna, and h1R_k / h2R_k is the gain from relay transmit
    antenna k into destination 1 / 2.
    """

    h11: float
    h12: float
    h21: float
    h22: float
    hR1: float
    hR2: float
    h1R_1: float
    h1R_2: float
    h2R_1: float
    h2R_2: float

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))

    @property
    def h1R(self) -> tuple[float, float]:
        return (self.h1R_1, self.h1R_2)

    @property
    def h2R(self) -> tuple[float, float]:
        return (self.h2R_1, self.h2R_2)


@dataclass(frozen=True)
class PowerBudget:
    """Average power constraints and the common noise variance.

    noise_var rescales every receiver noise and exists for sensitivity
    sweeps of the sampled model; the closed-form rate and regime
    expressions elsewhere in the package assume the normalized model
    with noise_var = 1.
    """

    P: float
    P_R: float
    noise_var: float = 1.0

    def __post_init__(self):
        for name in ("P", "P_R", "noise_var"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.P < 0:
            raise ValueError("P must be nonnegative")
        if self.P_R < 0:
            raise ValueError("P_R must be nonnegative")
        if self.noise_var <= 0:
            raise ValueError("noise_var must be positive")


@dataclass(frozen=True)
class ChannelSample:
    """One channel use: inputs, noises, and every observed signal."""

    x1: float
    x2: float
    zR: float
    z1: float
    z2: float
    yR: float
    xR1: float
    xR2: float
    y1: float
    y2: float


@dataclass(frozen=True)
class SampleBlock:
    """A batch of channel uses stored column-wise as float64 arrays."""

    x1: np.ndarray
    x2: np.ndarray
    zR: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    yR: np.ndarray
    xR1: np.ndarray
    xR2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray

    def __len__(self) -> int:
        return self.x1.shape[0]

    def __getitem__(self, t: int) -> ChannelSample:
        return ChannelSample(**{name: float(getattr(self, name)[t]) for name in COMPONENTS})

    def component(self, name: str) -> np.ndarray:
        if name not in COMPONENTS:
            raise KeyError(f"unknown component {name!r}")
        return getattr(self, name)

    def matrix(self, names=COMPONENTS) -> np.ndarray:
        """Samples of the named components as an (n, len(names)) array."""
        return np.column_stack([self.component(name) for name in names])


def derive_seed(seed: int, index: int) -> np.random.SeedSequence:
    """Deterministic child seed for block or trial number `index`.

    Splitting work across blocks or workers must not change the draws, so
    every unit of work gets its own stream keyed by (seed, index).
    """
    return np.random.SeedSequence(entropy=seed, spawn_key=(index,))


def resolve_workers(workers: int | None = None) -> int:
    """Worker count for sampling and simulation loops.

    The IRWD_THREADS environment variable caps parallelism; with no
    explicit request it also supplies the default.  Falls back to 1.
    """
    cap = os.environ.get("IRWD_THREADS")
    cap_n = max(1, int(cap)) if cap else None
    if workers is None:
        return cap_n or 1
    n = max(1, int(workers))
    return min(n, cap_n) if cap_n else n


def sample(
    gains: ChannelGains,
    budget: PowerBudget,
    relay_gains: tuple[float, float],
    n: int,
    seed,
) -> SampleBlock:
    """Draw n independent channel uses under a fixed relay gain pair.

    Parameters
    ----------
    gains, budget : channel constants and power levels.
    relay_gains : (alpha1, alpha2) applied instantaneously to y_R.
    n : number of uses.
    seed : anything np.random.default_rng accepts.

    Returns
    -------
    SampleBlock with x1, x2 ~ N(0, P) and independent N(0, noise_var)
    noises.  Per use, the underlying standard-normal stream is consumed
    in the fixed order (x1, x2, zR, z1, z2), so a given seed always
    yields the same block.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    alpha1, alpha2 = float(relay_gains[0]), float(relay_gains[1])
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal((int(n), 5))
    sx = math.sqrt(budget.P)
    sz = math.sqrt(budget.noise_var)
    x1 = sx * draws[:, 0]
    x2 = sx * draws[:, 1]
    zR = sz * draws[:, 2]
    z1 = sz * draws[:, 3]
    z2 = sz * draws[:, 4]
    g = gains
    yR = g.hR1 * x1 + g.hR2 * x2 + zR
    xR1 = alpha1 * yR
    xR2 = alpha2 * yR
    y1 = g.h11 * x1 + g.h12 * x2 + g.h1R_1 * xR1 + g.h1R_2 * xR2 + z1
    y2 = g.h21 * x1 + g.h22 * x2 + g.h2R_1 * xR1 + g.h2R_2 * xR2 + z2
    return SampleBlock(x1=x1, x2=x2, zR=zR, z1=z1, z2=z2, yR=yR, xR1=xR1, xR2=xR2, y1=y1, y2=y2)


def _concat_blocks(blocks) -> SampleBlock:
    return SampleBlock(**{
        name: np.concatenate([b.component(name) for b in blocks]) for name in COMPONENTS
    })


def sample_blocks(
    gains: ChannelGains,
    budget: PowerBudget,
    relay_gains: tuple[float, float],
    n: int,
    seed: int,
    n_blocks: int,
    workers: int | None = None,
) -> list[SampleBlock]:
    """Draw n uses split over n_blocks independent streams.

    Block b uses the stream derive_seed(seed, b), so the result does not
    depend on how many workers generate the blocks.
    """
    if n_blocks < 1:
        raise ValueError("n_blocks must be at least 1")
    if n < n_blocks:
        raise ValueError("need at least one sample per block")
    counts = [n // n_blocks + (1 if b < n % n_blocks else 0) for b in range(n_blocks)]

    def one(b: int) -> SampleBlock:
        return sample(gains, budget, relay_gains, counts[b], derive_seed(seed, b))

    w = resolve_workers(workers)
    if w == 1 or n_blocks == 1:
        return [one(b) for b in range(n_blocks)]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(one, range(n_blocks)))


def sample_all(
    gains: ChannelGains,
    budget: PowerBudget,
    relay_gains: tuple[float, float],
    n: int,
    seed: int,
    n_blocks: int = 1,
    workers: int | None = None,
) -> SampleBlock:
    """Like sample_blocks but concatenated back into one block."""
    if n_blocks == 1:
        return sample(gains, budget, relay_gains, n, derive_seed(seed, 0))
    return _concat_blocks(sample_blocks(gains, budget, relay_gains, n, seed, n_blocks, workers))


# Channel spec files: one JSON object holding the ten gains and powers.
_SPEC_SCALARS = ("h11", "h12", "h21", "h22", "hR1", "hR2", "P", "PR")
_SPEC_PAIRS = ("h1R", "h2R")


def parse_channel_spec(obj) -> tuple[ChannelGains, PowerBudget]:
    """Build (gains, budget) from a decoded channel spec object."""
    if not isinstance(obj, dict):
        raise ChannelSpecError("channel spec must be a JSON object")
    vals = {}
    for key in _SPEC_SCALARS:
        if key not in obj:
            raise ChannelSpecError(f"channel spec is missing field {key!r}")
        try:
            vals[key] = _require_finite(key, obj[key])
        except (TypeError, ValueError) as exc:
            raise ChannelSpecError(f"channel spec field {key!r} is not a finite number") from exc
    for key in _SPEC_PAIRS:
        if key not in obj:
            raise ChannelSpecError(f"channel spec is missing field {key!r}")
        pair = obj[key]
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ChannelSpecError(f"channel spec field {key!r} must be a pair [a, b]")
        for k, v in enumerate(pair, start=1):
            try:
                vals[f"{key}_{k}"] = _require_finite(f"{key}[{k}]", v)
            except (TypeError, ValueError) as exc:
                raise ChannelSpecError(f"channel spec field {key!r} entry {k} is not a finite number") from exc
    gains = ChannelGains(
        h11=vals["h11"], h12=vals["h12"], h21=vals["h21"], h22=vals["h22"],
        hR1=vals["hR1"], hR2=vals["hR2"],
        h1R_1=vals["h1R_1"], h1R_2=vals["h1R_2"],
        h2R_1=vals["h2R_1"], h2R_2=vals["h2R_2"],
    )
    try:
        budget = PowerBudget(P=vals["P"], P_R=vals["PR"])
    except ValueError as exc:
        raise ChannelSpecError(str(exc)) from exc
    return gains, budget


def load_channel_spec(path) -> tuple[ChannelGains, PowerBudget]:
    """Read a channel spec JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ChannelSpecError(f"cannot read channel spec {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ChannelSpecError(f"channel spec {path!r} is not valid JSON: {exc}") from exc
    return parse_channel_spec(obj)


def channel_spec_dict(gains: ChannelGains, budget: PowerBudget) -> dict:
    """Channel spec object matching parse_channel_spec."""
    return {
        "h11": gains.h11, "h12": gains.h12, "h21": gains.h21, "h22": gains.h22,
        "hR1": gains.hR1, "hR2": gains.hR2,
        "h1R": [gains.h1R_1, gains.h1R_2], "h2R": [gains.h2R_1, gains.h2R_2],
        "P": budget.P, "PR": budget.P_R,
    }
