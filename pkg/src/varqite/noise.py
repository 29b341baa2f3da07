"""Shot-noise and decoherence-skew model for sampled matrix entries.

A finite-shot estimate of a bounded observable with true mean m and outcome
half-range r is drawn from Normal(eps*m, (r^2 - (eps*m)^2)/N) and clamped to
[-r, r], where eps = (1-p)^D is the multiplicative skew toward zero caused by
mixing with the maximally mixed state over D gates at error rate p.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = ["NoiseConfig", "skew_factor", "sample_expectation", "entry_stream",
           "STREAM_A", "STREAM_C"]

# Stream tags keep A-entry and C-term draws on disjoint counter-based streams.
STREAM_A = 0
STREAM_C = 1

_MASK_64 = (1 << 64) - 1


@dataclass(frozen=True)
class NoiseConfig:
    """Per-run noise settings.

    ``gate_count`` (D) defaults to the gate count of the circuit being
    evolved; the skew eps = (1-p)^D then tracks the actual circuit depth.
    """

    gate_error_rate: float = 0.0
    shots_a: int = 10_000
    shots_c: int = 10_000
    seed: int = 0
    gate_count: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.gate_error_rate < 1.0:
            raise ValueError(f"gate error rate must be in [0, 1), got {self.gate_error_rate}")
        if self.shots_a < 1 or self.shots_c < 1:
            raise ValueError("shot counts must be >= 1")
        if self.gate_count is not None and self.gate_count < 0:
            raise ValueError(f"gate count must be >= 0, got {self.gate_count}")

    def skew(self, default_gate_count: int) -> float:
        depth = self.gate_count if self.gate_count is not None else default_gate_count
        return skew_factor(self.gate_error_rate, depth)


def skew_factor(gate_error_rate: float, gate_count: int) -> float:
    """eps = (1-p)^D, the surviving fraction of the noise-free expectation."""
    if not 0.0 <= gate_error_rate < 1.0:
        raise ValueError(f"gate error rate must be in [0, 1), got {gate_error_rate}")
    if gate_count < 0:
        raise ValueError(f"gate count must be >= 0, got {gate_count}")
    return (1.0 - gate_error_rate) ** gate_count


def entry_stream(seed: int, iteration: int, tag: int, i: int, j: int) -> np.random.Generator:
    """Independent counter-based stream for one sampled entry.

    The coordinates are packed into a Philox key, so identical
    (seed, iteration, tag, i, j) reproduce the stream bit-for-bit and any
    evaluation order (or parallelism) leaves results unchanged.
    """
    if not 0 <= iteration < 1 << 32:
        raise ValueError(f"iteration out of packing range: {iteration}")
    if not 0 <= tag < 4 or not 0 <= i < 1 << 15 or not 0 <= j < 1 << 15:
        raise ValueError(f"stream coordinates out of packing range: {(tag, i, j)}")
    packed = (iteration << 32) | (tag << 30) | (i << 15) | j
    key = np.array([seed & _MASK_64, packed], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_expectation(
    true_mean: float,
    half_range: float,
    shots: int,
    skew: float,
    stream: np.random.Generator,
) -> float:
    """One finite-shot estimate of a bounded observable.

    The variance (r^2 - (eps*m)^2)/N vanishes at the boundary |m| = r, and
    draws are clamped to the physical range.
    """
    if half_range <= 0:
        raise ValueError(f"half range must be positive, got {half_range}")
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if abs(true_mean) > half_range * (1.0 + 1e-9) + 1e-15:
        raise ValueError(f"|mean| = {abs(true_mean)} exceeds the half range {half_range}")
    mean = skew * min(max(true_mean, -half_range), half_range)
    variance = (half_range * half_range - mean * mean) / shots
    if variance <= 0.0:
        return mean
    draw = stream.normal(mean, np.sqrt(variance))
    return float(min(max(draw, -half_range), half_range))
