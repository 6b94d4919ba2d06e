"""Noise-variance schedules and strided timestep subsequences.

A schedule stores per-step variances beta_t together with the derived
alpha_t = 1 - beta_t and the cumulative products alpha_bar_t. Arrays have
length T+1 with index 0 reserved: alpha_bar_0 = 1 is the clean image, so
the last reverse step lands exactly on the clean estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["NoiseSchedule", "linear_schedule", "default_schedule", "timestep_subsequence"]


@dataclass(frozen=True)
class NoiseSchedule:
    """Tables beta/alpha/alpha_bar indexed by timestep, index 0 reserved."""

    betas: np.ndarray
    alphas: np.ndarray
    alpha_bars: np.ndarray

    def __post_init__(self) -> None:
        for name in ("betas", "alphas", "alpha_bars"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if not (len(self.betas) == len(self.alphas) == len(self.alpha_bars)):
            raise ValueError("schedule tables must have equal length")
        if len(self.betas) < 2:
            raise ValueError("schedule must have at least one step")
        body = self.betas[1:]
        if np.any(body <= 0.0) or np.any(body >= 1.0):
            raise ValueError("betas must lie strictly in (0, 1)")
        if self.alpha_bars[0] != 1.0:
            raise ValueError("alpha_bar at index 0 must be 1")
        if np.any(np.diff(self.alpha_bars) >= 0.0):
            raise ValueError("alpha_bar must be strictly decreasing")

    @property
    def steps(self) -> int:
        return len(self.betas) - 1

    def describe(self) -> str:
        """Short identifier used in file-denoiser manifests."""
        t = self.steps
        return f"T{t}:b1={self.betas[1]:.8g}:bT={self.betas[t]:.8g}"


def linear_schedule(steps: int, beta_start: float, beta_end: float) -> NoiseSchedule:
    """Linearly interpolated betas from beta_start (t=1) to beta_end (t=T)."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if not 0.0 < beta_start <= beta_end < 1.0:
        raise ValueError(
            f"need 0 < beta_start <= beta_end < 1, got ({beta_start}, {beta_end})"
        )
    betas = np.empty(steps + 1)
    betas[0] = 0.0  # index 0 reserved
    betas[1:] = np.linspace(beta_start, beta_end, steps)
    alphas = 1.0 - betas
    alpha_bars = np.cumprod(alphas)  # left-to-right product; index 0 is exactly 1
    return NoiseSchedule(betas=betas, alphas=alphas, alpha_bars=alpha_bars)


def default_schedule(steps: int = 100) -> NoiseSchedule:
    """Desk-scale default: the common (1e-4, 0.02) range at T=1000, rescaled
    by 1000/T so cumulative noise at T matches the T=1000 convention."""
    scale = 1000.0 / steps
    return linear_schedule(steps, 1e-4 * scale, 0.02 * scale)


def timestep_subsequence(steps: int, interval: int) -> list[int]:
    """Strictly decreasing timesteps from T stepping by ``interval``, with a
    forced terminal 0; consecutive entries form the (t, t_prev) pairs of a
    strided deterministic sampler."""
    if not 1 <= interval <= steps:
        raise ValueError(f"interval must be in [1, {steps}], got {interval}")
    ts = list(range(steps, 0, -interval))
    ts.append(0)
    return ts
