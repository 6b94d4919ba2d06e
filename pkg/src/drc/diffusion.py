"""Forward/reverse diffusion steps over dense grids.

The forward marginal mixes a clean image with standard-normal noise:

    x_t = sqrt(alpha_bar_t) * x0 + sqrt(1 - alpha_bar_t) * eps

The reverse machinery comes in two flavors: the stochastic ancestral step
(posterior mean plus sqrt(beta_t) noise) and the implicit sampler step,
which first inverts the forward marginal to a clean estimate

    x0_hat = (x_t - sqrt(1 - alpha_bar_t) * eps_hat) / sqrt(alpha_bar_t)

and then re-noises it to the target timestep with an adjustable per-step
noise scale sigma_t; sigma_t = 0 makes the whole reverse chain a
deterministic function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import TYPE_CHECKING

from .grid import Grid, SeededRng
from .schedule import NoiseSchedule

if TYPE_CHECKING:  # pragma: no cover
    from .denoiser import Denoiser

__all__ = [
    "DdimStepOutput",
    "forward_diffuse",
    "clean_estimate",
    "training_loss",
    "ddpm_reverse_step",
    "ddim_step",
]


@dataclass(frozen=True)
class DdimStepOutput:
    """One implicit-sampler step: the state at t_prev and the clean estimate."""

    x_prev: Grid
    x0_hat: Grid


def _check_t(t: int, sched: NoiseSchedule) -> None:
    if not 1 <= t <= sched.steps:
        raise ValueError(f"timestep {t} outside [1, {sched.steps}]")


def forward_diffuse(x0: Grid, t: int, eps: Grid, sched: NoiseSchedule) -> Grid:
    _check_t(t, sched)
    if x0.shape != eps.shape:
        raise ValueError(f"shape mismatch: {x0.shape} vs {eps.shape}")
    ab = sched.alpha_bars[t]
    return Grid(sqrt(ab) * x0.data + sqrt(1.0 - ab) * eps.data)


def clean_estimate(x_t: Grid, t: int, eps_pred: Grid, sched: NoiseSchedule) -> Grid:
    """Invert the forward marginal given a noise prediction."""
    _check_t(t, sched)
    ab = sched.alpha_bars[t]
    return Grid((x_t.data - sqrt(1.0 - ab) * eps_pred.data) / sqrt(ab))


def training_loss(
    den: "Denoiser", x0: Grid, t: int, eps: Grid, sched: NoiseSchedule
) -> float:
    """Mean squared noise-prediction error at one (x0, t, eps) triple."""
    x_t = forward_diffuse(x0, t, eps, sched)
    pred = den.predict_eps(x_t, t)
    diff = eps.data - pred.data
    return float((diff * diff).mean())


def ddpm_reverse_step(
    x_t: Grid, t: int, den: "Denoiser", sched: NoiseSchedule, rng: SeededRng
) -> Grid:
    """One ancestral reverse step with variance beta_t; no noise at t=1."""
    _check_t(t, sched)
    beta = sched.betas[t]
    alpha = sched.alphas[t]
    ab = sched.alpha_bars[t]
    eps_pred = den.predict_eps(x_t, t)
    mu = (x_t.data - beta / sqrt(1.0 - ab) * eps_pred.data) / sqrt(alpha)
    if t == 1:
        return Grid(mu)
    z = rng.normal(x_t.shape)
    return Grid(mu + sqrt(beta) * z)


def ddim_step(
    x_t: Grid,
    t: int,
    t_prev: int,
    eps_pred: Grid,
    sigma_t: float,
    sched: NoiseSchedule,
    rng: SeededRng | None = None,
) -> DdimStepOutput:
    """One implicit-sampler step from t to t_prev (t_prev < t).

    With sigma_t = 0 the output is a deterministic function of the inputs;
    fresh noise is drawn only when sigma_t > 0.
    """
    _check_t(t, sched)
    if not 0 <= t_prev < t:
        raise ValueError(f"need 0 <= t_prev < t, got t_prev={t_prev}, t={t}")
    ab_prev = sched.alpha_bars[t_prev]
    max_sigma = sqrt(1.0 - ab_prev)
    if not 0.0 <= sigma_t <= max_sigma:
        raise ValueError(f"sigma_t={sigma_t} outside [0, {max_sigma}]")
    x0_hat = clean_estimate(x_t, t, eps_pred, sched)
    x_prev = (
        sqrt(ab_prev) * x0_hat.data
        + sqrt(max(1.0 - ab_prev - sigma_t**2, 0.0)) * eps_pred.data
    )
    if sigma_t > 0.0:
        if rng is None:
            raise ValueError("sigma_t > 0 requires an rng")
        x_prev = x_prev + sigma_t * rng.normal(x_t.shape)
    return DdimStepOutput(x_prev=Grid(x_prev), x0_hat=x0_hat)
