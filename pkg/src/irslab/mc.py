"""Seeded Monte Carlo harness for estimator MSE measurements.

A run is a sweep over one axis (surface elements, SNR, or scattering
amplitude); each point runs a fixed number of independent trials and
reduces them to one :class:`MseRecord` with the empirical per-coefficient
MSE, its standard error, and the analytic bounds.

Reproducibility contract: every trial draws from generators derived as
(master seed, point index, trial index, purpose), and per-trial results
are assembled in trial order before a single fixed-order reduction, so a
sweep's records are byte-identical across repeat runs and across any
``workers`` setting.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import channel as ch
from . import estimator as est
from .errors import DomainError, IrsLabError, SweepPointError

__all__ = [
    "ESTIMATOR_KINDS",
    "SWEEP_AXES",
    "MseRecord",
    "SweepSpec",
    "empirical_mse",
    "run_point",
    "run_sweep",
]

ESTIMATOR_KINDS = ("mmse", "posterior", "asymptotic", "conditional")
SWEEP_AXES = ("irs_elements", "snr_db", "amplitude")


@dataclass(frozen=True)
class MseRecord:
    """One sweep point, ready for CSV serialization."""

    axis_name: str
    axis_value: float
    mse_empirical: float
    mse_stderr: float
    lower_bound: float
    upper_bound: float
    mse_asymptotic: float
    trials: int
    seed: int


@dataclass(frozen=True)
class SweepSpec:
    """A full sweep: axis, points, trial budget, and base configuration."""

    axis: str
    values: tuple
    trials: int
    base_config: ch.SystemConfig
    estimator_kind: str = "mmse"
    resample_geometry: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise DomainError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if len(self.values) == 0:
            raise DomainError("sweep needs at least one axis value")
        if self.estimator_kind not in ESTIMATOR_KINDS:
            raise DomainError(
                f"estimator_kind must be one of {ESTIMATOR_KINDS}, got {self.estimator_kind!r}"
            )
        if self.trials < 1:
            raise DomainError(f"trials must be positive, got {self.trials!r}")
        if self.workers < 1:
            raise DomainError(f"workers must be positive, got {self.workers!r}")
        if self.axis == "irs_elements":
            for v in self.values:
                if float(v) != int(v) or int(v) < 1:
                    raise DomainError(
                        f"irs_elements values must be positive integers, got {v!r}"
                    )


def empirical_mse(truth: np.ndarray, estimate: np.ndarray) -> float:
    """Per-coefficient squared error ||estimate - truth||_F^2 / (N M)."""
    t = np.asarray(truth)
    e = np.asarray(estimate)
    if t.shape != e.shape:
        raise DomainError(f"shape mismatch: truth {t.shape} vs estimate {e.shape}")
    diff = e - t
    return float(np.mean(diff.real ** 2 + diff.imag ** 2))


def _trial_batch(config: ch.SystemConfig, estimator_kind: str, point_index: int,
                 start: int, stop: int, resample_geometry: bool,
                 profile: ch.PathLossProfile | None):
    """Run trials [start, stop) and return per-trial MSE (and bounds).

    ``profile`` is the fixed geometry, or None to redraw it per trial.
    Returns (mse[stop-start], lower[...] or None, upper[...] or None);
    bound arrays are produced only when geometry is resampled, since they
    are constants otherwise.
    """
    seed = config.master_seed
    s2 = config.sigma2
    v = config.scattering_amplitude
    m1 = config.num_irs_elements

    fixed_weights = None
    if profile is not None and estimator_kind in ("mmse", "asymptotic"):
        c = profile.channel_scales(v)
        if estimator_kind == "mmse":
            fixed_weights = np.array([
                0.0 if ci == 0.0 else est.mmse_weight(m1, float(ci), s2) for ci in c
            ])
        else:
            den = m1 * c + s2
            fixed_weights = np.divide(m1 * c, den, out=np.zeros_like(c),
                                      where=den > 0.0)

    count = stop - start
    mse = np.empty(count)
    lower = np.empty(count) if resample_geometry else None
    upper = np.empty(count) if resample_geometry else None

    for i, t in enumerate(range(start, stop)):
        if resample_geometry:
            prof = ch.make_profile(
                config, ch.rng_stream(seed, point_index, t, ch.GEOMETRY)
            )
        else:
            prof = profile
        real = ch.synthesize_channel(
            config, prof, ch.rng_stream(seed, point_index, t, ch.CHANNEL)
        )
        block = est.build_pilot_block(
            real.cascaded, s2, "shortcut",
            ch.rng_stream(seed, point_index, t, ch.NOISE),
        )
        if fixed_weights is not None:
            out = fixed_weights[:, None] * block.decorrelated
        elif estimator_kind == "mmse":
            out = est.mmse_estimate(block, prof, v, m1).estimate
        elif estimator_kind == "asymptotic":
            out = est.asymptotic_estimate(block, prof, v, m1).estimate
        elif estimator_kind == "posterior":
            out = est.posterior_mmse_estimate(block, prof, v, m1).estimate
        else:  # conditional: oracle scales are the user-segment row norms
            scales = np.linalg.norm(real.user_segment, axis=1)
            out = est.conditional_mmse(block, prof, v, scales).estimate
        mse[i] = empirical_mse(real.cascaded, out)
        if resample_geometry:
            b = est.mse_bounds(prof, v, m1, s2)
            lower[i] = b.aggregate_lower
            upper[i] = b.aggregate_upper
    return mse, lower, upper


def run_point(config: ch.SystemConfig, estimator_kind: str, trials: int, *,
              axis_name: str = "irs_elements", axis_value: float | None = None,
              resample_geometry: bool = False, point_index: int = 0,
              workers: int = 1) -> MseRecord:
    """Monte Carlo MSE of one estimator at one configuration.

    With fixed geometry (the default) the user placement is drawn once
    from the point's geometry stream and the analytic bounds are exact
    constants; with ``resample_geometry`` both are averaged over per-trial
    geometry draws.  Deterministic in (config, point_index), independent
    of ``workers``.
    """
    if estimator_kind not in ESTIMATOR_KINDS:
        raise DomainError(
            f"estimator_kind must be one of {ESTIMATOR_KINDS}, got {estimator_kind!r}"
        )
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials!r}")
    if workers < 1:
        raise DomainError(f"workers must be positive, got {workers!r}")
    if axis_value is None:
        axis_value = float(config.num_irs_elements)

    profile = None
    if not resample_geometry:
        profile = ch.make_profile(
            config,
            None if config.normalized_units
            else ch.rng_stream(config.master_seed, point_index, 0, ch.GEOMETRY),
        )

    if workers == 1 or trials < 2 * workers:
        parts = [_trial_batch(config, estimator_kind, point_index, 0, trials,
                              resample_geometry, profile)]
    else:
        chunk = max(256, math.ceil(trials / (workers * 4)))
        ranges = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                _trial_batch,
                *zip(*[(config, estimator_kind, point_index, s, e,
                        resample_geometry, profile) for s, e in ranges]),
            ))

    mse = np.concatenate([p[0] for p in parts])
    mean = float(np.mean(mse))
    stderr = float(np.std(mse, ddof=1) / math.sqrt(trials)) if trials > 1 else float("nan")

    if resample_geometry:
        lower = float(np.mean(np.concatenate([p[1] for p in parts])))
        upper = float(np.mean(np.concatenate([p[2] for p in parts])))
    else:
        b = est.mse_bounds(profile, config.scattering_amplitude,
                           config.num_irs_elements, config.sigma2)
        lower, upper = b.aggregate_lower, b.aggregate_upper

    return MseRecord(
        axis_name=axis_name,
        axis_value=float(axis_value),
        mse_empirical=mean,
        mse_stderr=stderr,
        lower_bound=lower,
        upper_bound=upper,
        mse_asymptotic=upper,
        trials=trials,
        seed=config.master_seed,
    )


def _config_at(base: ch.SystemConfig, axis: str, value) -> ch.SystemConfig:
    if axis == "irs_elements":
        return base.replace(num_irs_elements=int(value))
    if axis == "snr_db":
        return base.replace(snr_db=float(value), noise_variance=None)
    return base.replace(scattering_amplitude=float(value))


def run_sweep(spec: SweepSpec) -> list[MseRecord]:
    """Run every sweep point in order; deterministic per (spec, seed).

    If a point fails numerically, the completed records survive inside the
    raised :class:`SweepPointError` so callers can still emit them.
    """
    records: list[MseRecord] = []
    for idx, value in enumerate(spec.values):
        try:
            cfg = _config_at(spec.base_config, spec.axis, value)
            records.append(run_point(
                cfg, spec.estimator_kind, spec.trials,
                axis_name=spec.axis, axis_value=float(value),
                resample_geometry=spec.resample_geometry,
                point_index=idx, workers=spec.workers,
            ))
        except (IrsLabError, FloatingPointError) as exc:
            raise SweepPointError(
                f"sweep point {spec.axis}={value!r} failed: {exc}",
                axis_value=float(value), records=records,
            ) from exc
    return records
