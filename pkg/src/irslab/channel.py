"""System geometry, path loss, and channel synthesis.

The physical layout is a base station array, a passive reflecting surface,
and single-antenna users scattered in an annulus around the surface.  The
cascaded user-to-array channel through the surface is the product of two
Rayleigh segments summed over surface elements; conditioned on the scale
variable a_i (the norm of user i's segment to the surface) each row of the
cascaded matrix is Gaussian, which is the structure every estimator in
this package exploits.

Two samplers produce the cascaded matrix:

* :func:`synthesize_channel` builds it from the physical product of the
  two segments and the surface phases.
* :func:`synthesize_gsm` draws the equivalent Gaussian scale mixture
  directly (a_i^2 ~ Gamma(M1, 1) times an i.i.d. Gaussian row).

The two agree in distribution; tests hold them to that.

All randomness flows through numpy Generators; :func:`rng_stream` derives
independent, reproducible streams from (master seed, point, trial,
purpose) so Monte Carlo results are bit-stable under parallel execution.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

__all__ = [
    "SystemConfig",
    "PathLossProfile",
    "ChannelRealization",
    "GsmRealization",
    "load_config",
    "default_config",
    "rng_stream",
    "sample_user_positions",
    "path_loss_db",
    "path_loss_linear",
    "make_profile",
    "synthesize_channel",
    "synthesize_gsm",
    "GEOMETRY",
    "CHANNEL",
    "NOISE",
]

# purpose tags for rng_stream; fixed small integers, part of the
# reproducibility contract (changing them changes every seeded result)
GEOMETRY = 0
CHANNEL = 1
NOISE = 2


@dataclass(frozen=True)
class SystemConfig:
    """Full description of one simulated system.

    Distances are in meters, losses in dB, ``snr_db`` in dB.  Exactly one
    of ``snr_db`` / ``noise_variance`` must be set; the other must be None.
    With ``normalized_units`` every large-scale gain is 1 (geometry is
    ignored and consumes no randomness), which is the configuration the
    closed-form checks use.
    """

    num_bs_antennas: int = 20
    num_irs_elements: int = 10
    num_users: int = 20
    cell_radius: float = 1000.0
    min_user_distance: float = 500.0
    bs_irs_distance: float = 100.0
    ref_distance_irs_user: float = 1.0
    ref_distance_bs_irs: float = 1.0
    ref_loss_irs_user: float = 30.0
    ref_loss_bs_irs: float = 30.0
    exponent_irs_user: float = 2.0
    exponent_bs_irs: float = 2.8
    scattering_amplitude: float = 1.0
    snr_db: float | None = 0.0
    noise_variance: float | None = None
    normalized_units: bool = False
    master_seed: int = 0

    def __post_init__(self):
        for name in ("num_bs_antennas", "num_irs_elements", "num_users"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        for name in ("cell_radius", "min_user_distance", "bs_irs_distance",
                     "ref_distance_irs_user", "ref_distance_bs_irs"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive finite number, got {v!r}")
        if self.min_user_distance > self.cell_radius:
            raise ConfigError(
                f"min_user_distance {self.min_user_distance!r} exceeds "
                f"cell_radius {self.cell_radius!r}"
            )
        for name in ("ref_loss_irs_user", "ref_loss_bs_irs", "exponent_irs_user",
                     "exponent_bs_irs"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ConfigError(f"{name} must be finite, got {v!r}")
        v = self.scattering_amplitude
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
            raise ConfigError(f"scattering_amplitude must be >= 0, got {v!r}")
        if (self.snr_db is None) == (self.noise_variance is None):
            raise ConfigError("exactly one of snr_db / noise_variance must be set")
        if self.snr_db is not None and not math.isfinite(self.snr_db):
            raise ConfigError(f"snr_db must be finite, got {self.snr_db!r}")
        if self.noise_variance is not None and not (
            math.isfinite(self.noise_variance) and self.noise_variance >= 0
        ):
            raise ConfigError(
                f"noise_variance must be >= 0, got {self.noise_variance!r}"
            )
        if not isinstance(self.master_seed, int):
            raise ConfigError(f"master_seed must be an integer, got {self.master_seed!r}")

    @property
    def sigma2(self) -> float:
        """Noise variance, from ``noise_variance`` or 10^(-snr_db/10)."""
        if self.noise_variance is not None:
            return float(self.noise_variance)
        return 10.0 ** (-self.snr_db / 10.0)

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)


def default_config(**overrides) -> SystemConfig:
    """The reference simulation setup; keyword overrides applied on top."""
    return SystemConfig(**overrides)


_CONFIG_FIELDS = {f.name for f in dataclasses.fields(SystemConfig)}


def load_config(path) -> SystemConfig:
    """Load a :class:`SystemConfig` from a JSON file (snake_case keys).

    Unknown keys and malformed JSON raise :class:`ConfigError`; keys not
    present keep their defaults.  Setting ``snr_db`` in the file clears the
    default only if ``noise_variance`` is given instead.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load config {path!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config root must be a JSON object, got {type(data).__name__}")
    unknown = sorted(set(data) - _CONFIG_FIELDS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "noise_variance" in data and "snr_db" not in data:
        data["snr_db"] = None
    try:
        return SystemConfig(**data)
    except TypeError as exc:
        raise ConfigError(f"bad config {path!r}: {exc}") from exc


def rng_stream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for (master seed, key...); pure and stable.

    The same arguments always produce the same stream, and distinct keys
    produce statistically independent streams, so parallel workers can
    re-derive any trial's randomness without coordination.
    """
    entropy = master_seed & 0xFFFFFFFFFFFFFFFF
    return np.random.default_rng(np.random.SeedSequence(entropy, spawn_key=tuple(key)))


def sample_user_positions(config: SystemConfig, rng: np.random.Generator) -> np.ndarray:
    """User distances from the surface, uniform over the annulus area.

    Area-uniform placement in the ring [min_user_distance, cell_radius]
    makes d^2 uniform on [rmin^2, R^2], hence d = sqrt(rmin^2 + U (R^2 -
    rmin^2)).  Returns shape (num_users,).
    """
    rmin, rmax = config.min_user_distance, config.cell_radius
    if rmin == rmax:
        return np.full(config.num_users, float(rmax))
    u = rng.random(config.num_users)
    return np.sqrt(rmin * rmin + u * (rmax * rmax - rmin * rmin))


def path_loss_db(distance, ref_distance: float, ref_loss_db: float, exponent: float):
    """Log-distance path loss in dB: ref_loss + 10 * exponent * log10(d/d_ref)."""
    d = np.asarray(distance, dtype=float)
    if np.any(~np.isfinite(d)) or np.any(d <= 0.0):
        raise DomainError(f"distance must be positive and finite, got {distance!r}")
    if ref_distance <= 0.0 or not math.isfinite(ref_distance):
        raise DomainError(f"ref_distance must be positive, got {ref_distance!r}")
    out = ref_loss_db + 10.0 * exponent * np.log10(d / ref_distance)
    return float(out) if np.ndim(distance) == 0 else out


def path_loss_linear(loss_db):
    """Linear power gain for a loss in dB: 10^(-loss_db/10)."""
    out = 10.0 ** (-np.asarray(loss_db, dtype=float) / 10.0)
    return float(out) if np.ndim(loss_db) == 0 else out


@dataclass(frozen=True)
class PathLossProfile:
    """Large-scale gains for one geometry draw.

    ``user_gains`` has one surface-to-user gain per user (shape
    (num_users,)); ``array_gain`` is the common surface-to-array gain;
    ``user_distances`` records the drawn distances (all 1 in normalized
    units).
    """

    user_gains: np.ndarray
    array_gain: float
    user_distances: np.ndarray

    def channel_scales(self, amplitude: float) -> np.ndarray:
        """Per-user coefficient variance scale c_i = gain1_i * gain2 * v^2."""
        return self.user_gains * self.array_gain * amplitude * amplitude


def make_profile(config: SystemConfig, rng: np.random.Generator | None = None) -> PathLossProfile:
    """Draw (or fix, in normalized units) the large-scale gain profile."""
    n = config.num_users
    if config.normalized_units:
        return PathLossProfile(
            user_gains=np.ones(n), array_gain=1.0, user_distances=np.ones(n)
        )
    if rng is None:
        raise DomainError("physical-units profile needs an rng for user placement")
    d = sample_user_positions(config, rng)
    user_gains = path_loss_linear(
        path_loss_db(d, config.ref_distance_irs_user, config.ref_loss_irs_user,
                     config.exponent_irs_user)
    )
    array_gain = path_loss_linear(
        path_loss_db(config.bs_irs_distance, config.ref_distance_bs_irs,
                     config.ref_loss_bs_irs, config.exponent_bs_irs)
    )
    return PathLossProfile(user_gains=user_gains, array_gain=float(array_gain),
                           user_distances=d)


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the physical two-segment channel.

    ``user_segment``: users x elements, ``array_segment``: elements x
    antennas, ``phases``: per-element reflection phases in [0, 2pi), and
    ``cascaded``: the users x antennas product channel through the surface.
    """

    user_segment: np.ndarray
    array_segment: np.ndarray
    phases: np.ndarray
    cascaded: np.ndarray


@dataclass(frozen=True)
class GsmRealization:
    """One draw of the equivalent Gaussian scale mixture.

    ``scales``: per-user scale a_i >= 0 with a_i^2 ~ Gamma(M1, 1);
    ``gaussian``: users x antennas i.i.d. unit complex Gaussian;
    ``cascaded``: rows a_i * v * sqrt(gain1_i gain2) * gaussian_i.
    """

    scales: np.ndarray
    gaussian: np.ndarray
    cascaded: np.ndarray


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """I.i.d. circularly symmetric complex Gaussian, unit variance per entry."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return math.sqrt(0.5) * (re + 1j * im)


def synthesize_channel(config: SystemConfig, profile: PathLossProfile,
                       rng: np.random.Generator) -> ChannelRealization:
    """Draw the two Rayleigh segments and form the cascaded channel.

    Row i of the cascaded matrix is
    sqrt(gain1_i gain2) * v * sum_m h1_im e^{j theta_m} h2_m:, i.e. the
    user-to-surface row, the reflection phases, and the surface-to-array
    matrix multiplied through.  Draw order (user segment, array segment,
    phases) is part of the reproducibility contract.
    """
    n, m1, m = config.num_users, config.num_irs_elements, config.num_bs_antennas
    h1 = _complex_normal(rng, (n, m1))
    h2 = _complex_normal(rng, (m1, m))
    phases = rng.uniform(0.0, 2.0 * math.pi, m1)
    reflect = config.scattering_amplitude * np.exp(1j * phases)
    amp1 = np.sqrt(profile.user_gains)[:, None]
    amp2 = math.sqrt(profile.array_gain)
    cascaded = (amp1 * h1) @ (reflect[:, None] * (amp2 * h2))
    return ChannelRealization(user_segment=h1, array_segment=h2, phases=phases,
                              cascaded=cascaded)


def synthesize_gsm(config: SystemConfig, profile: PathLossProfile,
                   rng: np.random.Generator) -> GsmRealization:
    """Draw the cascaded channel directly as a Gaussian scale mixture.

    Per user: a_i = sqrt(u_i) with u_i ~ Gamma(M1, 1), then row i is
    a_i * v * sqrt(gain1_i gain2) times an i.i.d. unit complex Gaussian
    row.  Same law as :func:`synthesize_channel`'s cascaded output.
    """
    n, m = config.num_users, config.num_bs_antennas
    scales = np.sqrt(rng.gamma(config.num_irs_elements, 1.0, n))
    x = _complex_normal(rng, (n, m))
    amp = (scales * config.scattering_amplitude
           * np.sqrt(profile.user_gains * profile.array_gain))
    return GsmRealization(scales=scales, gaussian=x, cascaded=amp[:, None] * x)
