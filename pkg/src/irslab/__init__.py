"""Numerical laboratory for shrinkage channel estimation through a passive
reflecting surface: closed-form channel statistics, four shrinkage
estimators with analytic MSE bounds, and a reproducible Monte Carlo
harness with a CSV-producing command line."""

from .channel import (ChannelRealization, GsmRealization, PathLossProfile,
                      SystemConfig, default_config, load_config, make_profile,
                      path_loss_db, path_loss_linear, rng_stream,
                      sample_user_positions, synthesize_channel, synthesize_gsm)
from .errors import (ConfigError, ConvergenceError, DomainError, IrsLabError,
                     SweepPointError)
from .estimator import (EstimatorOutput, MseBounds, PilotBlock,
                        asymptotic_estimate, build_pilot_block,
                        conditional_mmse, mmse_estimate, mmse_weight,
                        mse_bounds, posterior_mmse_estimate,
                        posterior_weights_for_rows)
from .mc import (ESTIMATOR_KINDS, SWEEP_AXES, MseRecord, SweepSpec,
                 empirical_mse, run_point, run_sweep)
from .specfun import (QuadratureSpec, adaptive_quadrature, bessel_k,
                      log_bessel_k, log_scaled_upper_gamma,
                      upper_incomplete_gamma)
from .stats import (BesselKChannelDist, RadialCdf, charfun,
                    empirical_charfun_check, gaussian_radial_cdf,
                    log_pdf_entry, log_pdf_row, log_pdf_scale,
                    log_radial_density, sample_entries, sample_row_norms)
from .validate import ValidationResult, run_validation

__version__ = "0.1.0"
