"""Command-line front end: sweeps, single points, and the validation suite.

Three subcommands:

* ``sweep``  -- Monte Carlo MSE along one axis (``--axis m1|snr|v``), CSV out.
* ``point``  -- one configuration, one CSV row.
* ``validate`` -- re-run the numerical cross-check suite, print pass/fail.

CSV goes to ``--out`` or stdout, UTF-8 with LF line endings, floats
serialized with ``repr`` so parsing the file back reproduces the exact
doubles.  Exit codes: 0 success, 1 numerical/validation failure, 2 usage
or configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .channel import SystemConfig, default_config, load_config
from .errors import ConfigError, IrsLabError, SweepPointError
from .mc import ESTIMATOR_KINDS, MseRecord, SweepSpec, run_point, run_sweep
from .validate import run_validation

__all__ = ["main", "CSV_HEADER", "format_record", "parse_values"]

CSV_HEADER = ("axis_name,axis_value,mse_empirical,mse_stderr,"
              "lower_bound,upper_bound,mse_asymptotic,trials,seed")

SEED_ENV_VAR = "IRSLAB_SEED"

_AXIS_FLAGS = {"m1": "irs_elements", "snr": "snr_db", "v": "amplitude"}


def format_record(record: MseRecord) -> str:
    """One CSV row; float fields use repr for exact round-tripping."""
    return ",".join([
        record.axis_name,
        repr(float(record.axis_value)),
        repr(float(record.mse_empirical)),
        repr(float(record.mse_stderr)),
        repr(float(record.lower_bound)),
        repr(float(record.upper_bound)),
        repr(float(record.mse_asymptotic)),
        str(int(record.trials)),
        str(int(record.seed)),
    ])


def write_csv(records, out_path: str | None) -> None:
    lines = [CSV_HEADER] + [format_record(r) for r in records]
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def parse_values(spec: str) -> tuple:
    """Axis values from '1,2,4' or 'start:stop:step' (stop inclusive)."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:step, got {spec!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"bad range {spec!r}: {exc}") from exc
        if step == 0.0 or (stop - start) * step < 0.0:
            raise ConfigError(f"range {spec!r} does not terminate")
        values = []
        k = 0
        while True:
            v = start + k * step
            if (step > 0 and v > stop + 1e-9 * abs(step)) or \
               (step < 0 and v < stop - 1e-9 * abs(step)):
                break
            values.append(v)
            k += 1
        return tuple(values)
    try:
        return tuple(float(p) for p in spec.split(",") if p.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"bad value list {spec!r}: {exc}") from exc


def _resolve_seed(args, config: SystemConfig) -> int:
    """--seed beats the environment, which beats the config file."""
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc
    return config.master_seed


def _base_config(args) -> SystemConfig:
    config = load_config(args.config) if args.config else default_config()
    if getattr(args, "normalized", False):
        config = config.replace(normalized_units=True)
    config = config.replace(master_seed=_resolve_seed(args, config))
    return config


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON system configuration file")
    p.add_argument("--normalized", action="store_true",
                   help="unit large-scale gains (closed-form test regime)")
    p.add_argument("--trials", type=int, default=10000,
                   help="Monte Carlo trials per point (default 10000)")
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (beats ${SEED_ENV_VAR} and the config file)")
    p.add_argument("--estimator", choices=ESTIMATOR_KINDS, default="mmse")
    p.add_argument("--resample-geometry", action="store_true",
                   help="redraw user placement every trial")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel worker processes (results are identical)")
    p.add_argument("--out", help="output CSV path (default stdout)")


def cmd_sweep(args) -> int:
    config = _base_config(args)
    spec = SweepSpec(
        axis=_AXIS_FLAGS[args.axis],
        values=parse_values(args.values),
        trials=args.trials,
        base_config=config,
        estimator_kind=args.estimator,
        resample_geometry=args.resample_geometry,
        workers=args.workers,
    )
    try:
        records = run_sweep(spec)
    except SweepPointError as exc:
        write_csv(exc.records, args.out)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    write_csv(records, args.out)
    return 0


def cmd_point(args) -> int:
    config = _base_config(args)
    overrides = {}
    if args.m1 is not None:
        overrides["num_irs_elements"] = args.m1
    if args.snr is not None and args.noise_variance is not None:
        raise ConfigError("give --snr or --noise-variance, not both")
    if args.snr is not None:
        overrides["snr_db"] = args.snr
        overrides["noise_variance"] = None
    if args.noise_variance is not None:
        overrides["noise_variance"] = args.noise_variance
        overrides["snr_db"] = None
    if args.v is not None:
        overrides["scattering_amplitude"] = args.v
    if overrides:
        config = config.replace(**overrides)
    record = run_point(
        config, args.estimator, args.trials,
        axis_name="irs_elements", axis_value=float(config.num_irs_elements),
        resample_geometry=args.resample_geometry, workers=args.workers,
    )
    write_csv([record], args.out)
    return 0


def cmd_validate(args) -> int:
    if args.config:
        load_config(args.config)  # surfaces config problems as exit code 2
        print(f"config ok: {args.config}")
    results = run_validation(fast=args.fast)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}: achieved {r.achieved:.3e} (tolerance {r.tolerance:.3e})")
        failed += 0 if r.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irslab",
        description="Monte Carlo laboratory for shrinkage channel estimation "
                    "through a passive reflecting surface",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="MSE sweep along one axis, CSV out")
    p_sweep.add_argument("--axis", choices=sorted(_AXIS_FLAGS), required=True,
                         help="m1: surface elements, snr: SNR in dB, v: amplitude")
    p_sweep.add_argument("--values", required=True,
                         help="comma list '1,2,4' or range 'start:stop:step' "
                              "(use --values=-10:20:5 for a leading minus)")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_point = sub.add_parser("point", help="one configuration, one CSV row")
    p_point.add_argument("--m1", type=int, help="surface element count")
    p_point.add_argument("--snr", type=float, help="SNR in dB")
    p_point.add_argument("--noise-variance", type=float, help="noise variance")
    p_point.add_argument("--v", type=float, help="scattering amplitude")
    _add_common(p_point)
    p_point.set_defaults(func=cmd_point)

    p_val = sub.add_parser("validate", help="run the numerical cross-check suite")
    p_val.add_argument("--fast", action="store_true", help="reduced grids")
    p_val.add_argument("--config", help="also check that this config loads")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IrsLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
