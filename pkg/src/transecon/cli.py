"""Command-line entry point: ``transecon {fit,forecast,trend,simulate,report}``.

Every flag has a matching key in the optional ``--config`` JSON file
(``--start-year`` <-> ``"start_year"``); flags win over the file.  The
output directory can also come from ``TRANSECON_OUTPUT_DIR``.

Exit status: 0 ok, 2 parse error, 3 validation error, 4 numerical/domain
error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import fitting, forecast, series, transition, trend
from .errors import ConfigurationError, DomainError, ParseError, ValidationError

log = logging.getLogger("transecon")

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4, 5
OUTPUT_ENV = "TRANSECON_OUTPUT_DIR"
COMMANDS = ("fit", "forecast", "trend", "simulate", "report")


@dataclass
class RunConfig:
    command: str
    input: Path | None = None
    leader_input: Path | None = None
    params: Path | None = None
    output_dir: Path = Path(".")
    country_code: str | None = None
    start_year: int | None = None
    # fit overrides
    alpha_s_range: tuple[float, float] | None = None
    alpha_c_range: tuple[float, float] | None = None
    alpha_range: tuple[float, float] | None = None
    steps: tuple[float, float, float] | None = None
    refinement_passes: int | None = None
    sweep_start_year: bool = False
    ms0: float | None = None
    mc0: float | None = None
    # calibration overrides
    a: float | None = None
    b: float | None = None
    # forecast
    x0: float | None = None
    leader_x0: float | None = None
    horizon: int = 50
    threshold: float = 0.99
    # trend
    width: int | None = 10
    step: int = 1
    shift: float = 0.0
    x_scale: float = 1.0
    adult_correction: bool = False
    # simulate
    alpha_s: float | None = None
    alpha_c: float | None = None
    agents: int = 100_000
    years: int = 20
    seed: int = 0
    workers: int = 1
    written: list[Path] = field(default_factory=list)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        needs_input = {"fit", "trend", "report"}
        if self.command in needs_input and self.input is None:
            raise ValidationError(f"{self.command} needs --input")
        for p in (self.input, self.leader_input, self.params):
            if p is not None and not Path(p).is_file():
                raise FileNotFoundError(f"input file not found: {p}")
        if self.command == "forecast" and self.x0 is None and self.input is None and self.params is None:
            raise ValidationError("forecast needs --x0 or --input")
        if self.command == "simulate" and (self.alpha_s is None or self.alpha_c is None):
            raise ValidationError("simulate needs --alpha-s and --alpha-c")

    def calibration(self) -> trend.TrendCalibration:
        base = trend.DEFAULT_CALIBRATION
        return trend.TrendCalibration(
            a=base.a if self.a is None else self.a,
            b=base.b if self.b is None else self.b,
        )

    def fit_config(self) -> fitting.FitConfig:
        overrides = {
            k: getattr(self, k)
            for k in ("alpha_s_range", "alpha_c_range", "alpha_range", "steps", "refinement_passes", "ms0", "mc0")
            if getattr(self, k) is not None
        }
        for k in ("alpha_s_range", "alpha_c_range", "alpha_range", "steps"):
            if k in overrides:
                overrides[k] = tuple(float(v) for v in overrides[k])
        return fitting.FitConfig(start_year=self.start_year, sweep_start_year=self.sweep_start_year, **overrides)


def _add(parser: argparse.ArgumentParser, name: str, **kw) -> None:
    flag = name.replace("_", "-")
    names = [f"--{flag}"] + ([f"--{name}"] if flag != name else [])
    parser.add_argument(*names, dest=name, default=argparse.SUPPRESS, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="transecon", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    _add(parser, "config", type=Path, help="JSON file with defaults for any flag")
    _add(parser, "input", type=Path, help="country CSV (year,gdp_pc[,pop_total,pop_15plus])")
    _add(parser, "leader_input", type=Path, help="leader country CSV for forecast/report")
    _add(parser, "params", type=Path, help="fit JSON whose params drive forecast")
    _add(parser, "output_dir", type=Path)
    _add(parser, "country_code")
    _add(parser, "start_year", type=int)
    _add(parser, "alpha_s_range", type=float, nargs=2, metavar=("LO", "HI"))
    _add(parser, "alpha_c_range", type=float, nargs=2, metavar=("LO", "HI"))
    _add(parser, "alpha_range", type=float, nargs=2, metavar=("LO", "HI"))
    _add(parser, "steps", type=float, nargs=3, metavar=("DS", "DC", "DA"))
    _add(parser, "refinement_passes", type=int)
    _add(parser, "sweep_start_year", action="store_true")
    _add(parser, "ms0", type=float)
    _add(parser, "mc0", type=float)
    _add(parser, "a", type=float, help="potential-growth multiplier")
    _add(parser, "b", type=float, help="potential-growth exponent")
    _add(parser, "x0", type=float, help="follower starting level")
    _add(parser, "leader_x0", type=float, help="leader starting level")
    _add(parser, "horizon", type=int)
    _add(parser, "threshold", type=float, help="capitalist share that ends the transition")
    _add(parser, "width", type=int, help="smoothing window; 0 disables smoothing")
    _add(parser, "step", type=int)
    _add(parser, "shift", type=float)
    _add(parser, "x_scale", type=float)
    _add(parser, "adult_correction", action="store_true")
    _add(parser, "alpha_s", type=float)
    _add(parser, "alpha_c", type=float)
    _add(parser, "agents", type=int)
    _add(parser, "years", type=int)
    _add(parser, "seed", type=int)
    _add(parser, "workers", type=int)
    _add(parser, "verbose", action="store_true")
    return parser


_PATH_KEYS = {"input", "leader_input", "params", "output_dir"}


def resolve_config(args: argparse.Namespace, env: dict[str, str] | None = None) -> RunConfig:
    env = os.environ if env is None else env
    values: dict[str, Any] = {}
    if getattr(args, "config", None) is not None:
        try:
            values.update(json.loads(Path(args.config).read_text()))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.config}: {exc.msg}", exc.lineno) from None
    if OUTPUT_ENV in env:
        values["output_dir"] = env[OUTPUT_ENV]
    values.update({k: v for k, v in vars(args).items() if k not in ("config", "verbose")})
    known = set(RunConfig.__dataclass_fields__) - {"written"}
    unknown = set(values) - known
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for k in _PATH_KEYS & set(values):
        if values[k] is not None:
            values[k] = Path(values[k])
    if values.get("width") == 0:
        values["width"] = None
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def _write_json(cfg: RunConfig, name: str, record: dict) -> Path:
    path = cfg.output_dir / name
    path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
    cfg.written.append(path)
    return path


def _out(cfg: RunConfig, name: str) -> Path:
    path = cfg.output_dir / name
    cfg.written.append(path)
    return path


def _load_country(cfg: RunConfig) -> series.CountrySeries:
    s = series.read_series(cfg.input, cfg.country_code)
    if cfg.adult_correction:
        s = series.correct_for_adult_share(s)
    return s


def _observed(cfg: RunConfig) -> series.NormalizedSeries:
    s = _load_country(cfg)
    start = int(s.years[0]) if cfg.start_year is None else cfg.start_year
    return fitting.rebase(series.normalize_to_base_year(s, int(s.years[0])), start)


def _run_fit(cfg: RunConfig) -> dict:
    observed = _observed(cfg)
    result = fitting.fit_grid(observed, cfg.fit_config())
    _write_json(cfg, "fit.json", result.to_dict())
    fitting.write_residuals(result, observed, _out(cfg, "residuals.csv"))
    t = np.arange(0.0, float(observed.years[-1] - result.params.start_year) + 1.0)
    transition.write_model_curve(result.params, t, _out(cfg, "model_curve.csv"))
    return fitting.fit_report(result, observed)


def _follower_start(cfg: RunConfig) -> tuple[float, int]:
    if cfg.x0 is not None:
        return cfg.x0, cfg.start_year or 0
    s = _load_country(cfg)
    return float(s.gdp_pc[-1]), int(s.years[-1])


def _run_forecast(cfg: RunConfig) -> dict:
    cal = cfg.calibration()
    if cfg.params is not None:
        record = json.loads(cfg.params.read_text())
        params = transition.TransitionParams.from_dict(record.get("params", record))
        if cfg.x0 is None:
            raise ValidationError("forecast from --params needs --x0 (start-year level)")
        follower = forecast.forecast_with_transition(params, cfg.x0, cal, cfg.threshold, cfg.horizon)
    else:
        x0, year0 = _follower_start(cfg)
        follower = forecast.forecast_best_case(x0, cal, cfg.horizon, start_year=year0)
    forecast.write_path(follower, _out(cfg, "follower_path.csv"))
    summary = json.loads(forecast.summary_json(follower))
    leader_x0 = cfg.leader_x0
    if leader_x0 is None and cfg.leader_input is not None:
        leader_x0 = series.read_series(cfg.leader_input).value_at(follower.start_year)
    if leader_x0 is not None:
        leader = forecast.forecast_best_case(leader_x0, cal, follower.horizon, follower.start_year)
        lags = forecast.gap_series(follower, leader)
        forecast.write_path(leader, _out(cfg, "leader_path.csv"))
        forecast.write_lags(lags, _out(cfg, "lags.csv"))
        summary["lags"] = forecast.lag_summary(lags)
    _write_json(cfg, "forecast.json", summary)
    return summary


def _run_trend(cfg: RunConfig) -> dict:
    s = _load_country(cfg)
    fitted = trend.calibrate_trend(
        s.gdp_pc[:-1], s.growth_rates(), width=cfg.width, step=cfg.step, shift=cfg.shift, x_scale=cfg.x_scale
    )
    trend.write_calibration(fitted.calibration, _out(cfg, "calibration.json"))
    lines = ["level,growth"] + [f"{x!r},{y!r}" for x, y in zip(fitted.levels.tolist(), fitted.rates.tolist())]
    _out(cfg, "smoothed.csv").write_text("\n".join(lines) + "\n")
    return {"a": fitted.calibration.a, "b": fitted.calibration.b, "points": len(fitted.levels)}


def _run_simulate(cfg: RunConfig) -> dict:
    rates = transition.MicroRates.from_alphas(cfg.alpha_s, cfg.alpha_c)
    result = transition.mc_simulate(rates, cfg.agents, cfg.years, cfg.seed, cfg.workers)
    transition.write_mc_shares(result, _out(cfg, "mc_shares.csv"))
    return {"p": rates.p, "q": rates.q, "agents": cfg.agents, "years": cfg.years}


def _run_report(cfg: RunConfig) -> dict:
    observed = _observed(cfg)
    result = fitting.fit_grid(observed, cfg.fit_config())
    report = fitting.fit_report(result, observed)
    s = _load_country(cfg)
    cal = cfg.calibration()
    last_year, last_level = int(s.years[-1]), float(s.gdp_pc[-1])
    follower = forecast.forecast_best_case(last_level, cal, cfg.horizon, start_year=last_year)
    report["potential_growth"] = {
        "start": trend.potential_growth(cal, float(s.gdp_pc[observed.years[0] - s.years[0]])),
        "current": trend.potential_growth(cal, last_level),
    }
    report["forecast"] = json.loads(forecast.summary_json(follower))
    leader_x0 = cfg.leader_x0
    if leader_x0 is None and cfg.leader_input is not None:
        leader_x0 = series.read_series(cfg.leader_input).value_at(last_year)
    if leader_x0 is not None:
        leader = forecast.forecast_best_case(leader_x0, cal, cfg.horizon, start_year=last_year)
        report["forecast"]["lags"] = forecast.lag_summary(forecast.gap_series(follower, leader))
    report["calibration"] = {"a": cal.a, "b": cal.b}
    _write_json(cfg, "report.json", report)
    return report


_RUNNERS = {
    "fit": _run_fit,
    "forecast": _run_forecast,
    "trend": _run_trend,
    "simulate": _run_simulate,
    "report": _run_report,
}


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        cfg.validate()
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        _RUNNERS[cfg.command](cfg)
    except ParseError as exc:
        log.error("parse error: %s", exc)
        return EXIT_PARSE
    except (ValidationError, ConfigurationError) as exc:
        log.error("validation error: %s", exc)
        return EXIT_VALIDATION
    except (DomainError, FloatingPointError, OverflowError) as exc:
        log.error("numerical error: %s", exc)
        return EXIT_DOMAIN
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    for path in cfg.written:
        log.info("wrote %s", path)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        cfg = resolve_config(args)
    except ParseError as exc:
        log.error("parse error: %s", exc)
        return EXIT_PARSE
    except (ValidationError, ConfigurationError, TypeError) as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_VALIDATION
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
