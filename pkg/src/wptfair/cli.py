"""Command-line entry point.

Examples
--------
Run one scheme and write its batch trace plus a summary::

    wptfair run --out results --selector ssep --allocator crpm --seed 3

Run the eight-scheme comparison at both walk steps::

    wptfair run --out results --matrix

Fit the rectifier models to a two-column CSV of measurements::

    wptfair fit measurements.csv
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .ehmodel import fit_linear, fit_log, harvest_linear, read_samples, rmse
from .errors import ConfigError, WptError
from .simulator import SimConfig, SimTrace, metrics, run

__all__ = [
    "ExperimentMatrix",
    "COMPARED_SCHEMES",
    "COMPARED_WALK_STEPS",
    "parse_config",
    "run_matrix",
    "main",
]

#: (selector, allocator, eh_model) for the eight compared schemes
COMPARED_SCHEMES = (
    ("round_robin", "crpm", "log"),
    ("round_robin", "epd", "log"),
    ("round_robin", "trpm", "log"),
    ("ssep", "crpm", "log"),
    ("ssep", "epd", "log"),
    ("ssep", "trpm", "log"),
    ("ssep", "lcrpm", "linear"),
    ("ssep", "ltrpm", "linear"),
)
COMPARED_WALK_STEPS = (0.03, 0.2)

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _coerce(key: str, text: str, default):
    text = text.strip()
    try:
        if isinstance(default, bool):
            low = text.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError(text)
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
    except ValueError:
        kind = type(default).__name__
        raise ConfigError(key, f"cannot parse {text!r} as {kind}") from None
    return text


def _parse_pairs(lines, source: str) -> dict:
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line, f"{source}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value
    return out


def parse_config(path=None, overrides=None) -> SimConfig:
    """Build a :class:`SimConfig` from a ``key=value`` file and overrides.

    Parameters
    ----------
    path : path-like, optional
        Flat config file, one ``key = value`` per line, ``#`` starts a
        comment.  Missing keys keep their defaults.
    overrides : dict or iterable of ``"key=value"`` strings, optional
        Applied after the file.

    Raises
    ------
    ConfigError
        Unknown key, unparsable value or out-of-range value; ``.key``
        names the field.
    """
    defaults = SimConfig()
    values = {}
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        values.update(_parse_pairs(text.splitlines(), str(path)))
    if overrides:
        if isinstance(overrides, dict):
            values.update({k: str(v) for k, v in overrides.items()})
        else:
            values.update(_parse_pairs(overrides, "--set"))
    known = set(SimConfig.field_names())
    kwargs = {}
    for key, text in values.items():
        if key not in known:
            raise ConfigError(key, "unknown configuration key")
        kwargs[key] = _coerce(key, text, getattr(defaults, key))
    return SimConfig(**kwargs)


@dataclass(frozen=True)
class ExperimentMatrix:
    """Combinations ``(selector, allocator, eh_model, walk_step)`` run under one base config."""

    base: SimConfig
    combinations: tuple

    def __post_init__(self):
        if not self.combinations:
            raise ConfigError("matrix", "needs at least one combination")
        for combo in self.combinations:
            self.config_for(combo)

    def config_for(self, combo) -> SimConfig:
        selector, allocator, eh_model, walk = combo
        return self.base.replace(selector=selector, allocator=allocator,
                                 eh_model=eh_model, walk_step=float(walk))

    @classmethod
    def comparison(cls, base: SimConfig, walk_steps=COMPARED_WALK_STEPS) -> "ExperimentMatrix":
        combos = tuple((s, a, e, w) for w in walk_steps for s, a, e in COMPARED_SCHEMES)
        return cls(base, combos)

    @classmethod
    def single(cls, base: SimConfig) -> "ExperimentMatrix":
        return cls(base, ((base.selector, base.allocator, base.eh_model, base.walk_step),))


def _label(cfg: SimConfig) -> str:
    return f"{cfg.scheme}&walk={cfg.walk_step!r}"


def _file_stem(cfg: SimConfig) -> str:
    return f"{cfg.selector}_{cfg.eh_model}_{cfg.allocator}_walk{cfg.walk_step!r}"


def _ensure_writable(out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    if not out_dir.is_dir():
        raise NotADirectoryError(f"{out_dir} is not a directory")
    # os.access is unreliable for root, so actually try a write
    fd, probe = tempfile.mkstemp(dir=out_dir, prefix=".probe-")
    os.close(fd)
    os.unlink(probe)


def _write_csv(path: Path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(buf.getvalue(), encoding="utf-8", newline="")


def _trace_rows(trace: SimTrace):
    for i, (mn, tot) in enumerate(zip(trace.batch_min, trace.batch_total)):
        yield i, repr(float(mn)), repr(float(tot))


def run_matrix(matrix: ExperimentMatrix, out_dir, progress=None) -> int:
    """Run every combination and write one trace CSV each plus ``summary.csv``.

    All combinations share ``matrix.base.seed``.  The output directory is
    checked for writability before anything runs.  Returns 0.
    """
    out_dir = Path(out_dir)
    _ensure_writable(out_dir)
    m = matrix.base.m
    summary = []
    for combo in matrix.combinations:
        cfg = matrix.config_for(combo)
        if progress is not None:
            progress(f"running {_label(cfg)} seed={cfg.seed}")
        trace = run(cfg)
        _write_csv(out_dir / f"{_file_stem(cfg)}.csv",
                   ("batch_index", "min_received_energy_J", "total_received_energy_J"),
                   _trace_rows(trace))
        s = metrics(trace)
        summary.append([_label(cfg), repr(s.final_min), repr(s.final_total)]
                       + [repr(v) for v in s.final_u])
    header = ["scheme", "final_min_J", "final_total_J"] + [f"U_{k}" for k in range(m)]
    _write_csv(out_dir / "summary.csv", header, summary)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wptfair", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scheme or the full comparison matrix")
    p_run.add_argument("--config", type=Path, help="flat key=value config file")
    p_run.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override one config field (repeatable)")
    p_run.add_argument("--out", type=Path, default=Path("wptfair-out"), help="output directory")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--selector", choices=["ssep", "round_robin"])
    p_run.add_argument("--allocator", choices=["crpm", "trpm", "epd", "lcrpm", "ltrpm"])
    p_run.add_argument("--eh-model", choices=["log", "linear"])
    p_run.add_argument("--walk-step", type=float)
    p_run.add_argument("--iterations", type=int)
    p_run.add_argument("--matrix", action="store_true",
                       help="run the eight compared schemes (at both walk steps "
                            "unless --walk-step is given)")
    p_run.add_argument("-q", "--quiet", action="store_true")

    p_fit = sub.add_parser("fit", help="fit log and linear rectifier models to a CSV")
    p_fit.add_argument("samples", type=Path, help="CSV of input_power_W,output_power_W")
    return parser


def _cmd_run(args) -> int:
    overrides = list(args.overrides)
    for key, val in (("seed", args.seed), ("selector", args.selector),
                     ("allocator", args.allocator), ("eh_model", args.eh_model),
                     ("walk_step", args.walk_step), ("iterations", args.iterations)):
        if val is not None:
            overrides.append(f"{key}={val!r}" if isinstance(val, float) else f"{key}={val}")
    cfg = parse_config(args.config, overrides)
    if args.matrix:
        walks = (cfg.walk_step,) if args.walk_step is not None else COMPARED_WALK_STEPS
        matrix = ExperimentMatrix.comparison(cfg, walks)
    else:
        matrix = ExperimentMatrix.single(cfg)
    progress = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    status = run_matrix(matrix, args.out, progress)
    if not args.quiet:
        print(f"wrote {len(matrix.combinations) + 1} files to {args.out}", file=sys.stderr)
    return status


def _cmd_fit(args) -> int:
    samples = read_samples(args.samples)
    log_p = fit_log(samples)
    lin_p = fit_linear(samples)
    print(f"log:    a={log_p.a!r} b={log_p.b!r} c={log_p.c!r} rmse={rmse(log_p, samples)!r}")
    lin_rmse = rmse(lambda x: harvest_linear(x, lin_p, log_p.c), samples)
    print(f"linear: h={lin_p.h!r} rmse={lin_rmse!r}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_fit(args)
    except ConfigError as exc:
        print(f"wptfair: config error: {exc}", file=sys.stderr)
        return 2
    except (WptError, OSError, ValueError) as exc:
        print(f"wptfair: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
