"""Command-line front end: config file in, derived artifacts out.

Subcommands: derive (print the scaling expression and code-space
constants), lut (write the table as CSV or JSON), codegen (write the C
source), simulate (sweep the chain and report quantization error).  Exit
codes: 0 success, 2 unusable config, 3 failed validation or synthesis,
4 output I/O failure.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import dataclass
from pathlib import Path

from .codegen import CodegenOptions, emit
from .errors import (
    AdcScaleError,
    CodegenError,
    ConfigError,
    ConvergenceError,
    DomainError,
    ExprError,
    NonMonotoneError,
    OutOfRangeError,
    SpecError,
    SynthesisError,
    WindowError,
)
from .lut import build_lut, export, render_csv, render_json
from .model import DmsSpec, adc_bounds, build_spec
from .scaling import synthesize
from .simulate import QUANTIZERS, render_report, report_csv, roundtrip

_MISSING = object()


@dataclass(frozen=True)
class CliConfig:
    spec: DmsSpec
    quantizer: str
    sleep_seconds: float
    init_mode: str


def _get(cp: configparser.ConfigParser, section: str, key: str, default=_MISSING):
    if not cp.has_section(section):
        if default is not _MISSING:
            return default
        raise ConfigError(f"missing section [{section}]")
    if not cp.has_option(section, key):
        if default is not _MISSING:
            return default
        raise ConfigError(f"missing key {key!r} in section [{section}]")
    return cp.get(section, key)


def _number(cp, section, key, cast, default=_MISSING):
    raw = _get(cp, section, key, default)
    if raw is default and default is not _MISSING:
        return default
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise ConfigError(
            f"key {key!r} in section [{section}] is not a number: {raw!r}"
        ) from None


def load_config(path) -> CliConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        read = cp.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    if not read:
        raise ConfigError(f"cannot read config file {path}")

    spec = build_spec(
        measuring_range=(
            _number(cp, "sensor", "range_min", float),
            _number(cp, "sensor", "range_max", float),
        ),
        unit=_get(cp, "sensor", "unit"),
        sensor=_get(cp, "sensor", "characteristic"),
        bits=_number(cp, "adc", "bits", int),
        current_range=(
            _number(cp, "adc", "current_min", float),
            _number(cp, "adc", "current_max", float),
        ),
        converter=_get(cp, "adc", "characteristic"),
        system=_get(cp, "system", "characteristic"),
        convention=_get(cp, "options", "convention", "from-min"),
    )
    quantizer = _get(cp, "options", "quantizer", "nearest")
    if quantizer not in QUANTIZERS:
        raise ConfigError(
            f"quantizer must be one of {', '.join(QUANTIZERS)}, got {quantizer!r}"
        )
    return CliConfig(
        spec=spec,
        quantizer=quantizer,
        sleep_seconds=_number(cp, "options", "sleep_seconds", float, 60.0),
        init_mode=_get(cp, "options", "init_mode", "runtime-formula"),
    )


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _cmd_derive(cfg: CliConfig, args) -> None:
    sf = synthesize(cfg.spec)
    bounds = adc_bounds(cfg.spec.adc)
    g = lambda v: format(v, ".12g")
    text = (
        f"{sf.describe()}\n"
        f"Nmin={g(bounds.code_min)} Nmax={g(bounds.code_max)} "
        f"dNmax={g(bounds.code_span)}\n"
    )
    sys.stdout.write(text)
    if args.out:
        _write(args.out, text)


def _cmd_lut(cfg: CliConfig, args) -> None:
    sf = synthesize(cfg.spec)
    table = build_lut(sf, adc_bounds(cfg.spec.adc))
    if args.out:
        export(table, args.format, args.out)
    else:
        render = render_csv if args.format == "csv" else render_json
        sys.stdout.write(render(table))


def _cmd_codegen(cfg: CliConfig, args) -> None:
    sf = synthesize(cfg.spec)
    table = build_lut(sf, adc_bounds(cfg.spec.adc))
    options = CodegenOptions(
        init_mode=cfg.init_mode, sleep_seconds=cfg.sleep_seconds
    )
    source = emit(cfg.spec, sf, table, options)
    if args.out:
        _write(args.out, source)
    else:
        sys.stdout.write(source)


def _cmd_simulate(cfg: CliConfig, args) -> None:
    sf = synthesize(cfg.spec)
    quantizer = args.quantizer or cfg.quantizer
    report = roundtrip(cfg.spec, sf, args.samples, quantizer)
    print(render_report(report, cfg.spec.unit))
    if args.out:
        _write(args.out, report_csv(report))


_COMMANDS = {
    "derive": _cmd_derive,
    "lut": _cmd_lut,
    "codegen": _cmd_codegen,
    "simulate": _cmd_simulate,
}

_CONFIG_ERRORS = (ConfigError, ExprError, SpecError)
_VALIDATION_ERRORS = (
    SynthesisError,
    NonMonotoneError,
    WindowError,
    CodegenError,
    OutOfRangeError,
    ConvergenceError,
    DomainError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adcscale",
        description="Derive code-to-physical scaling artifacts from a "
        "measurement-chain config.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "derive": "print the scaling expression and code-space constants",
        "lut": "write the lookup table",
        "codegen": "write the C conversion module",
        "simulate": "sweep the chain and report quantization error",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="chain config file")
        p.add_argument("--out", help="output file path")
        if name == "lut":
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "simulate":
            p.add_argument("--quantizer", choices=QUANTIZERS, default=None)
            p.add_argument("--samples", type=int, default=1000)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        _COMMANDS[args.command](cfg, args)
    except _CONFIG_ERRORS as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except _VALIDATION_ERRORS as exc:
        print(f"error: validation: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 4
    except AdcScaleError as exc:  # anything uncategorized is a config fault
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())
