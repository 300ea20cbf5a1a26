"""Forward-chain simulation: physical value -> current -> code -> readout.

Runs the measurement direction of the chain (sensor, then converter, then
quantization), reconstructs through the lookup table, and reports the
round-trip error.  This is where quantization loss becomes visible; the
scaling math itself is exact up to doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import SpecError
from .lut import build_lut, lookup, window_codes
from .model import DeltaConvention, DmsSpec, adc_bounds, delta, undelta
from .scaling import ScalingFunction

QUANTIZERS = ("nearest", "floor")


@dataclass(frozen=True)
class ChainSample:
    x: float
    current: float
    exact_code: float
    code: int
    clamped: bool
    value: float | None = None
    error: float | None = None


@dataclass(frozen=True)
class ChainReport:
    samples: tuple[ChainSample, ...]
    max_abs_error: float
    rms_error: float
    worst: ChainSample


def _quantize(exact: float, quantizer: str) -> int:
    if quantizer == "nearest":
        return math.floor(exact + 0.5)
    if quantizer == "floor":
        return math.floor(exact)
    raise SpecError(f"unknown quantizer {quantizer!r} (choose nearest or floor)")


def forward(x: float, spec: DmsSpec, quantizer: str = "nearest") -> ChainSample:
    """One sample through sensor and converter, quantized, not reconstructed."""
    bounds = adc_bounds(spec.adc)
    dx = delta(x, spec.measuring_range, spec.convention)
    di = spec.sensor(dx)
    current = undelta(di, spec.adc.current, spec.convention)
    dn = spec.converter(di)
    if spec.convention is DeltaConvention.FROM_MIN:
        exact = bounds.code_min + dn
    else:
        exact = bounds.code_max - dn
    code = _quantize(exact, quantizer)
    first, last = window_codes(bounds)
    clamped = code < first or code > last
    code = min(max(code, first), last)
    return ChainSample(x, current, exact, code, clamped)


def roundtrip(
    spec: DmsSpec,
    sf: ScalingFunction,
    sweep: int,
    quantizer: str = "nearest",
) -> ChainReport:
    """Uniform sweep of the measuring range, reconstructed via the table."""
    if sweep < 2:
        raise SpecError(f"sweep needs at least 2 samples, got {sweep}")
    table = build_lut(sf, adc_bounds(spec.adc))
    xs = np.linspace(spec.measuring_range.min, spec.measuring_range.max, sweep)

    samples = []
    worst = None
    for x in map(float, xs):
        s = forward(x, spec, quantizer)
        value = lookup(table, s.code)
        s = replace(s, value=value, error=value - x)
        samples.append(s)
        if worst is None or abs(s.error) > abs(worst.error):
            worst = s

    max_abs = abs(worst.error)
    rms = math.sqrt(math.fsum(s.error * s.error for s in samples) / len(samples))
    return ChainReport(tuple(samples), max_abs, rms, worst)


def render_report(report: ChainReport, unit: str = "") -> str:
    suffix = f" {unit}" if unit else ""
    w = report.worst
    return "\n".join(
        [
            f"samples: {len(report.samples)}",
            f"max |error|: {report.max_abs_error:.10g}{suffix}",
            f"rms error: {report.rms_error:.10g}{suffix}",
            f"worst sample: x = {w.x:.10g} -> code {w.code} -> "
            f"{w.value:.10g} (error {w.error:.10g})",
        ]
    )


def report_csv(report: ChainReport) -> str:
    lines = ["x,i,exact_code,code,x_star,error"]
    for s in report.samples:
        lines.append(
            f"{s.x:.10g},{s.current:.10g},{s.exact_code:.10g},"
            f"{s.code},{s.value:.10g},{s.error:.10g}"
        )
    return "\n".join(lines) + "\n"
