"""Measurement-chain description: ranges, delta conventions, derived constants.

A chain is sensor -> converter -> display scaling.  The sensor maps a
physical quantity onto a current loop, the converter quantizes the loop
current to integer codes, and the synthesized scaling function undoes the
two.  Everything here is phrased in deltas: a variable's offset from one
end of its range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .errors import OutOfRangeError, SpecError
from .expr import (
    Expr,
    classify_names,
    constant_stem,
    evaluate,
    parse,
    symbol_names,
)

ZERO_TOL = 1e-12
ENDPOINT_RTOL = 1e-9


class DeltaConvention(Enum):
    """How a delta is anchored: distance from range max, or from range min."""

    FROM_MAX = "from-max"
    FROM_MIN = "from-min"

    @classmethod
    def coerce(cls, value: "DeltaConvention | str") -> "DeltaConvention":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            options = ", ".join(c.value for c in cls)
            raise SpecError(
                f"unknown delta convention {value!r} (choose one of: {options})"
            ) from None


@dataclass(frozen=True)
class Range:
    min: float
    max: float

    def __post_init__(self):
        if not (self.min < self.max):
            raise SpecError(f"empty range [{self.min:g}, {self.max:g}]")

    def contains(self, value: float) -> bool:
        return self.min <= value <= self.max


@dataclass(frozen=True)
class AdcSpec:
    """Converter resolution in bits plus the current range it digitizes, mA."""

    bits: int
    current: Range

    def __post_init__(self):
        if not (1 <= self.bits <= 32):
            raise SpecError(f"resolution must be 1..32 bits, got {self.bits}")
        if self.current.min < 0:
            raise SpecError("current range must be nonnegative")


class AdcBounds(NamedTuple):
    code_min: float
    code_max: float
    code_span: float


def delta(value: float, rng: Range, convention: DeltaConvention) -> float:
    if not rng.contains(value):
        raise OutOfRangeError(
            f"value {value!r} outside [{rng.min:g}, {rng.max:g}]"
        )
    if convention is DeltaConvention.FROM_MAX:
        return rng.max - value
    return value - rng.min


def delta_max(rng: Range) -> float:
    return rng.max - rng.min


def undelta(d: float, rng: Range, convention: DeltaConvention) -> float:
    """Inverse of delta: recover the absolute value from its offset."""
    if convention is DeltaConvention.FROM_MAX:
        return rng.max - d
    return rng.min + d


def adc_bounds(adc: AdcSpec) -> AdcBounds:
    """Code-space constants implied by the converter.

    code_min is kept as an exact real, never pre-rounded; the multiply
    happens before the divide so spans like 4/20 of a 10-bit range come
    out on the short decimal (1023*4/20 = 204.6 exactly in binary64,
    where 1023*(4/20) does not).
    """
    code_max = float(2**adc.bits - 1)
    code_min = (code_max * adc.current.min) / adc.current.max
    return AdcBounds(code_min, code_max, code_max - code_min)


@dataclass(frozen=True)
class Characteristic:
    """One block's static input->output map, written in its delta variable."""

    variable: str
    body: Expr

    def __call__(self, value: float) -> float:
        return evaluate(self.body, {self.variable: value})


@dataclass(frozen=True)
class DmsSpec:
    measuring_range: Range
    unit: str
    sensor: Characteristic
    adc: AdcSpec
    converter: Characteristic
    system: Characteristic
    code_symbol: str
    convention: DeltaConvention


def _classify_source(source: str, role: str) -> tuple[str, frozenset[str]]:
    variables, constants = classify_names(symbol_names(source))
    if len(variables) != 1:
        if not variables:
            raise SpecError(f"{role} characteristic has no variable: {source!r}")
        raise SpecError(
            f"{role} characteristic must use one variable, found "
            + ", ".join(sorted(variables))
        )
    return next(iter(variables)), constants


def build_spec(
    *,
    measuring_range: Range | tuple[float, float],
    unit: str,
    sensor: str,
    bits: int,
    current_range: Range | tuple[float, float],
    converter: str,
    system: str,
    convention: DeltaConvention | str = DeltaConvention.FROM_MIN,
) -> DmsSpec:
    """Assemble a chain description from DSL characteristic texts.

    Span constants are bound by name: for a sensor written in dQ against a
    converter written in di, dQmax is the measuring span, dimax the current
    span, dQmaxstar the display span, and any other <stem>max in the
    converter names the code span (and fixes the code symbol, e.g. dNmax).
    """
    if not isinstance(measuring_range, Range):
        measuring_range = Range(*measuring_range)
    if not isinstance(current_range, Range):
        current_range = Range(*current_range)
    conv = DeltaConvention.coerce(convention)
    adc = AdcSpec(bits, current_range)
    bounds = adc_bounds(adc)

    dx_max = delta_max(measuring_range)
    di_max = delta_max(current_range)

    hvar, h_consts = _classify_source(converter, "converter")
    code_symbol = None
    h_env = {}
    for name in h_consts:
        stem, suffix = constant_stem(name)  # type: ignore[misc]
        if suffix == "maxstar":
            raise SpecError(f"converter characteristic cannot use {name}")
        if stem == hvar:
            h_env[name] = di_max
        elif code_symbol is None:
            code_symbol = stem
            h_env[name] = bounds.code_span
        else:
            raise SpecError(
                f"converter characteristic names two code spans: "
                f"{code_symbol}max, {name}"
            )
    if code_symbol is None:
        code_symbol = "dN"

    fvar, f_consts = _classify_source(sensor, "sensor")
    if fvar == hvar:
        raise SpecError(
            f"sensor and converter must use distinct variables, both use {fvar}"
        )
    f_env = {}
    for name in f_consts:
        stem, suffix = constant_stem(name)  # type: ignore[misc]
        if suffix == "max" and stem == fvar:
            f_env[name] = dx_max
        elif suffix == "max" and stem == hvar:
            f_env[name] = di_max
        else:
            raise SpecError(f"sensor characteristic uses unknown constant {name}")

    gvar, g_consts = _classify_source(system, "system")
    if gvar != fvar:
        raise SpecError(
            f"system characteristic must share the sensor variable {fvar}, "
            f"found {gvar}"
        )
    g_env = {}
    for name in g_consts:
        stem, suffix = constant_stem(name)  # type: ignore[misc]
        if stem != fvar:
            raise SpecError(f"system characteristic uses unknown constant {name}")
        # display span equals the measuring span: the chain reports the
        # quantity it measures
        g_env[name] = dx_max

    if code_symbol in (fvar, hvar):
        raise SpecError(f"code symbol {code_symbol} collides with a variable")

    return DmsSpec(
        measuring_range=measuring_range,
        unit=unit,
        sensor=Characteristic(fvar, parse(sensor, f_env)),
        adc=adc,
        converter=Characteristic(hvar, parse(converter, h_env)),
        system=Characteristic(gvar, parse(system, g_env)),
        code_symbol=code_symbol,
        convention=conv,
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def __str__(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"{status}  {c.name} (residual {c.residual:.3g})"
            if c.detail:
                line += f" - {c.detail}"
            lines.append(line)
        return "\n".join(lines)


def _relative(value: float, expected: float) -> float:
    return abs(value - expected) / abs(expected)


def validate(spec: DmsSpec) -> ValidationReport:
    """Check the boundary and monotonicity properties a usable chain needs.

    Failures are reported, not raised; only a structurally unusable spec
    (already rejected at construction) aborts.
    """
    from .inversion import check_monotone

    dx_max = delta_max(spec.measuring_range)
    di_max = delta_max(spec.adc.current)
    dn_max = adc_bounds(spec.adc).code_span

    checks: list[CheckResult] = []

    def attempt(name: str, fn) -> None:
        try:
            checks.append(fn(name))
        except Exception as exc:  # report, never abort mid-validation
            checks.append(CheckResult(name, False, math.inf, str(exc)))

    def zero_check(char: Characteristic, name: str):
        def run(n):
            r = abs(char(0.0))
            return CheckResult(n, r <= ZERO_TOL, r)

        attempt(name, run)

    def endpoint_check(char: Characteristic, at: float, expected: float, name: str):
        def run(n):
            r = _relative(char(at), expected)
            return CheckResult(n, r <= ENDPOINT_RTOL, r)

        attempt(name, run)

    def monotone_check(char: Characteristic, span: float, name: str):
        def run(n):
            verdict = check_monotone(char.body, (0.0, span))
            if verdict.direction == "increasing":
                return CheckResult(n, True, 0.0)
            detail = verdict.direction
            if verdict.witness is not None:
                a, b = verdict.witness
                detail += f" (witness: {a:g}, {b:g})"
            return CheckResult(n, False, math.inf, detail)

        attempt(name, run)

    zero_check(spec.sensor, "sensor zero")
    zero_check(spec.converter, "converter zero")
    zero_check(spec.system, "system zero")
    endpoint_check(spec.sensor, dx_max, di_max, "sensor endpoint")
    endpoint_check(spec.converter, di_max, dn_max, "converter endpoint")
    endpoint_check(spec.system, dx_max, dx_max, "system endpoint")
    monotone_check(spec.sensor, dx_max, "sensor monotone increasing")
    monotone_check(spec.converter, di_max, "converter monotone increasing")

    return ValidationReport(tuple(checks))
