"""Synthesis of the code->physical scaling function.

The chain applies sensor f then converter h; the scaling function q undoes
both and applies the display map g: q = g o f_inv o h_inv, all in delta
space.  When every block normalizes to a positive monomial the composition
folds to a single coefficient and exponent; otherwise q is a numeric
composite with the same contract.  The absolute form anchors q back to
real code values: under the from-min convention Q*(N) = Q*_min + q(N - N_min).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import OutOfRangeError, SpecError, SynthesisError
from .expr import (
    Expr,
    Num,
    Sym,
    add,
    as_monomial,
    evaluate,
    mul,
    pow_,
    rational_pow,
    sub,
    substitute,
    to_source,
)
from .inversion import InverseResult, invert
from .model import (
    AdcBounds,
    DeltaConvention,
    DmsSpec,
    adc_bounds,
    delta_max,
    validate,
)

Monomial = tuple[float, Fraction]

ZERO_TOL = 1e-12
ENDPOINT_RTOL = 1e-9

_DISPLAY_FMT = ".12g"


def _compose_monomials(outer: Monomial, inner: Monomial) -> Monomial | None:
    """outer(inner(d)) for a_o*y^k_o applied to a_i*d^k_i."""
    ao, ko = outer
    ai, ki = inner
    scaled = rational_pow(ai, ko)
    if scaled is None:
        return None
    return (ao * scaled, ki * ko)


@dataclass(frozen=True)
class AbsoluteForm:
    """Code value -> physical value over the real code window."""

    expr: Expr | None
    variable: str
    window: tuple[float, float]
    proc: Callable[[float], float]

    def __call__(self, code: float) -> float:
        lo, hi = self.window
        if not (lo <= code <= hi):
            raise OutOfRangeError(
                f"code {code!r} outside window [{lo:g}, {hi:g}]"
            )
        return self.proc(code)


@dataclass(frozen=True)
class ScalingFunction:
    unit: str
    variable: str
    convention: DeltaConvention
    window: tuple[float, float]
    delta_span: float
    display_span: float
    display_min: float
    display_max: float
    closed_form: Expr | None
    monomial: Monomial | None
    absolute: AbsoluteForm
    _numeric_delta: Callable[[float], float]

    @property
    def is_closed_form(self) -> bool:
        return self.closed_form is not None

    def _clip(self, dn: float) -> float:
        pad = ENDPOINT_RTOL * max(1.0, self.delta_span)
        if dn < -pad or dn > self.delta_span + pad:
            raise OutOfRangeError(
                f"delta {dn!r} outside [0, {self.delta_span:g}]"
            )
        return min(max(dn, 0.0), self.delta_span)

    def delta(self, dn: float) -> float:
        """q: code delta -> display delta."""
        dn = self._clip(dn)
        if self.closed_form is not None:
            return evaluate(self.closed_form, {self.variable: dn})
        return self._numeric_delta(dn)

    def delta_numeric(self, dn: float) -> float:
        """The inversion-chain evaluation, bypassing any closed form."""
        return self._numeric_delta(self._clip(dn))

    def describe(self) -> str:
        if self.closed_form is None:
            return f"q({self.variable}) = numeric composite (bisection-backed)"
        body = to_source(
            self.closed_form, fmt=lambda v: format(v, _DISPLAY_FMT)
        ).replace(" ", "")
        return f"q({self.variable}) = {body}"


def _absolute_symbol(code_symbol: str) -> str:
    if code_symbol.startswith("d") and len(code_symbol) > 1:
        return code_symbol[1:]
    return code_symbol + "_abs"


def synthesize(spec: DmsSpec) -> ScalingFunction:
    """Build q and its absolute form for a validated chain description."""
    report = validate(spec)
    if not report.ok:
        names = "; ".join(
            c.name + (f": {c.detail}" if c.detail else "")
            for c in report.failures()
        )
        raise SynthesisError(f"spec failed validation: {names}")

    bounds = adc_bounds(spec.adc)
    dx_max = delta_max(spec.measuring_range)
    di_max = delta_max(spec.adc.current)
    dn_max = bounds.code_span
    display_span = dx_max
    display_min = spec.measuring_range.min
    display_max = spec.measuring_range.max

    f_inv = invert(spec.sensor.body, spec.sensor.variable, (0.0, dx_max))
    h_inv = invert(spec.converter.body, spec.converter.variable, (0.0, di_max))

    # h_inv hands current deltas to f_inv; their ranges must agree
    gap = abs(h_inv.domain[1] - f_inv.codomain[1]) / max(1.0, di_max)
    if gap > 1e-6:
        raise SynthesisError(
            "composition domain mismatch: converter input span "
            f"{h_inv.domain[1]!r} vs sensor output span {f_inv.codomain[1]!r}"
        )

    gvar = spec.system.variable
    closed_form = None
    monomial = None
    if f_inv.expr is not None and h_inv.expr is not None:
        mg = as_monomial(spec.system.body, gvar)
        mf = as_monomial(f_inv.expr, spec.sensor.variable)
        mh = as_monomial(h_inv.expr, spec.converter.variable)
        if mg is not None and mf is not None and mh is not None and mg[0] > 0:
            inner = _compose_monomials(mf, mh)
            whole = _compose_monomials(mg, inner) if inner else None
            if whole is not None:
                monomial = whole
                closed_form = mul(
                    Num(whole[0]), pow_(Sym(spec.code_symbol), whole[1])
                )

    def numeric_delta(dn: float) -> float:
        return evaluate(spec.system.body, {gvar: f_inv(h_inv(dn))})

    avar = _absolute_symbol(spec.code_symbol)
    window = (bounds.code_min, bounds.code_max)
    if spec.convention is DeltaConvention.FROM_MIN:
        code_to_delta = sub(Sym(avar), Num(bounds.code_min))
        anchor, sign = display_min, 1.0
    else:
        code_to_delta = sub(Num(bounds.code_max), Sym(avar))
        anchor, sign = display_max, -1.0

    abs_expr = None
    if closed_form is not None:
        shifted = substitute(closed_form, {spec.code_symbol: code_to_delta})
        if spec.convention is DeltaConvention.FROM_MIN:
            abs_expr = add(Num(anchor), shifted)
        else:
            abs_expr = sub(Num(anchor), shifted)

    if abs_expr is not None:
        bound_expr = abs_expr

        def abs_proc(code: float) -> float:
            return evaluate(bound_expr, {avar: code})

    else:
        if spec.convention is DeltaConvention.FROM_MIN:

            def abs_proc(code: float) -> float:
                dn = min(max(code - bounds.code_min, 0.0), dn_max)
                return anchor + numeric_delta(dn)

        else:

            def abs_proc(code: float) -> float:
                dn = min(max(bounds.code_max - code, 0.0), dn_max)
                return anchor - numeric_delta(dn)

    sf = ScalingFunction(
        unit=spec.unit,
        variable=spec.code_symbol,
        convention=spec.convention,
        window=window,
        delta_span=dn_max,
        display_span=display_span,
        display_min=display_min,
        display_max=display_max,
        closed_form=closed_form,
        monomial=monomial,
        absolute=AbsoluteForm(abs_expr, avar, window, abs_proc),
        _numeric_delta=numeric_delta,
    )

    residual = abs(sf.delta(0.0))
    if residual > ZERO_TOL:
        raise SynthesisError(f"q(0) = {residual!r}, expected 0")
    top = sf.delta(dn_max)
    if abs(top - display_span) / display_span > ENDPOINT_RTOL:
        raise SynthesisError(
            f"q({dn_max!r}) = {top!r}, expected {display_span!r}"
        )
    edge = sf.absolute(bounds.code_max)
    if abs(edge - display_max) / max(1.0, abs(display_max)) > ENDPOINT_RTOL:
        raise SynthesisError(
            f"Q*({bounds.code_max!r}) = {edge!r}, expected {display_max!r}"
        )
    return sf


def to_absolute(sf: ScalingFunction, spec: DmsSpec) -> AbsoluteForm:
    """The code->physical map of a synthesized scaling function."""
    if spec.convention is not sf.convention:
        raise SpecError(
            "scaling function was synthesized under "
            f"{sf.convention.value}, spec says {spec.convention.value}"
        )
    return sf.absolute


def eval_scaling(sf: ScalingFunction, code: float) -> float:
    """Absolute form applied at one code; full double precision."""
    return sf.absolute(code)
