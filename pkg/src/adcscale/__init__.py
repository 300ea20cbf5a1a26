"""Scaling-function synthesis for digital measurement chains.

Declaratively specified sensor / converter / display characteristics go
in; out come the closed-form code-to-physical scaling function, a dense
lookup table, embedded C source, and quantization-error reports.
"""

from .codegen import CONSTANT_TABLE, RUNTIME_FORMULA, CodegenOptions, emit
from .errors import (
    AdcScaleError,
    CodegenError,
    ConfigError,
    ConvergenceError,
    DomainError,
    ExprError,
    MultipleVariablesError,
    NonMonotoneError,
    OutOfRangeError,
    ParseError,
    SpecError,
    SynthesisError,
    UnboundSymbolError,
    WindowError,
)
from .expr import (
    differentiate,
    evaluate,
    free_symbols,
    parse,
    substitute,
    to_source,
)
from .inversion import (
    InverseResult,
    MonotonicityVerdict,
    check_monotone,
    invert,
    invert_analytic,
    invert_numeric,
)
from .lut import (
    LookupTable,
    build_lut,
    export,
    lookup,
    render_csv,
    render_json,
    window_codes,
)
from .model import (
    AdcBounds,
    AdcSpec,
    Characteristic,
    DeltaConvention,
    DmsSpec,
    Range,
    ValidationReport,
    adc_bounds,
    build_spec,
    delta,
    delta_max,
    undelta,
    validate,
)
from .scaling import AbsoluteForm, ScalingFunction, eval_scaling, synthesize, to_absolute
from .simulate import (
    ChainReport,
    ChainSample,
    forward,
    render_report,
    report_csv,
    roundtrip,
)

__version__ = "0.1.0"

__all__ = [
    "AbsoluteForm",
    "AdcBounds",
    "AdcScaleError",
    "AdcSpec",
    "ChainReport",
    "ChainSample",
    "Characteristic",
    "CodegenError",
    "CodegenOptions",
    "ConfigError",
    "CONSTANT_TABLE",
    "ConvergenceError",
    "DeltaConvention",
    "DmsSpec",
    "DomainError",
    "ExprError",
    "InverseResult",
    "LookupTable",
    "MonotonicityVerdict",
    "MultipleVariablesError",
    "NonMonotoneError",
    "OutOfRangeError",
    "ParseError",
    "Range",
    "RUNTIME_FORMULA",
    "ScalingFunction",
    "SpecError",
    "SynthesisError",
    "UnboundSymbolError",
    "ValidationReport",
    "WindowError",
    "adc_bounds",
    "build_lut",
    "build_spec",
    "check_monotone",
    "delta",
    "delta_max",
    "differentiate",
    "emit",
    "eval_scaling",
    "evaluate",
    "export",
    "forward",
    "free_symbols",
    "invert",
    "invert_analytic",
    "invert_numeric",
    "lookup",
    "parse",
    "render_csv",
    "render_json",
    "render_report",
    "report_csv",
    "roundtrip",
    "substitute",
    "synthesize",
    "to_absolute",
    "to_source",
    "undelta",
    "validate",
    "window_codes",
]
