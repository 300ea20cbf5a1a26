"""Deterministic C89 source emission for the conversion table.

The emitted translation unit mirrors the usual embedded layout: a table
sized to the full code space, an init section (boot-time loop applying the
closed form, or a braced constant initializer), a window-guarded convert
helper, and a read-convert-send scaffold with inert platform calls.  Codes
below the window clamp to the first table entry, a documented deviation
from leaving dead slots undefined.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import CodegenError
from .expr import Add, Div, Expr, HALF, Mul, Num, Pow, Sub, Sym, substitute
from .lut import LookupTable, window_codes
from .model import DmsSpec, adc_bounds
from .scaling import ScalingFunction

RUNTIME_FORMULA = "runtime-formula"
CONSTANT_TABLE = "constant-table"

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")
_RESERVED = frozenset(
    ("i", "code", "value", "convert", "init_table", "send_data", "setup",
     "loop", "CODE_MIN", "CODE_MAX")
)


@dataclass(frozen=True)
class CodegenOptions:
    init_mode: str = RUNTIME_FORMULA
    sleep_seconds: float = 60.0
    array_symbol: str = "Q_star"
    pin_symbol: str = "A0"

    def __post_init__(self):
        if self.init_mode not in (RUNTIME_FORMULA, CONSTANT_TABLE):
            raise CodegenError(
                f"init mode must be {RUNTIME_FORMULA} or {CONSTANT_TABLE}, "
                f"got {self.init_mode!r}"
            )
        if not self.sleep_seconds > 0:
            raise CodegenError("sleep interval must be positive")
        for name in (self.array_symbol, self.pin_symbol):
            if not _IDENT_RE.match(name):
                raise CodegenError(f"{name!r} is not a valid C identifier")
            if name in _RESERVED:
                raise CodegenError(
                    f"{name!r} collides with a scaffold identifier"
                )
        if self.array_symbol == self.pin_symbol:
            raise CodegenError(
                f"array and pin symbols collide: {self.array_symbol!r}"
            )


def _prec(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return 1
    if isinstance(e, (Mul, Div)):
        return 2
    if isinstance(e, Num) and e.value < 0:
        return 2
    return 4


def _c_expr(e: Expr) -> str:
    """Render an expression as a compact C89 double expression."""

    def wrap(node: Expr, floor: int) -> str:
        s = render(node)
        return f"({s})" if _prec(node) < floor else s

    def render(node: Expr) -> str:
        if isinstance(node, Num):
            return repr(node.value)
        if isinstance(node, Sym):
            return node.name
        if isinstance(node, Add):
            return f"{wrap(node.lhs, 1)}+{wrap(node.rhs, 2)}"
        if isinstance(node, Sub):
            return f"{wrap(node.lhs, 1)}-{wrap(node.rhs, 2)}"
        if isinstance(node, Mul):
            return f"{wrap(node.lhs, 2)}*{wrap(node.rhs, 3)}"
        if isinstance(node, Div):
            return f"{wrap(node.lhs, 2)}/{wrap(node.rhs, 3)}"
        if isinstance(node, Pow):
            if node.exponent == HALF:
                return f"sqrt({render(node.base)})"
            k = node.exponent
            if k.denominator == 1 and 2 <= k.numerator <= 4:
                factor = wrap(node.base, 4)
                return "*".join([factor] * k.numerator)
            return f"pow({render(node.base)},{float(k)!r})"
        raise CodegenError(f"cannot render {node!r} as C")

    return render(e)


def _sleep_token(seconds: float) -> str:
    # microseconds, as the platform sleep call takes them; one token so a
    # changed interval shows up as exactly one changed word
    return f"{format(seconds, 'g')}e6"


def _initializer(table: LookupTable, size: int) -> list[str]:
    entries = ["0.0"] * table.first_code + [repr(v) for v in table.values]
    if len(entries) != size:
        raise CodegenError(
            f"table covers {len(entries)} slots, converter has {size}"
        )
    lines = []
    for start in range(0, len(entries), 4):
        chunk = ", ".join(entries[start : start + 4])
        tail = "," if start + 4 < len(entries) else ""
        lines.append(f"    {chunk}{tail}")
    return lines


def emit(
    spec: DmsSpec,
    sf: ScalingFunction,
    table: LookupTable,
    options: CodegenOptions | None = None,
) -> str:
    """One self-contained translation unit; byte-identical per input set."""
    options = options or CodegenOptions()
    size = 2**spec.adc.bits
    first, last = window_codes(adc_bounds(spec.adc))
    if (table.first_code, table.last_code) != (first, last):
        raise CodegenError(
            f"table window [{table.first_code}, {table.last_code}] does not "
            f"match converter window [{first}, {last}]"
        )

    arr = options.array_symbol
    out = [
        f"/* ADC-code to physical-unit conversion ({sf.unit}). */",
        f"/* Valid codes {first}..{last}; lower codes clamp to the first entry. */",
        "",
        "#include <math.h>",
        "",
        f"#define CODE_MIN {first}",
        f"#define CODE_MAX {last}",
        "",
    ]

    if options.init_mode == RUNTIME_FORMULA:
        if sf.absolute.expr is None:
            raise CodegenError(
                "runtime-formula mode requires a closed-form scaling function"
            )
        formula = _c_expr(
            substitute(sf.absolute.expr, {sf.absolute.variable: Sym("i")})
        )
        out += [
            f"double {arr}[{size}];",
            "",
            "void init_table(void)",
            "{",
            "    int i;",
            "    for (i = CODE_MIN; i <= CODE_MAX; i++) {",
            f"        {arr}[i] = {formula};",
            "    }",
            "}",
        ]
    else:
        out += [f"double {arr}[{size}] = {{"]
        out += _initializer(table, size)
        out += [
            "};",
            "",
            "void init_table(void)",
            "{",
            "    /* table initialized at load time */",
            "}",
        ]

    out += [
        "",
        "double convert(int code)",
        "{",
        "    if (code < CODE_MIN) {",
        f"        return {arr}[CODE_MIN];",
        "    }",
        "    if (code > CODE_MAX) {",
        f"        return {arr}[CODE_MAX];",
        "    }",
        f"    return {arr}[code];",
        "}",
        "",
        "void send_data(double value)",
        "{",
        "    (void)value; /* transmission stub */",
        "}",
        "",
        "void setup(void)",
        "{",
        "    init_table();",
        "}",
        "",
        "void loop(void)",
        "{",
        f"    int code = 0; /* analogRead({options.pin_symbol}) */",
        "    send_data(convert(code));",
        f"    /* platform deep-sleep between sends, e.g. deepSleep({_sleep_token(options.sleep_seconds)}); */",
        "}",
        "",
    ]
    return "\n".join(out)
