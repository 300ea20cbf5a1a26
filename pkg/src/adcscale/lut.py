"""Dense lookup table over the valid integer code window, plus export.

The window starts at ceil(code_min) when code_min is fractional (the first
integer code the converter can actually emit inside the live range) and
runs to code_max.  Entries are the absolute scaling values, stored at full
double precision; display rounding is a formatting concern, never stored.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import NonMonotoneError, OutOfRangeError, WindowError
from .model import AdcBounds
from .scaling import ScalingFunction, eval_scaling

CSV_VALUE_FMT = ".10g"


@dataclass(frozen=True)
class LookupTable:
    first_code: int
    values: tuple[float, ...]
    unit: str

    @property
    def last_code(self) -> int:
        return self.first_code + len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)


def window_codes(bounds: AdcBounds) -> tuple[int, int]:
    """Integer code window [first, last] implied by the converter bounds."""
    first = math.ceil(bounds.code_min)
    last = int(bounds.code_max)
    if first > last:
        raise WindowError(
            f"empty code window: ceil({bounds.code_min!r}) > {last}"
        )
    return first, last


def build_lut(sf: ScalingFunction, bounds: AdcBounds) -> LookupTable:
    first, last = window_codes(bounds)
    values = []
    previous = -math.inf
    for code in range(first, last + 1):
        value = eval_scaling(sf, float(code))
        if value <= previous:
            raise NonMonotoneError(
                f"table not strictly increasing at code {code}",
                (float(code - 1), float(code)),
            )
        values.append(value)
        previous = value
    return LookupTable(first, tuple(values), sf.unit)


def lookup(table: LookupTable, code: int) -> float:
    """The stored value for an integer code, exactly as built."""
    if not table.first_code <= code <= table.last_code:
        raise OutOfRangeError(
            f"code {code} outside window "
            f"[{table.first_code}, {table.last_code}]"
        )
    return table.values[code - table.first_code]


def render_csv(table: LookupTable) -> str:
    lines = ["code,value"]
    for offset, value in enumerate(table.values):
        lines.append(f"{table.first_code + offset},{format(value, CSV_VALUE_FMT)}")
    return "\n".join(lines) + "\n"


def render_json(table: LookupTable) -> str:
    return json.dumps(
        {
            "first_code": table.first_code,
            "unit": table.unit,
            "values": list(table.values),
        }
    ) + "\n"


def export(table: LookupTable, format: str, destination) -> None:
    """Write the table as CSV (code,value rows) or JSON; byte-deterministic."""
    if format == "csv":
        text = render_csv(table)
    elif format == "json":
        text = render_json(table)
    else:
        raise ValueError(f"unknown export format {format!r}")
    Path(destination).write_text(text, encoding="utf-8", newline="\n")
