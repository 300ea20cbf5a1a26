"""
When no closed form exists
==========================

A display law with a linear and a quadratic term mixed together has no
monomial inverse, so synthesis falls back to a bisection-backed numeric
composite.  The resulting scaling function evaluates the same way, it
just cannot be printed as a formula or emitted as a one-line init loop.
"""

from adcscale import (
    CONSTANT_TABLE,
    CodegenOptions,
    adc_bounds,
    build_lut,
    build_spec,
    emit,
    synthesize,
)

spec = build_spec(
    measuring_range=(0.0, 30.0),
    unit="m3/h",
    sensor="dimax * dQ^2 / dQmax^2",
    bits=10,
    current_range=(4.0, 20.0),
    converter="dNmax * di / dimax",
    # half the reading tracks flow, half tracks flow squared
    system="15 * (dQ / dQmax) + 15 * (dQ / dQmax)^2",
)
sf = synthesize(spec)

print(sf.describe())
print("closed form available:", sf.closed_form is not None)
print()

for code in (205, 409, 614, 818, 1023):
    print(f"  code {code:4d} -> {sf.absolute(code):8.4f} {sf.unit}")
print()

# the lookup table and constant-table C emission still work, they only
# need point evaluations
table = build_lut(sf, adc_bounds(spec.adc))
source = emit(spec, sf, table, CodegenOptions(init_mode=CONSTANT_TABLE))
print(f"table: {len(table)} entries, C source: {len(source.splitlines())} lines")
