"""
Deriving a scaling function for a 4-20 mA flow meter
====================================================

A turbine flow meter measures 0..30 m3/h and reports it on a 4-20 mA
current loop with a square-law characteristic.  A 10-bit ADC samples the
loop.  We declare the three characteristics and let the package derive
the code-to-flow conversion in closed form.
"""

from adcscale import build_spec, synthesize, to_source, validate

spec = build_spec(
    measuring_range=(0.0, 30.0),
    unit="m3/h",
    sensor="dimax * dQ^2 / dQmax^2",      # flow delta -> current delta
    bits=10,
    current_range=(4.0, 20.0),
    converter="dNmax * di / dimax",       # current delta -> code delta
    system="dQmaxstar * dQ / dQmax",      # what the display should show
)

# validate() runs the zero/endpoint/monotonicity checks and prints one
# line per check
report = validate(spec)
print(report)
print()

sf = synthesize(spec)
print(sf.describe())
print()

# the delta form maps code offsets above the live zero, the absolute
# form maps raw ADC codes
print("absolute form: Q*(N) =", to_source(sf.absolute.expr))
for code in (205, 409, 614, 818, 1023):
    print(f"  code {code:4d} -> {sf.absolute(code):8.4f} {sf.unit}")
