"""Dense lookup table for the flow meter, exported as CSV and JSON."""

from pathlib import Path

from adcscale import adc_bounds, build_lut, build_spec, export, lookup, synthesize

spec = build_spec(
    measuring_range=(0.0, 30.0),
    unit="m3/h",
    sensor="dimax * dQ^2 / dQmax^2",
    bits=10,
    current_range=(4.0, 20.0),
    converter="dNmax * di / dimax",
    system="dQmaxstar * dQ / dQmax",
)
sf = synthesize(spec)

bounds = adc_bounds(spec.adc)
print(f"code window: live zero at {bounds.code_min}, top at {bounds.code_max}")

table = build_lut(sf, bounds)
print(f"{len(table)} entries, codes {table.first_code}..{table.last_code}")
print()

# the first few steps are the coarse end of the square root
for code in range(table.first_code, table.first_code + 4):
    print(f"  {code} -> {lookup(table, code):.4f}")
print("  ...")
for code in range(table.last_code - 2, table.last_code + 1):
    print(f"  {code} -> {lookup(table, code):.4f}")

out = Path("flow_lut.csv")
export(table, "csv", out)
export(table, "json", out.with_suffix(".json"))
print()
print(f"wrote {out} and {out.with_suffix('.json')}")
