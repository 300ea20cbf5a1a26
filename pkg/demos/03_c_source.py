"""
Emitting embedded C for the flow meter
======================================

Two flavours of the same firmware-side table: one fills the array at
boot from the closed-form expression, the other bakes all 1024 doubles
into the source as a constant initializer.
"""

from pathlib import Path

from adcscale import (
    CONSTANT_TABLE,
    RUNTIME_FORMULA,
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
    system="dQmaxstar * dQ / dQmax",
)
sf = synthesize(spec)
table = build_lut(sf, adc_bounds(spec.adc))

runtime = emit(spec, sf, table)
Path("flow_runtime.c").write_text(runtime)

# the interesting part is the init loop
for line in runtime.splitlines():
    if "Q_star[i]" in line or "#define" in line:
        print(line.strip())
print()

# constant-table mode with a slower reporting cadence
options = CodegenOptions(init_mode=CONSTANT_TABLE, sleep_seconds=300.0)
constant = emit(spec, sf, table, options)
Path("flow_constant.c").write_text(constant)
head = constant[: constant.index("= {") + 80]
print(head, "...")
print()
print("wrote flow_runtime.c and flow_constant.c")
