"""End-to-end acceptance checks for the flow-meter chain.

Each test evaluates one contract and prints a single PASS/FAIL verdict
line directly to the terminal, then asserts it.
"""

import math
import random
import re
import time
from fractions import Fraction

from adcscale import (
    adc_bounds,
    build_lut,
    build_spec,
    delta_max,
    emit,
    eval_scaling,
    lookup,
    roundtrip,
    synthesize,
)
from adcscale.expr import Num, Sym, evaluate, mul, parse, pow_
from adcscale.inversion import invert_analytic, invert_numeric
from conftest import FLOW_KWARGS


def verdict(capsys, name, ok, detail):
    with capsys.disabled():
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_closed_form_synthesis(capsys):
    start = time.perf_counter()
    sf = synthesize(build_spec(**FLOW_KWARGS))
    elapsed = time.perf_counter() - start
    coef, exponent = sf.monomial
    err = abs(coef - 15 * math.sqrt(5 / 1023))
    printed = format(coef, ".12g")
    ok = (
        err <= 1e-12
        and printed == "1.04866903495"
        and exponent == Fraction(1, 2)
        and elapsed < 1.0
    )
    verdict(
        capsys,
        "closed-form synthesis",
        ok,
        f"coefficient prints {printed}, |error| {err:.3g} <= 1e-12, "
        f"{elapsed * 1000:.1f} ms",
    )


def test_reference_readings(capsys):
    expected = {
        205: "0.66",
        206: "1.24",
        207: "1.62",
        1020: "29.94",
        1021: "29.96",
        1022: "29.98",
        1023: "30.00",
    }
    start = time.perf_counter()
    sf = synthesize(build_spec(**FLOW_KWARGS))
    got = {code: f"{eval_scaling(sf, float(code)):.2f}" for code in expected}
    elapsed = time.perf_counter() - start
    ok = got == expected and elapsed < 1.0
    misses = {c: (got[c], expected[c]) for c in expected if got[c] != expected[c]}
    verdict(
        capsys,
        "reference readings",
        ok,
        f"{len(expected)} codes round to the expected two-decimal values"
        + (f" (misses: {misses})" if misses else "")
        + f", {elapsed * 1000:.1f} ms",
    )


def test_derived_constants(capsys):
    start = time.perf_counter()
    spec = build_spec(**FLOW_KWARGS)
    bounds = adc_bounds(spec.adc)
    spans = (delta_max(spec.adc.current), delta_max(spec.measuring_range))
    elapsed = time.perf_counter() - start
    ok = (
        bounds == (204.6, 1023.0, 818.4)
        and spans == (16.0, 30.0)
        and elapsed < 1.0
    )
    verdict(
        capsys,
        "derived code-space constants",
        ok,
        f"bounds {tuple(bounds)} == (204.6, 1023.0, 818.4) exactly, "
        f"spans {spans}, {elapsed * 1000:.1f} ms",
    )


def test_inverse_agreement(capsys):
    rng = random.Random(2026)
    quadratic = parse("dimax * dQ^2 / dQmax^2", {"dimax": 16.0, "dQmax": 30.0})
    cases = [(quadratic, "dQ", 30.0)]
    for _ in range(10):
        a = rng.uniform(0.3, 8.0)
        k = rng.choice(
            [
                Fraction(1, 3),
                Fraction(1, 2),
                Fraction(1),
                Fraction(3, 2),
                Fraction(2),
                Fraction(3),
            ]
        )
        span = rng.uniform(5.0, 60.0)
        cases.append((mul(Num(a), pow_(Sym("d"), k)), "d", span))

    worst = 0.0
    checked = 0
    for e, var, span in cases:
        closed = invert_analytic(e, var, (0.0, span))
        top = evaluate(e, {var: span})
        for _ in range(100):
            y = rng.uniform(0.001 * top, 0.999 * top)
            xa = evaluate(closed, {var: y})
            xn = invert_numeric(e, var, (0.0, span), y)
            worst = max(worst, abs(xa - xn))
            checked += 1
    ok = worst <= 1e-9 and checked == 1100
    verdict(
        capsys,
        "analytic/numeric inverse agreement",
        ok,
        f"{checked} targets across 11 characteristics, worst gap {worst:.3g} <= 1e-9",
    )


def test_chain_identity(capsys):
    spec = build_spec(**FLOW_KWARGS)
    sf = synthesize(spec)
    rng = random.Random(30115)
    worst = 0.0
    for _ in range(1000):
        dx = rng.uniform(0.0, 30.0)
        dn = spec.converter(spec.sensor(dx))
        rel = abs(sf.delta(dn) - dx) / max(1.0, dx)
        worst = max(worst, rel)
    ok = worst <= 1e-9
    verdict(
        capsys,
        "delta-space identity",
        ok,
        f"scaling undoes sensor+converter at 1000 points, "
        f"worst relative gap {worst:.3g} <= 1e-9",
    )


def test_lookup_table_and_sweep(capsys):
    spec = build_spec(**FLOW_KWARGS)
    sf = synthesize(spec)
    table = build_lut(sf, adc_bounds(spec.adc))
    structure = (
        table.first_code == 205
        and table.last_code == 1023
        and len(table) == 819
        and all(b > a for a, b in zip(table.values, table.values[1:]))
    )
    report = roundtrip(spec, sf, 1000)
    # brute-force cross-check: every sweep error re-derived from the table
    cross = all(s.error == lookup(table, s.code) - s.x for s in report.samples)
    steps_ok = True
    for s in report.samples:
        if s.clamped or s.code in (205, 1023):
            continue
        step = max(
            lookup(table, s.code + 1) - lookup(table, s.code),
            lookup(table, s.code) - lookup(table, s.code - 1),
        )
        if abs(s.error) > step + 1e-12:
            steps_ok = False
            break
    near_edge = report.worst.x <= 2 * 30.0 / 999
    ok = (
        structure
        and cross
        and steps_ok
        and report.max_abs_error <= 0.67
        and near_edge
    )
    verdict(
        capsys,
        "lookup table + sweep error bound",
        ok,
        f"819 strictly increasing entries over 205..1023; 1000-point sweep "
        f"max |error| {report.max_abs_error:.10g} <= 0.67 at x = {report.worst.x:.3g}",
    )


def test_emitted_source(capsys):
    spec = build_spec(**FLOW_KWARGS)
    sf = synthesize(spec)
    table = build_lut(sf, adc_bounds(spec.adc))
    first = emit(spec, sf, table)
    second = emit(spec, sf, table)
    deterministic = first == second
    text_ok = (
        "1.04866903495" in first
        and "#define CODE_MIN 205" in first
        and "#define CODE_MAX 1023" in first
    )
    formula = parse(re.search(r"Q_star\[i\] = (.+);", first).group(1))
    worst = max(
        abs(evaluate(formula, {"i": float(code)}) - lookup(table, code))
        for code in range(205, 1024)
    )
    ok = deterministic and text_ok and worst <= 1e-12
    verdict(
        capsys,
        "codegen determinism + self-consistency",
        ok,
        f"two emissions byte-identical; re-parsed init formula vs table "
        f"worst gap {worst:.3g} <= 1e-12",
    )
