"""Chain description: ranges, deltas, code-space constants, validation."""

import math
import random

import pytest

from adcscale import (
    AdcSpec,
    DeltaConvention,
    OutOfRangeError,
    Range,
    SpecError,
    adc_bounds,
    build_spec,
    delta,
    delta_max,
    undelta,
    validate,
)
from conftest import FLOW_KWARGS

FROM_MIN = DeltaConvention.FROM_MIN
FROM_MAX = DeltaConvention.FROM_MAX


class TestRanges:
    def test_empty_range_rejected(self):
        with pytest.raises(SpecError, match="empty range"):
            Range(3.0, 3.0)
        with pytest.raises(SpecError):
            Range(5.0, 4.0)

    def test_contains(self):
        r = Range(4.0, 20.0)
        assert r.contains(4.0) and r.contains(20.0) and r.contains(12.0)
        assert not r.contains(3.999)

    def test_adc_resolution_limits(self):
        with pytest.raises(SpecError, match="1..32"):
            AdcSpec(0, Range(4.0, 20.0))
        with pytest.raises(SpecError):
            AdcSpec(33, Range(4.0, 20.0))
        with pytest.raises(SpecError, match="nonnegative"):
            AdcSpec(10, Range(-1.0, 20.0))


class TestDeltas:
    def test_anchoring(self):
        r = Range(0.0, 30.0)
        assert delta(10.0, r, FROM_MAX) == 20.0
        assert delta(10.0, r, FROM_MIN) == 10.0
        assert delta(30.0, r, FROM_MAX) == 0.0
        assert delta(0.0, r, FROM_MIN) == 0.0

    def test_out_of_range(self):
        r = Range(4.0, 20.0)
        with pytest.raises(OutOfRangeError):
            delta(3.0, r, FROM_MIN)
        with pytest.raises(OutOfRangeError):
            delta(20.5, r, FROM_MAX)

    def test_delta_max(self):
        assert delta_max(Range(4.0, 20.0)) == 16.0
        assert delta_max(Range(0.0, 30.0)) == 30.0

    def test_conventions_are_complementary(self):
        rng = random.Random(207)
        r = Range(4.0, 20.0)
        for _ in range(200):
            v = rng.uniform(4.0, 20.0)
            total = delta(v, r, FROM_MIN) + delta(v, r, FROM_MAX)
            assert math.isclose(total, delta_max(r), rel_tol=1e-12)

    def test_undelta_inverts_delta(self):
        rng = random.Random(208)
        r = Range(0.0, 30.0)
        for conv in (FROM_MIN, FROM_MAX):
            for _ in range(200):
                v = rng.uniform(0.0, 30.0)
                back = undelta(delta(v, r, conv), r, conv)
                assert math.isclose(back, v, rel_tol=1e-12, abs_tol=1e-12)

    def test_coerce_convention(self):
        assert DeltaConvention.coerce("from-max") is FROM_MAX
        assert DeltaConvention.coerce(FROM_MIN) is FROM_MIN
        with pytest.raises(SpecError, match="sideways"):
            DeltaConvention.coerce("sideways")


class TestAdcBounds:
    def test_live_zero_bounds_are_exact(self):
        bounds = adc_bounds(AdcSpec(10, Range(4.0, 20.0)))
        assert bounds == (204.6, 1023.0, 818.4)

    def test_twelve_bit(self):
        assert adc_bounds(AdcSpec(12, Range(4.0, 20.0))) == (819.0, 4095.0, 3276.0)

    def test_zero_min_current(self):
        assert adc_bounds(AdcSpec(10, Range(0.0, 20.0))) == (0.0, 1023.0, 1023.0)

    def test_code_min_scales_linearly_with_current_min(self):
        lo = adc_bounds(AdcSpec(10, Range(2.0, 20.0)))
        hi = adc_bounds(AdcSpec(10, Range(4.0, 20.0)))
        assert 2.0 * lo.code_min == hi.code_min


class TestBuildSpec:
    def test_flow_meter_wiring(self, flow_spec):
        assert flow_spec.sensor.variable == "dQ"
        assert flow_spec.converter.variable == "di"
        assert flow_spec.system.variable == "dQ"
        assert flow_spec.code_symbol == "dN"
        assert flow_spec.convention is FROM_MIN
        # span constants were bound: midpoint flow gives 4 mA of delta
        assert flow_spec.sensor(15.0) == 4.0
        assert flow_spec.converter(16.0) == 818.4
        assert flow_spec.system(30.0) == 30.0

    def test_sensor_and_converter_must_differ(self):
        kwargs = dict(FLOW_KWARGS, sensor="dimax * di / dimax")
        with pytest.raises(SpecError, match="distinct variables"):
            build_spec(**kwargs)

    def test_system_must_share_sensor_variable(self):
        kwargs = dict(FLOW_KWARGS, system="dZmaxstar * dZ / dZmax")
        with pytest.raises(SpecError, match="share the sensor variable"):
            build_spec(**kwargs)

    def test_sensor_unknown_constant(self):
        kwargs = dict(FLOW_KWARGS, sensor="dZmax * dQ / dQmax")
        with pytest.raises(SpecError, match="unknown constant dZmax"):
            build_spec(**kwargs)

    def test_system_unknown_constant(self):
        kwargs = dict(FLOW_KWARGS, system="dimax * dQ / dQmax")
        with pytest.raises(SpecError, match="unknown constant dimax"):
            build_spec(**kwargs)

    def test_converter_rejects_display_span(self):
        kwargs = dict(FLOW_KWARGS, converter="dNmaxstar * di / dimax")
        with pytest.raises(SpecError, match="cannot use"):
            build_spec(**kwargs)

    def test_converter_rejects_two_code_spans(self):
        kwargs = dict(FLOW_KWARGS, converter="dNmax * dMmax * di / dimax^2")
        with pytest.raises(SpecError, match="two code spans"):
            build_spec(**kwargs)

    def test_code_symbol_collision(self):
        kwargs = dict(FLOW_KWARGS, converter="dQmax * di / dimax")
        with pytest.raises(SpecError, match="collides"):
            build_spec(**kwargs)

    def test_characteristic_needs_exactly_one_variable(self):
        with pytest.raises(SpecError, match="one variable"):
            build_spec(**dict(FLOW_KWARGS, sensor="di + dQ"))
        with pytest.raises(SpecError, match="no variable"):
            build_spec(**dict(FLOW_KWARGS, sensor="dQmax"))


class TestValidate:
    def test_flow_meter_passes(self, flow_spec):
        report = validate(flow_spec)
        assert report.ok
        assert len(report.checks) == 8
        assert report.failures() == ()
        assert "PASS  sensor zero" in str(report)

    def test_check_order(self, flow_spec):
        names = [c.name for c in validate(flow_spec).checks]
        assert names == [
            "sensor zero",
            "converter zero",
            "system zero",
            "sensor endpoint",
            "converter endpoint",
            "system endpoint",
            "sensor monotone increasing",
            "converter monotone increasing",
        ]

    def test_offset_sensor_fails_zero_and_endpoint(self):
        spec = build_spec(**dict(FLOW_KWARGS, sensor="dimax * dQ / dQmax + 1"))
        report = validate(spec)
        assert not report.ok
        failed = {c.name for c in report.failures()}
        assert failed == {"sensor zero", "sensor endpoint"}
        assert "FAIL" in str(report)

    def test_non_monotone_sensor_reports_witness(self):
        spec = build_spec(**dict(FLOW_KWARGS, sensor="dQ^2 * (dQ - 25)"))
        report = validate(spec)
        failed = {c.name: c for c in report.failures()}
        assert "sensor monotone increasing" in failed
        assert "witness" in failed["sensor monotone increasing"].detail

    def test_mismatched_converter_endpoint(self):
        # converter tops out at half the code span
        spec = build_spec(**dict(FLOW_KWARGS, converter="dNmax * di / dimax / 2"))
        report = validate(spec)
        names = {c.name for c in report.failures()}
        assert "converter endpoint" in names
