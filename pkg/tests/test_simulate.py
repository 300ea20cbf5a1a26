"""Forward chain simulation and round-trip quantization error."""

import pytest

from adcscale import (
    OutOfRangeError,
    SpecError,
    build_spec,
    forward,
    lookup,
    roundtrip,
)
from adcscale.simulate import render_report, report_csv
from conftest import FLOW_KWARGS


class TestForward:
    def test_midpoint(self, flow_spec):
        s = forward(15.0, flow_spec)
        assert s.current == 8.0
        assert s.exact_code == 409.2
        assert s.code == 409
        assert not s.clamped
        assert s.value is None and s.error is None

    def test_full_scale(self, flow_spec):
        s = forward(30.0, flow_spec)
        assert (s.current, s.exact_code, s.code) == (20.0, 1023.0, 1023)
        assert not s.clamped

    def test_live_zero(self, flow_spec):
        s = forward(0.0, flow_spec)
        assert s.current == 4.0
        assert s.exact_code == 204.6
        assert s.code == 205  # nearest integer code is inside the window
        assert not s.clamped

    def test_floor_quantizer_clamps_at_live_zero(self, flow_spec):
        s = forward(0.0, flow_spec, quantizer="floor")
        assert s.code == 205
        assert s.clamped

    def test_out_of_range(self, flow_spec):
        with pytest.raises(OutOfRangeError):
            forward(31.0, flow_spec)
        with pytest.raises(OutOfRangeError):
            forward(-0.1, flow_spec)

    def test_unknown_quantizer(self, flow_spec):
        with pytest.raises(SpecError, match="unknown quantizer"):
            forward(15.0, flow_spec, quantizer="ceil")

    def test_from_max_anchoring(self):
        spec = build_spec(**dict(FLOW_KWARGS, convention="from-max"))
        s = forward(0.0, spec)
        # zero flow still sits at the live-zero current and code
        assert s.current == 4.0
        assert s.exact_code == pytest.approx(204.6, abs=1e-12)
        assert s.code == 205


class TestRoundtrip:
    def test_needs_two_samples(self, flow_spec, flow_sf):
        with pytest.raises(SpecError, match="at least 2"):
            roundtrip(flow_spec, flow_sf, 1)

    def test_thousand_point_sweep(self, flow_spec, flow_sf):
        report = roundtrip(flow_spec, flow_sf, 1000)
        assert len(report.samples) == 1000
        # worst case sits at the live-zero edge where one code step is widest
        assert report.worst.x == 0.0
        assert report.worst.code == 205
        assert report.max_abs_error == 0.6632365324280776
        assert report.rms_error == pytest.approx(0.06855777657013105, rel=1e-12)
        assert report.max_abs_error == abs(report.worst.error)

    def test_errors_bounded_by_local_step(self, flow_spec, flow_sf, flow_table):
        report = roundtrip(flow_spec, flow_sf, 1000)
        for s in report.samples:
            if s.clamped or s.code in (205, 1023):
                continue
            step = max(
                lookup(flow_table, s.code + 1) - lookup(flow_table, s.code),
                lookup(flow_table, s.code) - lookup(flow_table, s.code - 1),
            )
            assert abs(s.error) <= step + 1e-12

    def test_floor_quantizer_never_overshoots(self, flow_spec, flow_sf):
        report = roundtrip(flow_spec, flow_sf, 500, quantizer="floor")
        for s in report.samples:
            if not s.clamped:
                assert s.error <= 1e-12

    def test_table_abscissae_come_back_exactly(self, flow_spec, flow_table):
        # 1023 is left out: its stored value sits one ulp above the range top
        for code in (205, 300, 409, 700, 1022):
            x = lookup(flow_table, code)
            s = forward(x, flow_spec)
            assert s.code == code
            assert lookup(flow_table, s.code) - x == 0.0

    def test_deterministic(self, flow_spec, flow_sf):
        a = roundtrip(flow_spec, flow_sf, 200)
        b = roundtrip(flow_spec, flow_sf, 200)
        assert a.max_abs_error == b.max_abs_error
        assert a.rms_error == b.rms_error
        assert a.samples == b.samples


class TestReports:
    def test_render_report(self, flow_spec, flow_sf):
        report = roundtrip(flow_spec, flow_sf, 1000)
        text = render_report(report, flow_spec.unit)
        assert "samples: 1000" in text
        assert "max |error|: 0.6632365324 m3/h" in text
        assert "rms error:" in text
        assert "worst sample: x = 0 -> code 205" in text

    def test_report_csv(self, flow_spec, flow_sf):
        report = roundtrip(flow_spec, flow_sf, 1000)
        text = report_csv(report)
        lines = text.splitlines()
        assert lines[0] == "x,i,exact_code,code,x_star,error"
        assert len(lines) == 1001
        assert lines[1] == "0,4,204.6,205,0.6632365324,0.6632365324"
        assert lines[-1] == "30,20,1023,1023,30,3.552713679e-15"
        assert text.endswith("\n")
