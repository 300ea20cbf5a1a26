"""Shared fixtures: the 4-20 mA flow-meter chain used across the suite."""

import pytest

from adcscale import adc_bounds, build_lut, build_spec, synthesize

FLOW_KWARGS = dict(
    measuring_range=(0.0, 30.0),
    unit="m3/h",
    sensor="dimax * dQ^2 / dQmax^2",
    bits=10,
    current_range=(4.0, 20.0),
    converter="dNmax * di / dimax",
    system="dQmaxstar * dQ / dQmax",
)


@pytest.fixture(scope="session")
def flow_spec():
    return build_spec(**FLOW_KWARGS)


@pytest.fixture(scope="session")
def flow_sf(flow_spec):
    return synthesize(flow_spec)


@pytest.fixture(scope="session")
def flow_bounds(flow_spec):
    return adc_bounds(flow_spec.adc)


@pytest.fixture(scope="session")
def flow_table(flow_sf, flow_bounds):
    return build_lut(flow_sf, flow_bounds)
