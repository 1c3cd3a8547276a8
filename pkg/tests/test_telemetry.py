import math

import pytest
from hypothesis import given, strategies as st

from laacsim.telemetry import (DeploymentPhase, EventKind, PhaseEvent,
                               TelemetrySample, format_fixed, phase_at,
                               quantize, validate_trace)


def make_trace(n=100, dt=0.025):
    return [TelemetrySample(round((i + 1) * dt, 6), 0.1 * i, 40.0 - i)
            for i in range(n)]


class TestQuantize:
    def test_exact_values_pass_through(self):
        assert quantize(0.0) == 0.0
        assert quantize(1.5) == 1.5
        assert quantize(-2.28) == -2.28

    def test_rounds_to_six_significant_digits(self):
        assert quantize(1.23456789) == 1.23457
        assert quantize(0.000123456789) == 0.000123457
        assert quantize(-123456.789) == -123457.0

    # magnitudes bracketing the sensor ranges (s, N, mm)
    finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False,
                       allow_infinity=False).filter(
                           lambda v: v == 0.0 or abs(v) >= 1e-9)

    @given(finite)
    def test_idempotent(self, v):
        q = quantize(v)
        assert quantize(q) == q

    @given(finite)
    def test_text_round_trip_is_bit_exact(self, v):
        q = quantize(v)
        assert float(format_fixed(q)) == q


class TestFormatFixed:
    def test_zero(self):
        assert format_fixed(0.0) == "0.000000"

    def test_no_exponent_notation(self):
        assert "e" not in format_fixed(quantize(0.00001234)).lower()
        assert "e" not in format_fixed(quantize(123456.0)).lower()

    def test_negative(self):
        assert format_fixed(-2.28) == "-2.28000"


class TestValidateTrace:
    def test_nominal_trace_ok(self):
        report = validate_trace(make_trace())
        assert report.ok and not report.violations

    def test_empty_trace_ok(self):
        assert validate_trace([]).ok

    def test_rate_jitter_flagged(self):
        trace = make_trace()
        trace[10] = TelemetrySample(trace[9].t + 0.040, 0.0, 0.0)
        report = validate_trace(trace)
        assert not report.ok
        assert any("jitter" in v for v in report.violations)

    def test_jitter_within_20_percent_tolerated(self):
        trace = [TelemetrySample(0.025, 0.0, 0.0),
                 TelemetrySample(0.025 + 0.029, 0.0, 0.0),
                 TelemetrySample(0.025 + 0.029 + 0.021, 0.0, 0.0)]
        assert validate_trace(trace).ok

    def test_non_monotone_time_flagged(self):
        trace = make_trace()
        trace[5] = TelemetrySample(trace[4].t, 0.0, 0.0)
        report = validate_trace(trace)
        assert any("non-monotone" in v for v in report.violations)

    def test_non_finite_values_flagged(self):
        trace = make_trace(3)
        trace[1] = TelemetrySample(trace[1].t, math.nan, 0.0)
        report = validate_trace(trace)
        assert any("non-finite force" in v for v in report.violations)


class TestPhaseAt:
    def events(self):
        return [
            PhaseEvent(EventKind.E1_LOBE_ONSET, 1.0, 39.0, -1.0),
            PhaseEvent(EventKind.E2_LOBE_EXPANDED, 2.0, 30.0, 1.1),
            PhaseEvent(EventKind.E3_DISK_EXPANDED, 3.0, 20.0, 0.9),
            PhaseEvent(EventKind.E4_DETACHED, 4.0, 10.0, -0.3),
        ]

    def test_progression(self):
        ev = self.events()
        assert phase_at(ev, 0.5) is DeploymentPhase.NAVIGATION
        assert phase_at(ev, 1.5) is DeploymentPhase.LOBE_DEPLOYMENT
        assert phase_at(ev, 2.5) is DeploymentPhase.REPOSITIONING
        assert phase_at(ev, 3.5) is DeploymentPhase.DEPLOYED
        assert phase_at(ev, 9.0) is DeploymentPhase.DETACHED

    def test_closed_on_the_left(self):
        # at the event timestamp the new phase already applies
        assert phase_at(self.events(), 2.0) is DeploymentPhase.REPOSITIONING

    def test_missing_later_events_keep_last_phase(self):
        ev = self.events()[:2]
        assert phase_at(ev, 100.0) is DeploymentPhase.REPOSITIONING

    def test_unordered_events_rejected(self):
        ev = list(reversed(self.events()))
        with pytest.raises(ValueError):
            phase_at(ev, 1.0)

    def test_duplicate_kind_rejected(self):
        e = PhaseEvent(EventKind.E2_LOBE_EXPANDED, 2.0, 30.0, 1.1)
        with pytest.raises(ValueError):
            phase_at([e, e], 5.0)
