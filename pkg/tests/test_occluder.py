import numpy as np
import pytest
from hypothesis import given, strategies as st

from laacsim.occluder import (DISK_DIP_N, TABLE1_ROWS, WAIST_DIP_N, ElementLaw,
                              OccluderSpec, axial_force, element_force,
                              get_preset, spec_from_dict, spec_to_dict,
                              table1_presets)

LOBE = ElementLaw(onset_mm=0.0, compression_span_mm=12.0,
                  compression_depth_N=2.28, recovery_span_mm=3.0,
                  snap_span_mm=3.0, snap_amplitude_N=1.09)


class TestElementLaw:
    def test_zero_outside_support(self):
        assert element_force(LOBE, -1.0) == 0.0
        assert element_force(LOBE, LOBE.end_mm) == 0.0
        assert element_force(LOBE, 100.0) == 0.0

    def test_dip_depth(self):
        assert element_force(LOBE, LOBE.dip_mm) == pytest.approx(-2.28)

    def test_snap_peak(self):
        assert element_force(LOBE, LOBE.snap_peak_mm) == pytest.approx(1.09)
        assert LOBE.snap_peak_mm == pytest.approx(16.5)

    def test_linear_ramp_midpoint(self):
        assert element_force(LOBE, 6.0) == pytest.approx(-1.14)

    def test_no_snap_element_recovers_to_zero(self):
        waist = ElementLaw(onset_mm=18.0, compression_span_mm=4.0,
                           compression_depth_N=0.4, recovery_span_mm=2.0)
        assert element_force(waist, waist.dip_mm) == pytest.approx(-0.4)
        assert element_force(waist, 24.0) == 0.0

    def test_continuity(self):
        # piecewise segments join without force jumps
        x = np.linspace(-1.0, LOBE.end_mm + 1.0, 20001)
        f = element_force(LOBE, x)
        assert np.max(np.abs(np.diff(f))) < 0.01

    def test_validation(self):
        with pytest.raises(ValueError):
            ElementLaw(0.0, -1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            ElementLaw(0.0, 1.0, -1.0, 1.0)
        with pytest.raises(ValueError):
            ElementLaw(0.0, float("nan"), 1.0, 1.0)

    @given(st.floats(min_value=-5.0, max_value=45.0,
                     allow_nan=False, allow_infinity=False))
    def test_scalar_matches_array_bitwise(self, x):
        scalar = element_force(LOBE, x)
        arr = element_force(LOBE, np.array([x]))
        assert scalar == arr[0]


class TestOccluderSpec:
    def test_overlapping_elements_rejected(self):
        with pytest.raises(ValueError):
            OccluderSpec(lobe=LOBE,
                         waist=ElementLaw(10.0, 4.0, 0.4, 2.0),
                         disk=ElementLaw(24.0, 6.0, 0.8, 2.0),
                         settle_span_mm=3.0, residual_force_N=0.0)

    def test_lobe_must_be_deepest(self):
        with pytest.raises(ValueError):
            OccluderSpec(lobe=LOBE,
                         waist=ElementLaw(18.0, 4.0, 3.0, 2.0),
                         disk=ElementLaw(24.0, 6.0, 0.8, 2.0),
                         settle_span_mm=3.0, residual_force_N=0.0)

    def test_dict_round_trip(self):
        spec = get_preset(1).spec
        assert spec_from_dict(spec_to_dict(spec)) == spec


class TestAxialForce:
    def test_zero_before_onset(self):
        spec = get_preset(1).spec
        assert axial_force(spec, 0.0) == 0.0
        assert axial_force(spec, -5.0) == 0.0

    def test_residual_beyond_total_retraction(self):
        preset = get_preset(2)
        x = preset.spec.total_retraction_mm
        assert axial_force(preset.spec, x) == pytest.approx(-0.53)
        assert axial_force(preset.spec, x + 10.0) == pytest.approx(-0.53)

    def test_extrema_match_targets(self):
        for preset in table1_presets():
            x = np.linspace(0.0, preset.spec.total_retraction_mm, 38001)
            f = axial_force(preset.spec, x)
            assert np.min(f) == pytest.approx(preset.targets["min_F_N"], abs=1e-6)
            assert np.max(f) == pytest.approx(preset.targets["max_F_N"], abs=1e-6)

    @given(st.floats(min_value=-5.0, max_value=45.0,
                     allow_nan=False, allow_infinity=False))
    def test_scalar_matches_array_bitwise(self, x):
        spec = get_preset(5).spec
        assert axial_force(spec, x) == axial_force(spec, np.array([x]))[0]


class TestPresets:
    def test_ten_presets(self):
        ids = [p.preset_id for p in table1_presets()]
        assert ids == [r[0] for r in TABLE1_ROWS]

    def test_total_retraction_is_38mm(self):
        for p in table1_presets():
            assert p.spec.total_retraction_mm == pytest.approx(38.0)

    def test_speed_covers_duration_minus_wait(self):
        for p in table1_presets():
            travel = p.spec.total_retraction_mm / p.retraction_speed_mm_s
            assert travel + p.post_deploy_wait_s == pytest.approx(
                p.targets["duration_s"])

    def test_duplicate_rows_kept_distinct(self):
        # benchmark rows 3 and 10 are identical trials; both are needed
        # for the cohort aggregates to come out right
        a, b = get_preset(3), get_preset(10)
        assert a.spec == b.spec and a.preset_id != b.preset_id

    def test_shared_dips(self):
        for p in table1_presets():
            assert p.spec.waist.compression_depth_N == WAIST_DIP_N
            assert p.spec.disk.compression_depth_N == DISK_DIP_N

    def test_unknown_preset(self):
        with pytest.raises(KeyError):
            get_preset(11)
