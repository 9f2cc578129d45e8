import math
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from dpsrk.detector import DetectorMode, DetectorSpec
from dpsrk.errors import InvalidRegimeError, ModelDomainError, UndefinedQBERError
from dpsrk.link import channel_stats, p_click, p_dark, p_signal, qber

from conftest import INGAAS, si_scenario


def toy_detector(efficiency=1.0, dark=0.0, loss_db=0.0):
    return DetectorSpec(
        name="toy", efficiency=efficiency, dark_per_window=dark, dead_time=0.0,
        receiver_loss_db=loss_db, mode=DetectorMode.NONGATED,
    )


class TestPSignal:
    def test_zero_loss(self):
        s = si_scenario(length_km=0.0, detector=toy_detector())
        assert p_signal(s) == 0.2

    def test_fig3_si_at_100km(self):
        # mu eta 10^-(alpha L + L_r)/10 evaluated with a 50-digit oracle
        assert p_signal(si_scenario(100.0)) == pytest.approx(3.4284517355791234e-4, rel=1e-12)

    def test_vanishes_at_extreme_loss(self):
        s = si_scenario(length_km=100.0, alpha_db_per_km=1000.0)
        assert p_signal(s) < 1e-300

    def test_clamped_above_one(self):
        s = si_scenario(length_km=0.0, mu=6.0, detector=toy_detector())
        stats = channel_stats(s)
        assert stats.p_signal == 1.0
        assert stats.clamped


class TestPDark:
    def test_si_value(self):
        assert p_dark(si_scenario()) == pytest.approx(7e-8, rel=1e-15)

    def test_ingaas_value(self):
        assert p_dark(si_scenario(detector=INGAAS)) == pytest.approx(1.84e-5, rel=1e-15)

    def test_zero(self):
        assert p_dark(si_scenario(detector=toy_detector())) == 0.0

    def test_invalid_regime(self):
        s = si_scenario(detector=toy_detector(dark=0.4), n_detectors=3)
        with pytest.raises(InvalidRegimeError):
            p_dark(s)


class TestPClick:
    def test_sum(self):
        s = si_scenario(100.0)
        assert p_click(s) == pytest.approx(3.4291517355791234e-4, rel=1e-12)

    def test_zero(self):
        s = si_scenario(detector=toy_detector(efficiency=0.0))
        assert p_click(s) == 0.0

    def test_clamp_with_flag(self):
        s = si_scenario(length_km=0.0, mu=0.9, detector=toy_detector(dark=0.1))
        stats = channel_stats(s)
        assert stats.p_click == 1.0
        assert stats.clamped

    def test_composition_exact(self):
        # bit-for-bit sum below the clamp
        for length in (0.0, 10.0, 50.0, 123.4, 250.0):
            s = si_scenario(length)
            assert p_click(s) == p_signal(s) + p_dark(s)


class TestQber:
    def test_dark_only_is_half(self):
        s = si_scenario(detector=toy_detector(efficiency=0.0, dark=1e-6))
        assert qber(s) == 0.5

    def test_no_dark_is_baseline(self):
        s = si_scenario(detector=toy_detector(efficiency=0.3))
        assert qber(s) == pytest.approx(s.baseline_error, rel=1e-15)

    def test_fig3_si_at_200km(self):
        assert qber(si_scenario(200.0)) == pytest.approx(0.02227931240729725, rel=1e-12)

    def test_undefined_when_no_clicks(self):
        s = si_scenario(detector=toy_detector(efficiency=0.0))
        with pytest.raises(UndefinedQBERError):
            qber(s)

    @given(st.floats(min_value=0.0, max_value=400.0))
    def test_bounded(self, length):
        e = qber(si_scenario(length))
        assert si_scenario().baseline_error <= e <= 0.5

    def test_monotone_in_length(self):
        lengths = [i * 5.0 for i in range(81)]
        errors = [qber(si_scenario(length)) for length in lengths]
        assert all(b >= a - 1e-15 for a, b in zip(errors, errors[1:]))

    def test_long_distance_limit(self):
        assert qber(si_scenario(2000.0)) == pytest.approx(0.5, abs=1e-9)


class TestScaleLaw:
    @given(
        st.floats(min_value=0.0, max_value=150.0),
        st.floats(min_value=0.0, max_value=150.0),
    )
    def test_signal_factorizes_over_distance(self, l1, l2):
        s = si_scenario(l1 + l2)
        expected = p_signal(si_scenario(l1)) * 10.0 ** (-0.21 * l2 / 10.0)
        assert p_signal(s) == pytest.approx(expected, rel=1e-12)


class TestScenarioValidation:
    @pytest.mark.parametrize(
        "override",
        [
            {"mu": 0.0},
            {"mu": -0.1},
            {"alpha_db_per_km": -0.1},
            {"length_km": -1.0},
            {"clock_hz": 0.0},
            {"baseline_error": 0.5},
            {"baseline_error": -0.01},
            {"delay_n": 0},
            {"n_detectors": 0},
            {"dead_time_delta": -1.0},
        ],
    )
    def test_rejects(self, override):
        with pytest.raises(ModelDomainError):
            si_scenario(**override)

    def test_default_delta_is_inverse_detector_count(self):
        assert si_scenario().effective_dead_time_delta == 0.5
        assert si_scenario(n_detectors=4).effective_dead_time_delta == 0.25
        assert si_scenario(dead_time_delta=1.0).effective_dead_time_delta == 1.0

    def test_replace_for_sweeps(self):
        s = si_scenario(100.0)
        assert replace(s, length_km=50.0).length_km == 50.0

    def test_qber_nan_in_stats_when_zero_click(self):
        s = si_scenario(detector=toy_detector(efficiency=0.0))
        assert math.isnan(channel_stats(s).qber)
