import math

import pytest
from hypothesis import given, strategies as st

from dpsrk.detector import (
    PPLN_UPCONVERTER,
    SUPPORTED_PUMP_MAX_MW,
    DarkConvention,
    DetectorMode,
    DetectorSpec,
    UpConversionCurve,
    dark_per_window,
    make_detector_from_upconversion,
    nep,
    optimize_pump,
    up_dark_rate,
    up_efficiency,
)
from dpsrk.errors import ModelDomainError, ModelRangeError, NoFeasiblePointError

CURVE = PPLN_UPCONVERTER
FIRST_MAX_PUMP = (math.pi / 2) ** 2 / CURVE.a2


class TestUpEfficiency:
    def test_zero_pump(self):
        assert up_efficiency(CURVE, 0.0) == 0.0

    def test_first_maximum(self):
        # analytic maximum of the sin^2 fit
        assert up_efficiency(CURVE, FIRST_MAX_PUMP) == pytest.approx(0.465, abs=1e-12)

    def test_known_operating_point(self):
        # pump solving eta = 0.075, found with a 50-digit bisection oracle
        assert up_efficiency(CURVE, 0.0021416331133230129) == pytest.approx(0.075, rel=1e-9)
        assert up_efficiency(CURVE, 0.002142) == pytest.approx(0.07501210830197737, rel=1e-12)

    def test_negative_pump_rejected(self):
        with pytest.raises(ModelDomainError):
            up_efficiency(CURVE, -0.1)

    def test_beyond_supported_domain_rejected(self):
        with pytest.raises(ModelDomainError):
            up_efficiency(CURVE, SUPPORTED_PUMP_MAX_MW + 1.0)

    @given(st.floats(min_value=0.0, max_value=SUPPORTED_PUMP_MAX_MW))
    def test_bounded_by_a1(self, pump):
        eta = up_efficiency(CURVE, pump)
        assert 0.0 <= eta <= CURVE.a1


class TestUpDarkRate:
    def test_zero_pump_is_b0(self):
        assert up_dark_rate(CURVE, 0.0) == 50.0

    def test_at_10_mw(self):
        # 50 + 8264 + 11030 - 403 + 6.5
        assert up_dark_rate(CURVE, 10.0) == pytest.approx(18947.5, rel=1e-9)

    def test_at_1_mw(self):
        assert up_dark_rate(CURVE, 1.0) == pytest.approx(986.29765, rel=1e-12)

    def test_negative_pump_rejected(self):
        with pytest.raises(ModelDomainError):
            up_dark_rate(CURVE, -1.0)

    def test_negative_fit_rejected_at_construction(self):
        with pytest.raises(ModelRangeError):
            UpConversionCurve(
                a1=0.465, a2=79.75, b0=10.0, b1=-100.0, b2=0.0, b3=0.0, b4=0.0,
                bandwidth_hz=50e9,
            )


class TestDarkPerWindow:
    def test_per_mode_quoted_point(self):
        d = dark_per_window(6.4e3, DarkConvention.PER_MODE, 50e9)
        assert d == pytest.approx(1.28e-7, rel=1e-12)

    def test_per_gate(self):
        assert dark_per_window(1e4, DarkConvention.PER_GATE, 1e9) == pytest.approx(1e-5, rel=1e-12)

    def test_zero_rate(self):
        assert dark_per_window(0.0, DarkConvention.PER_MODE, 50e9) == 0.0

    def test_zero_divisor_rejected(self):
        with pytest.raises(ModelDomainError):
            dark_per_window(1e4, DarkConvention.PER_GATE, 0.0)

    def test_negative_rate_rejected(self):
        with pytest.raises(ModelDomainError):
            dark_per_window(-1.0, DarkConvention.PER_MODE, 50e9)

    @given(
        st.floats(min_value=1e-3, max_value=1e9),
        st.floats(min_value=1e3, max_value=1e12),
    )
    def test_doubling_bit_rate_halves_exactly(self, rate, bit_rate):
        full = dark_per_window(rate, DarkConvention.PER_GATE, bit_rate)
        half = dark_per_window(rate, DarkConvention.PER_GATE, 2.0 * bit_rate)
        assert half == full / 2.0


class TestNep:
    def test_quoted_operating_point(self):
        assert nep(6.4e3, 0.075) == pytest.approx(1508.4944665313014, rel=1e-12)

    def test_zero_dark(self):
        assert nep(0.0, 0.3) == 0.0

    def test_simple_value(self):
        assert nep(2.0, 1.0) == pytest.approx(2.0, rel=1e-15)

    def test_zero_efficiency_rejected(self):
        with pytest.raises(ModelDomainError):
            nep(100.0, 0.0)

    @given(st.floats(min_value=1.0, max_value=1e6), st.floats(min_value=0.01, max_value=0.99))
    def test_monotone(self, dark, eta):
        assert nep(dark, eta) > nep(dark, eta + 0.01)
        assert nep(dark + 1.0, eta) > nep(dark, eta)


class TestOptimizePump:
    def test_matches_grid_oracle(self):
        # brute force over the same range at 1e5 points
        lo, hi = 1e-4, 0.5
        best_p, best_v = lo, math.inf
        for i in range(100000):
            p = lo + (hi - lo) * i / 99999
            eta = up_efficiency(CURVE, p)
            if eta <= 0.0:
                continue
            v = math.sqrt(2.0 * up_dark_rate(CURVE, p)) / eta
            if v < best_v:
                best_p, best_v = p, v
        found = optimize_pump(CURVE, (lo, hi))
        assert found.pump_mw == pytest.approx(best_p, abs=1e-4)
        assert found.efficiency == pytest.approx(up_efficiency(CURVE, found.pump_mw))
        assert found.dark_rate_hz == pytest.approx(up_dark_rate(CURVE, found.pump_mw))

    def test_constant_dark_rate_optimum_at_efficiency_peak(self):
        flat = UpConversionCurve(
            a1=0.465, a2=79.75, b0=50.0, b1=0.0, b2=0.0, b3=0.0, b4=0.0, bandwidth_hz=50e9
        )
        found = optimize_pump(flat, (0.001, 0.1))
        assert found.pump_mw == pytest.approx(FIRST_MAX_PUMP, abs=1e-4)

    def test_degenerate_range(self):
        found = optimize_pump(CURVE, (0.02, 0.02))
        assert found.pump_mw == 0.02

    def test_zero_efficiency_everywhere(self):
        dead = UpConversionCurve(
            a1=0.465, a2=0.0, b0=50.0, b1=0.0, b2=0.0, b3=0.0, b4=0.0, bandwidth_hz=50e9
        )
        with pytest.raises(NoFeasiblePointError):
            optimize_pump(dead, (0.0, 1.0))

    def test_inverted_range_rejected(self):
        with pytest.raises(ModelDomainError):
            optimize_pump(CURVE, (0.5, 0.1))


class TestMakeDetector:
    def test_zero_pump(self):
        spec = make_detector_from_upconversion(CURVE, 0.0, dead_time=45e-9, receiver_loss_db=2.1)
        assert spec.efficiency == 0.0
        assert spec.dark_per_window == pytest.approx(CURVE.b0 / CURVE.bandwidth_hz, rel=1e-15)
        assert spec.mode is DetectorMode.NONGATED

    def test_composes_constituent_operations(self):
        point = optimize_pump(CURVE, (1e-4, 0.5))
        spec = make_detector_from_upconversion(
            CURVE, point.pump_mw, dead_time=45e-9, receiver_loss_db=2.1
        )
        assert spec.efficiency == up_efficiency(CURVE, point.pump_mw)
        assert spec.dark_per_window == dark_per_window(
            up_dark_rate(CURVE, point.pump_mw), DarkConvention.PER_MODE, CURVE.bandwidth_hz
        )
        assert spec.dead_time == 45e-9
        assert spec.receiver_loss_db == 2.1

    def test_direct_si_preset_values(self):
        spec = DetectorSpec(
            name="si", efficiency=0.35, dark_per_window=3.5e-8, dead_time=45e-9,
            receiver_loss_db=2.1, mode=DetectorMode.NONGATED,
        )
        assert spec.efficiency == 0.35
        assert spec.dark_per_window == 3.5e-8


class TestDetectorSpecValidation:
    @pytest.mark.parametrize(
        "field,value",
        [
            ("efficiency", -0.1),
            ("efficiency", 1.1),
            ("dark_per_window", -1e-9),
            ("dark_per_window", 0.5),
            ("dead_time", -1e-9),
            ("receiver_loss_db", -0.5),
        ],
    )
    def test_rejects_out_of_range(self, field, value):
        params = dict(
            name="x", efficiency=0.3, dark_per_window=1e-6, dead_time=0.0,
            receiver_loss_db=0.0, mode=DetectorMode.GATED,
        )
        params[field] = value
        with pytest.raises(ModelDomainError):
            DetectorSpec(**params)
