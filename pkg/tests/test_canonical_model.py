"""
Тесты канонической модели размытия
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bele_iqa.core import (
    CanonicalParams,
    ViewerGeometry,
    canonical_dmos,
    certainty_threshold,
    clamp_dmos,
    equivalent_blur,
    pfi_blur_ratio,
    positional_uncertainty,
)
from bele_iqa.core.exceptions import DomainError, SaturationError


class TestViewerGeometry:
    """Тесты геометрии просмотра"""

    def test_defaults(self):
        """Тест значений по умолчанию"""
        geometry = ViewerGeometry()
        assert geometry.tau == 1.0
        assert geometry.s_g_pixels == pytest.approx(2.5)

    def test_s_g_pixels(self):
        """Тест перевода угловых минут в пиксели"""
        assert ViewerGeometry(pixels_per_degree=120, s_g_arcmin=1.5).s_g_pixels == pytest.approx(3.0)

    @pytest.mark.parametrize("field", ["tau", "pixels_per_degree", "s_g_arcmin"])
    @pytest.mark.parametrize("value", [0.0, -1.0, float("nan"), float("inf")])
    def test_invalid(self, field, value):
        """Тест недопустимых параметров"""
        with pytest.raises(DomainError):
            ViewerGeometry(**{field: value})


class TestCanonicalParams:
    """Тесты параметров модели"""

    def test_anchor(self):
        """Тест якоря 100·Q"""
        assert CanonicalParams(q=0.8).anchor == pytest.approx(80.0)

    @pytest.mark.parametrize("q,tau", [(0, 1), (1, 0), (-1, 1), (float("nan"), 1)])
    def test_invalid(self, q, tau):
        """Тест недопустимых Q и τ"""
        with pytest.raises(DomainError):
            CanonicalParams(q=q, tau=tau)


class TestCanonicalDmos:
    """Тесты канонической оценки DMOS"""

    def test_zero_blur(self, params):
        """Тест нулевого размытия"""
        assert canonical_dmos(params, 0.0) == 0.0

    def test_reference_value(self):
        """Тест значения при ξ = τ²: 100·Q·(1 − 1/√2)"""
        params = CanonicalParams(q=1.0, tau=1.0)
        assert canonical_dmos(params, 1.0) == pytest.approx(100 * (1 - 1 / math.sqrt(2)), abs=1e-12)

    def test_q_scaling(self):
        """Тест линейности по Q"""
        a = canonical_dmos(CanonicalParams(q=1.0, tau=1.3), 2.0)
        b = canonical_dmos(CanonicalParams(q=0.5, tau=1.3), 2.0)
        assert b == pytest.approx(0.5 * a, rel=1e-12)

    def test_small_blur_precision(self, params):
        """Тест точности при малом ξ: d ≈ 50·Q·ξ²"""
        xi = 1e-6
        assert canonical_dmos(params, xi) == pytest.approx(50.0 * xi * xi, rel=1e-6)

    def test_array_input(self, params):
        """Тест поэлементного вычисления"""
        xi = np.array([0.0, 0.5, 1.0, 4.0])
        out = canonical_dmos(params, xi)
        assert isinstance(out, np.ndarray)
        assert out.shape == xi.shape
        assert np.all(np.diff(out) > 0)

    def test_scalar_returns_float(self, params):
        """Тест типа результата для скаляра"""
        assert isinstance(canonical_dmos(params, 2.0), float)

    def test_negative_blur(self, params):
        """Тест отрицательного ξ"""
        with pytest.raises(DomainError):
            canonical_dmos(params, -0.1)

    @given(xi=st.floats(0.0, 1e3), q=st.floats(0.1, 10.0), tau=st.floats(0.2, 5.0))
    def test_bounded(self, xi, q, tau):
        """Тест диапазона [0, 100·Q)"""
        params = CanonicalParams(q=q, tau=tau)
        d = canonical_dmos(params, xi)
        assert 0.0 <= d < params.anchor

    @given(a=st.floats(0.0, 50.0), b=st.floats(0.0, 50.0))
    def test_monotone(self, a, b):
        """Тест неубывания по ξ"""
        params = CanonicalParams(q=1.0, tau=1.0)
        lo, hi = sorted((a, b))
        assert canonical_dmos(params, lo) <= canonical_dmos(params, hi)


class TestEquivalentBlur:
    """Тесты обращения модели"""

    @settings(max_examples=1000)
    @given(q=st.floats(0.2, 5.0), tau=st.floats(0.5, 2.0), xi=st.floats(1e-3, 20.0))
    def test_round_trip(self, q, tau, xi):
        """Тест восстановления ξ после прямого и обратного преобразования"""
        params = CanonicalParams(q=q, tau=tau)
        recovered = equivalent_blur(canonical_dmos(params, xi), params)
        assert abs(recovered - xi) <= 1e-9 * xi

    def test_round_trip_grid(self):
        """Тест обращения на сетке из 1000 точек"""
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(1000):
            params = CanonicalParams(q=rng.uniform(0.2, 5.0), tau=rng.uniform(0.5, 2.0))
            xi = float(np.exp(rng.uniform(np.log(1e-3), np.log(20.0))))
            recovered = equivalent_blur(canonical_dmos(params, xi), params)
            worst = max(worst, abs(recovered - xi) / xi)
        assert worst <= 1e-9

    def test_zero(self, params):
        """Тест нулевого DMOS"""
        assert equivalent_blur(0.0, params) == 0.0

    @pytest.mark.parametrize("dmos", [100.0, 150.0])
    def test_saturation(self, params, dmos):
        """Тест DMOS не меньше якоря"""
        with pytest.raises(SaturationError):
            equivalent_blur(dmos, params)

    def test_saturation_is_domain_error(self, params):
        """Тест иерархии исключений"""
        with pytest.raises(ValueError):
            equivalent_blur(100.0, params)

    def test_tau_squared_scaling(self):
        """Тест масштабирования ξ_eq как τ²"""
        a = equivalent_blur(40.0, CanonicalParams(q=1.0, tau=1.0))
        b = equivalent_blur(40.0, CanonicalParams(q=1.0, tau=2.0))
        assert b == pytest.approx(4.0 * a, rel=1e-12)


class TestClampDmos:
    """Тесты среза DMOS перед обращением"""

    def test_clamps_above_ceiling(self, params, caplog):
        """Тест среза с предупреждением"""
        with caplog.at_level("WARNING"):
            value = clamp_dmos(100.0, params)
        assert value == pytest.approx(99.9)
        assert "срезан" in caplog.text
        assert math.isfinite(equivalent_blur(value, params))

    def test_passes_through(self, params):
        """Тест значения внутри диапазона"""
        assert clamp_dmos(42.0, params) == 42.0

    def test_negative_to_zero(self, params):
        """Тест отрицательного значения"""
        assert clamp_dmos(-3.0, params) == 0.0


class TestHelpers:
    """Тесты вспомогательных функций модели"""

    @given(xi=st.floats(0.0, 1e3))
    def test_uncertainty_complements_threshold(self, xi):
        """Тест тождества ε(ξ) + M̄(ξ) = 1"""
        assert positional_uncertainty(xi) + certainty_threshold(xi) == pytest.approx(1.0, abs=1e-12)

    def test_threshold_values(self):
        """Тест порога M̄"""
        assert certainty_threshold(0.0) == 1.0
        assert certainty_threshold(0.5) == pytest.approx(1 / math.sqrt(1.25))

    def test_pfi_ratio(self):
        """Тест доли информации Фишера"""
        assert pfi_blur_ratio(2.0, 0.0) == 1.0
        assert pfi_blur_ratio(2.0, 2.0) == pytest.approx(0.5)
        assert pfi_blur_ratio(1.0, 2.0) == pytest.approx(0.2)

    @pytest.mark.parametrize("s_g,s_b", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5)])
    def test_pfi_ratio_invalid(self, s_g, s_b):
        """Тест недопустимых разбросов"""
        with pytest.raises(DomainError):
            pfi_blur_ratio(s_g, s_b)
