"""
Тесты слияния индексов
"""

import numpy as np
import pytest

from bele_iqa.calibration import (
    FusionCoefficients,
    FusionSample,
    cross_sensitivity_report,
    fit_fusion,
    predict,
)
from bele_iqa.calibration.fusion import huber_irls
from bele_iqa.core.exceptions import DegenerateInputError, DomainError, RankDeficiencyError

TRUTH = (3.0, 0.8, -0.2)


def _samples(n=50, seed=0, outlier=None):
    rng = np.random.default_rng(seed)
    e = rng.uniform(0, 100, n)
    t = rng.uniform(20, 60, n)
    y = TRUTH[0] + TRUTH[1] * e + TRUTH[2] * t
    if outlier is not None:
        y[outlier] += 60.0
    return [FusionSample(e=float(a), t=float(b), dmos=float(c)) for a, b, c in zip(e, t, y)]


class TestFitFusion:
    """Тесты подгонки коэффициентов слияния"""

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_exact_recovery(self, seed):
        """Тест точного восстановления аффинного генератора"""
        coeffs = fit_fusion(_samples(seed=seed))
        assert coeffs.d0 == pytest.approx(TRUTH[0], abs=1e-9)
        assert coeffs.d1_e == pytest.approx(TRUTH[1], abs=1e-9)
        assert coeffs.d1_t == pytest.approx(TRUTH[2], abs=1e-9)
        assert coeffs.n_samples == 50
        assert coeffs.residual_rmse < 1e-9

    def test_gross_outlier(self):
        """Тест устойчивости к одному грубому выбросу"""
        coeffs = fit_fusion(_samples(outlier=17))
        assert coeffs.d0 == pytest.approx(TRUTH[0], abs=1e-2)
        assert coeffs.d1_e == pytest.approx(TRUTH[1], abs=1e-2)
        assert coeffs.d1_t == pytest.approx(TRUTH[2], abs=1e-2)

    def test_ordinary_least_squares_misses_outlier(self):
        """Тест выброса в центре плана: МНК смещает D0, Хьюбер нет"""
        rng = np.random.default_rng(7)
        e = rng.uniform(0, 100, 49)
        t = rng.uniform(20, 60, 49)
        e = np.append(e, e.mean())
        t = np.append(t, t.mean())
        y = TRUTH[0] + TRUTH[1] * e + TRUTH[2] * t
        y[-1] += 60.0
        x = np.column_stack([np.ones_like(e), e, t])
        ols = np.linalg.lstsq(x, y, rcond=None)[0]
        assert np.max(np.abs(ols - np.array(TRUTH))) > 5e-2
        coeffs = fit_fusion([FusionSample(e=float(a), t=float(b), dmos=float(c))
                             for a, b, c in zip(e, t, y)])
        assert [coeffs.d0, coeffs.d1_e, coeffs.d1_t] == pytest.approx(list(TRUTH), abs=1e-2)

    def test_affine_equivariance(self):
        """Тест сдвига целей на c: меняется только D0"""
        rng = np.random.default_rng(12)
        e = rng.uniform(0, 100, 60)
        t = rng.uniform(20, 60, 60)
        y = TRUTH[0] + TRUTH[1] * e + TRUTH[2] * t + rng.normal(0, 2.0, 60)
        y[[3, 30]] += (40.0, -25.0)
        shift = 17.5
        base = fit_fusion([FusionSample(e=float(a), t=float(b), dmos=float(c))
                           for a, b, c in zip(e, t, y)])
        moved = fit_fusion([FusionSample(e=float(a), t=float(b), dmos=float(c + shift))
                            for a, b, c in zip(e, t, y)])
        assert moved.d0 == pytest.approx(base.d0 + shift, abs=1e-9)
        assert moved.d1_e == pytest.approx(base.d1_e, abs=1e-9)
        assert moved.d1_t == pytest.approx(base.d1_t, abs=1e-9)

    def test_too_few_samples(self):
        """Тест недостаточного числа образцов"""
        with pytest.raises(DegenerateInputError):
            fit_fusion(_samples(n=2))

    def test_collinear(self):
        """Тест постоянного T: вырожденная матрица плана"""
        samples = [FusionSample(e=float(i), t=30.0, dmos=float(2 * i)) for i in range(10)]
        with pytest.raises(RankDeficiencyError):
            fit_fusion(samples)

    def test_non_finite_sample(self):
        """Тест неконечного образца"""
        with pytest.raises(DomainError):
            FusionSample(e=float("nan"), t=1.0, dmos=1.0)

    def test_huber_weights_outlier(self):
        """Тест IRLS на прямой с выбросом"""
        x = np.column_stack([np.ones(20), np.arange(20.0)])
        y = 1.0 + 2.0 * np.arange(20.0)
        y[5] = 500.0
        beta = huber_irls(x, y)
        assert beta == pytest.approx([1.0, 2.0], abs=1e-6)


class TestPredict:
    """Тесты предсказания"""

    def test_affine(self):
        """Тест аффинной формулы"""
        coeffs = FusionCoefficients(d0=2.0, d1_e=0.5, d1_t=-0.1)
        assert predict(coeffs, 40.0, 30.0) == pytest.approx(19.0)

    def test_clamped(self):
        """Тест среза в [0, 100]"""
        coeffs = FusionCoefficients(d0=-10.0, d1_e=2.0, d1_t=0.0)
        assert predict(coeffs, 1.0, 0.0) == 0.0
        assert predict(coeffs, 90.0, 0.0) == 100.0

    def test_non_finite(self):
        """Тест неконечных индексов"""
        with pytest.raises(DomainError):
            predict(FusionCoefficients(), float("inf"), 1.0)

    def test_save_load(self, tmp_path):
        """Тест сохранения в JSON"""
        coeffs = fit_fusion(_samples())
        loaded = FusionCoefficients.load(coeffs.save(tmp_path / "fusion.json"))
        assert loaded == coeffs


class TestCrossSensitivity:
    """Тесты диагностики перекрестной чувствительности"""

    def test_affine_has_no_interaction(self):
        """Тест нулевой доли взаимодействия для аффинных данных"""
        report = cross_sensitivity_report(_samples())
        assert report.interaction_ratio < 1e-10
        assert report.r_squared == pytest.approx(1.0)

    def test_product_has_interaction(self):
        """Тест заметной доли для мультипликативных данных"""
        rng = np.random.default_rng(4)
        e = rng.uniform(-1, 1, 40)
        t = rng.uniform(-1, 1, 40)
        samples = [FusionSample(e=float(a), t=float(b), dmos=float(a * b))
                   for a, b in zip(e, t)]
        assert cross_sensitivity_report(samples).interaction_ratio > 0.5

    def test_requires_ten_samples(self):
        """Тест минимального размера выборки"""
        with pytest.raises(DegenerateInputError):
            cross_sensitivity_report(_samples(n=9))
