"""
Тесты оценки вычислительной сложности
"""

import math

import pytest

from bele_iqa.core.exceptions import DomainError
from bele_iqa.evaluation import flops_estimate, flops_logistic, format_gflops


class TestFlops:
    """Тесты оценок FLOP"""

    def test_logistic_thousand(self):
        """Тест (15N + 5)·250000 при N = 1000"""
        value = flops_logistic(1000)
        assert value == 3_751_250_000
        assert format_gflops(value) == "3.75 G"

    def test_pixel_term(self):
        """Тест слагаемого по пикселям: 224·224·3"""
        assert flops_estimate(0, 1, 0, 1, 1) == 150528

    def test_spline_term(self):
        """Тест слагаемого построения кривой"""
        expected = 3 * 100 + 100 * (math.log(8) + 3 + 1)
        assert flops_estimate(100, 8, 3, 0, 0) == pytest.approx(expected)

    @pytest.mark.parametrize("args", [(-1, 1, 0, 0, 0), (1, 1, -1, 0, 0), (1, 1, 0, -1, 0),
                                      (1, 1, 0, 0, -2.0), (10, 0.5, 1, 0, 0)])
    def test_invalid(self, args):
        """Тест недопустимых значений"""
        with pytest.raises(DomainError):
            flops_estimate(*args)

    def test_logistic_invalid(self):
        """Тест N < 1"""
        with pytest.raises(DomainError):
            flops_logistic(0)
