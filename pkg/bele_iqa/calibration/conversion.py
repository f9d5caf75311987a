"""
Монотонная кривая преобразования ζ → ξ_eq
"""

import logging
from pathlib import Path
from typing import List, NamedTuple, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, model_validator
from scipy.interpolate import PchipInterpolator, PPoly

from ..core.canonical_model import CanonicalParams, canonical_dmos
from ..core.exceptions import DomainError, OrderingError

logger = logging.getLogger(__name__)


class ConversionValue(NamedTuple):
    """Значение кривой и флаг срезания за пределами узлов"""

    xi: float
    clamped: bool


class ConversionCurve(BaseModel):
    """
    Кусочно-кубическая монотонная кривая

    coefficients хранит матрицу 4 × (n−1) коэффициентов полиномов
    по степеням (x − x_i), от старшей к младшей.
    """

    knots_zeta: List[float]
    knots_xi: List[float]
    coefficients: List[List[float]]

    @model_validator(mode="after")
    def _check(self):
        _validate_knots(self.knots_zeta, self.knots_xi)
        if len(self.coefficients) != 4 or any(len(row) != len(self.knots_zeta) - 1
                                              for row in self.coefficients):
            raise OrderingError("Размер матрицы коэффициентов не согласован с узлами")
        return self

    def _poly(self) -> PPoly:
        return PPoly(np.asarray(self.coefficients, dtype=float),
                     np.asarray(self.knots_zeta, dtype=float), extrapolate=False)

    def evaluate(self, zeta: float) -> ConversionValue:
        """ξ_eq для значения метрики ζ; вне диапазона крайний узел с флагом"""
        if zeta <= self.knots_zeta[0]:
            return ConversionValue(self.knots_xi[0], zeta < self.knots_zeta[0])
        if zeta >= self.knots_zeta[-1]:
            return ConversionValue(self.knots_xi[-1], zeta > self.knots_zeta[-1])
        value = float(self._poly()(zeta))
        return ConversionValue(max(0.0, value), False)

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"Кривая преобразования сохранена: {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ConversionCurve":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))


def _validate_knots(zeta: Sequence[float], xi: Sequence[float]) -> None:
    z = np.asarray(zeta, dtype=float)
    x = np.asarray(xi, dtype=float)
    if z.size < 2 or z.shape != x.shape:
        raise OrderingError("Нужно не менее двух узлов одинаковой длины")
    if not (np.all(np.isfinite(z)) and np.all(np.isfinite(x))):
        raise OrderingError("Узлы должны быть конечными")
    if np.any(np.diff(z) <= 0):
        raise OrderingError("Абсциссы узлов должны строго возрастать")
    if np.any(np.diff(x) < 0) or np.any(x < 0):
        raise OrderingError("Ординаты узлов должны быть неотрицательны и не убывать")


def build_conversion(knots: Sequence[Tuple[float, float]]) -> ConversionCurve:
    """
    Построить монотонную кривую по узлам (ζ, ξ_eq)

    Наклоны ограничены условиями Фрича-Карлсона (PCHIP).

    Args:
        knots: пары (ζ, ξ_eq), ζ строго возрастает, ξ_eq не убывает

    Returns:
        Кривая, точная в узлах
    """
    knots = list(knots)
    zeta = [float(k[0]) for k in knots]
    xi = [float(k[1]) for k in knots]
    _validate_knots(zeta, xi)
    interp = PchipInterpolator(np.asarray(zeta), np.asarray(xi), extrapolate=False)
    curve = ConversionCurve(knots_zeta=zeta, knots_xi=xi, coefficients=interp.c.tolist())
    logger.debug(f"Кривая преобразования: {len(zeta)} узлов, ζ ∈ [{zeta[0]}, {zeta[-1]}]")
    return curve


def eval_conversion(curve: ConversionCurve, zeta: float) -> ConversionValue:
    """Значение кривой в точке ζ (см. ConversionCurve.evaluate)"""
    return curve.evaluate(zeta)


def conversion_from_canonical(params: CanonicalParams, xi_max: float = 20.0,
                              n_knots: int = 200) -> ConversionCurve:
    """
    Кривая по замкнутой канонической модели

    Узлы по ξ сгущены у нуля, где ξ(ζ) ведет себя как корень.

    Args:
        params: параметры канонической модели
        xi_max: правая граница по ξ
        n_knots: число узлов, кроме нулевого

    Returns:
        Кривая ζ → ξ_eq
    """
    if xi_max <= 0 or n_knots < 2:
        raise DomainError("Нужны xi_max > 0 и не менее двух узлов")
    xi = np.concatenate([[0.0], np.geomspace(1e-3, xi_max, n_knots)])
    zeta = canonical_dmos(params, xi)
    return build_conversion(zip(zeta.tolist(), xi.tolist()))
