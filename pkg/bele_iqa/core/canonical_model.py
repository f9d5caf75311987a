"""
Каноническая модель размытия: DMOS как функция нормированного размытия

Все функции скалярные, но принимают и numpy-массивы (поэлементно).
Дисперсия шума сетчатки σ_V принята равной 1 и сокращается во всех отношениях.
"""

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import DomainError, SaturationError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

S_G_ARCMIN_DEFAULT = 2.5
DMOS_CLAMP_FRACTION = 0.999


@dataclass(frozen=True)
class ViewerGeometry:
    """
    Геометрия просмотра

    Args:
        tau: нормированное расстояние просмотра (1.0 = опорное)
        pixels_per_degree: пикселей на градус угла зрения
        s_g_arcmin: разброс гауссианы VRF в угловых минутах
    """

    tau: float = 1.0
    pixels_per_degree: float = 60.0
    s_g_arcmin: float = S_G_ARCMIN_DEFAULT

    def __post_init__(self):
        for name in ("tau", "pixels_per_degree", "s_g_arcmin"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(f"Параметр геометрии {name} должен быть > 0, получено {value}")
        if not math.isfinite(self.s_g_pixels):
            raise DomainError("Разброс s_g в пикселях не конечен")

    @property
    def s_g_pixels(self) -> float:
        """Разброс VRF в пикселях при опорном расстоянии"""
        return self.pixels_per_degree * (self.s_g_arcmin / 60.0)


@dataclass(frozen=True)
class CanonicalParams:
    """Параметры канонической модели (Q, τ)"""

    q: float = 1.0
    tau: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.q) or self.q <= 0:
            raise DomainError(f"Q должен быть > 0, получено {self.q}")
        if not math.isfinite(self.tau) or self.tau <= 0:
            raise DomainError(f"τ должен быть > 0, получено {self.tau}")

    @property
    def anchor(self) -> float:
        """Верхняя граница шкалы DMOS: 100·Q"""
        return 100.0 * self.q


def _prepare(xi: ArrayLike, name: str = "xi") -> np.ndarray:
    arr = np.asarray(xi, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError(f"{name} должно быть конечным и ≥ 0, получено {xi}")
    return arr


def _out(arr: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(arr) if np.ndim(like) == 0 else arr


def canonical_dmos(params: CanonicalParams, xi: ArrayLike) -> ArrayLike:
    """
    Каноническая оценка DMOS: d = 100·Q·(1 − 1/√(1 + ξ²/τ⁴))

    Args:
        params: параметры модели
        xi: нормированное размытие ξ ≥ 0

    Returns:
        DMOS в диапазоне [0, 100·Q)
    """
    arr = _prepare(xi)
    u = arr * arr / params.tau ** 4
    # 1 − (1+u)^(−1/2) без потери точности при малых u
    loss = -np.expm1(-0.5 * np.log1p(u))
    return _out(params.anchor * loss, xi)


def positional_uncertainty(xi: ArrayLike) -> ArrayLike:
    """Потеря позиционной точности ε(ξ) = 1 − √(1/(1+ξ²))"""
    arr = _prepare(xi)
    return _out(-np.expm1(-0.5 * np.log1p(arr * arr)), xi)


def certainty_threshold(xi: ArrayLike) -> ArrayLike:
    """Порог естественного зрения M̄ = √(1/(1+ξ²))"""
    arr = _prepare(xi)
    return _out(1.0 / np.sqrt(1.0 + arr * arr), xi)


def pfi_blur_ratio(s_g: float, s_b: float) -> float:
    """
    Доля позиционной информации Фишера, сохраняемая при гауссовом размытии

    Args:
        s_g: разброс VRF (> 0)
        s_b: разброс размытия (≥ 0)

    Returns:
        s_g² / (s_g² + s_b²)
    """
    if not math.isfinite(s_g) or s_g <= 0:
        raise DomainError(f"s_g должен быть > 0, получено {s_g}")
    if not math.isfinite(s_b) or s_b < 0:
        raise DomainError(f"s_b должен быть ≥ 0, получено {s_b}")
    return s_g * s_g / (s_g * s_g + s_b * s_b)


def equivalent_blur(dmos: ArrayLike, params: CanonicalParams) -> ArrayLike:
    """
    Обращение канонической модели: ξ_eq = τ²·√(1/(1 − DMOS/(100·Q))² − 1)

    Args:
        dmos: оценка в [0, 100·Q)
        params: параметры модели

    Returns:
        Эквивалентное нормированное размытие

    Raises:
        SaturationError: если DMOS ≥ 100·Q
    """
    arr = np.asarray(dmos, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError(f"DMOS должен быть конечным и ≥ 0, получено {dmos}")
    if np.any(arr >= params.anchor):
        raise SaturationError(f"DMOS {dmos} не меньше якоря 100·Q = {params.anchor}")
    r = arr / params.anchor
    # 1/(1−r)² − 1 = r(2−r)/(1−r)²
    xi = params.tau ** 2 * np.sqrt(r * (2.0 - r)) / (1.0 - r)
    return _out(xi, dmos)


def clamp_dmos(dmos: float, params: CanonicalParams,
               fraction: float = DMOS_CLAMP_FRACTION) -> float:
    """
    Привести DMOS в область обращения: [0, fraction·100·Q]

    Args:
        dmos: исходная оценка
        params: параметры модели
        fraction: доля якоря, выше которой оценка срезается

    Returns:
        Срезанная оценка
    """
    ceiling = fraction * params.anchor
    if dmos > ceiling:
        logger.warning(f"DMOS {dmos:.4f} срезан до {ceiling:.4f} перед обращением модели")
        return ceiling
    return max(0.0, float(dmos))
