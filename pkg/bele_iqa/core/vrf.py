"""
Виртуальное рецептивное поле (VRF): комплексные визуальные карты,
энергия градиента и гауссово размытие
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage, signal

from .canonical_model import ViewerGeometry
from .exceptions import DimensionError, DomainError

logger = logging.getLogger(__name__)

# Порог переключения прямой свертки на частотную
DIRECT_SIGMA_LIMIT = 8.0
WINDOW_SHAPES = ("gaussian", "boxcar", "raised_cosine")


@dataclass(frozen=True, eq=False)
class LuminanceImage:
    """Поле яркости со значениями в [0, 1]"""

    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2:
            raise DimensionError(f"Ожидалось двумерное изображение, получено {samples.ndim}D")
        if not np.all(np.isfinite(samples)):
            raise DomainError("Изображение содержит неконечные значения")
        if samples.size and (samples.min() < 0.0 or samples.max() > 1.0):
            raise DomainError("Значения яркости должны лежать в [0, 1]")
        object.__setattr__(self, "samples", samples)

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def shape(self):
        return self.samples.shape


@dataclass(frozen=True, eq=False)
class VisualMap:
    """
    Комплексная визуальная карта

    Действительная часть: производная по x (столбцы),
    мнимая: производная по y (строки, вниз).
    """

    values: np.ndarray
    sigma_pixels: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 2:
            raise DimensionError("Визуальная карта должна быть двумерной")
        if not np.all(np.isfinite(values)):
            raise DomainError("Визуальная карта содержит неконечные значения")
        object.__setattr__(self, "values", values)

    @property
    def shape(self):
        return self.values.shape

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


@dataclass(frozen=True)
class KernelSpec:
    """Гауссов разброс VRF и радиус усечения в пикселях"""

    sigma_pixels: float
    radius: Optional[int] = None

    def __post_init__(self):
        if not math.isfinite(self.sigma_pixels) or self.sigma_pixels <= 0:
            raise DomainError(f"sigma_pixels должен быть > 0, получено {self.sigma_pixels}")
        minimum = int(math.ceil(3.0 * self.sigma_pixels))
        if self.radius is None:
            object.__setattr__(self, "radius", minimum)
        elif self.radius < minimum:
            raise DomainError(f"Радиус {self.radius} меньше ⌈3σ⌉ = {minimum}")


@dataclass(frozen=True, eq=False)
class WindowSpec:
    """Окно w(q) с нормировкой Σw² = 1"""

    weights: np.ndarray
    radius: int
    shape: str = "gaussian"
    profile: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        size = 2 * self.radius + 1
        if weights.shape != (size, size):
            raise DimensionError(f"Окно должно иметь размер {size}×{size}")
        if np.any(weights < 0):
            raise DomainError("Веса окна должны быть неотрицательны")
        if abs(np.sum(weights ** 2) - 1.0) > 1e-9:
            raise DomainError("Окно не нормировано: Σw² ≠ 1")
        object.__setattr__(self, "weights", weights)


def kernel_sigma(geometry: ViewerGeometry) -> float:
    """Разброс ядра с учетом расстояния просмотра: s_g_pixels·τ²"""
    return geometry.s_g_pixels * geometry.tau ** 2


def gaussian_kernel1d(sigma: float, radius: int) -> np.ndarray:
    """Дискретная гауссиана, перенормированная после усечения"""
    k = np.arange(-radius, radius + 1, dtype=float)
    g = np.exp(-0.5 * (k / sigma) ** 2)
    return g / g.sum()


def derivative_kernel1d(sigma: float, radius: int) -> np.ndarray:
    """
    Производная гауссианы, перенормированная так, что отклик на рампу равен 1

    Args:
        sigma: разброс
        radius: радиус усечения

    Returns:
        Ядро для свертки (не корреляции)
    """
    k = np.arange(-radius, radius + 1, dtype=float)
    g = np.exp(-0.5 * (k / sigma) ** 2)
    return -k * g / np.sum(k * k * g)


def make_window(sigma: float, shape: str = "gaussian", radius: Optional[int] = None) -> WindowSpec:
    """
    Построить окно энергии градиента

    Для гауссова окна σ задает разброс весов w², которыми взвешивается
    |y|², так что сам профиль w шире в √2 раз.

    Args:
        sigma: масштаб окна в пикселях
        shape: gaussian, boxcar или raised_cosine
        radius: полуширина; по умолчанию ⌈3σ⌉

    Returns:
        Сепарабельное окно с Σw² = 1
    """
    if shape not in WINDOW_SHAPES:
        raise DomainError(f"Неизвестная форма окна: {shape}")
    if not math.isfinite(sigma) or sigma <= 0:
        raise DomainError(f"Масштаб окна должен быть > 0, получено {sigma}")
    if radius is None:
        radius = int(math.ceil(3.0 * sigma))
    k = np.arange(-radius, radius + 1, dtype=float)
    if shape == "gaussian":
        # w² = exp(−k²/2σ²)
        profile = np.exp(-0.25 * (k / sigma) ** 2)
    elif shape == "boxcar":
        profile = np.ones_like(k)
    else:
        profile = 0.5 * (1.0 + np.cos(np.pi * k / (radius + 1)))
    profile = profile / np.sqrt(np.sum(profile ** 2))
    return WindowSpec(weights=np.outer(profile, profile), radius=radius, shape=shape,
                      profile=profile)


def _check_radius(shape, radius: int) -> None:
    if radius > min(shape) / 2:
        raise DimensionError(
            f"Радиус ядра {radius} превышает половину наименьшей стороны {min(shape)}"
        )


def visual_map(image: LuminanceImage, kernel: KernelSpec) -> VisualMap:
    """
    Комплексная визуальная карта y = (∂/∂x + j·∂/∂y)(G_σ ∗ I)

    Args:
        image: поле яркости
        kernel: параметры VRF

    Returns:
        Визуальная карта того же размера
    """
    _check_radius(image.shape, kernel.radius)
    g = gaussian_kernel1d(kernel.sigma_pixels, kernel.radius)
    d = derivative_kernel1d(kernel.sigma_pixels, kernel.radius)
    samples = image.samples

    if kernel.sigma_pixels <= DIRECT_SIGMA_LIMIT:
        gx = ndimage.convolve1d(ndimage.convolve1d(samples, d, axis=1, mode="reflect"),
                                g, axis=0, mode="reflect")
        gy = ndimage.convolve1d(ndimage.convolve1d(samples, g, axis=1, mode="reflect"),
                                d, axis=0, mode="reflect")
        values = gx + 1j * gy
    else:
        values = _fft_visual_map(samples, g, d, kernel.radius)
    return VisualMap(values=values, sigma_pixels=kernel.sigma_pixels)


def _fft_visual_map(samples: np.ndarray, g: np.ndarray, d: np.ndarray, radius: int) -> np.ndarray:
    padded = np.pad(samples, radius, mode="symmetric")
    stencil = np.outer(g, d) + 1j * np.outer(d, g)
    return signal.fftconvolve(padded, stencil, mode="valid")


def gaussian_blur(image: LuminanceImage, s_b_pixels: float) -> LuminanceImage:
    """
    Изотропное гауссово размытие с отражением на границах

    Args:
        image: поле яркости
        s_b_pixels: разброс размытия в пикселях

    Returns:
        Размытое изображение (при нулевом разбросе возвращается исходное)
    """
    if not math.isfinite(s_b_pixels) or s_b_pixels < 0:
        raise DomainError(f"Разброс размытия должен быть ≥ 0, получено {s_b_pixels}")
    if s_b_pixels == 0:
        return image
    radius = int(math.ceil(3.0 * s_b_pixels))
    g = gaussian_kernel1d(s_b_pixels, radius)
    blurred = ndimage.convolve1d(image.samples, g, axis=1, mode="reflect")
    blurred = ndimage.convolve1d(blurred, g, axis=0, mode="reflect")
    return LuminanceImage(np.clip(blurred, 0.0, 1.0))


def gradient_energy(vmap: VisualMap, window: WindowSpec) -> np.ndarray:
    """
    Сглаженная энергия градиента λ(p) = Σ_q w(q)²·|y(p−q)|²

    Args:
        vmap: визуальная карта
        window: окно

    Returns:
        Неотрицательное поле λ
    """
    _check_radius(vmap.shape, window.radius)
    power = np.abs(vmap.values) ** 2
    if window.profile is not None:
        taps = window.profile ** 2
        energy = ndimage.convolve1d(power, taps, axis=1, mode="reflect")
        energy = ndimage.convolve1d(energy, taps, axis=0, mode="reflect")
    else:
        energy = ndimage.convolve(power, window.weights ** 2, mode="reflect")
    return np.maximum(energy, 0.0)
