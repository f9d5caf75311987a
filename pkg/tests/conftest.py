"""
Общие генераторы синтетических изображений для тестов
"""

import numpy as np
import pytest

from bele_iqa.core import CanonicalParams, LuminanceImage, ViewerGeometry


def natural_image(size: int = 128, seed: int = 0, low: float = 0.1,
                  high: float = 0.9) -> LuminanceImage:
    """Текстура со спектром мощности 1/ρ² и случайной фазой"""
    rng = np.random.default_rng(seed)
    fy = np.fft.fftfreq(size)[:, None]
    fx = np.fft.rfftfreq(size)[None, :]
    rho = np.hypot(fy, fx)
    amplitude = np.zeros_like(rho)
    amplitude[rho > 0] = 1.0 / rho[rho > 0]
    phase = rng.uniform(0.0, 2.0 * np.pi, size=rho.shape)
    field = np.fft.irfft2(amplitude * np.exp(1j * phase), s=(size, size))
    field = (field - field.min()) / (field.max() - field.min())
    return LuminanceImage(low + (high - low) * field)


def white_noise_image(size: int = 256, seed: int = 0) -> LuminanceImage:
    """Равномерный белый шум в [0, 1]"""
    rng = np.random.default_rng(seed)
    return LuminanceImage(rng.uniform(0.0, 1.0, size=(size, size)))


def step_image(size: int = 64, column: int = 32, low: float = 0.2,
               high: float = 0.8) -> LuminanceImage:
    """Вертикальный ступенчатый край"""
    samples = np.full((size, size), low)
    samples[:, column:] = high
    return LuminanceImage(samples)


@pytest.fixture
def params():
    return CanonicalParams()


@pytest.fixture
def geometry():
    return ViewerGeometry()


@pytest.fixture
def texture():
    return natural_image(128, seed=3)
