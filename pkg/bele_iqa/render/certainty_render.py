"""
Изолюминантная визуализация карты уверенности
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from PIL import Image

from ..core.canonical_model import CanonicalParams, certainty_threshold, clamp_dmos, equivalent_blur
from ..core.exceptions import DimensionError, DomainError
from ..indices.edge_index import CertaintyMap

logger = logging.getLogger(__name__)

RED, CYAN, PURPLE, INVALID = 0, 1, 2, -1
NEUTRAL_GRAY = 128
SATURATION_FLOOR = 0.25
COLORBAR_WIDTH = 24
COLORBAR_GAP = 4


@dataclass(frozen=True)
class IsoluminancePalette:
    """Опорные оттенки и постоянная светлота HSL"""

    threshold: float
    tol: float = 0.02
    hue_red: float = 0.0
    hue_cyan: float = 180.0
    hue_purple: float = 280.0
    lightness: float = 0.5

    def __post_init__(self):
        if not 0 < self.threshold <= 1:
            raise DomainError(f"Порог M̄ должен лежать в (0, 1], получено {self.threshold}")
        if self.tol < 0:
            raise DomainError("Ширина голубой полосы должна быть ≥ 0")

    def classify(self, values: np.ndarray) -> np.ndarray:
        """Класс оттенка: красный ниже M̄ − tol, голубой в полосе, пурпурный выше"""
        classes = np.full(values.shape, CYAN, dtype=int)
        classes[values < self.threshold - self.tol] = RED
        classes[values > self.threshold + self.tol] = PURPLE
        return classes

    def hue_of(self, classes: np.ndarray) -> np.ndarray:
        hues = np.array([self.hue_red, self.hue_cyan, self.hue_purple])
        return hues[np.clip(classes, 0, 2)]


def hsl_to_rgb(hue: np.ndarray, saturation: np.ndarray, lightness: float) -> np.ndarray:
    """Векторное преобразование HSL → RGB в [0, 1]; hue в градусах"""
    h = np.asarray(hue, dtype=float)[..., None]
    s = np.asarray(saturation, dtype=float)[..., None]
    a = s * min(lightness, 1.0 - lightness)
    n = np.array([0.0, 8.0, 4.0])
    k = (n + h / 30.0) % 12.0
    return lightness - a * np.clip(np.minimum(k - 3.0, 9.0 - k), -1.0, 1.0)


def certainty_colors(cmap: CertaintyMap, palette: IsoluminancePalette,
                     weight: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Цвета пикселей карты уверенности

    Args:
        cmap: карта уверенности
        palette: палитра
        weight: поле энергии градиента (задает насыщенность)

    Returns:
        RGB uint8 H×W×3 и классы оттенков (−1 для недопустимых пикселей)
    """
    weight = np.asarray(weight, dtype=float)
    if weight.shape != cmap.shape:
        raise DimensionError(f"Размер поля весов {weight.shape} не совпадает с {cmap.shape}")
    valid = cmap.valid_mask
    classes = palette.classify(cmap.values)
    classes[~valid] = INVALID

    peak = weight[valid].max() if valid.any() else 0.0
    norm = np.clip(weight / peak, 0.0, 1.0) if peak > 0 else np.zeros_like(weight)
    saturation = SATURATION_FLOOR + (1.0 - SATURATION_FLOOR) * norm
    rgb = hsl_to_rgb(palette.hue_of(classes), saturation, palette.lightness)
    codes = np.round(rgb * 255.0).astype(np.uint8)
    codes[~valid] = NEUTRAL_GRAY
    return codes, classes


def _colorbar(height: int, palette: IsoluminancePalette, dmos_level: Optional[float]) -> np.ndarray:
    top = max(1.0, 2.0 * palette.threshold)
    levels = np.linspace(top, 0.0, height)[:, None] * np.ones((1, COLORBAR_WIDTH))
    classes = palette.classify(levels)
    bar = np.round(hsl_to_rgb(palette.hue_of(classes), np.ones_like(levels),
                              palette.lightness) * 255.0).astype(np.uint8)

    def row_of(level: float) -> int:
        return int(round((top - level) / top * (height - 1)))

    dotted = np.arange(COLORBAR_WIDTH) % 4 < 2
    bar[row_of(palette.threshold), dotted] = (96, 0, 160)
    if dmos_level is not None:
        bar[row_of(min(dmos_level, top)), dotted] = (20, 20, 20)
    return bar


def render_certainty(cmap: CertaintyMap, palette: IsoluminancePalette, weight: np.ndarray,
                     path: Union[str, Path], dmos: Optional[float] = None,
                     params: Optional[CanonicalParams] = None) -> Path:
    """
    Записать PNG карты уверенности с цветовой шкалой слева

    На шкале: пурпурный пунктир на M̄ и темный пунктир на
    M = certainty_threshold(equivalent_blur(DMOS)), если DMOS задан.

    Args:
        cmap: карта уверенности
        palette: палитра
        weight: поле энергии градиента эталона
        path: путь к PNG
        dmos: DMOS для второго маркера
        params: параметры канонической модели для маркера DMOS

    Returns:
        Путь к файлу
    """
    codes, classes = certainty_colors(cmap, palette, weight)
    marker = None
    if dmos is not None:
        params = params or CanonicalParams()
        marker = float(certainty_threshold(equivalent_blur(clamp_dmos(dmos, params), params)))
    height, width = codes.shape[:2]
    canvas = np.full((height, COLORBAR_WIDTH + COLORBAR_GAP + width, 3), 255, dtype=np.uint8)
    canvas[:, :COLORBAR_WIDTH] = _colorbar(height, palette, marker)
    canvas[:, COLORBAR_WIDTH + COLORBAR_GAP:] = codes

    path = Path(path)
    Image.fromarray(canvas).save(path, format="PNG")
    counts = {name: int((classes == c).sum()) for name, c in
              (("red", RED), ("cyan", CYAN), ("purple", PURPLE))}
    logger.info(f"Карта уверенности сохранена: {path} {counts}")
    return path
