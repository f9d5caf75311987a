"""
Загрузка и сохранение изображений яркости
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from .exceptions import ImageDecodeError
from .vrf import LuminanceImage

logger = logging.getLogger(__name__)

# Rec. 709
LUMA_WEIGHTS = np.array([0.2126, 0.7152, 0.0722])

_SIXTEEN_BIT_MODES = ("I;16", "I;16B", "I;16L", "I;16N", "I")


def rgb_to_luminance(rgb: np.ndarray) -> np.ndarray:
    """Яркость по весам Rec. 709 для массива H×W×3 в [0, 1]"""
    return np.clip(rgb[..., :3] @ LUMA_WEIGHTS, 0.0, 1.0)


def load_luminance(path: Union[str, Path]) -> LuminanceImage:
    """
    Загрузить изображение и привести к яркости в [0, 1]

    8- и 16-битные данные делятся на максимальный код.

    Args:
        path: путь к PNG/BMP/PGM

    Returns:
        Поле яркости
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Изображение не найдено: {path}")
    try:
        with Image.open(path) as img:
            img.load()
            mode = img.mode
            if mode in _SIXTEEN_BIT_MODES:
                samples = np.asarray(img, dtype=float) / 65535.0
            elif mode == "F":
                samples = np.asarray(img, dtype=float)
            elif mode in ("L", "1", "LA"):
                samples = np.asarray(img.convert("L"), dtype=float) / 255.0
            else:
                rgb = np.asarray(img.convert("RGB"), dtype=float) / 255.0
                samples = rgb_to_luminance(rgb)
    except (UnidentifiedImageError, OSError) as e:
        raise ImageDecodeError(f"Не удалось декодировать {path}: {e}") from e

    logger.debug(f"Загружено {path}: режим {mode}, размер {samples.shape}")
    return LuminanceImage(np.clip(samples, 0.0, 1.0))


def save_luminance(image: LuminanceImage, path: Union[str, Path], bits: int = 8) -> Path:
    """
    Сохранить поле яркости в PNG

    Args:
        image: поле яркости
        path: путь к файлу
        bits: 8 или 16

    Returns:
        Путь к файлу
    """
    path = Path(path)
    if bits == 16:
        codes = np.round(image.samples * 65535.0).astype(np.uint16)
        Image.fromarray(codes).save(path)
    else:
        codes = np.round(image.samples * 255.0).astype(np.uint8)
        Image.fromarray(codes).save(path)
    return path
