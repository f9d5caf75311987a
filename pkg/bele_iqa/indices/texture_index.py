"""
Индекс текстур: комплексный PSNR по горячей области Ω_H
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..core.exceptions import DimensionError
from ..core.vrf import VisualMap
from .edge_index import RegionPartition

logger = logging.getLogger(__name__)

CPSNR_CAP_DB = 100.0
MSE_FLOOR = 1e-10


@dataclass(frozen=True)
class TextureScore:
    """CPSNR в дБ, нормированная MSE и число пикселей Ω_H"""

    cpsnr_db: float
    mse: float
    n_hot: int
    empty: bool = False


def cpsnr(ref_map: VisualMap, dist_map: VisualMap, region: RegionPartition) -> TextureScore:
    """
    Комплексный PSNR по Ω_H

    MSE = mean_{Ω_H} |ỹ − y|² / max_{Ω_H}(|ỹ|², |y|²), CPSNR = −10·log10(MSE),
    не выше 100 дБ.

    Args:
        ref_map: карта эталона
        dist_map: карта искаженного изображения
        region: разбиение (используется только Ω_H)

    Returns:
        Оценка индекса текстур
    """
    if ref_map.shape != dist_map.shape or ref_map.shape != region.hot.shape:
        raise DimensionError("Карты и разбиение имеют разные размеры")
    n_hot = region.n_hot
    if n_hot == 0:
        logger.warning("Горячая область пуста, CPSNR ограничен сверху")
        return TextureScore(cpsnr_db=CPSNR_CAP_DB, mse=0.0, n_hot=0, empty=True)

    a = ref_map.values[region.hot]
    b = dist_map.values[region.hot]
    peak = max(float(np.max(np.abs(a) ** 2)), float(np.max(np.abs(b) ** 2)))
    if peak == 0.0:
        mse = 0.0
    else:
        mse = float(np.mean(np.abs(a - b) ** 2)) / peak
    db = CPSNR_CAP_DB if mse < MSE_FLOOR else min(CPSNR_CAP_DB, -10.0 * math.log10(mse))
    return TextureScore(cpsnr_db=db, mse=mse, n_hot=n_hot)
