"""
Метрики согласия предсказаний с DMOS: RMSE, SROCC, PLCC
"""

import logging
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel
from scipy.stats import rankdata

from ..core.exceptions import DegenerateInputError, DimensionError

logger = logging.getLogger(__name__)


class MetricReport(BaseModel):
    """Тройка метрик на выборке; корреляции пусты, если не определены"""

    n: int
    rmse: float
    srocc: Optional[float] = None
    plcc: Optional[float] = None


def _pair(a: Sequence[float], b: Sequence[float], minimum: int):
    x = np.asarray(a, dtype=float).ravel()
    y = np.asarray(b, dtype=float).ravel()
    if x.shape != y.shape:
        raise DimensionError(f"Длины не совпадают: {x.size} и {y.size}")
    if x.size < minimum:
        raise DegenerateInputError(f"Нужно не менее {minimum} значений, получено {x.size}")
    return x, y


def rmse(pred: Sequence[float], target: Sequence[float]) -> float:
    """Корень из среднего квадрата разности"""
    x, y = _pair(pred, target, 1)
    return float(np.sqrt(np.mean((x - y) ** 2)))


def plcc(a: Sequence[float], b: Sequence[float]) -> float:
    """Коэффициент корреляции Пирсона"""
    x, y = _pair(a, b, 3)
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt(np.sum(dx * dx))
    sy = np.sqrt(np.sum(dy * dy))
    if sx == 0 or sy == 0:
        raise DegenerateInputError("Корреляция не определена для постоянного вектора")
    return float(np.clip(np.sum(dx * dy) / (sx * sy), -1.0, 1.0))


def srocc(a: Sequence[float], b: Sequence[float]) -> float:
    """Ранговая корреляция Спирмена со средними рангами для связей"""
    x, y = _pair(a, b, 3)
    return plcc(rankdata(x, method="average"), rankdata(y, method="average"))


def metric_report(pred: Sequence[float], target: Sequence[float]) -> MetricReport:
    """
    Собрать RMSE, SROCC и PLCC

    Корреляции на постоянных данных не определены и остаются пустыми.
    """
    x, y = _pair(pred, target, 3)
    report = MetricReport(n=int(x.size), rmse=rmse(x, y))
    try:
        report.srocc = srocc(x, y)
        report.plcc = plcc(x, y)
    except DegenerateInputError as e:
        logger.warning(f"Корреляции не определены: {e}")
    return report
