"""
Аффинное слияние индексов: B = D0 + D1E·E + D1T·T
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from pydantic import BaseModel

from ..core.exceptions import DegenerateInputError, DomainError, RankDeficiencyError

logger = logging.getLogger(__name__)

HUBER_K = 1.345
MAD_TO_SIGMA = 0.6744897501960817
MAX_ITERATIONS = 100
TOLERANCE = 1e-9
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class FusionSample:
    """Пара индексов и целевой DMOS"""

    e: float
    t: float
    dmos: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.e, self.t, self.dmos)):
            raise DomainError(f"Неконечные значения в образце слияния: {self}")


class FusionCoefficients(BaseModel):
    """Коэффициенты слияния с метаданными подгонки"""

    d0: float = 0.0
    d1_e: float = 1.0
    d1_t: float = 0.0
    residual_rmse: float = 0.0
    n_samples: int = 0

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"Коэффициенты слияния сохранены: {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FusionCoefficients":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))


class CrossSensitivityReport(BaseModel):
    """Диагностика перекрестной чувствительности индексов"""

    interaction_ratio: float
    coefficients: list
    r_squared: float
    n_samples: int


def _design(columns: Sequence[np.ndarray]) -> np.ndarray:
    x = np.column_stack(columns)
    cond = np.linalg.cond(x)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise RankDeficiencyError(f"Матрица плана вырождена (число обусловленности {cond:.3g})")
    return x


def _arrays(samples: Sequence[FusionSample], minimum: int):
    if len(samples) < minimum:
        raise DegenerateInputError(f"Нужно не менее {minimum} образцов, получено {len(samples)}")
    e = np.array([s.e for s in samples], dtype=float)
    t = np.array([s.t for s in samples], dtype=float)
    y = np.array([s.dmos for s in samples], dtype=float)
    return e, t, y


def huber_irls(x: np.ndarray, y: np.ndarray, max_iter: int = MAX_ITERATIONS,
               tol: float = TOLERANCE) -> np.ndarray:
    """
    Робастная регрессия Хьюбера методом IRLS

    Порог δ = 1.345·s, s = median|r|/0.6745.

    Args:
        x: матрица плана
        y: отклики
        max_iter: максимум итераций
        tol: порог изменения коэффициентов

    Returns:
        Коэффициенты
    """
    beta = np.linalg.lstsq(x, y, rcond=None)[0]
    scale_floor = 1e-12 * (1.0 + np.max(np.abs(y)))
    for iteration in range(max_iter):
        residual = y - x @ beta
        scale = np.median(np.abs(residual)) / MAD_TO_SIGMA
        if scale <= scale_floor:
            logger.debug(f"IRLS: невязка на уровне округления после {iteration} итераций")
            break
        delta = HUBER_K * scale
        abs_r = np.abs(residual)
        weights = np.where(abs_r <= delta, 1.0, delta / np.maximum(abs_r, delta))
        root = np.sqrt(weights)
        updated = np.linalg.lstsq(x * root[:, None], y * root, rcond=None)[0]
        change = np.max(np.abs(updated - beta))
        beta = updated
        if change < tol:
            logger.debug(f"IRLS сошелся за {iteration + 1} итераций")
            break
    return beta


def fit_fusion(samples: Sequence[FusionSample]) -> FusionCoefficients:
    """
    Подогнать коэффициенты слияния робастным МНК

    Args:
        samples: не менее трех образцов с неколлинеарными (E, T)

    Returns:
        Коэффициенты с RMSE невязки
    """
    e, t, y = _arrays(samples, 3)
    x = _design([np.ones_like(e), e, t])
    beta = huber_irls(x, y)
    residual = float(np.sqrt(np.mean((y - x @ beta) ** 2)))
    coeffs = FusionCoefficients(d0=float(beta[0]), d1_e=float(beta[1]), d1_t=float(beta[2]),
                                residual_rmse=residual, n_samples=len(samples))
    logger.info(
        f"Слияние: D0 = {coeffs.d0:.4f}, D1E = {coeffs.d1_e:.4f}, D1T = {coeffs.d1_t:.4f}, "
        f"RMSE = {residual:.4f} (n = {len(samples)})"
    )
    return coeffs


def predict(coeffs: FusionCoefficients, e: float, t: float) -> float:
    """Предсказание DMOS, срезанное в [0, 100]"""
    if not (math.isfinite(e) and math.isfinite(t)):
        raise DomainError(f"Неконечные индексы: E = {e}, T = {t}")
    value = coeffs.d0 + coeffs.d1_e * e + coeffs.d1_t * t
    return float(min(100.0, max(0.0, value)))


def cross_sensitivity_report(samples: Sequence[FusionSample]) -> CrossSensitivityReport:
    """
    Квадратичная модель по стандартизованным (E, T) и доля объясненной
    дисперсии, приходящаяся на член E·T

    Args:
        samples: не менее 10 образцов

    Returns:
        Отчет с долей взаимодействия
    """
    e, t, y = _arrays(samples, 10)
    se, st = e.std(), t.std()
    if se == 0 or st == 0:
        raise RankDeficiencyError("Один из индексов постоянен")
    ze = (e - e.mean()) / se
    zt = (t - t.mean()) / st
    x = _design([np.ones_like(ze), ze, zt, ze ** 2, zt ** 2, ze * zt])
    beta = np.linalg.lstsq(x, y, rcond=None)[0]
    fitted = x @ beta
    explained = float(np.var(fitted))
    interaction = beta[5] * (ze * zt)
    ratio = float(np.var(interaction) / explained) if explained > 0 else 0.0
    total = float(np.var(y))
    r_squared = explained / total if total > 0 else 1.0
    logger.info(f"Доля взаимодействия E·T: {ratio:.3e}")
    return CrossSensitivityReport(interaction_ratio=ratio, coefficients=[float(b) for b in beta],
                                  r_squared=r_squared, n_samples=len(samples))
