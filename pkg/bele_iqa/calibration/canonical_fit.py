"""
Калибровка канонической модели (Q, τ) и логистической функции VQEG
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel
from scipy import optimize

from ..core.canonical_model import CanonicalParams, canonical_dmos
from ..core.exceptions import ConvergenceError, DegenerateInputError, DomainError

logger = logging.getLogger(__name__)

Q_BOUNDS = (1e-6, 2.0)
TAU_BOUNDS = (0.25, 4.0)
GRID_SIZE = 25
NM_TOLERANCE = 1e-10
NM_MAX_EVALUATIONS = 2000


@dataclass(frozen=True)
class BlurSample:
    """Известное нормированное размытие и измеренный DMOS"""

    xi: float
    dmos: float

    def __post_init__(self):
        if not math.isfinite(self.xi) or self.xi < 0:
            raise DomainError(f"ξ должно быть ≥ 0, получено {self.xi}")
        if not math.isfinite(self.dmos):
            raise DomainError(f"DMOS должен быть конечным, получено {self.dmos}")


class CalibrationResult(BaseModel):
    """Результат калибровки канонической модели"""

    q: float
    tau: float
    residual_rmse: float
    n_samples: int

    def to_params(self) -> CanonicalParams:
        return CanonicalParams(q=self.q, tau=self.tau)

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"Калибровка сохранена: {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "CalibrationResult":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))


class LogisticParams(BaseModel):
    """Пять коэффициентов логистической функции VQEG"""

    beta1: float
    beta2: float
    beta3: float
    beta4: float
    beta5: float
    residual_rmse: float = 0.0

    def predict(self, zeta) -> np.ndarray:
        return vqeg_logistic(np.asarray(zeta, dtype=float), self.beta1, self.beta2,
                             self.beta3, self.beta4, self.beta5)


def _canonical_curve(xi: np.ndarray, q: float, tau: float) -> np.ndarray:
    u = xi * xi / tau ** 4
    return 100.0 * q * -np.expm1(-0.5 * np.log1p(u))


def fit_canonical(samples: Sequence[BlurSample]) -> CalibrationResult:
    """
    Подобрать (Q, τ) по парам (ξ, DMOS)

    Грубая логарифмическая сетка, затем Нелдер-Мид в границах
    Q ∈ (0, 2], τ ∈ [0.25, 4] и финальная полировка least_squares.

    Args:
        samples: не менее двух образцов с различными ξ

    Returns:
        Параметры с RMSE невязки
    """
    xi = np.array([s.xi for s in samples], dtype=float)
    dmos = np.array([s.dmos for s in samples], dtype=float)
    if np.unique(xi).size < 2:
        raise DegenerateInputError("Для калибровки нужны хотя бы два различных значения ξ")

    def residuals(p):
        return _canonical_curve(xi, p[0], p[1]) - dmos

    def sse(p):
        return float(np.sum(residuals(p) ** 2))

    q_grid = np.geomspace(0.05, Q_BOUNDS[1], GRID_SIZE)
    tau_grid = np.geomspace(TAU_BOUNDS[0], TAU_BOUNDS[1], GRID_SIZE)
    qq, tt = np.meshgrid(q_grid, tau_grid, indexing="ij")
    model = 100.0 * qq[..., None] * -np.expm1(
        -0.5 * np.log1p(xi[None, None, :] ** 2 / tt[..., None] ** 4))
    grid_sse = np.sum((model - dmos) ** 2, axis=-1)
    i, j = np.unravel_index(np.argmin(grid_sse), grid_sse.shape)
    start = np.array([q_grid[i], tau_grid[j]])
    logger.debug(f"Сетка: старт Q = {start[0]:.4f}, τ = {start[1]:.4f}")

    bounds = [Q_BOUNDS, TAU_BOUNDS]
    nm = optimize.minimize(sse, start, method="Nelder-Mead", bounds=bounds,
                           options={"xatol": NM_TOLERANCE, "fatol": NM_TOLERANCE,
                                    "maxfev": NM_MAX_EVALUATIONS})
    best = np.clip(nm.x, [b[0] for b in bounds], [b[1] for b in bounds])
    polish = optimize.least_squares(residuals, best, bounds=([b[0] for b in bounds],
                                                             [b[1] for b in bounds]),
                                    xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=1000)
    if polish.success and sse(polish.x) <= sse(best):
        best = polish.x
    best_sse = sse(best)
    if not (nm.success or polish.success) or not np.isfinite(best_sse):
        raise ConvergenceError("Калибровка канонической модели не сошлась",
                               best_params=(float(best[0]), float(best[1])),
                               residual=math.sqrt(best_sse / len(samples)))

    result = CalibrationResult(q=float(best[0]), tau=float(best[1]),
                               residual_rmse=math.sqrt(best_sse / len(samples)),
                               n_samples=len(samples))
    logger.info(f"Калибровка: Q = {result.q:.6f}, τ = {result.tau:.6f}, "
                f"RMSE = {result.residual_rmse:.4f} (n = {result.n_samples})")
    return result


def vqeg_logistic(zeta: np.ndarray, b1: float, b2: float, b3: float, b4: float,
                  b5: float) -> np.ndarray:
    """β1·[1/2 − 1/(1 + e^{β2(ζ−β3)})] + β4·ζ + β5"""
    # 1/2 − 1/(1+e^x) = tanh(x/2)/2, устойчиво при больших |x|
    return b1 * 0.5 * np.tanh(0.5 * b2 * (zeta - b3)) + b4 * zeta + b5


def _robust_slope(x: np.ndarray, y: np.ndarray) -> float:
    # Медиана попарных наклонов (Тейл-Сен) по соседям в порядке x
    order = np.argsort(x)
    dx = np.diff(x[order])
    dy = np.diff(y[order])
    ok = dx > 0
    return float(np.median(dy[ok] / dx[ok])) if ok.any() else 0.0


def fit_vqeg(metric_values: Sequence[float], dmos: Sequence[float],
             starts: Optional[Sequence[float]] = None) -> LogisticParams:
    """
    Подогнать логистическую функцию VQEG методом наименьших квадратов

    Подгонка ведется по стандартизованному ζ (β2 = 1 в этих единицах),
    из нескольких стартов по β2 и с аффинным кандидатом; выбирается
    решение с наименьшей невязкой.

    Args:
        metric_values: значения метрики ζ
        dmos: целевые DMOS
        starts: стартовые значения β2 в стандартизованных единицах

    Returns:
        Коэффициенты в исходных единицах ζ
    """
    zeta = np.asarray(metric_values, dtype=float)
    target = np.asarray(dmos, dtype=float)
    if zeta.shape != target.shape or zeta.size < 5:
        raise DegenerateInputError("Нужно не менее пяти пар (ζ, DMOS) одинаковой длины")
    center = float(np.mean(zeta))
    spread = float(np.std(zeta))
    if spread == 0:
        raise DegenerateInputError("Значения метрики постоянны")
    z = (zeta - center) / spread

    def residuals(b):
        return vqeg_logistic(z, *b) - target

    slope = _robust_slope(z, target)
    best = None
    best_cost = np.inf
    # аффинный кандидат: β1 = 0
    a1, a0 = np.polyfit(z, target, 1)
    affine = np.array([0.0, 1.0, float(np.median(z)), a1, a0])
    candidates = [affine]
    for b2 in (starts or (1.0, 0.5, 2.0, 4.0, -1.0)):
        init = np.array([np.ptp(target), b2, float(np.median(z)), slope, float(np.mean(target))])
        try:
            fit = optimize.least_squares(residuals, init, method="lm", xtol=1e-14, ftol=1e-14,
                                         gtol=1e-14, max_nfev=20000)
        except (ValueError, np.linalg.LinAlgError) as e:
            logger.debug(f"Старт β2 = {b2} отброшен: {e}")
            continue
        candidates.append(fit.x)
    for cand in candidates:
        cost = float(np.sum(residuals(cand) ** 2))
        if np.isfinite(cost) and cost < best_cost:
            best, best_cost = cand, cost
    if best is None:
        raise ConvergenceError("Подгонка логистической функции не сошлась")

    b1, b2, b3, b4, b5 = (float(v) for v in best)
    params = LogisticParams(
        beta1=b1,
        beta2=b2 / spread,
        beta3=center + b3 * spread,
        beta4=b4 / spread,
        beta5=b5 - b4 * center / spread,
        residual_rmse=math.sqrt(best_cost / zeta.size),
    )
    logger.info(f"Логистика VQEG: RMSE = {params.residual_rmse:.4f} (n = {zeta.size})")
    return params
