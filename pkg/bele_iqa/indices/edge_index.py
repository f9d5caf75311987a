"""
Индекс краев: карта уверенности, разбиение на холодную и горячую области,
эмпирическая оценка и BELE_cold
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..calibration.conversion import ConversionCurve
from ..core.canonical_model import (
    DMOS_CLAMP_FRACTION,
    CanonicalParams,
    canonical_dmos,
    ViewerGeometry,
    certainty_threshold,
    clamp_dmos,
    equivalent_blur,
)
from ..core.exceptions import DegenerateInputError, DimensionError, DomainError
from ..core.vrf import (
    KernelSpec,
    LuminanceImage,
    VisualMap,
    gaussian_blur,
    gradient_energy,
    kernel_sigma,
    make_window,
    visual_map,
)

logger = logging.getLogger(__name__)

DISTORTION_EXPONENT = 0.65
FOCUS_EXPONENT = 1.35


@dataclass(frozen=True)
class EdgeIndexConfig:
    """Константы двухпроходной схемы"""

    xi_prior: float = 0.5
    floor: float = 1e-3
    ratio_max: float = 4.0
    distortion_exponent: float = DISTORTION_EXPONENT
    focus_exponent: float = FOCUS_EXPONENT
    window_shape: str = "gaussian"
    dmos_clamp_fraction: float = DMOS_CLAMP_FRACTION


@dataclass(frozen=True, eq=False)
class CertaintyMap:
    """Отношение M(p) = |y|/|ỹ| и маска допустимых пикселей"""

    values: np.ndarray
    valid_mask: np.ndarray

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True, eq=False)
class RegionPartition:
    """Холодная Ω_C и горячая Ω_H области"""

    cold: np.ndarray
    hot: np.ndarray
    threshold: float

    def __post_init__(self):
        cold = np.asarray(self.cold, dtype=bool)
        hot = np.asarray(self.hot, dtype=bool)
        if cold.shape != hot.shape:
            raise DimensionError("Маски областей имеют разные размеры")
        if np.any(cold & hot):
            raise DomainError("Холодная и горячая области пересекаются")
        object.__setattr__(self, "cold", cold)
        object.__setattr__(self, "hot", hot)

    @property
    def n_cold(self) -> int:
        return int(self.cold.sum())

    @property
    def n_hot(self) -> int:
        return int(self.hot.sum())


@dataclass(frozen=True)
class EdgeScore:
    """Результат индекса краев"""

    bele_cold: float
    d_distortion: float
    d_focus: float
    xi_eq: float
    first_pass_dmos: float


@dataclass(frozen=True, eq=False)
class EdgeAnalysis:
    """Полный результат двухпроходной схемы"""

    score: EdgeScore
    partition: RegionPartition
    certainty: CertaintyMap
    ref_map: VisualMap
    dist_map: VisualMap
    lambda_ref: np.ndarray
    lambda_dist: np.ndarray
    empirical_dmos: float


def certainty_map(ref_map: VisualMap, dist_map: VisualMap, floor: float = 1e-3) -> CertaintyMap:
    """
    Карта уверенности M(p) = |y(p)|/|ỹ(p)|

    Args:
        ref_map: карта эталона ỹ
        dist_map: карта искаженного изображения y
        floor: доля от max|ỹ|, ниже которой пиксель недопустим

    Returns:
        Карта уверенности; недопустимые пиксели заполнены нулем
    """
    if ref_map.shape != dist_map.shape:
        raise DimensionError(f"Размеры карт не совпадают: {ref_map.shape} и {dist_map.shape}")
    if ref_map.sigma_pixels != dist_map.sigma_pixels:
        raise DimensionError("Карты построены с разными ядрами")
    ref_mag = ref_map.magnitude
    dist_mag = dist_map.magnitude
    peak = ref_mag.max() if ref_mag.size else 0.0
    valid = ref_mag >= floor * peak if peak > 0 else np.zeros(ref_mag.shape, dtype=bool)
    values = np.zeros(ref_mag.shape)
    np.divide(dist_mag, ref_mag, out=values, where=valid)
    return CertaintyMap(values=values, valid_mask=valid)


def partition(cmap: CertaintyMap, m_bar: float) -> RegionPartition:
    """
    Разбиение допустимых пикселей порогом M̄

    Args:
        cmap: карта уверенности
        m_bar: порог в (0, 1]

    Returns:
        Разбиение; Ω_C = {M ≥ M̄}
    """
    if not 0 < m_bar <= 1:
        raise DomainError(f"Порог M̄ должен лежать в (0, 1], получено {m_bar}")
    cold = cmap.valid_mask & (cmap.values >= m_bar)
    hot = cmap.valid_mask & ~cold
    if not cold.any():
        raise DegenerateInputError(f"Холодная область пуста при M̄ = {m_bar:.4f}")
    return RegionPartition(cold=cold, hot=hot, threshold=float(m_bar))


def _cold_ratios(lambda_num: np.ndarray, lambda_ref: np.ndarray, region: RegionPartition,
                 ratio_max: Optional[float]) -> np.ndarray:
    if lambda_num.shape != lambda_ref.shape or lambda_ref.shape != region.cold.shape:
        raise DimensionError("Поля λ и разбиение имеют разные размеры")
    if not region.cold.any():
        raise DegenerateInputError("Холодная область пуста")
    denom = lambda_ref[region.cold]
    if np.any(denom <= 0):
        raise DegenerateInputError("λ̃ обращается в ноль внутри холодной области")
    ratios = lambda_num[region.cold] / denom
    if ratio_max is not None:
        ratios = np.clip(ratios, 0.0, ratio_max)
    return ratios


def _power_term(lambda_num, lambda_ref, region, exponent, ratio_max) -> float:
    ratios = _cold_ratios(np.asarray(lambda_num, float), np.asarray(lambda_ref, float),
                          region, ratio_max)
    return float(1.0 - np.sqrt(np.mean(ratios ** exponent)))


def empirical_dmos(params: CanonicalParams, lambda_dist: np.ndarray, lambda_ref: np.ndarray,
                   region: RegionPartition, ratio_max: float = 4.0) -> float:
    """
    Эмпирическая оценка d = 100·Q·(1 − √R), R: среднее λ/λ̃ по Ω_C

    Returns:
        DMOS в [0, 100·Q]
    """
    ratios = _cold_ratios(np.asarray(lambda_dist, float), np.asarray(lambda_ref, float),
                          region, ratio_max)
    value = params.anchor * (1.0 - np.sqrt(np.mean(ratios)))
    return float(np.clip(value, 0.0, params.anchor))


def distortion_term(lambda_dist: np.ndarray, lambda_ref: np.ndarray, region: RegionPartition,
                    ratio_max: float = 4.0, exponent: float = DISTORTION_EXPONENT) -> float:
    """Слагаемое искажения 1 − √(mean (λ/λ̃)^0.65) по Ω_C"""
    return _power_term(lambda_dist, lambda_ref, region, exponent, ratio_max)


def focusing_term(lambda_blur_eq: np.ndarray, lambda_ref: np.ndarray, region: RegionPartition,
                  ratio_max: float = 4.0, exponent: float = FOCUS_EXPONENT) -> float:
    """Слагаемое фокусировки 1 − √(mean (λ_w/λ̃)^1.35) по Ω_C"""
    return _power_term(lambda_blur_eq, lambda_ref, region, exponent, ratio_max)


class EdgeIndex:
    """
    Двухпроходный расчет BELE_cold

    Первый проход дает предварительную оценку по мягкому порогу ξ₀,
    ее обращение задает ξ_eq, второй проход пересчитывает разбиение
    и добавляет слагаемое фокусировки по эталону, размытому на ξ_eq.
    """

    def __init__(self, params: CanonicalParams, geometry: ViewerGeometry,
                 config: Optional[EdgeIndexConfig] = None,
                 conversion: Optional[ConversionCurve] = None):
        """
        Args:
            params: параметры канонической модели
            geometry: геометрия просмотра
            config: константы схемы
            conversion: кривая ζ → ξ_eq; по умолчанию замкнутая формула обращения
        """
        self.params = params
        self.geometry = geometry
        self.config = config or EdgeIndexConfig()
        self.conversion = conversion
        self.kernel = KernelSpec(kernel_sigma(geometry))
        self.window = make_window(self.kernel.sigma_pixels, self.config.window_shape)

    def _maps(self, image: LuminanceImage):
        vmap = visual_map(image, self.kernel)
        return vmap, gradient_energy(vmap, self.window)

    def _to_xi(self, dmos: float) -> float:
        clamped = clamp_dmos(dmos, self.params, self.config.dmos_clamp_fraction)
        if self.conversion is not None:
            return float(self.conversion.evaluate(clamped).xi)
        return float(equivalent_blur(clamped, self.params))

    def analyze(self, ref: LuminanceImage, dist: LuminanceImage,
                xi_eq: Optional[float] = None) -> EdgeAnalysis:
        """
        Выполнить двухпроходную схему

        Args:
            ref: эталон
            dist: искаженное изображение
            xi_eq: принудительное эквивалентное размытие (пропускает первый проход)

        Returns:
            Оценка, итоговое разбиение и промежуточные поля
        """
        if ref.shape != dist.shape:
            raise DimensionError(f"Размеры изображений не совпадают: {ref.shape} и {dist.shape}")
        cfg = self.config
        ref_map, lambda_ref = self._maps(ref)
        dist_map, lambda_dist = self._maps(dist)
        cmap = certainty_map(ref_map, dist_map, cfg.floor)

        if xi_eq is None:
            provisional = partition(cmap, certainty_threshold(cfg.xi_prior))
            d_first = distortion_term(lambda_dist, lambda_ref, provisional, cfg.ratio_max,
                                      cfg.distortion_exponent)
            first_pass = self.params.anchor * float(np.clip(d_first, 0.0, 1.0))
            xi_eq = self._to_xi(first_pass)
            logger.debug(f"Первый проход: d̂₁ = {first_pass:.4f}, ξ_eq = {xi_eq:.4f}")
        else:
            if xi_eq < 0:
                raise DomainError(f"ξ_eq должно быть ≥ 0, получено {xi_eq}")
            first_pass = float(canonical_dmos(self.params, xi_eq))

        final = partition(cmap, certainty_threshold(xi_eq))
        focused = gaussian_blur(ref, xi_eq * self.geometry.s_g_pixels)
        if focused is ref:
            lambda_focus = lambda_ref
        else:
            _, lambda_focus = self._maps(focused)

        d_dist = distortion_term(lambda_dist, lambda_ref, final, cfg.ratio_max,
                                 cfg.distortion_exponent)
        d_focus = focusing_term(lambda_focus, lambda_ref, final, cfg.ratio_max,
                                cfg.focus_exponent)
        d_dist = float(np.clip(d_dist, 0.0, 1.0))
        d_focus = float(np.clip(d_focus, 0.0, 1.0))
        bele = self.params.anchor * (1.0 - (1.0 - d_dist) * (1.0 - d_focus))

        score = EdgeScore(bele_cold=float(bele), d_distortion=d_dist, d_focus=d_focus,
                          xi_eq=float(xi_eq), first_pass_dmos=float(first_pass))
        logger.debug(
            f"BELE_cold = {bele:.4f} (искажение {d_dist:.4f}, фокусировка {d_focus:.4f}, "
            f"|Ω_C| = {final.n_cold}, |Ω_H| = {final.n_hot})"
        )
        return EdgeAnalysis(
            score=score,
            partition=final,
            certainty=cmap,
            ref_map=ref_map,
            dist_map=dist_map,
            lambda_ref=lambda_ref,
            lambda_dist=lambda_dist,
            empirical_dmos=empirical_dmos(self.params, lambda_dist, lambda_ref, final,
                                          cfg.ratio_max),
        )


def bele_cold(ref: LuminanceImage, dist: LuminanceImage, params: CanonicalParams,
              geometry: ViewerGeometry, config: Optional[EdgeIndexConfig] = None) -> EdgeScore:
    """
    BELE_cold = 100·Q·(1 − (1 − d_distortion)·(1 − d_focus))

    Args:
        ref: эталон
        dist: искаженное изображение
        params: параметры канонической модели
        geometry: геометрия просмотра
        config: константы схемы

    Returns:
        Оценка индекса краев
    """
    return EdgeIndex(params, geometry, config).analyze(ref, dist).score
