"""
Основной класс оценщика BELE
"""

import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..calibration.conversion import ConversionCurve
from ..calibration.fusion import FusionCoefficients, predict
from ..indices.edge_index import EdgeIndex, EdgeIndexConfig
from ..indices.texture_index import cpsnr
from .canonical_model import CanonicalParams, ViewerGeometry
from .image_io import load_luminance
from .vrf import LuminanceImage

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairScore:
    """Оценка пары изображений"""

    bele_cold: float
    cpsnr: float
    xi_eq: float
    predicted_dmos: float
    d_distortion: float
    d_focus: float
    first_pass_dmos: float
    empirical_dmos: float
    n_cold: int
    n_hot: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class BELEEstimator:
    """
    Полный конвейер: индекс краев по Ω_C, CPSNR по Ω_H и аффинное слияние
    """

    def __init__(self, params: Optional[CanonicalParams] = None,
                 geometry: Optional[ViewerGeometry] = None,
                 fusion: Optional[FusionCoefficients] = None,
                 conversion: Optional[ConversionCurve] = None,
                 config: Optional[EdgeIndexConfig] = None):
        """
        Инициализация оценщика

        Args:
            params: параметры канонической модели
            geometry: геометрия просмотра
            fusion: коэффициенты слияния (по умолчанию тождественно по E)
            conversion: кривая ζ → ξ_eq вместо замкнутой формулы
            config: константы индекса краев
        """
        self.params = params or CanonicalParams()
        self.geometry = geometry or ViewerGeometry(tau=self.params.tau)
        self.fusion = fusion or FusionCoefficients()
        self.edge_index = EdgeIndex(self.params, self.geometry, config, conversion)
        self.history: List[Dict[str, Any]] = []

    def score(self, ref: LuminanceImage, dist: LuminanceImage) -> PairScore:
        """
        Оценить пару изображений

        Args:
            ref: эталон
            dist: искаженное изображение

        Returns:
            Оценка пары
        """
        analysis = self.edge_index.analyze(ref, dist)
        texture = cpsnr(analysis.ref_map, analysis.dist_map, analysis.partition)
        edge = analysis.score
        result = PairScore(
            bele_cold=edge.bele_cold,
            cpsnr=texture.cpsnr_db,
            xi_eq=edge.xi_eq,
            predicted_dmos=predict(self.fusion, edge.bele_cold, texture.cpsnr_db),
            d_distortion=edge.d_distortion,
            d_focus=edge.d_focus,
            first_pass_dmos=edge.first_pass_dmos,
            empirical_dmos=analysis.empirical_dmos,
            n_cold=analysis.partition.n_cold,
            n_hot=analysis.partition.n_hot,
        )
        self.history.append({"action": "score", **result.to_dict()})
        logger.info(f"Пара оценена: BELE_cold = {result.bele_cold:.3f}, "
                    f"CPSNR = {result.cpsnr:.2f} дБ, DMOS = {result.predicted_dmos:.3f}")
        return result

    def score_files(self, ref_path: Union[str, Path], dist_path: Union[str, Path]) -> PairScore:
        """Оценить пару изображений по путям к файлам"""
        return self.score(load_luminance(ref_path), load_luminance(dist_path))

    def get_history(self) -> List[Dict[str, Any]]:
        """Получить историю оценок"""
        return self.history.copy()

    def reset(self) -> None:
        """Очистить историю"""
        self.history.clear()
        logger.info("История оценок очищена")
