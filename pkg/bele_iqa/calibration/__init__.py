"""
Калибровка: каноническая модель, логистика VQEG, кривая преобразования, слияние
"""

from .canonical_fit import (
    BlurSample,
    CalibrationResult,
    LogisticParams,
    fit_canonical,
    fit_vqeg,
    vqeg_logistic,
)
from .conversion import (
    ConversionCurve,
    ConversionValue,
    build_conversion,
    conversion_from_canonical,
    eval_conversion,
)
from .fusion import (
    CrossSensitivityReport,
    FusionCoefficients,
    FusionSample,
    cross_sensitivity_report,
    fit_fusion,
    predict,
)

__all__ = [
    "BlurSample",
    "CalibrationResult",
    "ConversionCurve",
    "ConversionValue",
    "CrossSensitivityReport",
    "FusionCoefficients",
    "FusionSample",
    "LogisticParams",
    "build_conversion",
    "conversion_from_canonical",
    "cross_sensitivity_report",
    "eval_conversion",
    "fit_canonical",
    "fit_fusion",
    "fit_vqeg",
    "predict",
    "vqeg_logistic",
]
