"""
BELE - Оценка качества изображений по неопределенности положения краев
"""

__version__ = "0.1.0"
__author__ = "BELE IQA Team"

from .core.estimator import BELEEstimator, PairScore
from .core.canonical_model import CanonicalParams, ViewerGeometry

__all__ = ["BELEEstimator", "PairScore", "CanonicalParams", "ViewerGeometry"]
