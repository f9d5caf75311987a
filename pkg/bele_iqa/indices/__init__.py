"""
Индексы краев и текстур
"""

from .edge_index import (
    CertaintyMap,
    EdgeAnalysis,
    EdgeIndex,
    EdgeIndexConfig,
    EdgeScore,
    RegionPartition,
    bele_cold,
    certainty_map,
    distortion_term,
    empirical_dmos,
    focusing_term,
    partition,
)
from .texture_index import TextureScore, cpsnr

__all__ = [
    "CertaintyMap",
    "EdgeAnalysis",
    "EdgeIndex",
    "EdgeIndexConfig",
    "EdgeScore",
    "RegionPartition",
    "TextureScore",
    "bele_cold",
    "certainty_map",
    "cpsnr",
    "distortion_term",
    "empirical_dmos",
    "focusing_term",
    "partition",
]
