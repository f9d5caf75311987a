"""
Оценка на наборах данных: метрики, пакетная обработка, FLOP
"""

from .flops import flops_estimate, flops_logistic, format_gflops
from .harness import (
    BlurComparison,
    EvaluationReport,
    ManifestEntry,
    ScoreCache,
    ScoreRow,
    blur_comparison,
    default_cache_dir,
    evaluate,
    format_report,
    load_manifest,
    score_corpus,
    write_scores,
)
from .stats import MetricReport, metric_report, plcc, rmse, srocc

__all__ = [
    "BlurComparison",
    "EvaluationReport",
    "ManifestEntry",
    "MetricReport",
    "ScoreCache",
    "ScoreRow",
    "blur_comparison",
    "default_cache_dir",
    "evaluate",
    "flops_estimate",
    "flops_logistic",
    "format_gflops",
    "format_report",
    "load_manifest",
    "metric_report",
    "plcc",
    "rmse",
    "score_corpus",
    "srocc",
    "write_scores",
]
