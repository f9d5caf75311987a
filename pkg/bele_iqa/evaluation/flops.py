"""
Оценка вычислительной сложности в FLOP
"""

import math

from ..core.exceptions import DomainError

PATCH_PIXELS = 224 * 224 * 3
LOGISTIC_FLOPS_PER_TERM = 250_000


def flops_estimate(n_dataset: int, s_segments: float, d_degree: int, p_pairs: int,
                   c_pixel: float) -> float:
    """
    3N + N·(ln S + d + 1) + P·224·224·3·C

    Args:
        n_dataset: размер набора для построения кривой
        s_segments: число сегментов сплайна (≥ 1 при N > 0)
        d_degree: степень полинома
        p_pairs: число оцениваемых пар
        c_pixel: FLOP на пиксель

    Returns:
        Число операций
    """
    for name, value in (("N", n_dataset), ("d", d_degree), ("P", p_pairs), ("C", c_pixel)):
        if not math.isfinite(value) or value < 0:
            raise DomainError(f"{name} должно быть ≥ 0, получено {value}")
    spline = 0.0
    if n_dataset > 0:
        if not math.isfinite(s_segments) or s_segments < 1:
            raise DomainError(f"S должно быть ≥ 1, получено {s_segments}")
        spline = 3 * n_dataset + n_dataset * (math.log(s_segments) + d_degree + 1)
    return spline + p_pairs * PATCH_PIXELS * c_pixel


def flops_logistic(n_dataset: int) -> int:
    """(15N + 5)·250000"""
    if n_dataset < 1:
        raise DomainError(f"N должно быть ≥ 1, получено {n_dataset}")
    return (15 * n_dataset + 5) * LOGISTIC_FLOPS_PER_TERM


def format_gflops(value: float) -> str:
    """Значение в гига-FLOP с двумя знаками, например 3.75 G"""
    return f"{value / 1e9:.2f} G"
