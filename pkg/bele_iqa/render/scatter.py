"""
Диаграммы рассеяния предсказание–DMOS
"""

import logging
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from ..core.exceptions import DimensionError  # noqa: E402

logger = logging.getLogger(__name__)


def build_scatter_figure(pred: Sequence[float], dmos: Sequence[float], labels: Sequence[str],
                         group_order: Optional[Sequence[str]] = None,
                         title: Optional[str] = None) -> Figure:
    """
    Построить фигуру: точки по группам и линия y = x

    Args:
        pred: предсказанные DMOS
        dmos: субъективные DMOS
        labels: метка группы для каждой точки
        group_order: порядок групп в легенде; группы без точек пропускаются
        title: заголовок

    Returns:
        Фигура matplotlib
    """
    x = np.asarray(pred, dtype=float)
    y = np.asarray(dmos, dtype=float)
    labels = list(labels)
    if x.shape != y.shape or len(labels) != x.size:
        raise DimensionError("Длины предсказаний, DMOS и меток не совпадают")

    order = list(group_order) if group_order is not None else sorted(set(labels))
    fig, ax = plt.subplots(figsize=(5, 5))
    colors = plt.get_cmap("tab10")
    plotted = 0
    for name in order:
        mask = np.array([lab == name for lab in labels], dtype=bool)
        if not mask.any():
            continue
        ax.scatter(x[mask], y[mask], s=14, color=colors(plotted % 10), label=name)
        plotted += 1

    if x.size:
        lo = float(min(x.min(), y.min()))
        hi = float(max(x.max(), y.max()))
    else:
        lo, hi = 0.0, 100.0
    if hi <= lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    ax.plot([lo - pad, hi + pad], [lo - pad, hi + pad], color="black", linewidth=0.8)
    ax.set_xlim(lo - pad, hi + pad)
    ax.set_ylim(lo - pad, hi + pad)
    ax.set_xlabel("Predicted DMOS")
    ax.set_ylabel("DMOS")
    if title:
        ax.set_title(title)
    if plotted:
        ax.legend(loc="upper left", fontsize=8)
    return fig


def render_scatter(pred: Sequence[float], dmos: Sequence[float], labels: Sequence[str],
                   path: Union[str, Path], group_order: Optional[Sequence[str]] = None,
                   title: Optional[str] = None) -> Tuple[Path, Path]:
    """
    Сохранить диаграмму рассеяния в PNG и SVG

    Returns:
        Пути к PNG и SVG
    """
    fig = build_scatter_figure(pred, dmos, labels, group_order, title)
    png = Path(path).with_suffix(".png")
    svg = png.with_suffix(".svg")
    try:
        fig.savefig(png, dpi=100)
        fig.savefig(svg)
    finally:
        plt.close(fig)
    logger.info(f"Диаграмма рассеяния сохранена: {png}")
    return png, svg
