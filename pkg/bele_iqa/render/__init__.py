"""
Визуализация: карты уверенности и диаграммы рассеяния
"""

from .certainty_render import IsoluminancePalette, certainty_colors, render_certainty
from .scatter import build_scatter_figure, render_scatter

__all__ = [
    "IsoluminancePalette",
    "build_scatter_figure",
    "certainty_colors",
    "render_certainty",
    "render_scatter",
]
