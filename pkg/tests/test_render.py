"""
Тесты визуализации
"""

import numpy as np
import pytest
from matplotlib.colors import rgb_to_hsv
from PIL import Image

from bele_iqa.core import CanonicalParams, ViewerGeometry, certainty_threshold, gaussian_blur
from bele_iqa.core.exceptions import DimensionError, DomainError
from bele_iqa.indices import EdgeIndex, partition
from bele_iqa.render import (
    IsoluminancePalette,
    build_scatter_figure,
    certainty_colors,
    render_certainty,
    render_scatter,
)
from bele_iqa.render.certainty_render import (
    COLORBAR_GAP,
    COLORBAR_WIDTH,
    CYAN,
    INVALID,
    NEUTRAL_GRAY,
    PURPLE,
    RED,
)


def legend_labels(fig):
    """Подписи легенды первой оси"""
    legend = fig.axes[0].get_legend()
    return [] if legend is None else [t.get_text() for t in legend.get_texts()]


def _analysis(texture, s_b):
    index = EdgeIndex(CanonicalParams(), ViewerGeometry())
    return index.analyze(texture, gaussian_blur(texture, s_b))


class TestCertaintyColors:
    """Тесты цветов карты уверенности"""

    def test_classes_match_partition(self, texture):
        """Тест соответствия классов оттенков множествам разбиения"""
        analysis = _analysis(texture, 2.0)
        threshold = analysis.partition.threshold
        palette = IsoluminancePalette(threshold=threshold, tol=0.0)
        codes, classes = certainty_colors(analysis.certainty, palette, analysis.lambda_ref)
        region = partition(analysis.certainty, threshold)
        assert np.array_equal(classes == RED, region.hot)
        assert np.array_equal((classes == CYAN) | (classes == PURPLE), region.cold)
        assert np.array_equal(classes == INVALID, ~analysis.certainty.valid_mask)

    def test_hues_in_pixels(self, texture):
        """Тест оттенков пикселей по классам"""
        analysis = _analysis(texture, 2.0)
        palette = IsoluminancePalette(threshold=analysis.partition.threshold)
        codes, classes = certainty_colors(analysis.certainty, palette, analysis.lambda_ref)
        hue = rgb_to_hsv(codes / 255.0)[..., 0] * 360.0
        for cls, expected in ((RED, 0.0), (CYAN, 180.0), (PURPLE, 280.0)):
            mask = classes == cls
            if not mask.any():
                continue
            diff = np.abs((hue[mask] - expected + 180.0) % 360.0 - 180.0)
            assert diff.max() < 3.0

    def test_isoluminance(self, texture):
        """Тест постоянной светлоты в пределах одного кода"""
        analysis = _analysis(texture, 3.0)
        palette = IsoluminancePalette(threshold=analysis.partition.threshold)
        codes, classes = certainty_colors(analysis.certainty, palette, analysis.lambda_ref)
        valid = classes != INVALID
        c = codes[valid].astype(float)
        lightness = (c.max(axis=1) + c.min(axis=1)) / 2.0
        assert np.all(np.abs(lightness - 127.5) <= 1.0)
        assert np.all(codes[~valid] == NEUTRAL_GRAY)

    def test_identical_pair_has_no_red(self, texture):
        """Тест пары одинаковых изображений: M ≡ 1"""
        analysis = _analysis(texture, 0.0)
        palette = IsoluminancePalette(threshold=analysis.partition.threshold)
        _, classes = certainty_colors(analysis.certainty, palette, analysis.lambda_ref)
        assert not np.any(classes == RED)

    def test_heavy_blur_red_dominant(self, texture):
        """Тест преобладания красного при сильном размытии"""
        analysis = _analysis(texture, 8.0)
        palette = IsoluminancePalette(threshold=certainty_threshold(0.5))
        _, classes = certainty_colors(analysis.certainty, palette, analysis.lambda_ref)
        assert np.sum(classes == RED) > np.sum((classes == CYAN) | (classes == PURPLE))

    def test_weight_shape_mismatch(self, texture):
        """Тест несовпадения размеров поля весов"""
        analysis = _analysis(texture, 1.0)
        palette = IsoluminancePalette(threshold=0.9)
        with pytest.raises(DimensionError):
            certainty_colors(analysis.certainty, palette, np.ones((3, 3)))

    def test_invalid_palette(self):
        """Тест порога вне (0, 1]"""
        with pytest.raises(DomainError):
            IsoluminancePalette(threshold=0.0)


class TestRenderCertainty:
    """Тесты записи PNG"""

    def test_writes_png(self, texture, tmp_path):
        """Тест файла с цветовой шкалой"""
        analysis = _analysis(texture, 2.0)
        palette = IsoluminancePalette(threshold=analysis.partition.threshold)
        path = render_certainty(analysis.certainty, palette, analysis.lambda_ref,
                                tmp_path / "map.png", dmos=30.0)
        with Image.open(path) as img:
            assert img.size == (COLORBAR_WIDTH + COLORBAR_GAP + texture.width, texture.height)
            assert img.mode == "RGB"

    def test_unwritable(self, texture, tmp_path):
        """Тест недоступного пути"""
        analysis = _analysis(texture, 2.0)
        palette = IsoluminancePalette(threshold=analysis.partition.threshold)
        with pytest.raises(OSError):
            render_certainty(analysis.certainty, palette, analysis.lambda_ref,
                             tmp_path / "missing" / "map.png")


class TestScatter:
    """Тесты диаграмм рассеяния"""

    def test_render_files(self, tmp_path):
        """Тест записи PNG и SVG"""
        png, svg = render_scatter([10, 20, 30], [12, 18, 33], ["a", "b", "a"],
                                  tmp_path / "scatter")
        assert png.exists() and svg.exists()
        assert png.suffix == ".png" and svg.suffix == ".svg"

    def test_empty_groups_skipped(self):
        """Тест пропуска групп без точек в легенде"""
        fig = build_scatter_figure([1, 2], [1, 2], ["a", "a"], group_order=["b", "a"])
        assert legend_labels(fig) == ["a"]

    def test_length_mismatch(self):
        """Тест несовпадения длин"""
        with pytest.raises(DimensionError):
            build_scatter_figure([1, 2], [1], ["a", "a"])
