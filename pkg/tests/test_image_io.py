"""
Тесты загрузки изображений
"""

import numpy as np
import pytest
from PIL import Image

from bele_iqa.core import LuminanceImage, load_luminance, save_luminance
from bele_iqa.core.exceptions import ImageDecodeError


class TestLoadLuminance:
    """Тесты приведения файлов к яркости в [0, 1]"""

    def test_eight_bit_png(self, tmp_path):
        """Тест 8-битного PNG: деление на 255"""
        codes = np.array([[0, 51, 255], [102, 204, 17]], dtype=np.uint8)
        path = tmp_path / "gray8.png"
        Image.fromarray(codes).save(path)
        image = load_luminance(path)
        assert np.array_equal(image.samples, codes / 255.0)

    def test_sixteen_bit_png(self, tmp_path):
        """Тест 16-битного PNG: деление на 65535"""
        codes = np.array([[0, 1000, 65535], [32768, 12345, 7]], dtype=np.uint16)
        path = tmp_path / "gray16.png"
        Image.fromarray(codes).save(path)
        image = load_luminance(path)
        assert image.samples == pytest.approx(codes / 65535.0, abs=1e-12)

    def test_pgm(self, tmp_path):
        """Тест полутонового PGM"""
        codes = np.arange(0, 256, 16, dtype=np.uint8).reshape(4, 4)
        path = tmp_path / "gray.pgm"
        Image.fromarray(codes).save(path)
        assert np.array_equal(load_luminance(path).samples, codes / 255.0)

    def test_rgb_bmp_rec709(self, tmp_path):
        """Тест цветного BMP: веса Rec. 709"""
        rgb = np.array([[[255, 0, 0], [0, 255, 0]], [[0, 0, 255], [51, 51, 51]]],
                       dtype=np.uint8)
        path = tmp_path / "color.bmp"
        Image.fromarray(rgb).save(path)
        image = load_luminance(path)
        expected = np.array([[0.2126, 0.7152], [0.0722, 0.2]])
        assert image.samples == pytest.approx(expected, abs=1e-9)

    def test_sixteen_bit_save(self, tmp_path):
        """Тест записи 16-битного PNG"""
        samples = np.linspace(0.0, 1.0, 16).reshape(4, 4)
        path = save_luminance(LuminanceImage(samples), tmp_path / "out.png", bits=16)
        assert load_luminance(path).samples == pytest.approx(samples, abs=1.0 / 65535)

    def test_missing_file(self, tmp_path):
        """Тест отсутствующего файла"""
        with pytest.raises(FileNotFoundError):
            load_luminance(tmp_path / "absent.png")

    def test_undecodable(self, tmp_path):
        """Тест файла, который не является изображением"""
        path = tmp_path / "broken.png"
        path.write_bytes(b"not an image")
        with pytest.raises(ImageDecodeError):
            load_luminance(path)
