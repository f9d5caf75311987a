"""
Ядро: каноническая модель, VRF и ввод изображений
"""

from .canonical_model import (
    CanonicalParams,
    ViewerGeometry,
    canonical_dmos,
    certainty_threshold,
    clamp_dmos,
    equivalent_blur,
    pfi_blur_ratio,
    positional_uncertainty,
)
from .exceptions import BeleError
from .image_io import load_luminance, save_luminance
from .vrf import (
    KernelSpec,
    LuminanceImage,
    VisualMap,
    WindowSpec,
    gaussian_blur,
    gradient_energy,
    kernel_sigma,
    make_window,
    visual_map,
)

__all__ = [
    "BeleError",
    "CanonicalParams",
    "KernelSpec",
    "LuminanceImage",
    "ViewerGeometry",
    "VisualMap",
    "WindowSpec",
    "canonical_dmos",
    "certainty_threshold",
    "clamp_dmos",
    "equivalent_blur",
    "gaussian_blur",
    "gradient_energy",
    "kernel_sigma",
    "load_luminance",
    "make_window",
    "pfi_blur_ratio",
    "positional_uncertainty",
    "save_luminance",
    "visual_map",
]
