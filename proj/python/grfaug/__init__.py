"""Gaussian random field image augmentation."""

import json as _json

from ._core import (
    BatchError,
    apply_local_color,
    apply_pixel_affine,
    compose_grids,
    fit_power_law,
    hsv_to_rgb,
    local_affine_grid,
    power_spectrum,
    radial_power_spectrum,
    resize_bilinear,
    rgb_to_hsv,
    synthesize_field,
)
from . import _core

__all__ = [
    "BatchError",
    "apply_local_color",
    "apply_pixel_affine",
    "apply_sampled",
    "augment_batch",
    "compose_grids",
    "fit_power_law",
    "hsv_to_rgb",
    "local_affine_grid",
    "normalize_config",
    "power_spectrum",
    "radial_power_spectrum",
    "resize_bilinear",
    "rgb_to_hsv",
    "sample_transform",
    "synthesize_field",
]


def _dump(config):
    return config if isinstance(config, str) else _json.dumps(config)


def normalize_config(config=None):
    """Validated config with every key filled in, as a dict."""
    return _json.loads(_core.normalize_config(_dump(config or {})))


def sample_transform(config, image_index):
    """List of sampled constituents, or None when the augmentation is skipped."""
    t = _core.sample_transform(_dump(config), image_index)
    return None if t is None else _json.loads(t)


def apply_sampled(image, transform, interpolation="bilinear", padding="edge_clamp"):
    return _core.apply_sampled(image, _json.dumps(transform), interpolation, padding)


def augment_batch(images, config=None, threads=0):
    return _core.augment_batch(list(images), _dump(config or {}), threads)
