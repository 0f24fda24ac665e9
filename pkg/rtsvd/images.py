# rtsvd/images.py
"""
Image-directory ingestion for the recognition pipeline.

Directory layout: one subdirectory per person, named by its label, holding
equally sized grayscale images (PGM P5 8-bit and 16-bit; anything else
Pillow decodes is converted to grayscale). Pixels are scaled to [0, 1].
"""
from __future__ import annotations

import logging
from enum import Enum
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import MixedImageSizes, UnreadableImage
from .observability import log_event
from .paths import PathLike
from .recognition import FaceDataset
from .tensor import Tensor3

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = (".pgm", ".png", ".bmp", ".tif", ".tiff")

_SIXTEEN_BIT_MODES = ("I;16", "I;16B", "I;16L", "I")


class Layout(str, Enum):
    # rows -> dim 1, image index -> dim 2, cols -> dim 3
    LATERAL = "lateral"
    # cols -> dim 1, image index -> dim 2, rows -> dim 3
    TRANSPOSED = "transposed"


def read_image(path: PathLike) -> np.ndarray:
    """Grayscale pixels of one image as float64 in [0, 1]."""
    p = Path(path)
    try:
        with Image.open(p) as img:
            img.load()
            if img.mode in _SIXTEEN_BIT_MODES:
                return np.asarray(img, dtype=np.float64) / 65535.0
            if img.mode != "L":
                img = img.convert("L")
            return np.asarray(img, dtype=np.float64) / 255.0
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise UnreadableImage(f"cannot decode {p}: {exc}") from exc


def _collect(root: Path) -> List[Tuple[str, Path]]:
    items = []
    for sub in sorted(d for d in root.iterdir() if d.is_dir()):
        for f in sorted(sub.iterdir()):
            if f.is_file() and f.suffix.lower() in IMAGE_SUFFIXES:
                items.append((sub.name, f))
    return items


def load_image_dir(path: PathLike, layout: Union[Layout, str] = Layout.LATERAL) -> FaceDataset:
    root = Path(path)
    if not root.is_dir():
        raise UnreadableImage(f"not a directory: {root}")
    layout = Layout(layout)
    items = _collect(root)
    if not items:
        raise UnreadableImage(f"no images under {root} (expected <label>/<image> with suffix in {IMAGE_SUFFIXES})")

    first_shape = None
    images = []
    for label, f in items:
        img = read_image(f)
        if first_shape is None:
            first_shape = img.shape
        elif img.shape != first_shape:
            raise MixedImageSizes(f"{f} is {img.shape}, earlier images are {first_shape}")
        images.append(img if layout is Layout.LATERAL else img.T)

    data = np.stack(images, axis=1)
    logger.info("loaded %d images of size %s from %s", len(images), first_shape, root)
    log_event("io.images.loaded", {"path": str(root), "count": len(images), "shape": list(first_shape)})
    return FaceDataset(Tensor3(data), tuple(label for label, _ in items))


def save_image_dir(data: FaceDataset, path: PathLike, *, layout: Union[Layout, str] = Layout.LATERAL) -> Path:
    """Write every lateral slice as an 8-bit PGM under <path>/<label>/."""
    root = Path(path)
    layout = Layout(layout)
    counters = {}
    for j, label in enumerate(data.labels):
        img = data.tensor.data[:, j, :]
        if layout is Layout.TRANSPOSED:
            img = img.T
        pixels = np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)
        n = counters.get(label, 0)
        counters[label] = n + 1
        out = root / label / f"img_{n:04d}.pgm"
        out.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(pixels).save(out)
    log_event("io.images.saved", {"path": str(root), "count": data.n_images})
    return root
