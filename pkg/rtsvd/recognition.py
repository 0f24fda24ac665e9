# rtsvd/recognition.py
"""
Face recognition with t-SVD projectors.

Training: subtract the mean lateral slice, decompose, keep the projector
U_k and the coefficient tensor C = U_k^T * A. Classification: center and
project the query the same way and return the label of the training
coefficient slice nearest in Frobenius norm (ties go to the lowest index).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from .algebra import tprod, ttranspose
from .config import DEFAULT_CONFIG
from .errors import DimensionMismatch, RankOutOfRange
from .observability import log_event
from .randomized import choose_iterations, rtsvd, rtsvd_subspace
from .sketch import SketchConfig
from .tensor import Tensor3
from .tsvd import singular_spectrum, tsvd_truncated


class Method(str, Enum):
    TSVD = "tsvd"
    RTSVD = "rtsvd"
    RTSVD_Q = "rtsvd-q"

    @property
    def randomized(self) -> bool:
        return self is not Method.TSVD


@dataclass(frozen=True, eq=False)
class FaceDataset:
    """Images as lateral slices: rows -> dim 1, image index -> dim 2, cols -> dim 3."""

    tensor: Tensor3
    labels: Tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(str(x) for x in self.labels)
        if len(labels) != self.tensor.n2:
            raise DimensionMismatch(f"{len(labels)} labels for {self.tensor.n2} images")
        object.__setattr__(self, "labels", labels)

    @property
    def n_images(self) -> int:
        return self.tensor.n2

    @property
    def image_shape(self) -> Tuple[int, int]:
        return self.tensor.n1, self.tensor.n3

    @cached_property
    def mean_slice(self) -> Tensor3:
        return Tensor3(self.tensor.data.mean(axis=1, keepdims=True))

    def subset(self, idx: Sequence[int]) -> "FaceDataset":
        idx = [int(i) for i in idx]
        return FaceDataset(self.tensor.laterals(idx), tuple(self.labels[i] for i in idx))

    def image(self, j: int) -> Tensor3:
        return self.tensor.lateral(j)


@dataclass(frozen=True, eq=False)
class RecognitionModel:
    projector: Tensor3
    coefficients: Tensor3
    labels: Tuple[str, ...]
    mean_slice: Tensor3
    method: str
    scale: Optional[Tensor3] = None
    q: Tuple[int, ...] = field(default=())

    @property
    def k(self) -> int:
        return self.projector.n2

    def center(self, images: Tensor3) -> Tensor3:
        if images.n1 != self.mean_slice.n1 or images.n3 != self.mean_slice.n3:
            raise DimensionMismatch(
                f"query images are {images.n1}x{images.n3}, model expects "
                f"{self.mean_slice.n1}x{self.mean_slice.n3}"
            )
        data = images.data - self.mean_slice.data
        if self.scale is not None:
            data = data / self.scale.data
        return Tensor3(data)

    def project(self, images: Tensor3) -> Tensor3:
        """U_k^T * centered images, k x m x n3."""
        return tprod(ttranspose(self.projector), self.center(images))


def _standard_scale(centered: np.ndarray) -> Tensor3:
    std = centered.std(axis=1, keepdims=True)
    std[std == 0] = 1.0
    return Tensor3(std)


def train(
    data: FaceDataset,
    k: int,
    method: Union[Method, str] = Method.TSVD,
    cfg: Optional[SketchConfig] = None,
    *,
    standardize: Optional[bool] = None,
    executor: Optional[Any] = None,
    exploit_symmetry: Optional[bool] = None,
) -> RecognitionModel:
    """
    Fit a projector on the training images.

    cfg supplies p, q (or eps for the per-slice rule) and the seed of the
    randomized methods; its k is replaced by the k given here.
    """
    method = Method(method)
    n1, n2, n3 = data.tensor.dims
    if not 1 <= k <= min(n1, n2):
        raise RankOutOfRange(f"k={k} must lie in [1, min(n1, n_train)={min(n1, n2)}]")
    standardize = bool(DEFAULT_CONFIG["standardize"] if standardize is None else standardize)

    mean = data.mean_slice
    centered = data.tensor.data - mean.data
    scale = None
    if standardize:
        scale = _standard_scale(centered)
        centered = centered / scale.data
    a = Tensor3(centered)

    q_used: Tuple[int, ...] = ()
    if method is Method.TSVD:
        factors = tsvd_truncated(a, k, executor=executor, exploit_symmetry=exploit_symmetry)
    else:
        cfg = replace(cfg or SketchConfig(k=k, p=int(DEFAULT_CONFIG["p"])), k=k)
        if method is Method.RTSVD:
            factors, _ = rtsvd(a, cfg, executor=executor, exploit_symmetry=exploit_symmetry, with_report=False)
        else:
            if cfg.eps is not None:
                spec = singular_spectrum(a, executor=executor, exploit_symmetry=exploit_symmetry)
                cfg = cfg.clamp(n1, n2)
                cfg = cfg.with_q(choose_iterations(spec, k, cfg.p, cfg.eps, q_max=cfg.q_max))
            factors, _ = rtsvd_subspace(
                a, cfg, executor=executor, exploit_symmetry=exploit_symmetry, with_report=False
            )
            q_used = tuple(int(x) for x in cfg.q_vector(n3))

    projector = factors.u
    coefficients = tprod(ttranspose(projector), a)
    log_event("recognition.trained", {"method": method.value, "k": k, "n_train": n2})
    return RecognitionModel(
        projector=projector,
        coefficients=coefficients,
        labels=data.labels,
        mean_slice=mean,
        method=method.value,
        scale=scale,
        q=q_used,
    )


def _distances(model: RecognitionModel, queries: Tensor3) -> np.ndarray:
    ct = model.project(queries).data
    c = model.coefficients.data
    # rows = images, columns = flattened k x n3 coefficient slice
    train_vecs = np.transpose(c, (1, 0, 2)).reshape(c.shape[1], -1)
    query_vecs = np.transpose(ct, (1, 0, 2)).reshape(ct.shape[1], -1)
    return cdist(query_vecs, train_vecs, metric="euclidean")


def classify_many(model: RecognitionModel, queries: Tensor3) -> List[Tuple[str, float]]:
    """Nearest training slice for every lateral slice of queries."""
    d = _distances(model, queries)
    out = []
    for row in d:
        j = int(np.argmin(row))
        out.append((model.labels[j], float(row[j])))
    return out


def classify(model: RecognitionModel, image: Tensor3) -> Tuple[str, float]:
    if image.n2 != 1:
        raise DimensionMismatch(f"classify takes one n1 x 1 x n3 image, got {image.dims}")
    return classify_many(model, image)[0]


def recognition_rate(model: RecognitionModel, test: FaceDataset) -> float:
    """Fraction of test images whose predicted label matches."""
    if test.n_images == 0:
        return 0.0
    predicted = classify_many(model, test.tensor)
    hits = sum(1 for (label, _), truth in zip(predicted, test.labels) if label == truth)
    return hits / test.n_images
