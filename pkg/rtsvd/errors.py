# rtsvd/errors.py
from __future__ import annotations


class TSVDError(Exception):
    """Base class for every error raised by rtsvd."""


class InvalidTensor(TSVDError, ValueError):
    """Tensor construction input is not a finite real third-order array."""


class DimensionMismatch(TSVDError, ValueError):
    """Operand dimensions do not agree (inner dimension or tube length)."""


class SizeLimit(TSVDError):
    """An oracle-only operation would exceed the dense-matrix budget."""


class SymmetryViolation(TSVDError):
    """Inverse transform left an imaginary residue above tolerance; signals an upstream bug."""


class RankOutOfRange(TSVDError, ValueError):
    """Truncation term k (or k + p) is outside the admissible range."""


class IterationVectorLength(TSVDError, ValueError):
    """Per-slice iteration vector has the wrong length or breaks mirrored-slice equality."""


class InvalidEpsilon(TSVDError, ValueError):
    """Tolerance for the adaptive iteration rule is outside (0, 1)."""


class OversamplingTooSmall(TSVDError, ValueError):
    """Bound evaluators need an oversampling parameter p >= 2."""


class InvalidDelta(TSVDError, ValueError):
    """Failure probability is outside (0, 1)."""


class RankDeficientSketch(TSVDError):
    """V1^H W is not full row rank; resample the sketch."""


class IncompleteSpectrum(TSVDError, ValueError):
    """Factors do not carry the full per-slice singular value tail."""


class MixedImageSizes(TSVDError, ValueError):
    """Images in a dataset directory do not share one size."""


class UnreadableImage(TSVDError):
    """An image file could not be decoded."""


class TooFewSamples(TSVDError, ValueError):
    """Not enough lateral slices for the requested number of folds."""


class TensorFileCorrupt(TSVDError):
    """Tensor file failed magic, version, length or checksum validation."""


class ConfigError(TSVDError, ValueError):
    """Run configuration or config file is invalid."""


class LedgerCorrupt(TSVDError, ValueError):
    """A run-ledger line is not valid JSON."""
