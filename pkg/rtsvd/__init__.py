"""t-product tensor algebra, t-SVD and randomized t-SVD with subspace iteration."""
from .algebra import identity_tensor, t_qr, tprod, ttranspose
from .errors import TSVDError
from .randomized import choose_iterations, rtsvd, rtsvd_subspace
from .sketch import SketchConfig
from .tensor import Tensor3, fft_mode3, frobenius_norm, ifft_mode3
from .tsvd import TSVDFactors, reconstruct, singular_spectrum, tsvd_truncated

__version__ = "0.1.0"
