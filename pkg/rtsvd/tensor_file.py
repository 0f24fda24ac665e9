# rtsvd/tensor_file.py
"""
TensorFile v1: bit-exact binary container for one Tensor3.

    offset  size        field
    0       4           magic b"TT3F"
    4       2           version, u16 LE (= 1)
    6       24          n1, n2, n3, u64 LE each
    30      8*n1*n2*n3  float64 LE payload, frontal-slice index slowest
    end-4   4           CRC-32 (zlib) of the payload, u32 LE

See protocols/tensor_file/tensor_file_v1.md.
"""
from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple

import numpy as np

from .errors import TensorFileCorrupt
from .observability import log_event
from .paths import PathLike, ensure_parent
from .tensor import Tensor3

MAGIC = b"TT3F"
VERSION = 1
_HEADER = struct.Struct("<4sHQQQ")
_TRAILER = struct.Struct("<I")


@dataclass(frozen=True)
class TensorFileHeader:
    version: int
    dims: Tuple[int, int, int]

    @property
    def payload_bytes(self) -> int:
        n1, n2, n3 = self.dims
        return 8 * n1 * n2 * n3


def encode_tensor(t: Tensor3) -> bytes:
    payload = t.data.astype("<f8").tobytes(order="F")
    header = _HEADER.pack(MAGIC, VERSION, *t.dims)
    return header + payload + _TRAILER.pack(zlib.crc32(payload) & 0xFFFFFFFF)


def _parse_header(raw: bytes) -> TensorFileHeader:
    if len(raw) < _HEADER.size:
        raise TensorFileCorrupt(f"file holds {len(raw)} bytes, shorter than the {_HEADER.size}-byte header")
    magic, version, n1, n2, n3 = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise TensorFileCorrupt(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise TensorFileCorrupt(f"unsupported version {version}, expected {VERSION}")
    if min(n1, n2, n3) < 1:
        raise TensorFileCorrupt(f"dimensions must be >= 1, got {(n1, n2, n3)}")
    return TensorFileHeader(version=version, dims=(int(n1), int(n2), int(n3)))


def decode_tensor(raw: bytes) -> Tensor3:
    header = _parse_header(raw)
    expected = _HEADER.size + header.payload_bytes + _TRAILER.size
    if len(raw) != expected:
        raise TensorFileCorrupt(f"file holds {len(raw)} bytes, dims {header.dims} need {expected}")
    payload = raw[_HEADER.size : _HEADER.size + header.payload_bytes]
    (stored,) = _TRAILER.unpack_from(raw, _HEADER.size + header.payload_bytes)
    actual = zlib.crc32(payload) & 0xFFFFFFFF
    if stored != actual:
        raise TensorFileCorrupt(f"checksum mismatch: stored {stored:#010x}, computed {actual:#010x}")
    data = np.frombuffer(payload, dtype="<f8").reshape(header.dims, order="F")
    return Tensor3(data.astype(np.float64))


def save_tensor(t: Tensor3, path: PathLike) -> Path:
    p = ensure_parent(Path(path))
    raw = encode_tensor(t)
    p.write_bytes(raw)
    log_event("io.tensor.saved", {"path": str(p), "dims": list(t.dims), "bytes": len(raw)})
    return p


def load_tensor(path: PathLike) -> Tensor3:
    p = Path(path)
    t = decode_tensor(p.read_bytes())
    log_event("io.tensor.loaded", {"path": str(p), "dims": list(t.dims)})
    return t


def read_header(path: PathLike) -> TensorFileHeader:
    with Path(path).open("rb") as f:
        return _parse_header(f.read(_HEADER.size))
