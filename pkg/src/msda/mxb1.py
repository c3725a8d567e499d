"""MXB1 binary tensor files.

Layout, all little-endian:

    bytes 0..3   magic "MXB1"
    u32          rank
    u32 * rank   dims
    f32 * prod(dims)   data, row-major

Floats are stored as 32-bit; readers widen to float64 losslessly, and
writers round float64 with round-to-nearest-even, so a read/write round
trip of any MXB1 file is byte-identical.
"""

import struct
from pathlib import Path

import numpy as np

from .errors import DataFormatError

MAGIC = b"MXB1"
_MAX_RANK = 32


def write_mxb1(path, array) -> None:
    """Write an array as an MXB1 file (values cast to float32)."""
    arr = np.ascontiguousarray(array, dtype="<f4")
    header = MAGIC + struct.pack("<I", arr.ndim)
    header += struct.pack(f"<{arr.ndim}I", *arr.shape)
    Path(path).write_bytes(header + arr.tobytes())


def read_mxb1(path) -> np.ndarray:
    """Read an MXB1 file into a float32 ndarray.

    Raises:
        DataFormatError: bad magic, absurd rank, or a data section whose
            length does not match the declared dims exactly.
    """
    blob = Path(path).read_bytes()
    return decode_mxb1(blob, name=str(path))


def decode_mxb1(blob: bytes, name: str = "<bytes>") -> np.ndarray:
    """Decode MXB1 bytes already in memory. Same checks as read_mxb1."""
    if len(blob) < 8:
        raise DataFormatError(f"{name}: truncated MXB1 header")
    if blob[:4] != MAGIC:
        raise DataFormatError(f"{name}: bad magic {blob[:4]!r}, expected {MAGIC!r}")
    (rank,) = struct.unpack_from("<I", blob, 4)
    if rank > _MAX_RANK:
        raise DataFormatError(f"{name}: rank {rank} exceeds limit {_MAX_RANK}")
    need = 8 + 4 * rank
    if len(blob) < need:
        raise DataFormatError(f"{name}: truncated MXB1 dims")
    dims = struct.unpack_from(f"<{rank}I", blob, 8)
    count = 1
    for d in dims:
        count *= d
    if len(blob) != need + 4 * count:
        raise DataFormatError(
            f"{name}: data section is {len(blob) - need} bytes, expected {4 * count}"
        )
    data = np.frombuffer(blob, dtype="<f4", count=count, offset=need)
    return data.reshape(dims).copy()


def encode_mxb1(array) -> bytes:
    """Encode an array as MXB1 bytes (values cast to float32)."""
    arr = np.ascontiguousarray(array, dtype="<f4")
    header = MAGIC + struct.pack("<I", arr.ndim)
    header += struct.pack(f"<{arr.ndim}I", *arr.shape)
    return header + arr.tobytes()
