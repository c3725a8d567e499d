"""MXB1 file format: byte layout, round trips, corruption handling."""

import struct

import numpy as np
import pytest

from msda import DataFormatError, read_mxb1, write_mxb1
from msda.mxb1 import decode_mxb1, encode_mxb1


def test_header_byte_layout(tmp_path):
    arr = np.arange(6, dtype=np.float32).reshape(2, 3)
    path = tmp_path / "t.mxb1"
    write_mxb1(path, arr)
    blob = path.read_bytes()
    # magic, rank 2, dims 2 and 3, then 6 little-endian f32s
    expect = b"MXB1" + struct.pack("<III", 2, 2, 3)
    expect += struct.pack("<6f", 0, 1, 2, 3, 4, 5)
    assert blob == expect


def test_round_trip_exact(tmp_path):
    rs = np.random.RandomState(1)
    arr = rs.rand(3, 2, 5, 4).astype(np.float32)
    path = tmp_path / "t.mxb1"
    write_mxb1(path, arr)
    back = read_mxb1(path)
    assert back.dtype == np.float32
    assert back.shape == (3, 2, 5, 4)
    assert np.array_equal(back, arr)


def test_float64_values_round_once(tmp_path):
    # Writing widened float64 and rewriting the read-back is byte-stable.
    rs = np.random.RandomState(2)
    arr64 = rs.rand(4, 7)
    p1, p2 = tmp_path / "a.mxb1", tmp_path / "b.mxb1"
    write_mxb1(p1, arr64)
    write_mxb1(p2, read_mxb1(p1).astype(np.float64))
    assert p1.read_bytes() == p2.read_bytes()


def test_encode_decode_match_file_io(tmp_path):
    arr = np.linspace(0, 1, 12, dtype=np.float32).reshape(3, 4)
    path = tmp_path / "t.mxb1"
    write_mxb1(path, arr)
    assert encode_mxb1(arr) == path.read_bytes()
    assert np.array_equal(decode_mxb1(path.read_bytes()), arr)


def test_bad_magic_rejected():
    with pytest.raises(DataFormatError, match="magic"):
        decode_mxb1(b"XXXX" + struct.pack("<II", 1, 0))


def test_truncated_inputs_rejected():
    good = encode_mxb1(np.zeros((2, 2), dtype=np.float32))
    with pytest.raises(DataFormatError):
        decode_mxb1(good[:3])
    with pytest.raises(DataFormatError):
        decode_mxb1(good[:10])
    with pytest.raises(DataFormatError):
        decode_mxb1(good[:-1])
    with pytest.raises(DataFormatError):
        decode_mxb1(good + b"\x00")


def test_absurd_rank_rejected():
    with pytest.raises(DataFormatError, match="rank"):
        decode_mxb1(b"MXB1" + struct.pack("<I", 1000))


def test_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        read_mxb1(tmp_path / "nope.mxb1")
