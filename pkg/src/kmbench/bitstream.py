"""Codeword files: 8-byte little-endian bit count, then the bits packed MSB first, zero padded."""
from __future__ import annotations

import struct
from pathlib import Path

from .measures import check_bits

_HEADER = struct.Struct("<Q")


class BitstreamError(ValueError):
    pass


def pack_bits(bits: str) -> bytes:
    check_bits(bits)
    n = len(bits)
    body = bytearray((n + 7) // 8)
    for i, b in enumerate(bits):
        if b == "1":
            body[i >> 3] |= 0x80 >> (i & 7)
    return _HEADER.pack(n) + bytes(body)


def unpack_bits(data: bytes) -> str:
    if len(data) < _HEADER.size:
        raise BitstreamError("truncated header")
    (n,) = _HEADER.unpack_from(data)
    body = data[_HEADER.size :]
    if len(body) != (n + 7) // 8:
        raise BitstreamError(f"expected {(n + 7) // 8} payload bytes for {n} bits, found {len(body)}")
    if n % 8 and body[-1] & (0xFF >> (n % 8)):
        raise BitstreamError("nonzero padding bits")
    return "".join("1" if body[i >> 3] & (0x80 >> (i & 7)) else "0" for i in range(n))


def write_bits(path, bits: str) -> None:
    Path(path).write_bytes(pack_bits(bits))


def read_bits(path) -> str:
    return unpack_bits(Path(path).read_bytes())
