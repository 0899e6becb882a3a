import pytest
from hypothesis import given
from hypothesis import strategies as st

from kmbench.bitstream import BitstreamError, pack_bits, read_bits, unpack_bits, write_bits


def test_layout():
    assert pack_bits("") == bytes(8)
    assert pack_bits("1") == b"\x01" + bytes(7) + b"\x80"
    assert pack_bits("0110") == b"\x04" + bytes(7) + b"\x60"
    assert pack_bits("101010101") == b"\x09" + bytes(7) + b"\xaa\x80"


@given(st.text("01", max_size=100))
def test_round_trip(bits):
    assert unpack_bits(pack_bits(bits)) == bits


def test_file_round_trip(tmp_path):
    path = tmp_path / "c.bin"
    write_bits(path, "1100101")
    assert read_bits(path) == "1100101"


@pytest.mark.parametrize(
    "data",
    [b"\x01\x00", b"\x09" + bytes(7) + b"\xaa", b"\x01" + bytes(7) + b"\x81", b"\x01" + bytes(7) + b"\x80\x00"],
)
def test_malformed(data):
    with pytest.raises(BitstreamError):
        unpack_bits(data)


def test_rejects_non_bits():
    with pytest.raises(ValueError):
        pack_bits("012")
