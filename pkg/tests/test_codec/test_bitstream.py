import struct

import pytest

from odic.codec import (
    BadMagicError,
    Bitstream,
    BitstreamError,
    CorruptHeaderError,
    TruncatedPayloadError,
    UnsupportedVersionError,
)
from odic.codec.bitstream import HEADER_SIZE


def _bitstream(saliency_mode: bool = True) -> Bitstream:
    return Bitstream(
        width=64,
        height=32,
        channels=3,
        lambda_index=5,
        alpha=1.0,
        saliency_mode=saliency_mode,
        mask=b"\x01\x02\x03" if saliency_mode else b"",
        payload=bytes(range(40)),
    )


def _patched(data: bytes, offset: int, value: bytes) -> bytes:
    return data[:offset] + value + data[offset + len(value) :]


@pytest.mark.parametrize("saliency_mode", [True, False])
def test__bitstream__header_round_trip(saliency_mode: bool) -> None:
    bs = _bitstream(saliency_mode)

    data = bs.to_bytes()

    assert HEADER_SIZE == 24
    assert data[:4] == b"ODIC"
    assert len(data) == len(bs)
    assert Bitstream.from_bytes(data) == bs


def test__bitstream__bpp_counts_every_byte() -> None:
    bs = _bitstream()

    assert len(bs) == 24 + 3 + 4 + 40
    assert bs.bpp == 8 * len(bs.to_bytes()) / (64 * 32)


@pytest.mark.parametrize(
    "data,error,code",
    [
        (b"", BadMagicError, 10),
        (b"OD", BadMagicError, 10),
        (b"JFIF" + bytes(40), BadMagicError, 10),
        (b"ODIC\x01\x01", CorruptHeaderError, 12),
    ],
)
def test__bitstream__broken_prefix(data: bytes, error: type, code: int) -> None:
    with pytest.raises(error) as e:
        Bitstream.from_bytes(data)

    assert e.value.code == code


def test__bitstream__unknown_version() -> None:
    data = _patched(_bitstream().to_bytes(), 4, b"\x02")

    with pytest.raises(UnsupportedVersionError) as e:
        Bitstream.from_bytes(data)

    assert e.value.code == 11


@pytest.mark.parametrize(
    "offset,value",
    [
        (5, b"\x03"),
        (5, b"\x00"),
        (6, struct.pack("<I", 0)),
        (6, struct.pack("<I", 0xFFFFFFFF)),
        (10, struct.pack("<I", 0xFFFFFFFF)),
        (6, struct.pack("<II", 40000, 40000)),
        (14, b"\x02"),
        (16, struct.pack("<f", -1.0)),
        (16, struct.pack("<f", float("nan"))),
    ],
)
def test__bitstream__corrupt_header_fields(offset: int, value: bytes) -> None:
    data = _patched(_bitstream().to_bytes(), offset, value)

    with pytest.raises(CorruptHeaderError) as e:
        Bitstream.from_bytes(data)

    assert e.value.code == 12


def test__bitstream__trailing_bytes() -> None:
    with pytest.raises(CorruptHeaderError):
        Bitstream.from_bytes(_bitstream().to_bytes() + b"\x00")


@pytest.mark.parametrize("cut", [1, 10, 40, 44, 46])
def test__bitstream__truncation(cut: int) -> None:
    data = _bitstream().to_bytes()

    with pytest.raises(TruncatedPayloadError) as e:
        Bitstream.from_bytes(data[: len(data) - cut])

    assert e.value.code == 13
    assert isinstance(e.value, BitstreamError)
