"""
32-bit carry-less range coder

The coder never propagates carries: whenever the interval straddles a byte boundary while getting narrow,
the range is truncated instead. Totals passed to the coder must not exceed `BOTTOM` (2**16).
"""

from odic.codec.exceptions import CorruptPayloadError, TruncatedPayloadError

RANGE_BITS = 32
TOP = 1 << (RANGE_BITS - 8)
BOTTOM = 1 << (RANGE_BITS - 16)
MASK = (1 << RANGE_BITS) - 1

MAX_BYPASS_CHUNK = 16


class RangeEncoder:
    def __init__(self) -> None:
        self._low = 0
        self._range = MASK
        self._out = bytearray()
        self._finished = False

    def encode(self, start: int, size: int, total: int) -> None:
        """
        Narrow the interval to `[start, start + size)` out of `total`
        """
        r = self._range // total
        self._low += start * r
        self._range = size * r

        self._normalize()

    def encode_bits(self, value: int, nbits: int) -> None:
        """
        Equiprobable bits, most significant chunk first
        """
        while nbits > 0:
            chunk = min(nbits, MAX_BYPASS_CHUNK)
            nbits -= chunk
            self.encode((value >> nbits) & ((1 << chunk) - 1), 1, 1 << chunk)

    def _normalize(self) -> None:
        while True:
            if (self._low ^ (self._low + self._range)) >= TOP:
                if self._range >= BOTTOM:
                    return

                self._range = -self._low & (BOTTOM - 1)

            self._out.append(self._low >> (RANGE_BITS - 8))
            self._low = (self._low << 8) & MASK
            self._range = (self._range << 8) & MASK

    def finish(self) -> bytes:
        if not self._finished:
            for _ in range(RANGE_BITS // 8):
                self._out.append(self._low >> (RANGE_BITS - 8))
                self._low = (self._low << 8) & MASK

            self._finished = True

        return bytes(self._out)


class RangeDecoder:
    def __init__(self, data: bytes) -> None:
        self._data = data
        self._position = 0
        self._low = 0
        self._range = MASK
        self._code = 0

        for _ in range(RANGE_BITS // 8):
            self._code = (self._code << 8) | self._next_byte()

    def _next_byte(self) -> int:
        if self._position >= len(self._data):
            raise TruncatedPayloadError(f"Entropy coded data ended after {len(self._data)} bytes")

        byte = self._data[self._position]
        self._position += 1

        return byte

    def target(self, total: int) -> int:
        """
        Cumulative frequency the next symbol falls on. Must be followed by `consume`
        """
        self._range //= total
        value = ((self._code - self._low) & MASK) // self._range

        if value >= total:
            raise CorruptPayloadError("Entropy coded data is inconsistent with its model")

        return value

    def consume(self, start: int, size: int) -> None:
        self._low += start * self._range
        self._range *= size

        while True:
            if (self._low ^ (self._low + self._range)) >= TOP:
                if self._range >= BOTTOM:
                    return

                self._range = -self._low & (BOTTOM - 1)

            self._code = ((self._code << 8) | self._next_byte()) & MASK
            self._low = (self._low << 8) & MASK
            self._range = (self._range << 8) & MASK

    def decode_bits(self, nbits: int) -> int:
        value = 0

        while nbits > 0:
            chunk = min(nbits, MAX_BYPASS_CHUNK)
            nbits -= chunk
            bits = self.target(1 << chunk)
            self.consume(bits, 1)
            value = (value << chunk) | bits

        return value

    @property
    def consumed(self) -> int:
        return self._position
