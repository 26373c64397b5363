"""
Probability models for the latent payload and the mask side information

Quantized latent channels are coded channel by channel, pixels in raster order. A channel is first
flagged as all-zero or not. Symbols of a non-zero channel come from a two-sided geometric table chosen by
a running estimate of the channel's mean magnitude; magnitudes at or above the escape threshold are sent
as an escape symbol followed by an Exp-Golomb remainder and a sign in bypass bits.

All tables are built with integer arithmetic (plus correctly rounded square roots), so streams are
identical across platforms.
"""

import bisect
import functools
import math
from typing import List, Sequence, Tuple

import numpy as np

from odic.codec.exceptions import CorruptPayloadError
from odic.codec.rangecoder import RangeDecoder, RangeEncoder
from odic.typing import IntArrayT

TABLE_TOTAL = 1 << 15
FIXED_ONE = 1 << 16

# magnitude estimate is kept in fixed point with MAGNITUDE_SHIFT fractional bits
MAGNITUDE_SHIFT = 8
MAGNITUDE_ADAPT_SHIFT = 3
MAGNITUDE_CAP = 1 << 16
MAGNITUDE_INIT = 1 << MAGNITUDE_SHIFT

STATE_COUNT = 32
STATE_OFFSET = 12

MAX_GOLOMB_PREFIX = 40


class AdaptiveFrequencyModel:
    """
    Counts-based model over a small alphabet; counts are halved once their sum passes `limit`
    """

    def __init__(self, symbols: int, increment: int = 24, limit: int = 1 << 13) -> None:
        self._freqs = [1] * symbols
        self._total = symbols
        self._increment = increment
        self._limit = limit

    def _update(self, symbol: int) -> None:
        self._freqs[symbol] += self._increment
        self._total += self._increment

        if self._total > self._limit:
            self._freqs = [(freq + 1) // 2 for freq in self._freqs]
            self._total = sum(self._freqs)

    def encode(self, encoder: RangeEncoder, symbol: int) -> None:
        start = sum(self._freqs[:symbol])
        encoder.encode(start, self._freqs[symbol], self._total)
        self._update(symbol)

    def decode(self, decoder: RangeDecoder) -> int:
        target = decoder.target(self._total)
        start = 0

        for symbol, freq in enumerate(self._freqs):
            if target < start + freq:
                decoder.consume(start, freq)
                self._update(symbol)
                return symbol

            start += freq

        raise CorruptPayloadError("Adaptive model target out of range")


def _state_mean(state: int) -> float:
    exponent = state - STATE_OFFSET
    mean = math.ldexp(1.0, exponent // 2)

    return mean * math.sqrt(2.0) if exponent % 2 else mean


class GeometricTables:
    """
    Two-sided geometric symbol tables, one per magnitude state

    Symbol 0 is value 0, symbols `2k - 1` / `2k` are `+k` / `-k` for `0 < k < escape`, the last symbol is
    the escape.
    """

    def __init__(self, escape: int) -> None:
        self.escape = escape
        self.escape_symbol = 2 * escape - 1
        self.starts: List[List[int]] = []
        self.freqs: List[List[int]] = []
        self.totals: List[int] = []
        self.golomb_orders: List[int] = []

        for state in range(STATE_COUNT):
            freqs = self._frequencies(_state_mean(state))
            self.freqs.append(freqs)
            self.starts.append([0, *np.cumsum(freqs).tolist()])
            self.totals.append(sum(freqs))
            self.golomb_orders.append(max(0, (state - STATE_OFFSET) // 2))

        # state boundaries sit a quarter octave below each state's mean
        quarter_octave = math.sqrt(math.sqrt(2.0))
        self.thresholds = [
            int(_state_mean(state) / quarter_octave * (1 << MAGNITUDE_SHIFT)) for state in range(1, STATE_COUNT)
        ]

    def _frequencies(self, mean: float) -> List[int]:
        theta = (math.sqrt(1.0 + mean * mean) - 1.0) / mean
        theta_fixed = min(FIXED_ONE - 1, max(1, int(theta * FIXED_ONE)))

        weights = [FIXED_ONE]
        for _ in range(1, self.escape + 1):
            weights.append((weights[-1] * theta_fixed) >> 16)

        symbol_weights = [weights[0]]
        for magnitude in range(1, self.escape):
            symbol_weights.extend((weights[magnitude], weights[magnitude]))

        # tail mass of both signs past the escape threshold
        symbol_weights.append((2 * weights[self.escape] * FIXED_ONE) // (FIXED_ONE - theta_fixed))

        spread = TABLE_TOTAL - len(symbol_weights)
        weight_total = sum(symbol_weights)

        return [1 + (weight * spread) // weight_total for weight in symbol_weights]

    def state(self, magnitude: int) -> int:
        return bisect.bisect_right(self.thresholds, magnitude)


@functools.lru_cache(maxsize=4)
def geometric_tables(escape: int) -> GeometricTables:
    return GeometricTables(escape)


def _adapt(magnitude: int, value: int) -> int:
    return magnitude + (((min(abs(value), MAGNITUDE_CAP) << MAGNITUDE_SHIFT) - magnitude) >> MAGNITUDE_ADAPT_SHIFT)


def _encode_golomb(encoder: RangeEncoder, value: int, order: int) -> None:
    shifted = value + (1 << order)
    prefix = shifted.bit_length() - order - 1

    for _ in range(prefix):
        encoder.encode_bits(0, 1)

    # the terminating one is coded on its own, as the decoder reads it
    encoder.encode_bits(1, 1)
    encoder.encode_bits(shifted - (1 << (prefix + order)), prefix + order)


def _decode_golomb(decoder: RangeDecoder, order: int) -> int:
    prefix = 0

    while decoder.decode_bits(1) == 0:
        prefix += 1

        if prefix > MAX_GOLOMB_PREFIX:
            raise CorruptPayloadError("Exp-Golomb prefix is too long")

    shifted = (1 << (prefix + order)) | decoder.decode_bits(prefix + order)

    return shifted - (1 << order)


class ChannelCoder:
    """
    Codes integer channels with the scheme described in the module docstring
    """

    def __init__(self, escape: int) -> None:
        self._tables = geometric_tables(escape)
        self._zero_flags = AdaptiveFrequencyModel(2)

    def encode_channel(self, encoder: RangeEncoder, values: Sequence[int]) -> None:
        if not any(values):
            self._zero_flags.encode(encoder, 1)
            return

        self._zero_flags.encode(encoder, 0)

        tables = self._tables
        escape = tables.escape
        magnitude = MAGNITUDE_INIT

        for value in values:
            state = tables.state(magnitude)
            starts = tables.starts[state]
            freqs = tables.freqs[state]
            total = tables.totals[state]
            size = abs(value)

            if size < escape:
                symbol = 0 if value == 0 else (2 * size - 1 if value > 0 else 2 * size)
                encoder.encode(starts[symbol], freqs[symbol], total)
            else:
                symbol = tables.escape_symbol
                encoder.encode(starts[symbol], freqs[symbol], total)
                _encode_golomb(encoder, size - escape, tables.golomb_orders[state])
                encoder.encode_bits(1 if value < 0 else 0, 1)

            magnitude = _adapt(magnitude, value)

    def decode_channel(self, decoder: RangeDecoder, count: int) -> List[int]:
        if self._zero_flags.decode(decoder) == 1:
            return [0] * count

        tables = self._tables
        escape = tables.escape
        magnitude = MAGNITUDE_INIT
        values: List[int] = []

        for _ in range(count):
            state = tables.state(magnitude)
            starts = tables.starts[state]
            target = decoder.target(tables.totals[state])
            symbol = bisect.bisect_right(starts, target) - 1
            decoder.consume(starts[symbol], tables.freqs[state][symbol])

            if symbol == tables.escape_symbol:
                size = escape + _decode_golomb(decoder, tables.golomb_orders[state])
                value = -size if decoder.decode_bits(1) else size
            elif symbol == 0:
                value = 0
            else:
                size = (symbol + 1) // 2
                value = size if symbol % 2 else -size

            values.append(value)
            magnitude = _adapt(magnitude, value)

        return values


def dpcm_residuals(grid: IntArrayT) -> IntArrayT:
    """
    Prediction residuals against the left neighbour; the first column predicts from the pixel above
    """
    prediction = np.zeros_like(grid)
    prediction[:, 1:] = grid[:, :-1]
    prediction[1:, 0] = grid[:-1, 0]

    return grid - prediction


def dpcm_reconstruct(residuals: IntArrayT) -> IntArrayT:
    first_column = np.cumsum(residuals[:, 0])
    rows = residuals.copy()
    rows[:, 0] = first_column

    return np.cumsum(rows, axis=1)


def encode_latent(q: IntArrayT, dc_channels: Sequence[int], escape: int) -> bytes:
    """
    Entropy code a `(C, h, w)` integer latent; channels listed in `dc_channels` are DPCM coded
    """
    encoder = RangeEncoder()
    coder = ChannelCoder(escape)
    dc = set(dc_channels)

    for channel, grid in enumerate(q):
        source = dpcm_residuals(grid) if channel in dc else grid
        coder.encode_channel(encoder, source.ravel().tolist())

    return encoder.finish()


def decode_latent(payload: bytes, shape: Tuple[int, int, int], dc_channels: Sequence[int], escape: int) -> IntArrayT:
    channels, h, w = shape
    decoder = RangeDecoder(payload)
    coder = ChannelCoder(escape)
    dc = set(dc_channels)
    q = np.empty(shape, dtype=np.int64)

    for channel in range(channels):
        grid = np.array(coder.decode_channel(decoder, h * w), dtype=np.int64).reshape(h, w)
        q[channel] = dpcm_reconstruct(grid) if channel in dc else grid

    return q


def encode_symbols(symbols: Sequence[int], alphabet: int) -> bytes:
    """
    Adaptive coding of a symbol sequence, used for the mask side information
    """
    encoder = RangeEncoder()
    model = AdaptiveFrequencyModel(alphabet)

    for symbol in symbols:
        model.encode(encoder, symbol)

    return encoder.finish()


def decode_symbols(data: bytes, count: int, alphabet: int) -> List[int]:
    decoder = RangeDecoder(data)
    model = AdaptiveFrequencyModel(alphabet)

    return [model.decode(decoder) for _ in range(count)]
