"""Binary Golay (23, 12, 7) code.

Codewords are laid out systematically: the 12 information bits sit in the top
positions (bits 22..11) and the 11 parity bits, the remainder of
``info * x^11`` modulo the generator polynomial, occupy bits 10..0.  Decoding
uses a full 2,048-entry coset-leader table; the code is perfect, so every
syndrome has exactly one leader of weight at most 3.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

N = 23
K = 12
T = 3
#: x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1
GENERATOR = 0xC75

MASK23 = (1 << N) - 1
MASK11 = (1 << (N - K)) - 1
NUM_INDICES = 1 << N
NUM_CODEWORDS = 1 << K
NUM_SYNDROMES = 1 << (N - K)


class GolayTableError(RuntimeError):
    """The coset-leader table could not be built (wrong generator polynomial)."""


@dataclass(frozen=True)
class CodecParams:
    n: int = N
    k: int = K
    t: int = T
    generator: int = GENERATOR


PARAMS = CodecParams()


def check_vector(v: int, bits: int = N, name: str = "vector") -> int:
    """Reject anything outside ``[0, 2**bits)``; returns ``int(v)``."""
    v = int(v)
    if v < 0 or v >> bits:
        raise ValueError(f"{name} {v} does not fit in {bits} bits")
    return v


def poly_mod(value: int, generator: int = GENERATOR) -> int:
    """Remainder of ``value(x)`` divided by ``generator(x)`` over GF(2)."""
    deg = generator.bit_length() - 1
    for i in range(value.bit_length() - 1, deg - 1, -1):
        if value >> i & 1:
            value ^= generator << (i - deg)
    return value


def encode(info: int, generator: int = GENERATOR) -> int:
    info = check_vector(info, K, "info word")
    shifted = info << (N - K)
    return shifted | poly_mod(shifted, generator)


# Parity of every information word; syndrome(v) = parity[v >> 11] ^ (v & 0x7FF)
# because the remainder map is linear and the low 11 bits are already reduced.
PARITY_TABLE = np.array([encode(m) & MASK11 for m in range(NUM_CODEWORDS)], dtype=np.uint32)
_PARITY = PARITY_TABLE.tolist()


def syndrome(v: int) -> int:
    v = check_vector(v)
    return _PARITY[v >> 11] ^ (v & MASK11)


def weight(v: int) -> int:
    return int(v).bit_count()


def hamming(a: int, b: int) -> int:
    return (check_vector(a) ^ check_vector(b)).bit_count()


def build_error_table(generator: int = GENERATOR) -> np.ndarray:
    """Coset leaders indexed by syndrome.

    Every pattern of weight <= 3 must land on its own syndrome; with
    1 + 23 + 253 + 1771 = 2048 patterns that fills the table exactly.
    """
    table = np.zeros(NUM_SYNDROMES, dtype=np.uint32)
    seen = np.zeros(NUM_SYNDROMES, dtype=bool)
    for w in range(T + 1):
        for bits in combinations(range(N), w):
            e = sum(1 << b for b in bits)
            s = poly_mod(e, generator)
            if s >= NUM_SYNDROMES or seen[s]:
                raise GolayTableError(
                    f"syndrome {s:#x} hit twice (pattern {e:#08x}); "
                    f"generator {generator:#x} does not give a perfect code"
                )
            seen[s] = True
            table[s] = e
    if not seen.all():  # unreachable when no collisions, kept as a guard
        raise GolayTableError(f"{int((~seen).sum())} syndromes uncovered")
    return table


ERROR_TABLE = build_error_table()
ERROR_TABLE.setflags(write=False)
PARITY_TABLE.setflags(write=False)
_ERRORS = ERROR_TABLE.tolist()


def decode(v: int) -> int:
    """Nearest codeword (always within distance 3)."""
    v = check_vector(v)
    return v ^ _ERRORS[_PARITY[v >> 11] ^ (v & MASK11)]


def info_of(c: int) -> int:
    return check_vector(c) >> (N - K)


def codewords() -> np.ndarray:
    """All 4,096 codewords, indexed by information word."""
    info = np.arange(NUM_CODEWORDS, dtype=np.uint32)
    return (info << np.uint32(N - K)) | PARITY_TABLE


def decode_array(v: np.ndarray) -> np.ndarray:
    """Vectorised :func:`decode` for uint32 arrays (no range check)."""
    v = np.asarray(v, dtype=np.uint32)
    syn = PARITY_TABLE[v >> np.uint32(11)] ^ (v & np.uint32(MASK11))
    return v ^ ERROR_TABLE[syn]
