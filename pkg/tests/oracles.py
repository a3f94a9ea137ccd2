"""Independent reference computations for the test-suite.

Nothing here imports the package under test: polynomial arithmetic works on
coefficient lists, nearest-codeword search scans all 4,096 codewords.
"""
from functools import lru_cache

GENERATOR_COEFFS = [11, 10, 6, 5, 4, 2, 0]  # exponents with coefficient 1


def poly_divide_remainder(dividend_exponents, divisor_exponents):
    """GF(2) long division on coefficient lists, highest degree first."""
    deg = max(dividend_exponents) if dividend_exponents else 0
    coeffs = [0] * (deg + 1)
    for e in dividend_exponents:
        coeffs[deg - e] ^= 1
    dv_deg = max(divisor_exponents)
    divisor = [0] * (dv_deg + 1)
    for e in divisor_exponents:
        divisor[dv_deg - e] = 1
    for i in range(len(coeffs) - dv_deg):
        if coeffs[i]:
            for j, d in enumerate(divisor):
                coeffs[i + j] ^= d
    rem = coeffs[-dv_deg:]
    return sum(bit << (dv_deg - 1 - i) for i, bit in enumerate(rem))


def oracle_encode(info):
    exps = [b + 11 for b in range(12) if info >> b & 1]
    if not exps:
        return 0
    return (info << 11) | poly_divide_remainder(exps, GENERATOR_COEFFS)


@lru_cache(maxsize=None)
def all_codewords():
    return tuple(oracle_encode(m) for m in range(4096))


def nearest_codeword(v):
    best = min(all_codewords(), key=lambda c: bin(c ^ v).count("1"))
    return best


def popcount(x):
    return bin(x).count("1")


def hamming_ball(v, radius, width=23):
    """All vectors within ``radius`` of ``v`` by recursive bit flipping."""
    out = {v}
    frontier = {v}
    for _ in range(radius):
        frontier = {w ^ (1 << b) for w in frontier for b in range(width)}
        out |= frontier
    return out


LETTER_ORDER = "etaoinshrdlcumwfgypb"


def oracle_signature(word):
    pos = {ch: i for i, ch in enumerate(LETTER_ORDER)}
    pos.update(v=20, k=20, j=21, x=21, q=22, z=22)
    bits = 0
    for ch in word.lower():
        if ch in pos:
            bits |= 1 << pos[ch]
    return bits


def brute_force_word_search(query, words, max_hd):
    """(distance, word) pairs within ``max_hd``, nearest then lexicographic."""
    s = oracle_signature(query)
    hits = [(popcount(oracle_signature(w) ^ s), w) for w in words]
    return sorted((d, w) for d, w in hits if d <= max_hd)
