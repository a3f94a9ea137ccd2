"""Label-pair folding into 23-bit addresses."""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

import numpy as np

from .golay import MASK23, check_vector

#: (i, j) positions of the 15 unordered pairs of a sorted 6-label set, lexicographic.
PAIR_INDEX = np.array(list(combinations(range(6), 2)), dtype=np.intp)


def pair_address(h1: int, h2: int) -> int:
    """Fold the canonical pair ``h1 <= h2`` into one address.

    The 24-bit concatenation ``h1:h2`` is XORed with itself shifted right by
    one, then the top bit is dropped.
    """
    h1 = check_vector(h1, 12, "label")
    h2 = check_vector(h2, 12, "label")
    if h1 > h2:
        raise ValueError(f"pair ({h1}, {h2}) is not in canonical order")
    combined = (h1 << 12) | h2
    return ((combined >> 1) ^ combined) & MASK23


def fifteen_addresses(labels: Sequence[int]) -> list[int]:
    labels = list(labels)
    if len(labels) != 6:
        raise ValueError(f"expected 6 labels, got {len(labels)}")
    if any(a >= b for a, b in zip(labels, labels[1:])):
        raise ValueError("labels must be distinct and sorted ascending")
    return [pair_address(labels[i], labels[j]) for i, j in PAIR_INDEX]


def own_address(zero_label: int) -> int:
    return pair_address(zero_label, zero_label)


def pair_address_array(h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
    combined = (np.asarray(h1, np.uint32) << np.uint32(12)) | np.asarray(h2, np.uint32)
    return ((combined >> np.uint32(1)) ^ combined) & np.uint32(MASK23)
