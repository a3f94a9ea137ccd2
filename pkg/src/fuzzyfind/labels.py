"""Radius-1 sphere labelling of 23-bit indices.

Each index is decoded together with its 23 single-bit neighbours.  The
information words of the resulting codewords are the index's labels: six
distinct ones when the index sits at distance 3 from its codeword (Case A),
a single one otherwise (Case B).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import golay, kernels


class SphereCase(str, enum.Enum):
    A = "A"
    B = "B"


class LabelInvariantError(RuntimeError):
    pass


@dataclass(frozen=True)
class LabelSet:
    labels: tuple[int, ...]
    zero_label: int

    @property
    def cardinality(self) -> int:
        return len(self.labels)

    @property
    def case(self) -> SphereCase:
        return SphereCase.A if len(self.labels) == 6 else SphereCase.B


@dataclass(frozen=True)
class Census:
    count_a: int
    count_b: int

    @property
    def total(self) -> int:
        return self.count_a + self.count_b

    def percent(self, count: int) -> float:
        return 100.0 * count / self.total if self.total else 0.0


def sphere(v: int) -> list[int]:
    """``v`` followed by its 23 single-bit flips."""
    v = golay.check_vector(v)
    return [v] + [v ^ (1 << b) for b in range(golay.N)]


def label_set(v: int) -> LabelSet:
    members = sphere(v)
    decoded = [golay.decode(w) >> 11 for w in members]
    labels = tuple(sorted(set(decoded)))
    if len(labels) not in (1, 6):
        raise LabelInvariantError(f"index {v} has {len(labels)} distinct labels")
    return LabelSet(labels, decoded[0])


def case_of(v: int) -> SphereCase:
    return label_set(v).case


def census(start: int = 0, stop: int = golay.NUM_INDICES) -> Census:
    """Exact Case A / Case B counts over ``range(start, stop)``."""
    if stop <= start:
        return Census(0, 0)
    golay.check_vector(start)
    golay.check_vector(stop - 1)
    counts = kernels.label_counts_range(start, stop)
    bad = np.count_nonzero((counts != 1) & (counts != 6))
    if bad:
        raise LabelInvariantError(f"{bad} indices have a label count other than 1 or 6")
    a = int(np.count_nonzero(counts == 6))
    return Census(a, (stop - start) - a)
