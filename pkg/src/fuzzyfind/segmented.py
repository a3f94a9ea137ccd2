"""Keys wider than 23 bits: one dictionary probe per 23-bit segment.

If two keys of ``m`` segments differ in at most ``k`` bits, some segment
differs in at most ``k // m`` bits; as long as that is <= 2 the per-segment
dictionary entry brings the record into the candidate union.  Candidates are
then filtered on the exact distance over the full width.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import golay
from .ffd import ON_THE_FLY, FormatError
from .kernels import SENTINEL
from .lexicon import _POSTING, STORE_MAGIC, _sorted_postings, _take, check_compatible, read_store_header

SEGMENTED_VERSION = 2
SEG = golay.N


@dataclass(frozen=True)
class SegmentedKey:
    segments: tuple[int, ...]  # most significant first

    @property
    def m(self) -> int:
        return len(self.segments)

    @property
    def width(self) -> int:
        return SEG * len(self.segments)

    def to_bits(self) -> str:
        return "".join(format(s, f"0{SEG}b") for s in self.segments)

    def to_int(self) -> int:
        value = 0
        for s in self.segments:
            value = (value << SEG) | s
        return value


def split_key(bits: str) -> SegmentedKey:
    """Split a '0'/'1' string whose length is a positive multiple of 23."""
    if not bits or len(bits) % SEG or set(bits) - {"0", "1"}:
        raise ValueError(f"key must be a binary string of width 23*m (got {len(bits)} chars)")
    return SegmentedKey(tuple(int(bits[i : i + SEG], 2) for i in range(0, len(bits), SEG)))


def split_int(value: int, m: int) -> SegmentedKey:
    if value < 0 or value >> (SEG * m):
        raise ValueError(f"{value} does not fit in {SEG * m} bits")
    mask = golay.MASK23
    return SegmentedKey(tuple((value >> (SEG * (m - 1 - j))) & mask for j in range(m)))


@dataclass(eq=False)
class SegmentedStore:
    keys: np.ndarray  # (n, m) uint32
    addresses: list[np.ndarray]  # per segment, sorted
    record_ids: list[np.ndarray]
    generator: int = golay.GENERATOR

    @property
    def m(self) -> int:
        return self.keys.shape[1]

    def __len__(self) -> int:
        return self.keys.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SegmentedStore):
            return NotImplemented
        return (
            self.generator == other.generator
            and np.array_equal(self.keys, other.keys)
            and all(np.array_equal(a, b) for a, b in zip(self.addresses, other.addresses))
            and all(np.array_equal(a, b) for a, b in zip(self.record_ids, other.record_ids))
        )


def _as_key_array(keys: Sequence[SegmentedKey] | np.ndarray, m: int | None = None) -> np.ndarray:
    if isinstance(keys, np.ndarray):
        arr = np.asarray(keys, dtype=np.uint32)
    else:
        arr = np.array([k.segments for k in keys], dtype=np.uint32)
    if arr.ndim != 2 or (arr.size and arr.shape[1] < 1):
        raise ValueError("keys must form an (n, m) array of segments")
    if m is not None and arr.shape[1] != m:
        raise ValueError(f"expected {m} segments per key, got {arr.shape[1]}")
    if np.any(arr >> np.uint32(SEG)):
        raise ValueError("segment value exceeds 23 bits")
    return arr


def index_keys(keys, source=None) -> SegmentedStore:
    source = ON_THE_FLY if source is None else source
    arr = _as_key_array(keys)
    n, m = arr.shape
    addresses, ids = [], []
    for j in range(m):
        rec = source.records_for(arr[:, j]) if n else np.empty((0, 16), np.uint32)
        rid = np.repeat(np.arange(n, dtype=np.uint32), rec.shape[1])
        flat = rec.ravel()
        keep = flat != SENTINEL
        a, r = _sorted_postings(flat[keep], rid[keep])
        addresses.append(a)
        ids.append(r)
    return SegmentedStore(arr, addresses, ids, source.generator)


def _distances(store: SegmentedStore, ids: np.ndarray, query: np.ndarray) -> np.ndarray:
    return np.bitwise_count(store.keys[ids] ^ query).sum(axis=1)


def segmented_lookup(
    query: SegmentedKey, store: SegmentedStore, k: int = 2, source=None
) -> list[tuple[int, int]]:
    """(record id, total distance) pairs within ``k``, nearest first."""
    source = ON_THE_FLY if source is None else source
    if query.m != store.m:
        raise ValueError(f"query has {query.m} segments, store has {store.m}")
    if not 0 <= k <= 2 * store.m:
        raise ValueError(f"k must lie in [0, {2 * store.m}]")
    found = []
    for j, seg in enumerate(query.segments):
        addrs = np.fromiter(source.addresses(seg), dtype=np.uint32)
        lo = np.searchsorted(store.addresses[j], addrs, "left")
        hi = np.searchsorted(store.addresses[j], addrs, "right")
        found.extend(store.record_ids[j][a:b] for a, b in zip(lo, hi) if b > a)
    if not found:
        return []
    ids = np.unique(np.concatenate(found))
    q = np.array(query.segments, dtype=np.uint32)
    dist = _distances(store, ids, q)
    keep = dist <= k
    return [(i, d) for d, i in sorted(zip(dist[keep].tolist(), ids[keep].tolist()))]


def scan_segmented(query: SegmentedKey, store: SegmentedStore, k: int = 2) -> list[tuple[int, int]]:
    q = np.array(query.segments, dtype=np.uint32)
    dist = np.bitwise_count(store.keys ^ q).sum(axis=1)
    ids = np.flatnonzero(dist <= k)
    return [(i, d) for d, i in sorted(zip(dist[ids].tolist(), ids.tolist()))]


# --------------------------------------------------------------------------
# persistence: posting-store layout, version 2, segment count after the header


def save_segmented(store: SegmentedStore, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sIIII", STORE_MAGIC, SEGMENTED_VERSION, store.generator, len(store), store.m))
        fh.write(store.keys.astype("<u4").tobytes())
        for a, r in zip(store.addresses, store.record_ids):
            pairs = np.empty(a.size, _POSTING)
            pairs["address"] = a
            pairs["word"] = r
            fh.write(struct.pack("<Q", a.size))
            fh.write(pairs.tobytes())


def load_segmented(path: str | Path, table=None) -> SegmentedStore:
    buf = memoryview(Path(path).read_bytes())
    version, generator, count = read_store_header(buf, path)
    if version != SEGMENTED_VERSION:
        raise FormatError(f"{path}: not a segmented store (version {version})")
    check_compatible(generator, table)
    raw, pos = _take(buf, 16, 4, path)
    (m,) = struct.unpack("<I", raw)
    raw, pos = _take(buf, pos, 4 * count * m, path)
    keys = np.frombuffer(raw, "<u4").astype(np.uint32).reshape(count, m)
    addresses, ids = [], []
    for _ in range(m):
        raw, pos = _take(buf, pos, 8, path)
        (n,) = struct.unpack("<Q", raw)
        raw, pos = _take(buf, pos, n * _POSTING.itemsize, path)
        pairs = np.frombuffer(raw, _POSTING)
        addresses.append(pairs["address"].astype(np.uint32))
        ids.append(pairs["word"].astype(np.uint32))
    if pos != len(buf):
        raise FormatError(f"{path}: {len(buf) - pos} trailing bytes")
    return SegmentedStore(keys, addresses, ids, generator)
