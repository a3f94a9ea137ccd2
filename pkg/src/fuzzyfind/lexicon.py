"""Approximate word search over letter-presence signatures.

A word's signature sets one bit per letter it contains (26 letters folded
onto 23 positions).  Each word is filed under every address of its
signature's dictionary entry; a query reads the posting lists of its own
entry and keeps candidates whose signatures are within the requested Hamming
distance.
"""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from . import golay, kernels
from .ffd import ON_THE_FLY, FormatError
from .kernels import SENTINEL

STORE_MAGIC = b"FFDX"
STORE_VERSION = 1
_HEAD = struct.Struct("<4sIII")
_POSTING = np.dtype([("address", "<u4"), ("word", "<u4")])

DEFAULT_ORDER = "etaoinshrdlcumwfgypb"
DEFAULT_SHARED = ("vk", "jx", "qz")


@dataclass(frozen=True)
class LetterMap:
    positions: Mapping[str, int]

    def __post_init__(self):
        letters = set(self.positions)
        missing = set("abcdefghijklmnopqrstuvwxyz") - letters
        if missing:
            raise ValueError(f"letter map lacks {''.join(sorted(missing))}")
        for ch, pos in self.positions.items():
            if len(ch) != 1 or not 0 <= pos < golay.N:
                raise ValueError(f"bad mapping {ch!r} -> {pos}")
        object.__setattr__(self, "_bits", {ch: 1 << p for ch, p in self.positions.items()})

    @classmethod
    def from_file(cls, path: str | Path) -> LetterMap:
        with open(path, encoding="utf-8") as fh:
            return cls({k.lower(): int(v) for k, v in json.load(fh).items()})

    def to_file(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(dict(sorted(self.positions.items())), fh, indent=1)


def default_letter_map() -> LetterMap:
    positions = {ch: i for i, ch in enumerate(DEFAULT_ORDER)}
    for offset, group in enumerate(DEFAULT_SHARED):
        for ch in group:
            positions[ch] = len(DEFAULT_ORDER) + offset
    return LetterMap(positions)


DEFAULT_MAP = default_letter_map()


class Signature(NamedTuple):
    bits: int
    empty: bool  # no mapped letter in the input


def signature(word: str, letter_map: LetterMap | None = None) -> Signature:
    bits_of = (letter_map or DEFAULT_MAP)._bits
    bits = 0
    for ch in word.lower():
        bits |= bits_of.get(ch, 0)
    return Signature(bits, bits == 0)


def normalize_words(words: Iterable[str]) -> list[str]:
    """Lower-case, strip, drop blanks and collapse duplicates (first wins)."""
    return list(dict.fromkeys(w for w in (x.strip().lower() for x in words) if w))


def read_word_list(path: str | Path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return normalize_words(fh)


class Candidate(NamedTuple):
    word: str
    distance: int
    word_id: int


@dataclass(eq=False)
class PostingStore:
    words: list[str]
    addresses: np.ndarray  # sorted, parallel to word_ids
    word_ids: np.ndarray
    generator: int = golay.GENERATOR
    letter_map: LetterMap = field(default=DEFAULT_MAP, repr=False)

    def __post_init__(self):
        self.signatures = np.array(
            [signature(w, self.letter_map).bits for w in self.words], dtype=np.uint32
        )
        # position of each word in lexicographic order, for tie-breaking
        self.lex_rank = np.empty(len(self.words), np.int64)
        self.lex_rank[sorted(range(len(self.words)), key=self.words.__getitem__)] = np.arange(len(self.words))

    def __len__(self) -> int:
        return len(self.words)

    @property
    def posting_count(self) -> int:
        return int(self.addresses.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PostingStore):
            return NotImplemented
        return (
            self.words == other.words
            and self.generator == other.generator
            and np.array_equal(self.addresses, other.addresses)
            and np.array_equal(self.word_ids, other.word_ids)
        )

    def postings(self, address: int) -> np.ndarray:
        lo, hi = np.searchsorted(self.addresses, [address, address + 1])
        return self.word_ids[lo:hi]


def _sorted_postings(addresses: np.ndarray, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keys = np.unique((addresses.astype(np.uint64) << np.uint64(32)) | ids.astype(np.uint64))
    return (keys >> np.uint64(32)).astype(np.uint32), (keys & np.uint64(0xFFFFFFFF)).astype(np.uint32)


def index_words(
    words: Iterable[str], letter_map: LetterMap | None = None, source=None
) -> PostingStore:
    source = ON_THE_FLY if source is None else source
    letter_map = letter_map or DEFAULT_MAP
    words = normalize_words(words)
    sigs = np.array([signature(w, letter_map).bits for w in words], dtype=np.uint32)
    records = source.records_for(sigs) if len(words) else np.empty((0, 16), np.uint32)
    ids = np.repeat(np.arange(len(words), dtype=np.uint32), records.shape[1])
    flat = records.ravel()
    keep = flat != SENTINEL
    addresses, word_ids = _sorted_postings(flat[keep], ids[keep])
    return PostingStore(words, addresses, word_ids, source.generator, letter_map)


def candidate_ids(sig: int, store: PostingStore, source=None) -> np.ndarray:
    """Word ids sharing at least one address with ``sig`` (before filtering)."""
    source = ON_THE_FLY if source is None else source
    ids, _ = kernels.probe(
        store.addresses, store.word_ids, store.signatures, source.record(sig), sig, golay.N
    )
    return ids


def _rank(store: PostingStore, ids: np.ndarray, dist: np.ndarray, limit: int | None) -> list[Candidate]:
    key = dist.astype(np.int64) * (len(store.words) + 1) + store.lex_rank[ids]
    order = np.argsort(key, kind="stable")
    if limit is not None:
        order = order[:limit]
    return [Candidate(store.words[i], d, i) for i, d in zip(ids[order].tolist(), dist[order].tolist())]


def _check_hd(max_hd: int) -> None:
    if not 0 <= max_hd <= 2:
        raise ValueError(f"max_hd must be 0, 1 or 2 (got {max_hd})")


def fuzzy_lookup(
    query: str, store: PostingStore, max_hd: int = 2, limit: int | None = 10, source=None
) -> list[Candidate]:
    _check_hd(max_hd)
    source = ON_THE_FLY if source is None else source
    sig = signature(query, store.letter_map).bits
    ids, dist = kernels.probe(
        store.addresses, store.word_ids, store.signatures, source.record(sig), sig, max_hd
    )
    return _rank(store, ids, dist, limit)


def scan_lookup(query: str, store: PostingStore, max_hd: int = 2, limit: int | None = 10) -> list[Candidate]:
    """Linear scan over every stored signature; the baseline for benchmarks."""
    _check_hd(max_hd)
    sig = signature(query, store.letter_map).bits
    dist = np.bitwise_count(store.signatures ^ np.uint32(sig))
    ids = np.flatnonzero(dist <= max_hd)
    return _rank(store, ids, dist[ids], limit)


# --------------------------------------------------------------------------
# persistence


def save_store(store: PostingStore, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEAD.pack(STORE_MAGIC, STORE_VERSION, store.generator, len(store.words)))
        for w in store.words:
            raw = w.encode("utf-8")
            if len(raw) > 0xFFFF:
                raise ValueError(f"word too long to store: {w[:20]}...")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
        fh.write(struct.pack("<Q", store.posting_count))
        pairs = np.empty(store.posting_count, _POSTING)
        pairs["address"] = store.addresses
        pairs["word"] = store.word_ids
        fh.write(pairs.tobytes())


def _take(buf: memoryview, pos: int, n: int, path) -> tuple[memoryview, int]:
    if pos + n > len(buf):
        raise FormatError(f"{path}: truncated at byte {pos}")
    return buf[pos : pos + n], pos + n


def read_store_header(buf, path) -> tuple[int, int, int]:
    head, _ = _take(memoryview(buf), 0, _HEAD.size, path)
    magic, version, generator, count = _HEAD.unpack(head)
    if magic != STORE_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    return version, generator, count


def check_compatible(store_generator: int, table) -> None:
    if table is not None and table.generator != store_generator:
        raise FormatError(
            f"store built with generator {store_generator:#x}, table uses {table.generator:#x}"
        )


def load_store(path: str | Path, letter_map: LetterMap | None = None, table=None) -> PostingStore:
    buf = memoryview(Path(path).read_bytes())
    version, generator, count = read_store_header(buf, path)
    if version != STORE_VERSION:
        raise FormatError(f"{path}: unsupported store version {version}")
    check_compatible(generator, table)
    pos = _HEAD.size
    words = []
    for _ in range(count):
        raw, pos = _take(buf, pos, 2, path)
        (n,) = struct.unpack("<H", raw)
        raw, pos = _take(buf, pos, n, path)
        words.append(bytes(raw).decode("utf-8"))
    raw, pos = _take(buf, pos, 8, path)
    (npost,) = struct.unpack("<Q", raw)
    raw, pos = _take(buf, pos, npost * _POSTING.itemsize, path)
    if pos != len(buf):
        raise FormatError(f"{path}: {len(buf) - pos} trailing bytes")
    pairs = np.frombuffer(raw, _POSTING)
    return PostingStore(
        words,
        pairs["address"].astype(np.uint32),
        pairs["word"].astype(np.uint32),
        generator,
        letter_map or DEFAULT_MAP,
    )
