"""The FuzzyFind Dictionary: 16 addresses per 23-bit index.

Case A indices (six labels) get their own address plus the 15 pair addresses
of their label set.  A one-label index probes ``v ^ 1``, ``v ^ 2`` and
``v ^ 4`` in that order and borrows the 15 pair addresses of the first probe
that has six labels, keeping its own address in slot 0.  When no probe has
six labels the entry is the own address alone (Case C).

Tables are stored as a 16-byte header followed by 2**23 fixed records of
sixteen little-endian uint32 slots, so record ``i`` lives at
``16 + 64 * i``.
"""
from __future__ import annotations

import enum
import hashlib
import itertools
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import golay, kernels
from ._jit import USE_NUMBA
from .kernels import SENTINEL, SLOTS
from .labels import label_set
from .pairs import fifteen_addresses, own_address

MAGIC = b"FFD1"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sIII")
RECORD_BYTES = SLOTS * 4
TABLE_BYTES = HEADER.size + golay.NUM_INDICES * RECORD_BYTES
FIG5_PAIR = (1000, 480)


class FormatError(ValueError):
    """A table or store file is malformed or was built with another codec."""


class EntryKind(str, enum.Enum):
    A = "A"
    B_RECOVERED = "B_recovered"
    C = "C"


_KIND_OF_CODE = {
    kernels.KIND_A: (EntryKind.A, None),
    kernels.KIND_B1: (EntryKind.B_RECOVERED, 1),
    kernels.KIND_B2: (EntryKind.B_RECOVERED, 2),
    kernels.KIND_B4: (EntryKind.B_RECOVERED, 4),
    kernels.KIND_C: (EntryKind.C, None),
}


@dataclass(frozen=True)
class FfdEntry:
    addresses: tuple[int, ...]
    kind: EntryKind
    delta: int | None = None

    def shares_with(self, other: FfdEntry) -> bool:
        return not set(self.addresses).isdisjoint(other.addresses)

    @classmethod
    def from_record(cls, record, kind_code: int) -> FfdEntry:
        kind, delta = _KIND_OF_CODE[int(kind_code)]
        return cls(record_addresses(record), kind, delta)


def record_addresses(record) -> tuple[int, ...]:
    return tuple(int(a) for a in record if a != SENTINEL)


def build_entry(v: int) -> FfdEntry:
    """Reference construction straight from the label sets (no kernels)."""
    ls = label_set(v)
    own = own_address(ls.zero_label)
    if ls.cardinality == 6:
        return FfdEntry((own, *fifteen_addresses(ls.labels)), EntryKind.A)
    for delta in kernels.PROBE_DELTAS:
        donor = label_set(v ^ delta)
        if donor.cardinality == 6:
            return FfdEntry((own, *fifteen_addresses(donor.labels)), EntryKind.B_RECOVERED, delta)
    return FfdEntry((own,), EntryKind.C)


# --------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class CaseCensus:
    count_a: int
    count_b_recovered: int
    count_c: int
    by_delta: dict[int, int] = field(default_factory=dict, compare=False)

    @property
    def total(self) -> int:
        return self.count_a + self.count_b_recovered + self.count_c

    def _pct(self, n: int) -> float:
        return 100.0 * n / self.total if self.total else 0.0

    @property
    def percent_a(self) -> float:
        return self._pct(self.count_a)

    @property
    def percent_b_recovered(self) -> float:
        return self._pct(self.count_b_recovered)

    @property
    def percent_c(self) -> float:
        return self._pct(self.count_c)

    @classmethod
    def from_kinds(cls, bincount: np.ndarray) -> CaseCensus:
        counts = np.zeros(5, np.int64)
        counts[: len(bincount)] = bincount
        return cls(
            int(counts[kernels.KIND_A]),
            int(counts[1:4].sum()),
            int(counts[kernels.KIND_C]),
            {1: int(counts[1]), 2: int(counts[2]), 4: int(counts[3])},
        )

    def as_dict(self) -> dict:
        return {
            "count_a": self.count_a,
            "count_b_recovered": self.count_b_recovered,
            "count_c": self.count_c,
            "count_b_delta1": self.by_delta.get(1, 0),
            "count_b_delta2": self.by_delta.get(2, 0),
            "count_b_delta4": self.by_delta.get(4, 0),
            "total": self.total,
            "percent_a": round(self.percent_a, 2),
            "percent_b_recovered": round(self.percent_b_recovered, 2),
            "percent_c": round(self.percent_c, 2),
            "percent_16_addresses": round(self.percent_a + self.percent_b_recovered, 2),
        }


def _ranges(start: int, stop: int, step: int):
    for lo in range(start, stop, step):
        yield lo, min(lo + step, stop)


def case_census(
    table: FfdTable | None = None,
    start: int = 0,
    stop: int = golay.NUM_INDICES,
    chunk: int = 1 << 20,
) -> CaseCensus:
    """Exact entry-kind counts over ``range(start, stop)``.

    A stored table records only addresses, so kinds are always recomputed;
    when a table is given its one-address records are cross-checked against
    the recomputed Case C count.
    """
    bins = np.zeros(5, np.int64)
    stored_c = 0
    for lo, hi in _ranges(start, stop, chunk):
        _, kinds = kernels.entries_range(lo, hi)
        bins += np.bincount(kinds, minlength=5)
        if table is not None:
            stored_c += int(np.count_nonzero(table.records[lo:hi, 1] == SENTINEL))
    census = CaseCensus.from_kinds(bins)
    if table is not None and stored_c != census.count_c:
        raise FormatError(f"table has {stored_c} one-address records, expected {census.count_c}")
    return census


# --------------------------------------------------------------------------
# table file


@dataclass
class BuildReport:
    path: str
    records: int
    threads: int
    wall_seconds: float
    sha256: str
    census: CaseCensus

    def as_dict(self) -> dict:
        return {
            "path": self.path,
            "records": self.records,
            "threads": self.threads,
            "wall_seconds": round(self.wall_seconds, 3),
            "sha256": self.sha256,
            "generator": f"{golay.GENERATOR:#x}",
            **self.census.as_dict(),
        }


def header_bytes(generator: int = golay.GENERATOR) -> bytes:
    return HEADER.pack(MAGIC, FORMAT_VERSION, generator, 0)


def build_table(
    path: str | Path,
    threads: int = 1,
    chunk: int = 1 << 18,
    stop: int = golay.NUM_INDICES,
) -> BuildReport:
    """Write the full dictionary file.

    Chunks are computed in parallel but written strictly in index order by
    this thread, so the bytes never depend on ``threads``.  ``stop`` exists
    for tests; anything short of 2**23 produces a file :class:`FfdTable`
    refuses to open.
    """
    threads = max(1, int(threads))
    t0 = time.perf_counter()
    digest = hashlib.sha256()
    bins = np.zeros(5, np.int64)
    spans = list(_ranges(0, stop, chunk))
    with open(path, "wb") as fh, ThreadPoolExecutor(max_workers=threads) as pool:
        head = header_bytes()
        fh.write(head)
        digest.update(head)
        # bounded window: at most `threads` chunks in flight
        it = iter(spans)
        while batch := list(itertools.islice(it, threads)):
            for records, kinds in pool.map(lambda s: kernels.entries_range(*s), batch):
                raw = records.astype("<u4", copy=False).tobytes()
                fh.write(raw)
                digest.update(raw)
                bins += np.bincount(kinds, minlength=5)
    return BuildReport(
        str(path), stop, threads, time.perf_counter() - t0, digest.hexdigest(), CaseCensus.from_kinds(bins)
    )


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        while block := fh.read(1 << 24):
            digest.update(block)
    return digest.hexdigest()


class FfdTable:
    """Read-only memory map of a built table."""

    def __init__(self, path: str | Path):
        path = Path(path)
        size = path.stat().st_size
        with open(path, "rb") as fh:
            head = fh.read(HEADER.size)
        if len(head) < HEADER.size:
            raise FormatError(f"{path}: truncated header")
        magic, version, generator, _ = HEADER.unpack(head)
        if magic != MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise FormatError(f"{path}: unsupported version {version}")
        if size != TABLE_BYTES:
            raise FormatError(f"{path}: expected {TABLE_BYTES} bytes, found {size}")
        self.path = path
        self.generator = generator
        self.records = np.memmap(
            path, dtype="<u4", mode="r", offset=HEADER.size, shape=(golay.NUM_INDICES, SLOTS)
        )

    def record(self, v: int) -> np.ndarray:
        return np.asarray(self.records[golay.check_vector(v)])

    def records_for(self, indices: np.ndarray) -> np.ndarray:
        return np.asarray(self.records[np.asarray(indices, dtype=np.intp)])

    def addresses(self, v: int) -> tuple[int, ...]:
        return record_addresses(self.record(v))

    def close(self) -> None:
        mm = getattr(self.records, "_mmap", None)
        self.records = None
        if mm is not None:
            mm.close()

    def __enter__(self) -> FfdTable:
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class OnTheFly:
    """Computes records on demand; interchangeable with :class:`FfdTable`."""

    generator = golay.GENERATOR

    def record(self, v: int) -> np.ndarray:
        if not USE_NUMBA:
            rec = np.full(SLOTS, SENTINEL, np.uint32)
            addrs = build_entry(v).addresses
            rec[: len(addrs)] = addrs
            return rec
        return kernels.entry_record(golay.check_vector(v))[0]

    def records_for(self, indices: np.ndarray) -> np.ndarray:
        return kernels.entries(indices)[0]

    def addresses(self, v: int) -> tuple[int, ...]:
        return record_addresses(self.record(v))


ON_THE_FLY = OnTheFly()


def lookup(v: int, table: FfdTable | None = None) -> FfdEntry:
    """Entry for ``v`` from a stored table, or computed when ``table`` is None.

    Stored records carry no kind, so the kind is always classified afresh.
    """
    rec, code = kernels.entry_record(golay.check_vector(v))
    if table is not None:
        rec = table.record(v)
    return FfdEntry.from_record(rec, code)


# --------------------------------------------------------------------------
# neighbourhood verification


def neighbors_within_2(v: int) -> np.ndarray:
    """The 277 indices at Hamming distance 0, 1 and 2 from ``v`` (that order)."""
    v = golay.check_vector(v)
    flips = [0] + [1 << i for i in range(golay.N)]
    flips += [(1 << i) | (1 << j) for i, j in itertools.combinations(range(golay.N), 2)]
    return np.uint32(v) ^ np.array(flips, dtype=np.uint32)


@dataclass
class NeighborhoodReport:
    center: int
    checked: int
    passed: int
    failures: list[tuple[int, int]]  # (neighbor, distance)

    @property
    def ok(self) -> bool:
        return self.passed == self.checked


def verify_neighborhood(v: int, source=None) -> NeighborhoodReport:
    source = ON_THE_FLY if source is None else source
    nbrs = neighbors_within_2(v)
    rows = source.records_for(nbrs)
    shared = kernels.shares_rows(rows[0], rows)
    bad = np.flatnonzero(~shared)
    failures = [(int(nbrs[i]), (int(nbrs[i]) ^ v).bit_count()) for i in bad]
    return NeighborhoodReport(v, len(nbrs), len(nbrs) - len(failures), failures)


@dataclass
class VerificationSummary:
    centers: int = 0
    pairs: int = 0
    passed: int = 0
    failures: list[dict] = field(default_factory=list)
    # (center kind, neighbor kind) -> [pairs, failures]
    breakdown: dict[tuple[str, str], list[int]] = field(default_factory=dict)

    @property
    def pass_rate(self) -> float:
        return self.passed / self.pairs if self.pairs else 1.0


def verify_centers(centers, source=None, keep_failures: bool = True) -> VerificationSummary:
    """Run :func:`verify_neighborhood` over many centres and tally by kind."""
    source = ON_THE_FLY if source is None else source
    summary = VerificationSummary()
    for v in centers:
        v = int(v)
        nbrs = neighbors_within_2(v)
        rows = source.records_for(nbrs)
        _, kinds = kernels.entries(nbrs)
        shared = kernels.shares_rows(rows[0], rows)
        summary.centers += 1
        summary.pairs += len(nbrs)
        summary.passed += int(shared.sum())
        ck = _KIND_OF_CODE[int(kinds[0])][0].value
        for i in range(len(nbrs)):
            key = (ck, _KIND_OF_CODE[int(kinds[i])][0].value)
            cell = summary.breakdown.setdefault(key, [0, 0])
            cell[0] += 1
            if not shared[i]:
                cell[1] += 1
                if keep_failures:
                    w = int(nbrs[i])
                    summary.failures.append(
                        {
                            "center": v,
                            "neighbor": w,
                            "distance": (v ^ w).bit_count(),
                            "center_addresses": list(record_addresses(rows[0])),
                            "neighbor_addresses": list(record_addresses(rows[i])),
                        }
                    )
    return summary


def verify_pair(u: int, v: int, source=None) -> bool:
    source = ON_THE_FLY if source is None else source
    a, b = source.addresses(u), source.addresses(v)
    return not set(a).isdisjoint(b)


def sample_centers(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, golay.NUM_INDICES, size=n, dtype=np.uint32)


def verify_exhaustive(
    source=None, start: int = 0, stop: int = golay.NUM_INDICES, threads: int = 1, chunk: int = 1 << 16
) -> dict:
    """Count failing (centre, neighbour) pairs for every centre in ``range(start, stop)``.

    Over the whole domain each unordered pair is checked once and failures are
    doubled (the relation is symmetric).  Needs every record in memory.
    """
    if isinstance(source, FfdTable):
        records = np.array(source.records)
    else:
        records, _ = kernels.entries_range(0, golay.NUM_INDICES)
    upper_only = start == 0 and stop == golay.NUM_INDICES
    scale = 2 if upper_only else 1
    t0 = time.perf_counter()
    fails1 = fails2 = 0
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        work = pool.map(lambda s: kernels.verify_range(records, *s, upper_only), _ranges(start, stop, chunk))
        for f1, f2 in work:
            fails1 += f1
            fails2 += f2
    n = stop - start
    pairs = n * 277
    failed = scale * (fails1 + fails2)
    return {
        "centers": n,
        "pairs": pairs,
        "failed_pairs": failed,
        "failed_hd1": scale * fails1,
        "failed_hd2": scale * fails2,
        "pass_rate": (pairs - failed) / pairs if pairs else 1.0,
        "wall_seconds": time.perf_counter() - t0,
    }
