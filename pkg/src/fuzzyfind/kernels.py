"""Batch kernels: sphere labelling, dictionary entries, neighbourhood checks.

Every kernel exists twice, a numba loop (``*_numba``) and a vectorised numpy
version (``*_numpy``).  The unsuffixed functions dispatch on
``fuzzyfind._jit.USE_NUMBA``; both paths must produce identical arrays.

Entry records are ``(n, 16)`` uint32 rows; slot 0 is the own address, slots
1..15 the pair addresses, ``SENTINEL`` fills absent slots.  Kind codes:
0 = Case A, 1/2/3 = Case B recovered through XOR 1/2/4, 4 = Case C.
"""
from __future__ import annotations

import numpy as np

from . import golay
from ._jit import USE_NUMBA, njit
from .pairs import PAIR_INDEX, pair_address_array

SENTINEL = np.uint32(0xFFFFFFFF)
SLOTS = 16
KIND_A, KIND_B1, KIND_B2, KIND_B4, KIND_C = range(5)
PROBE_DELTAS = (1, 2, 4)
CHUNK = 1 << 17

_PARITY = golay.PARITY_TABLE.astype(np.int64)
_ERRORS = golay.ERROR_TABLE.astype(np.int64)


# --------------------------------------------------------------------------
# numba


@njit(cache=True, nogil=True)
def _sphere_labels_nb(v, parity, err, buf):
    # buf[:n] <- sorted distinct labels, returns (n, zero_label)
    zero = (v ^ err[parity[v >> 11] ^ (v & 0x7FF)]) >> 11
    buf[0] = zero
    for b in range(23):
        w = v ^ (1 << b)
        buf[b + 1] = (w ^ err[parity[w >> 11] ^ (w & 0x7FF)]) >> 11
    for i in range(1, 24):
        x = buf[i]
        j = i - 1
        while j >= 0 and buf[j] > x:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = x
    n = 1
    for i in range(1, 24):
        if buf[i] != buf[n - 1]:
            buf[n] = buf[i]
            n += 1
    if n != 1 and n != 6:
        raise ValueError("label count is neither 1 nor 6")
    return n, zero


@njit(cache=True, nogil=True)
def _entry_into_nb(v, parity, err, buf, rec):
    n, zero = _sphere_labels_nb(v, parity, err, buf)
    c = (zero << 12) | zero
    rec[0] = ((c >> 1) ^ c) & 0x7FFFFF
    kind = 0
    if n != 6:
        kind = 4
        for k in range(3):
            n2, _ = _sphere_labels_nb(v ^ (1 << k), parity, err, buf)
            if n2 == 6:
                kind = k + 1
                break
    if kind == 4:
        for s in range(1, 16):
            rec[s] = 0xFFFFFFFF
        return kind
    p = 1
    for i in range(6):
        for j in range(i + 1, 6):
            c = (buf[i] << 12) | buf[j]
            rec[p] = ((c >> 1) ^ c) & 0x7FFFFF
            p += 1
    return kind


@njit(cache=True, nogil=True)
def _entries_nb(indices, parity, err, out, kinds):
    buf = np.empty(24, np.int64)
    for i in range(indices.shape[0]):
        kinds[i] = _entry_into_nb(np.int64(indices[i]), parity, err, buf, out[i])


@njit(cache=True, nogil=True)
def _entries_range_nb(start, stop, parity, err, out, kinds):
    buf = np.empty(24, np.int64)
    for v in range(start, stop):
        kinds[v - start] = _entry_into_nb(np.int64(v), parity, err, buf, out[v - start])


@njit(cache=True, nogil=True)
def _label_counts_range_nb(start, stop, parity, err, out):
    buf = np.empty(24, np.int64)
    for v in range(start, stop):
        n, _ = _sphere_labels_nb(np.int64(v), parity, err, buf)
        out[v - start] = n


@njit(cache=True, nogil=True)
def _shares_nb(a, b):
    for i in range(16):
        x = a[i]
        if x == 0xFFFFFFFF:
            continue
        for j in range(16):
            if b[j] == x:
                return True
    return False


@njit(cache=True, nogil=True)
def _shares_rows_nb(center, rows, out):
    for r in range(rows.shape[0]):
        out[r] = _shares_nb(center, rows[r])


@njit(cache=True, nogil=True)
def _verify_range_nb(records, start, stop, upper_only, fails):
    # fails[0] at HD 1, fails[1] at HD 2; upper_only skips neighbours below v
    for v in range(start, stop):
        a = records[v]
        for i in range(23):
            w = v ^ (1 << i)
            if (w > v or not upper_only) and not _shares_nb(a, records[w]):
                fails[0] += 1
            for j in range(i + 1, 23):
                w2 = w ^ (1 << j)
                if (w2 > v or not upper_only) and not _shares_nb(a, records[w2]):
                    fails[1] += 1


@njit(cache=True, nogil=True)
def _popcount32(x):
    x = x - ((x >> 1) & 0x55555555)
    x = (x & 0x33333333) + ((x >> 2) & 0x33333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F
    return ((x * 0x01010101) & 0xFFFFFFFF) >> 24


@njit(cache=True, nogil=True)
def _probe_nb(addresses, ids, sigs, rec, sig, max_hd):
    lo = np.zeros(16, np.int64)
    hi = np.zeros(16, np.int64)
    total = 0
    for s in range(16):
        a = rec[s]
        if a == 0xFFFFFFFF:
            continue
        lo[s] = np.searchsorted(addresses, a, side="left")
        hi[s] = np.searchsorted(addresses, a, side="right")
        total += hi[s] - lo[s]
    buf = np.empty(total, np.uint32)
    p = 0
    for s in range(16):
        for t in range(lo[s], hi[s]):
            w = ids[t]
            if _popcount32(np.int64(sigs[w]) ^ sig) <= max_hd:
                buf[p] = w
                p += 1
    buf = np.sort(buf[:p])
    out_ids = np.empty(p, np.uint32)
    out_d = np.empty(p, np.int64)
    n = 0
    for t in range(p):
        w = buf[t]
        if t > 0 and w == buf[t - 1]:
            continue
        out_ids[n] = w
        out_d[n] = _popcount32(np.int64(sigs[w]) ^ sig)
        n += 1
    return out_ids[:n], out_d[:n]


def entries_numba(indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    indices = np.ascontiguousarray(indices, dtype=np.uint32)
    out = np.empty((indices.size, SLOTS), np.uint32)
    kinds = np.empty(indices.size, np.int8)
    _entries_nb(indices, _PARITY, _ERRORS, out, kinds)
    return out, kinds


def entries_range_numba(start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    out = np.empty((stop - start, SLOTS), np.uint32)
    kinds = np.empty(stop - start, np.int8)
    _entries_range_nb(start, stop, _PARITY, _ERRORS, out, kinds)
    return out, kinds


def label_counts_range_numba(start: int, stop: int) -> np.ndarray:
    out = np.empty(stop - start, np.uint8)
    _label_counts_range_nb(start, stop, _PARITY, _ERRORS, out)
    return out


def shares_rows_numba(center: np.ndarray, rows: np.ndarray) -> np.ndarray:
    out = np.empty(rows.shape[0], np.bool_)
    _shares_rows_nb(np.ascontiguousarray(center), np.ascontiguousarray(rows), out)
    return out


def verify_range_numba(records: np.ndarray, start: int, stop: int, upper_only: bool = False) -> tuple[int, int]:
    fails = np.zeros(2, np.int64)
    _verify_range_nb(records, start, stop, upper_only, fails)
    return int(fails[0]), int(fails[1])


def probe_numba(addresses, ids, sigs, record, sig: int, max_hd: int):
    return _probe_nb(addresses, ids, sigs, record, np.int64(sig), np.int64(max_hd))


# --------------------------------------------------------------------------
# numpy


def _label_sets_np(v: np.ndarray):
    """(counts, zero_labels, six) where ``six`` holds the rows with 6 labels."""
    lab = np.empty((v.size, 24), np.uint16)
    lab[:, 0] = golay.decode_array(v) >> np.uint32(11)
    for b in range(golay.N):
        lab[:, b + 1] = golay.decode_array(v ^ np.uint32(1 << b)) >> np.uint32(11)
    zero = lab[:, 0].copy()
    lab.sort(axis=1)
    fresh = np.empty(lab.shape, bool)
    fresh[:, 0] = True
    np.not_equal(lab[:, 1:], lab[:, :-1], out=fresh[:, 1:])
    counts = fresh.sum(axis=1)
    if np.any((counts != 1) & (counts != 6)):
        raise ValueError("label count is neither 1 nor 6")
    rows = counts == 6
    six = lab[rows][fresh[rows]].reshape(-1, 6)
    return counts, zero, six


def _fifteen_np(six: np.ndarray) -> np.ndarray:
    return pair_address_array(six[:, PAIR_INDEX[:, 0]], six[:, PAIR_INDEX[:, 1]])


def entries_numpy(indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    v = np.asarray(indices, dtype=np.uint32).ravel()
    out = np.full((v.size, SLOTS), SENTINEL, np.uint32)
    kinds = np.full(v.size, KIND_C, np.int8)
    for lo in range(0, v.size, CHUNK):
        sl = slice(lo, lo + CHUNK)
        _entries_chunk_np(v[sl], out[sl], kinds[sl])
    return out, kinds


def _entries_chunk_np(v, out, kinds):
    counts, zero, six = _label_sets_np(v)
    out[:, 0] = pair_address_array(zero, zero)
    is_a = counts == 6
    out[is_a, 1:] = _fifteen_np(six)
    kinds[is_a] = KIND_A
    pending = np.flatnonzero(~is_a)
    for code, delta in zip((KIND_B1, KIND_B2, KIND_B4), PROBE_DELTAS):
        if pending.size == 0:
            break
        c2, _, six2 = _label_sets_np(v[pending] ^ np.uint32(delta))
        hit = c2 == 6
        out[pending[hit], 1:] = _fifteen_np(six2)
        kinds[pending[hit]] = code
        pending = pending[~hit]


def entries_range_numpy(start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    return entries_numpy(np.arange(start, stop, dtype=np.uint32))


def label_counts_range_numpy(start: int, stop: int) -> np.ndarray:
    out = np.empty(stop - start, np.uint8)
    for lo in range(start, stop, CHUNK):
        hi = min(lo + CHUNK, stop)
        counts, _, _ = _label_sets_np(np.arange(lo, hi, dtype=np.uint32))
        out[lo - start : hi - start] = counts
    return out


def shares_rows_numpy(center: np.ndarray, rows: np.ndarray) -> np.ndarray:
    valid = center[center != SENTINEL]
    return np.isin(rows, valid).any(axis=1)


def verify_range_numpy(records: np.ndarray, start: int, stop: int, upper_only: bool = False) -> tuple[int, int]:
    fails = [0, 0]
    for lo in range(start, stop, CHUNK // 8):
        v = np.arange(lo, min(lo + CHUNK // 8, stop), dtype=np.uint32)
        a = np.asarray(records[v])
        valid = a != SENTINEL
        for i in range(golay.N):
            for j in range(i, golay.N):
                pattern = (1 << i) | (1 << j) if j != i else 1 << i
                w = v ^ np.uint32(pattern)
                keep = w > v if upper_only else np.ones(v.size, bool)
                if not keep.any():
                    continue
                b = np.asarray(records[w[keep]])
                hit = ((a[keep][:, :, None] == b[:, None, :]) & valid[keep][:, :, None]).any(axis=(1, 2))
                fails[0 if i == j else 1] += int(np.count_nonzero(~hit))
    return fails[0], fails[1]


def probe_numpy(addresses, ids, sigs, record, sig: int, max_hd: int):
    addrs = record[record != SENTINEL]
    lo = np.searchsorted(addresses, addrs, "left")
    hi = np.searchsorted(addresses, addrs, "right")
    if not np.any(hi > lo):
        return np.empty(0, np.uint32), np.empty(0, np.int64)
    cand = np.unique(np.concatenate([ids[a:b] for a, b in zip(lo, hi)]))
    dist = np.bitwise_count(sigs[cand] ^ np.uint32(sig)).astype(np.int64)
    keep = dist <= max_hd
    return cand[keep], dist[keep]


# --------------------------------------------------------------------------
# dispatch

if USE_NUMBA:
    entries = entries_numba
    entries_range = entries_range_numba
    label_counts_range = label_counts_range_numba
    shares_rows = shares_rows_numba
    verify_range = verify_range_numba
    probe = probe_numba
else:
    entries = entries_numpy
    entries_range = entries_range_numpy
    label_counts_range = label_counts_range_numpy
    shares_rows = shares_rows_numpy
    verify_range = verify_range_numpy
    probe = probe_numpy


def entry_record(v: int) -> tuple[np.ndarray, int]:
    """Single-index entry; the numba path avoids array setup per call."""
    if USE_NUMBA:
        rec = np.empty(SLOTS, np.uint32)
        kind = _entry_into_nb(v, _PARITY, _ERRORS, np.empty(24, np.int64), rec)
        return rec, kind
    out, kinds = entries_numpy(np.array([v], np.uint32))
    return out[0], int(kinds[0])
