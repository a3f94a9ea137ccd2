import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzyfind import ffd, golay
from fuzzyfind.ffd import EntryKind, build_entry, lookup, verify_neighborhood
from fuzzyfind.golay import decode, encode
from fuzzyfind.labels import label_set
from fuzzyfind.pairs import fifteen_addresses, own_address

from oracles import hamming_ball

vec23 = st.integers(0, golay.MASK23)


def test_fig5_pair_shares():
    assert golay.hamming(1000, 480) == 2
    assert build_entry(1000).shares_with(build_entry(480))


@pytest.mark.parametrize("m", [0, 5, 4095])
def test_codeword_slot0(m):
    e = build_entry(encode(m))
    assert e.addresses[0] == own_address(m)


def test_case_a_layout():
    e = build_entry(1000)
    assert e.kind is EntryKind.A
    assert e.addresses[1:] == tuple(fifteen_addresses(label_set(1000).labels))


def test_case_b_recovery_probe_order():
    # 0 is a codeword; 0^1, 0^2, 0^4 stay within distance 1: Case C
    assert build_entry(0).kind is EntryKind.C
    assert build_entry(0).addresses == (own_address(0),)
    # two bits off a codeword, neither of them bit 0: XOR 1 lands at distance 3
    v = encode(9) ^ (1 << 10) ^ (1 << 20)
    e = build_entry(v)
    assert e.kind is EntryKind.B_RECOVERED and e.delta == 1
    assert e.addresses[0] == own_address(9)
    assert e.addresses[1:] == tuple(fifteen_addresses(label_set(v ^ 1).labels))


def test_delta_two_and_four():
    c = encode(300)
    e2 = build_entry(c ^ 1 ^ (1 << 9))  # XOR 1 moves back to distance 1
    assert (e2.kind, e2.delta) == (EntryKind.B_RECOVERED, 2)
    e4 = build_entry(c ^ 1 ^ 2)  # XOR 1, XOR 2 both move closer
    assert (e4.kind, e4.delta) == (EntryKind.B_RECOVERED, 4)


@given(vec23)
def test_entry_shape(v):
    e = build_entry(v)
    assert (e.kind is EntryKind.C) == (len(e.addresses) == 1)
    assert len(e.addresses) in (1, 16)
    assert e.addresses[0] == own_address(decode(v) >> 11)
    assert all(0 <= a < 1 << 23 for a in e.addresses)


@settings(max_examples=50)
@given(vec23)
def test_slot0_constant_over_decoding_region(v):
    c = decode(v)
    rng = random.Random(v)
    w = c ^ (1 << rng.randrange(23)) ^ (1 << rng.randrange(23))
    assert build_entry(v).addresses[0] == build_entry(w).addresses[0]


def test_case_c_is_exactly_distance_le_1():
    for v in range(0, 1 << 23, 9973):
        near = golay.hamming(v, decode(v)) <= 1
        assert (build_entry(v).kind is EntryKind.C) == near


def test_lookup_on_the_fly_agrees():
    rng = random.Random(4)
    for _ in range(500):
        v = rng.randrange(1 << 23)
        assert lookup(v) == build_entry(v)
    assert lookup(0).kind in (EntryKind.B_RECOVERED, EntryKind.C)


def test_lookup_rejects_wide():
    with pytest.raises(ValueError):
        lookup(1 << 23)


def test_neighbors_within_2():
    n = ffd.neighbors_within_2(1000)
    assert n.size == 277 == 1 + 23 + 253
    assert set(n.tolist()) == hamming_ball(1000, 2)
    assert n[0] == 1000
    assert 480 in n.tolist()


def test_verify_neighborhood_counts():
    rep = verify_neighborhood(1000)
    assert rep.checked == 277
    assert 480 not in [w for w, _ in rep.failures]
    assert 1000 not in [w for w, _ in rep.failures]
    assert rep.passed + len(rep.failures) == 277


def test_verify_matches_set_intersection():
    rng = random.Random(21)
    for _ in range(5):
        v = rng.randrange(1 << 23)
        rep = verify_neighborhood(v)
        center = build_entry(v)
        slow = sorted(w for w in hamming_ball(v, 2) if not center.shares_with(build_entry(w)))
        assert sorted(w for w, _ in rep.failures) == slow


def test_failures_only_between_a_and_recovered_b():
    summary = ffd.verify_centers(ffd.sample_centers(60, 3))
    for (ck, nk), (pairs, failed) in summary.breakdown.items():
        if {ck, nk} != {"A", "B_recovered"}:
            assert failed == 0, (ck, nk)


def test_verify_exhaustive_subrange_matches_sampled():
    centers = list(range(70000, 70040))
    sampled = ffd.verify_centers(centers, keep_failures=False)
    exh = ffd.verify_exhaustive(start=70000, stop=70040)
    assert exh["pairs"] == sampled.pairs
    assert exh["failed_pairs"] == sampled.pairs - sampled.passed


def test_sample_centers_reproducible():
    assert ffd.sample_centers(50, 9).tolist() == ffd.sample_centers(50, 9).tolist()
    assert ffd.sample_centers(50, 9).tolist() != ffd.sample_centers(50, 10).tolist()


def test_census_small_range_consistent():
    c = ffd.case_census(start=0, stop=1 << 16)
    kinds = [build_entry(v).kind for v in range(0, 1 << 16, 97)]
    assert c.total == 1 << 16
    assert c.count_b_recovered == sum(c.by_delta.values())
    # spot-check the per-index reference against the chunked census on a slice
    slice_c = ffd.case_census(start=0, stop=4096)
    slow = [build_entry(v).kind for v in range(4096)]
    assert slice_c.count_a == slow.count(EntryKind.A)
    assert slice_c.count_c == slow.count(EntryKind.C)
    assert kinds


# -- table files ------------------------------------------------------------


def test_partial_build_is_deterministic(tmp_path):
    a = ffd.build_table(tmp_path / "a", threads=1, chunk=1 << 12, stop=1 << 15)
    b = ffd.build_table(tmp_path / "b", threads=3, chunk=1 << 13, stop=1 << 15)
    assert a.sha256 == b.sha256 == ffd.file_sha256(tmp_path / "a")
    raw = (tmp_path / "a").read_bytes()
    assert raw[:4] == b"FFD1"
    recs = np.frombuffer(raw[16:], "<u4").reshape(-1, 16)
    assert recs.shape == (1 << 15, 16)
    assert ffd.record_addresses(recs[1000]) == build_entry(1000).addresses


def test_partial_file_refused(tmp_path):
    ffd.build_table(tmp_path / "p", stop=1 << 10)
    with pytest.raises(ffd.FormatError):
        ffd.FfdTable(tmp_path / "p")


def test_bad_magic_refused(tmp_path):
    p = tmp_path / "bad"
    p.write_bytes(b"XXXX" + bytes(12))
    with pytest.raises(ffd.FormatError):
        ffd.FfdTable(p)


def test_truncated_header_refused(tmp_path):
    p = tmp_path / "short"
    p.write_bytes(b"FF")
    with pytest.raises(ffd.FormatError):
        ffd.FfdTable(p)


@pytest.mark.slow
def test_table_roundtrip(table, built_table):
    _, report = built_table
    assert report.records == 1 << 23
    assert table.generator == golay.GENERATOR
    assert lookup(1000, table) == build_entry(1000)
    assert table.addresses(0) == build_entry(0).addresses
    assert (table.record(0)[1:] == 0xFFFFFFFF).all()


@pytest.mark.slow
def test_table_census_cross_check(table):
    c = ffd.case_census(table, start=0, stop=1 << 20)
    assert c.total == 1 << 20
