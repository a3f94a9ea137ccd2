import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzyfind import golay, labels
from fuzzyfind.golay import decode, encode, hamming
from fuzzyfind.labels import SphereCase, case_of, label_set, sphere

from oracles import nearest_codeword

vec23 = st.integers(0, golay.MASK23)

# label sets frozen from the brute-force nearest-codeword scan in oracles.py
FROZEN = {
    7: ((0, 72, 131, 528, 1280, 2084), 0),
    1000: ((12, 82, 128, 256, 1025, 2592), 12),
    480: ((0, 41, 82, 128, 1540, 2304), 2304),
    4194323: ((0, 2059, 2084, 2240, 2320, 3584), 2084),
}


def test_sphere_of_zero():
    assert sphere(0) == [0] + [1 << b for b in range(23)]


@given(vec23)
def test_sphere_shape(v):
    s = sphere(v)
    assert len(s) == len(set(s)) == 24
    assert s[0] == v
    assert all(hamming(v, w) <= 1 for w in s)


@pytest.mark.parametrize("m", [0, 1, 77, 4095])
def test_codeword_has_one_label(m):
    ls = label_set(encode(m))
    assert ls.labels == (m,)
    assert ls.zero_label == m
    assert case_of(encode(m)) is SphereCase.B


def test_within_two_of_codeword_is_case_b():
    rng = random.Random(5)
    for _ in range(200):
        c = encode(rng.randrange(4096))
        i, j = rng.sample(range(23), 2)
        assert label_set(c ^ (1 << i) ^ (1 << j)).cardinality == 1
        assert case_of(c ^ (1 << i)) is SphereCase.B


@pytest.mark.parametrize("v", sorted(FROZEN))
def test_distance_three_has_six_labels(v):
    assert hamming(v, nearest_codeword(v)) == 3
    ls = label_set(v)
    assert (ls.labels, ls.zero_label) == FROZEN[v]
    assert ls.case is SphereCase.A


def test_six_labels_match_brute_force():
    rng = random.Random(8)
    checked = 0
    while checked < 10:
        v = rng.randrange(1 << 23)
        if hamming(v, decode(v)) != 3:
            continue
        expected = sorted({nearest_codeword(w) >> 11 for w in sphere(v)})
        assert list(label_set(v).labels) == expected
        checked += 1


@given(vec23)
def test_label_set_invariants(v):
    ls = label_set(v)
    assert ls.cardinality in (1, 6)
    assert list(ls.labels) == sorted(set(ls.labels))
    assert ls.zero_label in ls.labels
    # Case A exactly at the covering radius
    assert (ls.cardinality == 6) == (hamming(v, decode(v)) == 3)


@given(vec23, st.integers(0, 22))
def test_adjacent_indices_share_their_decodes(u, bit):
    v = u ^ (1 << bit)
    lu, lv = label_set(u), label_set(v)
    for lab in (lu.zero_label, lv.zero_label):
        assert lab in lu.labels and lab in lv.labels


def test_census_empty_and_small():
    assert labels.census(5, 5) == labels.Census(0, 0)
    c = labels.census(0, 4096)
    assert c.total == 4096
    slow = sum(label_set(v).cardinality == 6 for v in range(4096))
    assert c.count_a == slow


def test_census_rejects_out_of_range():
    with pytest.raises(ValueError):
        labels.census(0, (1 << 23) + 1)
