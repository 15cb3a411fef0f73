"""Hierarchical counters against a shadow bitmap, in both storage modes."""

import numpy as np
import pytest

from combpi.counters import (
    PACKED,
    UNPACKED,
    CounterTree,
    counter_count_leq,
    counter_init,
    counter_pack_roundtrip,
    counter_remove,
)


def test_init_all_present_L3():
    t = counter_init(3, [1] * 8)
    assert t.cells() == [1, 2, 1, 4, 1, 2, 1, 8]


def test_init_none_present_L2():
    t = counter_init(2, [0, 0, 0, 0])
    assert t.cells() == [0, 0, 0, 0]


def test_init_pattern_L2():
    t = counter_init(2, [1, 0, 1, 1])
    assert t.cells() == [1, 1, 1, 3]


def test_init_validates_L():
    with pytest.raises(ValueError):
        counter_init(1, [1, 1])
    with pytest.raises(ValueError):
        counter_init(32, [])


def test_remove_updates_covering_cells():
    t = counter_init(3, [1] * 8)
    counter_remove(t, 3)
    assert t.cells() == [1, 2, 0, 3, 1, 2, 1, 7]


def test_remove_conserves_total():
    t = counter_init(3, [1] * 8)
    before = counter_count_leq(t, 8)
    counter_remove(t, 5)
    assert counter_count_leq(t, 8) == before - 1


def test_remove_first_position():
    t = counter_init(2, [1, 1, 1, 1])
    counter_remove(t, 1)
    assert counter_count_leq(t, 1) == 0


def test_count_leq_examples():
    t = counter_init(3, [1] * 8)
    assert counter_count_leq(t, 5) == 5
    counter_remove(t, 3)
    assert counter_count_leq(t, 5) == 4
    assert counter_count_leq(t, 0) == 0


def test_double_removal_detected():
    t = counter_init(3, [1] * 8)
    counter_remove(t, 3)
    with pytest.raises(ValueError):
        counter_remove(t, 3)


def test_pack_roundtrip_identity_and_payload():
    t = counter_init(3, [1] * 8)
    p = counter_pack_roundtrip(t)
    assert p.mode == PACKED
    assert p.cells() == t.cells()
    for pos in range(0, 9):
        assert counter_count_leq(p, pos) == counter_count_leq(t, pos)
    # payload: sum of l(k)+1 bits; for L = 3 that is 15 < 16 = 2**4
    assert p.payload_bits == 15
    t10 = counter_init(10, [1] * (1 << 10))
    assert t10.payload_bits == 2 ** 11 - 1
    assert t10.payload_bits <= 2 ** 11


def test_packed_remove_matches_unpacked():
    rng = np.random.default_rng(5)
    flags = (rng.random(1 << 6) < 0.8).astype(np.uint8)
    t = counter_init(6, flags)
    p = counter_pack_roundtrip(t)
    live = list(np.flatnonzero(flags) + 1)
    rng.shuffle(live)
    for pos in live[:30]:
        counter_remove(t, int(pos))
        counter_remove(p, int(pos))
        q = int(rng.integers(0, (1 << 6) + 1))
        assert counter_count_leq(t, q) == counter_count_leq(p, q)
    assert t.cells() == p.cells()


def interleaved_check(L, n_ops, seed, mode):
    rng = np.random.default_rng(seed)
    size = 1 << L
    shadow = np.ones(size, dtype=np.uint8)
    t = counter_init(L, shadow)
    if mode == PACKED:
        t = counter_pack_roundtrip(t)
    for _ in range(n_ops):
        if rng.random() < 0.5 and shadow.any():
            pos = int(rng.choice(np.flatnonzero(shadow))) + 1
            counter_remove(t, pos)
            shadow[pos - 1] = 0
        else:
            q = int(rng.integers(0, size + 1))
            assert counter_count_leq(t, q) == int(shadow[:q].sum())
        k = int(rng.integers(1, size + 1))
        lsb = k & -k
        assert 0 <= t.cell(k) <= lsb


def test_random_interleavings_unpacked():
    interleaved_check(10, 1500, 1, UNPACKED)


def test_random_interleavings_packed():
    interleaved_check(10, 400, 2, PACKED)


def test_batch_ops_match_scalar():
    rng = np.random.default_rng(9)
    flags = (rng.random(1 << 8) < 0.7).astype(np.uint8)
    t1 = counter_init(8, flags)
    t2 = counter_init(8, flags)
    live = np.flatnonzero(flags) + 1
    batch = rng.choice(live, size=60, replace=False)
    for pos in batch:
        t1.remove(int(pos))
    t2.remove_batch(batch.astype(np.int64))
    assert t1.cells() == t2.cells()
    qs = rng.integers(0, (1 << 8) + 1, size=64)
    got = t2.count_leq_batch(qs.astype(np.int64))
    for q, g in zip(qs, got):
        assert g == t1.count_leq(int(q))
