import hashlib

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from cmedac.corrector import CLEAN, CORRECTED, UNCORRECTABLE, correct_all, correct_task
from cmedac.faults import FaultPattern, apply
from cmedac.memory import (FrameGeometry, build_memory, random_task_specs, serialize_task,
                           snapshot_golden)

from .conftest import flip_mask


def brute_force_corrections(memory, golden, z):
    """Every (frame, mask) single-frame edit of task z whose digest matches."""
    v, h = memory.geometry.v, memory.geometry.h
    want = golden.hashes[z].tobytes()
    hits = []
    for k in range(memory.n):
        original = memory.bits[z, k].copy()
        for mask in range(1, 2 ** (v * h)):
            memory.bits[z, k] = original ^ flip_mask(mask, v, h)
            if hashlib.sha3_512(serialize_task(memory, z)).digest() == want:
                hits.append((k, mask))
        memory.bits[z, k] = original
    return hits


def test_clean_task(small_memory):
    m, golden = small_memory
    out = correct_task(m, golden, 1)
    assert out.status == CLEAN and out.attempts == 0 and out.corrected_frame is None


def test_burst_in_one_frame(small_memory):
    m, golden = small_memory
    pristine = m.copy()
    apply(FaultPattern.of([(1, 2, 4, i) for i in range(3, 8)]), m)
    out = correct_task(m, golden, 1)
    assert out.status == CORRECTED and out.corrected_frame == 2
    assert m.equals(pristine)


def test_two_frames_uncorrectable(small_memory):
    m, golden = small_memory
    apply(FaultPattern.of([(1, 1, 0, 0), (1, 3, 5, 9)]), m)
    faulty = m.copy()
    out = correct_task(m, golden, 1)
    assert out.status == UNCORRECTABLE
    assert m.equals(faulty)


def test_vertical_masking():
    g = FrameGeometry(4, 4)
    m = build_memory(random_task_specs([2, 2], g, seed=8), g)
    golden = snapshot_golden(m)
    apply(FaultPattern.of([(0, 1, 2, 3), (1, 1, 2, 3)]), m)
    faulty = m.copy()
    outs = correct_all(m, golden, [0, 1])
    assert [o.status for o in outs] == [UNCORRECTABLE, UNCORRECTABLE]
    assert all(o.masked and o.attempts == 0 for o in outs)
    assert m.equals(faulty)


def test_correct_all_any_order(small_memory):
    m, golden = small_memory
    pattern = FaultPattern.of([(0, 1, 0, 0), (0, 1, 0, 1), (3, 2, 7, 15), (3, 2, 6, 15)])
    for order in ([0, 3], [3, 0]):
        mm = m.copy()
        apply(pattern, mm)
        outs = correct_all(mm, golden, order)
        assert [o.status for o in outs] == [CORRECTED, CORRECTED]
        assert mm.equals(m)


def test_correct_all_scoping(small_memory):
    m, golden = small_memory
    assert correct_all(m, golden, []) == []
    apply(FaultPattern.of([(2, 0, 1, 1)]), m)
    faulty = m.copy()
    outs = correct_all(m, golden, [3])
    assert [o.status for o in outs] == [CLEAN]
    assert m.equals(faulty)


def test_wrong_candidates_rolled_back():
    # task 0 and task 1 both flip row 0 col 0, in frames 0 and 2; task 1 also
    # flips (2, 1, 1) so its first mismatch coordinate has two candidates
    g = FrameGeometry(3, 3)
    m = build_memory(random_task_specs([3, 3, 3], g, seed=2), g)
    golden = snapshot_golden(m)
    pristine = m.copy()
    apply(FaultPattern.of([(0, 0, 0, 0), (1, 2, 0, 0), (1, 2, 1, 1)]), m)
    task0 = m.bits[0].copy()
    out = correct_task(m, golden, 1)
    assert out.status == CORRECTED and out.corrected_frame == 2
    assert out.attempts == 2  # frame 0 tried and reverted first
    assert np.array_equal(m.bits[1], pristine.bits[1])
    assert np.array_equal(m.bits[0], task0)


def test_later_coordinate_used_when_first_is_masked():
    g = FrameGeometry(3, 3)
    m = build_memory(random_task_specs([2, 2], g, seed=4), g)
    golden = snapshot_golden(m)
    pristine = m.copy()
    # (1,0,0) is flipped in both tasks, hiding task 1's first coordinate
    apply(FaultPattern.of([(0, 1, 0, 0), (1, 1, 0, 0), (1, 1, 2, 2)]), m)
    out = correct_task(m, golden, 1)
    assert out.status == CORRECTED and out.corrected_frame == 1
    assert np.array_equal(m.bits[1], pristine.bits[1])


def test_matches_brute_force_oracle():
    g = FrameGeometry(3, 3)
    m = build_memory(random_task_specs([3, 2, 3], g, seed=21), g)
    golden = snapshot_golden(m)
    rng = np.random.default_rng(21)
    for _ in range(6):
        z = int(rng.integers(3))
        k = int(rng.integers(m.tasks[z].real_frames))
        mask = int(rng.integers(1, 2 ** 9))
        mm = m.copy()
        mm.bits[z, k] ^= flip_mask(mask, 3, 3)
        assert brute_force_corrections(mm, golden, z) == [(k, mask)]
        out = correct_task(mm, golden, z)
        assert out.status == CORRECTED and out.corrected_frame == k
        assert mm.equals(m)


@st.composite
def single_frame_faults(draw):
    n_tasks = draw(st.integers(1, 5))
    tasks = draw(st.lists(st.integers(0, 4), min_size=1, max_size=n_tasks, unique=True))
    used, flips = set(), []
    for z in tasks:
        k = draw(st.integers(0, 3))
        cells = draw(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 6)),
                              min_size=1, max_size=10, unique=True))
        for j, i in cells:
            if (k, j, i) not in used:
                used.add((k, j, i))
                flips.append((z, k, j, i))
    return FaultPattern.of(flips)


G_PROP = FrameGeometry(6, 7)
MEM_PROP = build_memory(random_task_specs([4] * 5, G_PROP, seed=5), G_PROP)
GOLD_PROP = snapshot_golden(MEM_PROP)


@settings(max_examples=200, deadline=None)
@given(single_frame_faults(), st.randoms(use_true_random=False))
def test_guaranteed_correction(pattern, rnd):
    m = MEM_PROP.copy()
    apply(pattern, m)
    order = list(range(5))
    rnd.shuffle(order)
    outs = correct_all(m, GOLD_PROP, order)
    faulty = set(pattern.tasks())
    for o in outs:
        assert o.status == (CORRECTED if o.task in faulty else CLEAN)
    assert m.equals(MEM_PROP)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 4), st.lists(st.integers(0, 3), min_size=2, max_size=4, unique=True),
       st.integers(0, 2**30))
def test_multi_frame_never_falsely_corrected(z, frames, seed):
    rng = np.random.default_rng(seed)
    m = MEM_PROP.copy()
    for k in frames:
        m.bits[z, k] ^= flip_mask(int(rng.integers(1, 2 ** 42)), 6, 7)
    faulty = m.copy()
    out = correct_task(m, GOLD_PROP, z)
    assert out.status == UNCORRECTABLE
    assert m.equals(faulty)
