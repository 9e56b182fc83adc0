"""Repairing a damaged frame from row and column parities plus a digest check."""
from cmedac.corrector import correct_all, correct_task
from cmedac.detector import scan
from cmedac.faults import FaultModel, FaultPattern, apply, generate
from cmedac.memory import (FrameGeometry, all_vertical_parities, build_memory, horizontal_parity,
                           random_task_specs, redundancy_bits, snapshot_golden)

g = FrameGeometry(6, 8)
memory = build_memory(random_task_specs([4, 4, 3], g, seed=3), g)
golden = snapshot_golden(memory)
pristine = memory.copy()
print("tasks x frames:", memory.N, "x", memory.n, " (task 2 has one dummy zero frame)")

#
# A burst of four adjacent bits in task 1, frame 2.
pattern = FaultPattern.of([(1, 2, 3, i) for i in range(2, 6)])
apply(pattern, memory)

# The horizontal parity difference is exactly the burst mask...
print(horizontal_parity(memory, 1) ^ golden.hp[1])
# ...and the vertical difference points at frame 2.
vdiff = all_vertical_parities(memory) ^ golden.vp
print("frames with a vertical mismatch:", [k for k in range(memory.n) if vdiff[k].any()])

out = correct_task(memory, golden, 1)
print(out, "restored:", memory.equals(pristine))

#
# Faults in two frames of one task cannot be pinned down, and the decoder says so
# without touching memory.
apply(FaultPattern.of([(0, 0, 0, 0), (0, 3, 5, 7)]), memory)
print(correct_task(memory, golden, 0).status)
memory = pristine.copy()

#
# A random campaign of single-frame faults across all tasks.
fixed = 0
for seed in range(200):
    p = generate(FaultModel("random-multi", burst_length=5, tasks_affected=3, seed=seed), memory)
    apply(p, memory)
    correct_all(memory, golden, scan(memory, golden).faulty_tasks)
    fixed += memory.equals(pristine)
    memory = pristine.copy()
print("bit-exact recoveries: %d/200" % fixed)

full = FrameGeometry(101, 32)
proposed, scrubbing = redundancy_bits(build_memory(random_task_specs([100] * 10, full, zero=True), full))
print("stored bits, 10 tasks x 100 frames: %d vs %d for a full golden copy (%.1f%%)"
      % (proposed, scrubbing, 100 * proposed / scrubbing))
