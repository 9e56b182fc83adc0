"""Hashing a configuration memory and catching a single upset."""
import hashlib
import time

from cmedac.detector import scan
from cmedac.keccak import detection_throughput, keccak_f, KeccakState, sha3_512
from cmedac.memory import FrameGeometry, build_memory, random_task_specs, snapshot_golden

#
# The permutation on the all-zero state. The first lane is a well-known value.
state = keccak_f(KeccakState.zero())
print("keccak-f[1600](0), lane (0,0): %016x" % state.lane(0, 0))

#
# The digest agrees with the standard library on a few messages.
for msg in [b"", b"abc", bytes(200)]:
    ours = sha3_512(msg)
    print(len(msg), ours.hex()[:32], ours == hashlib.sha3_512(msg).digest())

#
# Throughput of the pipelined core: block size x clock / cycles per block x messages in flight.
print("throughput: %.3f Gbps" % (detection_throughput(576, 344e6, 24, 2) / 1e9))

#
# Ten tasks of one hundred 101x32 frames, and their stored digests.
g = FrameGeometry(101, 32)
memory = build_memory(random_task_specs([100] * 10, g, seed=1), g)
t0 = time.perf_counter()
golden = snapshot_golden(memory)
print("memory shape", memory.shape, "snapshot in %.1f ms" % (1e3 * (time.perf_counter() - t0)))
print("task 0 digest", golden.hex_digest(0)[:48], "...")

#
# Flip one bit in task 6 and scan.
memory.bits[6, 42, 17, 5] ^= 1
report = scan(memory, golden)
print("faulty tasks:", report.faulty_tasks)
memory.bits[6, 42, 17, 5] ^= 1
print("after undo:", scan(memory, golden).faulty_tasks)
