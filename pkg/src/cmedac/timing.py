"""Cycle costs of read-back, hashing, correction and download."""

import math
from dataclasses import dataclass

from .keccak import RATE_BITS, detection_throughput


@dataclass(frozen=True)
class TimingModel:
    """Cycle-level cost model.

    ``clock_period`` is the system clock period in seconds. Hashing cost is
    derived from the detector throughput (block size, f_max, cycles per
    block, messages in flight). Correcting a task costs one parity pass over
    its frames plus one re-hash per candidate frame tried.
    """

    clock_period: float = 10e-9
    read_cycles_per_frame: int = 101
    write_cycles_per_frame: int = 101
    ec_cycles_per_frame: int = 1
    hash_f_max: float = 344e6
    hash_clock_cycles: int = 24
    hash_n_msg: int = 2

    def __post_init__(self):
        for name in ("clock_period", "read_cycles_per_frame", "write_cycles_per_frame",
                     "ec_cycles_per_frame", "hash_f_max", "hash_clock_cycles", "hash_n_msg"):
            if getattr(self, name) <= 0:
                raise ValueError(f"timing parameter {name} must be positive")

    @property
    def hash_throughput(self):
        return detection_throughput(RATE_BITS, self.hash_f_max, self.hash_clock_cycles,
                                    self.hash_n_msg)

    def hash_cycles(self, bits):
        seconds = bits / self.hash_throughput
        return math.ceil(seconds / self.clock_period - 1e-9)

    def read_cycles(self, frames):
        return frames * self.read_cycles_per_frame

    def write_cycles(self, frames):
        return frames * self.write_cycles_per_frame

    def task_detection_cycles(self, frames, frame_bits):
        return self.read_cycles(frames) + self.hash_cycles(frames * frame_bits)

    def correction_cycles(self, frames, frame_bits, attempts):
        return frames * self.ec_cycles_per_frame + attempts * self.hash_cycles(frames * frame_bits)
