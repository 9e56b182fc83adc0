"""Read-back and digest comparison."""

import json
from dataclasses import dataclass, field

import numpy as np

from .memory import task_digest, task_digests
from .timing import TimingModel


@dataclass
class DetectionReport:
    faulty_tasks: list = field(default_factory=list)
    scan_cycles: int = 0

    def to_json(self):
        return json.dumps({"faulty_tasks": self.faulty_tasks, "scan_cycles": self.scan_cycles})


def _check_shape(memory, golden):
    if not golden.matches_shape(memory):
        raise ValueError(
            f"golden store shape does not match memory of shape {memory.shape}"
        )


def verify_task(memory, golden, z):
    """True when task z's digest equals the stored one (task is clean)."""
    _check_shape(memory, golden)
    if not 0 <= z < memory.N:
        raise ValueError(f"task {z} out of range")
    return bool(np.array_equal(task_digest(memory, z), golden.hashes[z]))


def scan_cycles(memory, timing):
    per_task = timing.task_detection_cycles(memory.n, memory.geometry.bits)
    return memory.N * per_task


def scan(memory, golden, timing=None):
    """Hash every task in ascending id order and report digest mismatches."""
    _check_shape(memory, golden)
    timing = timing or TimingModel()
    mismatch = np.any(task_digests(memory) != golden.hashes, axis=1)
    return DetectionReport([int(z) for z in np.flatnonzero(mismatch)], scan_cycles(memory, timing))
