"""Erasure product code correction with digest confirmation.

The horizontal parity difference of a faulty task is the XOR of its error
patterns. If all errors sit in one frame, that difference *is* the error
pattern, and the vertical parity difference points at candidate frames.
Each candidate is patched with the difference mask and kept only if the
task digest then matches; otherwise the patch is undone.
"""

import json
from dataclasses import asdict, dataclass

import numpy as np

from .memory import all_vertical_parities, horizontal_parity, task_digest

CLEAN = "clean"
CORRECTED = "corrected"
UNCORRECTABLE = "uncorrectable"


@dataclass
class CorrectionOutcome:
    task: int
    status: str
    corrected_frame: int | None = None
    attempts: int = 0
    masked: bool = False  # horizontal mismatch but no vertical candidate

    def to_dict(self):
        return asdict(self)


def _digest_ok(memory, golden, z):
    return bool(np.array_equal(task_digest(memory, z), golden.hashes[z]))


def correct_task(memory, golden, z, vertical_diff=None):
    """Try to restore task z in place.

    ``vertical_diff`` is the current ``(n, v, h)`` XOR of recomputed and
    stored vertical parities; it is computed when omitted and updated in
    place after a successful correction.
    """
    if _digest_ok(memory, golden, z):
        return CorrectionOutcome(z, CLEAN)
    mask = horizontal_parity(memory, z) ^ golden.hp[z]
    coords = np.argwhere(mask)
    if len(coords) == 0:
        return CorrectionOutcome(z, UNCORRECTABLE, masked=True)
    if vertical_diff is None:
        vertical_diff = all_vertical_parities(memory) ^ golden.vp

    tried = set()
    for j, i in coords:
        for k in np.flatnonzero(vertical_diff[:, j, i]):
            k = int(k)
            if k in tried:
                continue
            tried.add(k)
            frame = memory.bits[z, k]
            frame ^= mask
            if _digest_ok(memory, golden, z):
                vertical_diff[k] ^= mask
                return CorrectionOutcome(z, CORRECTED, k, len(tried))
            frame ^= mask
    return CorrectionOutcome(z, UNCORRECTABLE, attempts=len(tried), masked=not tried)


def correct_all(memory, golden, order):
    """Apply ``correct_task`` for each task id in ``order``."""
    vertical_diff = all_vertical_parities(memory) ^ golden.vp
    return [correct_task(memory, golden, int(z), vertical_diff) for z in order]


def outcomes_to_json(outcomes):
    return json.dumps([o.to_dict() for o in outcomes])
