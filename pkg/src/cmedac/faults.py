"""Seeded SBU/MBU fault patterns and their application to a memory."""

from dataclasses import dataclass

import numpy as np

KINDS = ("none", "single-bit", "adjacent-burst", "random-multi")


@dataclass(frozen=True)
class FaultModel:
    kind: str = "adjacent-burst"
    burst_length: int = 1
    frames_per_task: int = 1
    tasks_affected: int = 1
    seed: int = 0
    allow_dummy: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown fault model {self.kind!r}; expected one of {KINDS}")
        if self.burst_length < 1:
            raise ValueError("burst_length must be >= 1")
        if self.frames_per_task < 1 or self.tasks_affected < 1:
            raise ValueError("frames_per_task and tasks_affected must be >= 1")


@dataclass(frozen=True)
class FaultPattern:
    """Set of (task, frame, row, col) bit flips."""

    flips: frozenset = frozenset()

    @classmethod
    def of(cls, flips):
        return cls(frozenset((int(z), int(k), int(j), int(i)) for z, k, j, i in flips))

    def __len__(self):
        return len(self.flips)

    def __iter__(self):
        return iter(sorted(self.flips))

    def tasks(self):
        return sorted({f[0] for f in self.flips})

    def frames(self):
        return sorted({f[:2] for f in self.flips})

    def to_text(self):
        return "".join(f"{z} {k} {j} {i}\n" for z, k, j, i in self)

    @classmethod
    def from_text(cls, text):
        flips = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"line {lineno}: expected 'z k j i', got {line!r}")
            flips.append(tuple(int(p) for p in parts))
        return cls.of(flips)


def shared_coordinates(pattern):
    """(k, j, i) coordinates flipped in more than one task."""
    owners = {}
    for z, k, j, i in pattern.flips:
        owners.setdefault((k, j, i), set()).add(z)
    return sorted(c for c, zs in owners.items() if len(zs) > 1)


def _frame_choices(memory, z, allow_dummy):
    return memory.n if allow_dummy else memory.tasks[z].real_frames


def generate(model, memory):
    """Draw a fault pattern; identical (model, memory shape) gives identical output."""
    rng = np.random.default_rng(model.seed)
    v, h = memory.geometry.v, memory.geometry.h
    if model.kind == "none":
        return FaultPattern()
    if model.kind == "single-bit":
        z = int(rng.integers(memory.N))
        k = int(rng.integers(_frame_choices(memory, z, model.allow_dummy)))
        return FaultPattern.of([(z, k, rng.integers(v), rng.integers(h))])

    if model.kind == "adjacent-burst" and model.burst_length > h:
        raise ValueError(f"burst of {model.burst_length} bits does not fit a row of {h}")
    if model.kind == "random-multi" and model.burst_length > v * h:
        raise ValueError(f"{model.burst_length} flips do not fit a frame of {v * h} bits")

    eligible = [z for z in range(memory.N)
                if _frame_choices(memory, z, model.allow_dummy) >= model.frames_per_task]
    if len(eligible) < model.tasks_affected:
        raise ValueError(
            f"only {len(eligible)} tasks have {model.frames_per_task} frames to fault; "
            f"{model.tasks_affected} requested"
        )
    flips = []
    for z in sorted(rng.choice(eligible, size=model.tasks_affected, replace=False)):
        limit = _frame_choices(memory, z, model.allow_dummy)
        for k in sorted(rng.choice(limit, size=model.frames_per_task, replace=False)):
            if model.kind == "adjacent-burst":
                j = rng.integers(v)
                i0 = rng.integers(h - model.burst_length + 1)
                flips += [(z, k, j, i0 + d) for d in range(model.burst_length)]
            else:
                cells = rng.choice(v * h, size=model.burst_length, replace=False)
                flips += [(z, k, c // h, c % h) for c in cells]
    return FaultPattern.of(flips)


def apply(pattern, memory):
    """Toggle every listed bit of ``memory`` in place and return it."""
    if not pattern.flips:
        return memory
    idx = np.array(sorted(pattern.flips), dtype=np.int64)
    hi = np.array(memory.shape)
    if np.any(idx < 0) or np.any(idx >= hi):
        bad = idx[np.any((idx < 0) | (idx >= hi), axis=1)][0]
        raise ValueError(f"flip {tuple(bad)} outside memory of shape {memory.shape}")
    memory.bits[tuple(idx.T)] ^= 1
    return memory
