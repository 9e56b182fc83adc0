"""Configuration memory model: tasks x frames x (v, h) bit matrices.

Each task occupies one row of the 2D frame array. Tasks with fewer frames
than the widest task are padded with all-zero dummy frames, so the whole
memory is a dense ``(N, n, v, h)`` uint8 array holding 0/1 values.
"""

from dataclasses import dataclass, field

import numpy as np

from .keccak import DIGEST_BITS, sha3_512_many

GOLDEN_HEADER = "cmedac-golden-store v1"


class GeometryError(ValueError):
    """A frame does not match the memory's frame geometry."""


@dataclass(frozen=True)
class FrameGeometry:
    v: int = 101  # rows per frame
    h: int = 32   # columns per frame

    def __post_init__(self):
        if self.v < 1 or self.h < 1:
            raise ValueError(f"frame geometry must be positive, got {self.v}x{self.h}")

    @property
    def bits(self):
        return self.v * self.h


@dataclass
class TaskSpec:
    """Input description of one task before padding."""

    frames: np.ndarray          # (real_count, v, h)
    exec_cycles: int = 1
    idle_cycles: int = 0
    depends_on: frozenset = frozenset()


@dataclass(frozen=True)
class TaskImage:
    id: int
    real_frames: int
    exec_cycles: int
    idle_cycles: int
    depends_on: frozenset = frozenset()

    def __post_init__(self):
        if self.exec_cycles < 1:
            raise ValueError(f"task {self.id}: exec_cycles must be >= 1")
        if self.idle_cycles < 0:
            raise ValueError(f"task {self.id}: idle_cycles must be >= 0")


@dataclass
class ConfigMemory:
    geometry: FrameGeometry
    tasks: list
    bits: np.ndarray  # (N, n, v, h) uint8

    @property
    def N(self):
        return self.bits.shape[0]

    @property
    def n(self):
        return self.bits.shape[1]

    @property
    def U(self):
        return self.N * self.n

    @property
    def shape(self):
        return self.bits.shape

    def is_dummy(self, z, k):
        return k >= self.tasks[z].real_frames

    def copy(self):
        return ConfigMemory(self.geometry, list(self.tasks), self.bits.copy())

    def equals(self, other):
        return self.bits.shape == other.bits.shape and bool(np.array_equal(self.bits, other.bits))


@dataclass
class GoldenStore:
    hashes: np.ndarray  # (N, 64) uint8
    hp: np.ndarray      # (N, v, h)
    vp: np.ndarray      # (n, v, h)
    meta: dict = field(default_factory=dict)

    def matches_shape(self, memory):
        N, n, v, h = memory.shape
        return (
            self.hashes.shape == (N, DIGEST_BITS // 8)
            and self.hp.shape == (N, v, h)
            and self.vp.shape == (n, v, h)
        )

    def hex_digest(self, z):
        return self.hashes[z].tobytes().hex()


def build_memory(task_specs, geometry=FrameGeometry()):
    """Arrange tasks as rows of a 2D frame array, zero-padding to the widest task."""
    if not task_specs:
        raise ValueError("at least one task is required")
    frames = []
    for z, spec in enumerate(task_specs):
        f = np.asarray(spec.frames, dtype=np.uint8)
        if f.ndim == 2:
            f = f[None]
        if f.ndim != 3 or f.shape[1:] != (geometry.v, geometry.h):
            raise GeometryError(
                f"task {z}: frames of shape {f.shape[1:]} do not match {geometry.v}x{geometry.h}"
            )
        if f.shape[0] < 1:
            raise ValueError(f"task {z} has no frames")
        if np.any(f > 1):
            raise ValueError(f"task {z}: frame bits must be 0 or 1")
        frames.append(f)
    n = max(f.shape[0] for f in frames)
    bits = np.zeros((len(frames), n, geometry.v, geometry.h), dtype=np.uint8)
    tasks = []
    for z, (f, spec) in enumerate(zip(frames, task_specs)):
        bits[z, : f.shape[0]] = f
        tasks.append(TaskImage(z, f.shape[0], int(spec.exec_cycles), int(spec.idle_cycles),
                               frozenset(spec.depends_on)))
    return ConfigMemory(geometry, tasks, bits)


def random_task_specs(frame_counts, geometry=FrameGeometry(), seed=0, exec_cycles=1,
                      idle_cycles=0, zero=False):
    """Task specs filled with seeded random bits (or zeros)."""
    rng = np.random.default_rng(seed)
    N = len(frame_counts)
    exec_cycles = np.broadcast_to(exec_cycles, (N,))
    idle_cycles = np.broadcast_to(idle_cycles, (N,))
    specs = []
    for z, count in enumerate(frame_counts):
        shape = (int(count), geometry.v, geometry.h)
        frames = np.zeros(shape, np.uint8) if zero else rng.integers(0, 2, shape, dtype=np.uint8)
        specs.append(TaskSpec(frames, int(exec_cycles[z]), int(idle_cycles[z])))
    return specs


def horizontal_parity(memory, z):
    """XOR of all n frames of task z."""
    return np.bitwise_xor.reduce(memory.bits[z], axis=0)


def vertical_parity(memory, k):
    """XOR of frame k across all tasks."""
    return np.bitwise_xor.reduce(memory.bits[:, k], axis=0)


def all_horizontal_parities(memory):
    return np.bitwise_xor.reduce(memory.bits, axis=1)


def all_vertical_parities(memory):
    return np.bitwise_xor.reduce(memory.bits, axis=0)


def serialize_tasks(memory):
    """Byte stream hashed per task.

    Frames in order (dummies included), rows top to bottom, columns left to
    right, 8 bits per byte MSB first; a trailing partial byte is zero-filled.
    Returns an ``(N, nbytes)`` uint8 array.
    """
    flat = memory.bits.reshape(memory.N, -1)
    return np.packbits(flat, axis=1)


def serialize_task(memory, z):
    return np.packbits(memory.bits[z].reshape(-1)).tobytes()


def task_digests(memory):
    return sha3_512_many(serialize_tasks(memory))


def task_digest(memory, z):
    return sha3_512_many(np.packbits(memory.bits[z].reshape(1, -1), axis=1))[0]


def snapshot_golden(memory):
    """Digests and parity frames of a pristine memory."""
    return GoldenStore(
        hashes=task_digests(memory),
        hp=all_horizontal_parities(memory),
        vp=all_vertical_parities(memory),
    )


def redundancy_bits(memory):
    """Stored bits: (proposed, scrubbing).

    Proposed keeps one digest and one horizontal parity frame per task plus
    one vertical parity frame per frame index; scrubbing keeps every frame.
    """
    return redundancy_for(memory.N, memory.n, memory.geometry.v, memory.geometry.h)


def redundancy_for(N, n, v, h):
    frame = v * h
    proposed = N * DIGEST_BITS + N * frame + n * frame
    scrubbing = N * n * frame
    return proposed, scrubbing


def detection_redundancy_bits(N):
    return N * DIGEST_BITS


# -- golden store file ------------------------------------------------------

def _frame_hex(frame):
    return np.packbits(frame.reshape(-1)).tobytes().hex()


def _hex_frame(text, v, h):
    raw = np.frombuffer(bytes.fromhex(text), dtype=np.uint8)
    bits = np.unpackbits(raw)[: v * h]
    if bits.size != v * h:
        raise GeometryError(f"parity frame has {bits.size} bits, expected {v * h}")
    return bits.reshape(v, h)


def format_golden(golden):
    N, v, h = golden.hp.shape
    n = golden.vp.shape[0]
    lines = [GOLDEN_HEADER, f"geometry N={N} n={n} v={v} h={h}"]
    lines += [f"hash {z} {golden.hex_digest(z)}" for z in range(N)]
    lines += [f"hp {z} {_frame_hex(golden.hp[z])}" for z in range(N)]
    lines += [f"vp {k} {_frame_hex(golden.vp[k])}" for k in range(n)]
    return "\n".join(lines) + "\n"


def write_golden(golden, path):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_golden(golden))


def parse_golden(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != GOLDEN_HEADER:
        raise ValueError("not a golden-store file (bad or missing header)")
    fields = dict(item.split("=") for item in lines[1].split()[1:])
    N, n, v, h = (int(fields[key]) for key in ("N", "n", "v", "h"))
    hashes = np.zeros((N, DIGEST_BITS // 8), np.uint8)
    hp = np.zeros((N, v, h), np.uint8)
    vp = np.zeros((n, v, h), np.uint8)
    seen = set()
    for ln in lines[2:]:
        kind, idx, payload = ln.split()
        idx = int(idx)
        if kind == "hash":
            if len(payload) != 2 * DIGEST_BITS // 8:
                raise ValueError(f"digest for task {idx} is not 128 hex chars")
            hashes[idx] = np.frombuffer(bytes.fromhex(payload), np.uint8)
        elif kind == "hp":
            hp[idx] = _hex_frame(payload, v, h)
        elif kind == "vp":
            vp[idx] = _hex_frame(payload, v, h)
        else:
            raise ValueError(f"unknown golden-store record {kind!r}")
        seen.add((kind, idx))
    if len(seen) != 2 * N + n:
        raise ValueError("golden-store file is incomplete")
    return GoldenStore(hashes, hp, vp)


def read_golden(path):
    with open(path, encoding="ascii") as fh:
        return parse_golden(fh.read())
