"""Keccak-f[1600] and the SHA3-512 sponge used as the frame-data signature.

State layout: 25 little-endian 64-bit lanes, lane (x, y) stored at flat
index ``x + 5*y``. This matches the byte order of FIPS 202, so a 200-byte
string maps to the state by reading consecutive 8-byte little-endian words.

The permutation is compiled with numba. ``sha3_512_many`` hashes a batch of
equal-length messages in one call, which is what the detector uses to scan
every task of a configuration memory.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

STATE_BITS = 1600
RATE_BITS = 576
CAPACITY_BITS = STATE_BITS - RATE_BITS
ROUNDS = 24
DIGEST_BITS = 512

RATE_BYTES = RATE_BITS // 8
RATE_LANES = RATE_BITS // 64
DIGEST_BYTES = DIGEST_BITS // 8

ROUND_CONSTANTS = np.array([
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
], dtype=np.uint64)

# rotation offsets, indexed x + 5*y
RHO_OFFSETS = np.array([
    0, 1, 62, 28, 27,
    36, 44, 6, 55, 20,
    3, 10, 43, 25, 39,
    41, 45, 15, 21, 8,
    18, 2, 61, 56, 14,
], dtype=np.uint64)

# destination of lane x + 5*y under pi: (y, 2x + 3y)
PI_TARGET = np.array(
    [y + 5 * ((2 * x + 3 * y) % 5) for y in range(5) for x in range(5)],
    dtype=np.int64,
)


@njit(cache=True)
def _rotl(a, n):
    if n == 0:
        return a
    return (a << n) | (a >> (np.uint64(64) - n))


@njit(cache=True)
def theta(A):
    C = np.zeros(5, dtype=np.uint64)
    for x in range(5):
        C[x] = A[x] ^ A[x + 5] ^ A[x + 10] ^ A[x + 15] ^ A[x + 20]
    out = A.copy()
    for x in range(5):
        d = C[(x + 4) % 5] ^ _rotl(C[(x + 1) % 5], np.uint64(1))
        for y in range(5):
            out[x + 5 * y] ^= d
    return out


@njit(cache=True)
def rho(A):
    out = np.empty(25, dtype=np.uint64)
    for i in range(25):
        out[i] = _rotl(A[i], RHO_OFFSETS[i])
    return out


@njit(cache=True)
def pi(A):
    out = np.empty(25, dtype=np.uint64)
    for i in range(25):
        out[PI_TARGET[i]] = A[i]
    return out


@njit(cache=True)
def chi(A):
    out = np.empty(25, dtype=np.uint64)
    for y in range(5):
        for x in range(5):
            out[x + 5 * y] = A[x + 5 * y] ^ (~A[(x + 1) % 5 + 5 * y] & A[(x + 2) % 5 + 5 * y])
    return out


@njit(cache=True)
def iota(A, round_index):
    out = A.copy()
    out[0] ^= ROUND_CONSTANTS[round_index]
    return out


@njit(cache=True)
def _round_steps(A, round_index):
    return iota(chi(pi(rho(theta(A)))), round_index)


@njit(cache=True)
def _permute_inplace(A):
    # fused theta/rho/pi/chi/iota; must agree with _round_steps
    C = np.empty(5, dtype=np.uint64)
    B = np.empty(25, dtype=np.uint64)
    one = np.uint64(1)
    for rnd in range(24):
        for x in range(5):
            C[x] = A[x] ^ A[x + 5] ^ A[x + 10] ^ A[x + 15] ^ A[x + 20]
        for x in range(5):
            d = C[(x + 4) % 5] ^ _rotl(C[(x + 1) % 5], one)
            for y in range(5):
                A[x + 5 * y] ^= d
        for i in range(25):
            B[PI_TARGET[i]] = _rotl(A[i], RHO_OFFSETS[i])
        for y in range(5):
            b0 = B[5 * y]
            b1 = B[5 * y + 1]
            b2 = B[5 * y + 2]
            b3 = B[5 * y + 3]
            b4 = B[5 * y + 4]
            A[5 * y] = b0 ^ (~b1 & b2)
            A[5 * y + 1] = b1 ^ (~b2 & b3)
            A[5 * y + 2] = b2 ^ (~b3 & b4)
            A[5 * y + 3] = b3 ^ (~b4 & b0)
            A[5 * y + 4] = b4 ^ (~b0 & b1)
        A[0] ^= ROUND_CONSTANTS[rnd]


@njit(cache=True)
def _absorb_many(blocks, out_lanes):
    # blocks: (m, n_blocks, RATE_LANES) uint64, already padded
    A = np.zeros(25, dtype=np.uint64)
    for m in range(blocks.shape[0]):
        A[:] = 0
        for b in range(blocks.shape[1]):
            for i in range(blocks.shape[2]):
                A[i] ^= blocks[m, b, i]
            _permute_inplace(A)
        for i in range(out_lanes.shape[1]):
            out_lanes[m, i] = A[i]


@dataclass(frozen=True)
class KeccakState:
    """1600-bit Keccak state; ``lanes[x + 5*y]`` holds lane (x, y)."""

    lanes: np.ndarray

    def __post_init__(self):
        lanes = np.asarray(self.lanes, dtype=np.uint64)
        if lanes.shape != (25,):
            raise ValueError(f"expected 25 lanes, got shape {lanes.shape}")
        lanes = lanes.copy()
        lanes.setflags(write=False)
        object.__setattr__(self, "lanes", lanes)

    @classmethod
    def zero(cls):
        return cls(np.zeros(25, dtype=np.uint64))

    @classmethod
    def from_bytes(cls, data: bytes) -> "KeccakState":
        if len(data) != STATE_BITS // 8:
            raise ValueError(f"state serialization must be 200 bytes, got {len(data)}")
        return cls(np.frombuffer(data, dtype="<u8").astype(np.uint64))

    def to_bytes(self) -> bytes:
        return self.lanes.astype("<u8").tobytes()

    def lane(self, x: int, y: int) -> int:
        return int(self.lanes[x + 5 * y])

    def __eq__(self, other):
        if not isinstance(other, KeccakState):
            return NotImplemented
        return bool(np.array_equal(self.lanes, other.lanes))

    def __hash__(self):
        return hash(self.to_bytes())


def keccak_round(state: KeccakState, round_index: int) -> KeccakState:
    """Apply one round (theta, rho, pi, chi, iota in order)."""
    if not 0 <= round_index < ROUNDS:
        raise ValueError(f"round_index must be in [0, {ROUNDS}), got {round_index}")
    return KeccakState(_round_steps(state.lanes.copy(), round_index))


def keccak_f(state: KeccakState) -> KeccakState:
    A = state.lanes.copy()
    _permute_inplace(A)
    return KeccakState(A)


def pad(message: bytes) -> bytes:
    """SHA-3 domain suffix ``01`` followed by pad10*1, to a multiple of the rate."""
    q = RATE_BYTES - len(message) % RATE_BYTES
    if q == 1:
        return message + b"\x86"
    return message + b"\x06" + b"\x00" * (q - 2) + b"\x80"


def _padded_blocks(messages: np.ndarray) -> np.ndarray:
    m, length = messages.shape
    q = RATE_BYTES - length % RATE_BYTES
    padded = np.zeros((m, length + q), dtype=np.uint8)
    padded[:, :length] = messages
    padded[:, length] ^= 0x06
    padded[:, -1] ^= 0x80
    lanes = padded.view("<u8").astype(np.uint64, copy=False)
    return lanes.reshape(m, -1, RATE_LANES)


def sha3_512_many(messages) -> np.ndarray:
    """Hash a batch of equal-length messages.

    ``messages`` is a ``(m, length)`` uint8 array. Returns ``(m, 64)`` uint8
    digests.
    """
    messages = np.ascontiguousarray(messages, dtype=np.uint8)
    if messages.ndim != 2:
        raise ValueError("messages must be a 2-D array of bytes")
    blocks = _padded_blocks(messages)
    out = np.empty((messages.shape[0], DIGEST_BYTES // 8), dtype=np.uint64)
    _absorb_many(np.ascontiguousarray(blocks), out)
    return out.astype("<u8").view(np.uint8).reshape(messages.shape[0], DIGEST_BYTES)


def sha3_512(message: bytes) -> bytes:
    """SHA3-512 digest (64 bytes) of ``message``."""
    arr = np.frombuffer(bytes(message), dtype=np.uint8).reshape(1, -1)
    return sha3_512_many(arr)[0].tobytes()


def detection_throughput(block_size, f_max, clock_cycles, n_msg):
    """Hashing throughput in bits/s: ``block_size * f_max / clock_cycles * n_msg``."""
    if clock_cycles == 0:
        raise ValueError("clock_cycles must be non-zero")
    if min(block_size, f_max, clock_cycles, n_msg) <= 0:
        raise ValueError("all throughput parameters must be positive")
    return block_size * f_max / clock_cycles * n_msg
