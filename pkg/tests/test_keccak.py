import hashlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmedac import keccak
from cmedac.keccak import (KeccakState, detection_throughput, keccak_f, keccak_round, pad,
                           sha3_512, sha3_512_many)

from .conftest import DATA, parse_rsp

# Keccak-f[1600] applied to the all-zero state (Keccak team intermediate values)
ZERO_STATE_PERMUTED = [
    0xF1258F7940E1DDE7, 0x84D5CCF933C0478A, 0xD598261EA65AA9EE, 0xBD1547306F80494D,
    0x8B284E056253D057, 0xFF97A42D7F8E6FD4, 0x90FEE5A0A44647C4, 0x8C5BDA0CD6192E76,
    0xAD30A6F71B19059C, 0x30935AB7D08FFC64, 0xEB5AA93F2317D635, 0xA9A6E6260D712103,
    0x81A57C16DBCF555F, 0x43B831CD0347C826, 0x01F22F1A11A5569F, 0x05E5635A21D9AE61,
    0x64BEFEF28CC970F2, 0x613670957BC46611, 0xB87C5A554FD00ECB, 0x8C3EE88A1CCF32C8,
    0x940C7922AE3A2614, 0x1841F924A2C509E4, 0x16F53526E70465C2, 0x75F644E97F30A13B,
    0xEAF1FF7B5CECA249,
]

EMPTY_DIGEST = (
    "a69f73cca23a9ac5c8b567dc185a756e97c982164fe25859e0d1dcc1475c80a6"
    "15b2123af1f5f94c11e3e9402c3ac558f500199d95b6d3e301758586281dcd26"
)
ABC_DIGEST = (
    "b751850b1a57168a5693cd924b6b096e08f621827444f70d884f5d0240d2712e"
    "10e116e9192af3c91a7ec57647e3934057340b4cf408d5a56592f8274eec53f0"
)


def random_state(rng):
    return KeccakState(rng.integers(0, 2**64, 25, dtype=np.uint64))


def test_sponge_parameters():
    assert keccak.RATE_BITS + keccak.CAPACITY_BITS == 1600
    assert (keccak.RATE_BITS, keccak.CAPACITY_BITS, keccak.ROUNDS) == (576, 1024, 24)


def test_zero_state_permutation():
    out = keccak_f(KeccakState.zero())
    assert [int(x) for x in out.lanes] == ZERO_STATE_PERMUTED


def test_rounds_compose_to_permutation():
    rng = np.random.default_rng(3)
    for _ in range(20):
        s = random_state(rng)
        x = s
        for r in range(24):
            x = keccak_round(x, r)
        assert x == keccak_f(s)


def test_theta_fixes_even_column_parity():
    # every column holds the same lane twice, so all column parities vanish
    rng = np.random.default_rng(5)
    A = np.zeros(25, dtype=np.uint64)
    for x in range(5):
        A[x] = A[x + 5] = rng.integers(0, 2**64, dtype=np.uint64)
    assert np.array_equal(keccak.theta(A), A)


def test_iota_round0_on_zero_state():
    out = keccak.iota(np.zeros(25, dtype=np.uint64), 0)
    assert out[0] == 1 and not out[1:].any()


def test_round_index_range():
    with pytest.raises(ValueError):
        keccak_round(KeccakState.zero(), 24)
    with pytest.raises(ValueError):
        keccak_round(KeccakState.zero(), -1)


def test_state_serialization_roundtrip():
    rng = np.random.default_rng(11)
    raw = rng.integers(0, 256, 200, dtype=np.uint8).tobytes()
    s = KeccakState.from_bytes(raw)
    assert s.to_bytes() == raw
    # lane (1, 0) is bytes 8..15, little endian
    assert s.lane(1, 0) == int.from_bytes(raw[8:16], "little")
    assert s.lane(0, 1) == int.from_bytes(raw[40:48], "little")
    with pytest.raises(ValueError):
        KeccakState.from_bytes(raw[:199])


def test_permutation_is_injective_on_samples():
    rng = np.random.default_rng(17)
    inputs = {random_state(rng) for _ in range(150)}
    outputs = {keccak_f(s).to_bytes() for s in inputs}
    assert len(outputs) == len(inputs)


def test_known_digests():
    assert sha3_512(b"").hex() == EMPTY_DIGEST
    assert sha3_512(b"abc").hex() == ABC_DIGEST


@pytest.mark.parametrize("name", ["SHA3_512ShortMsg.rsp", "SHA3_512LongMsg.rsp",
                                  "ShortMsgKAT_SHA3-512.txt"])
def test_kat_files(name):
    vectors = parse_rsp(DATA / name)
    assert len(vectors) > 50
    for length, msg, md in vectors:
        assert sha3_512(msg) == md, f"{name} Len={length}"


def test_monte_carlo():
    text = (DATA / "SHA3_512Monte.rsp").read_text().split()
    seed = bytes.fromhex(text[text.index("Seed") + 2])
    expected = [bytes.fromhex(text[i + 2]) for i, tok in enumerate(text) if tok == "MD"]
    md = seed
    for want in expected:
        for _ in range(1000):
            md = sha3_512(md)
        assert md == want


def test_padding_lengths():
    for n in range(0, 200):
        p = pad(bytes(n))
        assert len(p) % 72 == 0 and len(p) > n
    assert pad(bytes(71))[-1] == 0x86


def test_batch_matches_single():
    rng = np.random.default_rng(2)
    msgs = rng.integers(0, 256, (6, 500), dtype=np.uint8)
    out = sha3_512_many(msgs)
    for row, digest in zip(msgs, out):
        assert digest.tobytes() == hashlib.sha3_512(row.tobytes()).digest()


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=400))
def test_matches_reference_hash(msg):
    assert sha3_512(msg) == hashlib.sha3_512(msg).digest()


def test_single_bit_avalanche():
    rng = np.random.default_rng(99)
    for _ in range(1000):
        length = int(rng.integers(1, 300))
        msg = rng.integers(0, 256, length, dtype=np.uint8)
        flipped = msg.copy()
        bit = int(rng.integers(length * 8))
        flipped[bit // 8] ^= 1 << (bit % 8)
        a, b = sha3_512_many(np.stack([msg, flipped]))
        assert not np.array_equal(a, b)


def test_message_only_touches_rate():
    # absorbing one block only changes the first 576 bits before permutation
    block = np.frombuffer(pad(b"x" * 10), dtype="<u8")
    assert block.size == keccak.RATE_LANES
    state = np.zeros(25, dtype=np.uint64)
    state[: keccak.RATE_LANES] ^= block
    assert not state[keccak.RATE_LANES:].any()


def test_throughput_formula():
    gbps = detection_throughput(576, 344e6, 24, 2) / 1e9
    assert abs(gbps - 16.51) / 16.51 < 1e-3
    assert detection_throughput(576, 344e6, 24, 1) == detection_throughput(576, 344e6, 24, 2) / 2
    assert detection_throughput(576, 1, 576, 1) == 1
    with pytest.raises(ValueError):
        detection_throughput(576, 344e6, 0, 2)
    with pytest.raises(ValueError):
        detection_throughput(-1, 344e6, 24, 2)
