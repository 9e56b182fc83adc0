"""Soft-error mitigation for FPGA configuration memory.

SHA3-512 digests detect corrupted tasks, a two-dimensional erasure product
code repairs them, and a criticality-aware scheduler orders the repairs
through the single configuration download port.
"""

from .corrector import CorrectionOutcome, correct_all, correct_task
from .detector import DetectionReport, scan, verify_task
from .faults import FaultModel, FaultPattern, apply, generate
from .keccak import KeccakState, detection_throughput, keccak_f, keccak_round, sha3_512
from .memory import (ConfigMemory, FrameGeometry, GoldenStore, TaskSpec, build_memory,
                     horizontal_parity, redundancy_bits, snapshot_golden, vertical_parity)
from .scheduler import DependencyGraph, TaskTimingState, Weights, criticality
from .sim import CampaignConfig, MemorySpec, run_campaign, run_scrub_baseline
from .timing import TimingModel

__version__ = "0.1.0"
