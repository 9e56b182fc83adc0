"""Closed-loop fault injection campaigns: inject, scan, schedule, correct, download.

One run starts from the golden memory, injects a seeded fault pattern at
cycle 0, performs one full read-back scan, then drains every detected task
through the single download port in scheduler order. The scrubbing
baseline replays the same fault patterns but rewrites all U frames.
"""

import csv
import io
import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import corrector, faults
from .detector import scan
from .memory import (FrameGeometry, all_vertical_parities, build_memory,
                     detection_redundancy_bits, random_task_specs, redundancy_bits,
                     redundancy_for, snapshot_golden)
from .scheduler import (DependencyGraph, PrioritySpec, TaskTimingState, Weights, advance,
                        busy_cycles, criticality, final_priority, priority, select)
from .timing import TimingModel


class InvariantViolation(RuntimeError):
    def __init__(self, name, detail=""):
        super().__init__(f"invariant violated: {name}" + (f" ({detail})" if detail else ""))
        self.name = name


@dataclass
class MemorySpec:
    frames: list = field(default_factory=lambda: [100] * 10)
    geometry: FrameGeometry = FrameGeometry()
    exec_cycles: list | None = None
    idle_cycles: list | None = None
    phases: list | None = None  # initial position of each task's phase clock
    edges: tuple = ()
    content: str = "random"     # or "zero"
    content_seed: int = 0

    def __post_init__(self):
        if not self.frames:
            raise ValueError("memory needs at least one task")
        N = len(self.frames)
        if self.exec_cycles is None:
            self.exec_cycles = [20000] * N
        if self.idle_cycles is None:
            self.idle_cycles = [20000] * N
        if self.phases is None:
            self.phases = [0] * N
        for name in ("exec_cycles", "idle_cycles", "phases"):
            if len(getattr(self, name)) != N:
                raise ValueError(f"{name} has {len(getattr(self, name))} entries for {N} tasks")
        if self.content not in ("random", "zero"):
            raise ValueError(f"memory content must be 'random' or 'zero', not {self.content!r}")

    def build(self):
        specs = random_task_specs(self.frames, self.geometry, self.content_seed,
                                  self.exec_cycles, self.idle_cycles, zero=self.content == "zero")
        for a, b in self.edges:
            specs[b].depends_on = specs[b].depends_on | {a}
        return build_memory(specs, self.geometry)

    def graph(self):
        return DependencyGraph.from_edges(len(self.frames), self.edges)


@dataclass
class CampaignConfig:
    memory: MemorySpec = field(default_factory=MemorySpec)
    fault_model: faults.FaultModel = field(default_factory=faults.FaultModel)
    weights: Weights = field(default_factory=Weights)
    timing: TimingModel = field(default_factory=TimingModel)
    runs: int = 1
    seed: int = 0
    transitive_criticality: bool = True
    scrub_mode: str = "readback"  # baseline: "readback" or "blind"

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("no_of_runs must be >= 1")
        if self.scrub_mode not in ("readback", "blind"):
            raise ValueError(f"scrub_mode must be 'readback' or 'blind', not {self.scrub_mode!r}")

    def run_seed(self, run):
        ss = np.random.SeedSequence([self.seed, run])
        return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class CampaignMetrics:
    mode: str
    records: list = field(default_factory=list)

    def to_jsonl(self):
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records)

    def summary(self):
        return summarize(self.records, self.mode)

    def summary_csv(self):
        s = self.summary()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(s))
        writer.writerow([_fmt(v) for v in s.values()])
        return buf.getvalue()


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.6g}"
    return value


def summarize(records, mode="proposed"):
    runs = len(records)
    s = {"mode": mode, "runs": runs}
    if not runs:
        return s
    faulty = sum(len(r["true_faulty"]) for r in records)
    corrected = sum(r["corrected"] for r in records)
    uncorrectable = sum(r["uncorrectable"] for r in records)
    fn = sum(len(r["false_negatives"]) for r in records)
    fp = sum(len(r["false_positives"]) for r in records)
    lat = [r["correction_latency"] for r in records]
    det = [r["detection_latency"] for r in records]
    s.update(
        faulty_tasks=faulty,
        corrected=corrected,
        uncorrectable=uncorrectable,
        correction_success_rate=(corrected / faulty) if faulty else 1.0,
        detection_rate=((faulty - fn) / faulty) if faulty else 1.0,
        false_negatives=fn,
        false_positives=fp,
        mean_detection_latency=float(np.mean(det)),
        max_detection_latency=int(max(det)),
        mean_correction_latency=float(np.mean(lat)),
        max_correction_latency=int(max(lat)),
        frames_downloaded=sum(r["frames_downloaded"] for r in records),
        download_cycles=sum(r["download_cycles"] for r in records),
        exposure_cycles=sum(r["exposure_cycles"] for r in records),
        redundancy_proposed=records[0]["redundancy_proposed"],
        redundancy_scrubbing=records[0]["redundancy_scrubbing"],
        redundancy_detection=records[0]["redundancy_detection"],
    )
    return s


class CampaignSetup:
    """Golden memory, stored artifacts and static scheduler inputs of a campaign."""

    def __init__(self, config):
        self.config = config
        self.golden_memory = config.memory.build()
        self.golden = snapshot_golden(self.golden_memory)
        self.zeta = criticality(config.memory.graph(), transitive=config.transitive_criticality)
        m = self.golden_memory
        self.eta = sum(t.real_frames for t in m.tasks)
        self.proposed_bits, self.scrub_bits = redundancy_bits(m)
        self.detection_bits = detection_redundancy_bits(m.N)

    def initial_states(self):
        m = self.golden_memory
        return [TaskTimingState(t.exec_cycles, t.idle_cycles, p % (t.exec_cycles + t.idle_cycles + 1))
                for t, p in zip(m.tasks, self.config.memory.phases)]

    def injected(self, run):
        memory = self.golden_memory.copy()
        model = replace(self.config.fault_model, seed=self.config.run_seed(run))
        pattern = faults.generate(model, memory)
        faults.apply(pattern, memory)
        return memory, pattern

    def base_record(self, run, pattern):
        return {
            "run": run,
            "flips": len(pattern),
            "faulty_frames": len(pattern.frames()),
            "true_faulty": pattern.tasks(),
            "redundancy_proposed": self.proposed_bits,
            "redundancy_scrubbing": self.scrub_bits,
            "redundancy_detection": self.detection_bits,
        }


def _check_counts(record, n_tasks):
    total = record["corrected"] + record["uncorrectable"] + record["clean"]
    if total != n_tasks:
        raise InvariantViolation("outcome-count", f"{total} outcomes for {n_tasks} tasks")


def _check_port(intervals):
    for (s0, e0), (s1, _) in zip(intervals, intervals[1:]):
        if s1 < e0:
            raise InvariantViolation("port-exclusivity", f"download at {s1} overlaps one ending {e0}")


def drain(setup, memory, detected, states, start_time):
    """Correct detected tasks one at a time through the download port.

    ``states`` are mutated to the phase at the end of the drain. Returns
    (outcomes, completion times, exposure per task, port intervals, end time).
    """
    config, m = setup.config, memory
    timing = config.timing
    frame_bits = m.geometry.bits
    pending = list(detected)
    exposure = {z: 0 for z in pending}
    outcomes, done_at, intervals = {}, {}, []
    now = start_time
    vertical_diff = None

    def est_spec(z):
        return PrioritySpec(config.weights, m.tasks[z].real_frames, setup.eta,
                            timing.correction_cycles(m.n, frame_bits, 1),
                            timing.write_cycles(1),
                            timing.task_detection_cycles(m.n, frame_bits))

    def run_clock(cycles, frozen=None):
        for z in pending:
            if z != frozen:
                exposure[z] += busy_cycles(states[z], cycles)
        for z in range(m.N):
            if z != frozen:
                states[z] = advance(states[z], cycles)

    while pending:
        candidates = []
        for z in pending:
            spec = est_spec(z)
            P = priority(states[z], spec)
            if P is not None:
                fp = final_priority(P, spec, setup.zeta[z], m.tasks[z].exec_cycles)
                candidates.append((z, fp, states[z].St))
        chosen = select(candidates)
        if chosen is None:
            # tasks whose correction can never fit a full period are forced with zero slack
            never = [z for z in pending if est_spec(z).ec_cycles + est_spec(z).rt_cycles
                     > states[z].exec_cycles + states[z].idle_cycles]
            if len(never) == len(pending):
                chosen = select([(z, final_priority(0, est_spec(z), setup.zeta[z],
                                                    m.tasks[z].exec_cycles), states[z].St)
                                 for z in never])
            else:
                run_clock(1)
                now += 1
                continue

        if vertical_diff is None:
            vertical_diff = all_vertical_parities(m) ^ setup.golden.vp
        outcome = corrector.correct_task(m, setup.golden, chosen, vertical_diff)
        frames = 1 if outcome.status == corrector.CORRECTED else 0
        duration = (timing.correction_cycles(m.n, frame_bits, max(outcome.attempts, 1))
                    + timing.write_cycles(frames))
        intervals.append((now, now + duration))
        pending.remove(chosen)
        run_clock(duration, frozen=chosen)
        now += duration
        outcomes[chosen] = outcome
        done_at[chosen] = now
    return outcomes, done_at, exposure, intervals, now


def run_campaign(config):
    """Proposed scheme: digest scan, scheduled erasure-code correction."""
    setup = CampaignSetup(config)
    metrics = CampaignMetrics("proposed")
    m0 = setup.golden_memory
    for run in range(config.runs):
        memory, pattern = setup.injected(run)
        truth = set(pattern.tasks())
        states = setup.initial_states()
        report = scan(memory, setup.golden, config.timing)
        detected = report.faulty_tasks
        exposure0 = {z: busy_cycles(states[z], report.scan_cycles) for z in detected}
        states = [advance(s, report.scan_cycles) for s in states]
        outcomes, done_at, exposure, intervals, end = drain(
            setup, memory, detected, states, report.scan_cycles)
        _check_port(intervals)

        rec = setup.base_record(run, pattern)
        corrected = [z for z, o in outcomes.items() if o.status == corrector.CORRECTED]
        uncorrectable = [z for z, o in outcomes.items() if o.status == corrector.UNCORRECTABLE]
        frames = len(corrected)
        rec.update(
            detected=detected,
            false_negatives=sorted(truth - set(detected)),
            false_positives=sorted(set(detected) - truth),
            detection_latency=report.scan_cycles if detected else 0,
            correction_latency=max(done_at.values()) if corrected else 0,
            task_latency={str(z): done_at[z] for z in sorted(corrected)},
            corrected=len(corrected),
            uncorrectable=len(uncorrectable),
            clean=m0.N - len(corrected) - len(uncorrectable),
            uncorrectable_tasks=sorted(uncorrectable),
            correction_order=list(outcomes),
            frames_downloaded=frames,
            download_cycles=config.timing.write_cycles(frames),
            exposure_cycles=sum(exposure0[z] + exposure[z] for z in detected),
            restored=memory.equals(m0),
        )
        _check_counts(rec, m0.N)
        if not uncorrectable and not rec["false_negatives"] and not rec["restored"]:
            raise InvariantViolation("conservation", f"run {run} ended with memory != golden")
        for z in corrected:
            if not np.array_equal(memory.bits[z], m0.bits[z]):
                raise InvariantViolation("soundness", f"task {z} reported corrected but differs")
        metrics.records.append(rec)
    return metrics


def run_scrub_baseline(config):
    """Scrubbing baseline: rewrite all U frames from the full golden image.

    ``readback`` mode scans first and scrubs only when a fault is seen;
    ``blind`` mode scrubs every run without scanning.
    """
    setup = CampaignSetup(config)
    metrics = CampaignMetrics(f"scrub-{config.scrub_mode}")
    m0 = setup.golden_memory
    timing = config.timing
    for run in range(config.runs):
        memory, pattern = setup.injected(run)
        truth = set(pattern.tasks())
        states = setup.initial_states()
        if config.scrub_mode == "readback":
            report = scan(memory, setup.golden, timing)
            detected, scan_time = report.faulty_tasks, report.scan_cycles
            scrub = bool(detected)
        else:
            detected, scan_time, scrub = sorted(truth), 0, True
        frames = m0.U if scrub else 0
        latency = scan_time + timing.write_cycles(frames) if scrub else 0
        if scrub:
            memory.bits[...] = m0.bits

        rec = setup.base_record(run, pattern)
        repaired = sorted(truth) if scrub else []
        rec.update(
            detected=detected,
            false_negatives=sorted(truth - set(detected)),
            false_positives=sorted(set(detected) - truth),
            detection_latency=scan_time if detected else 0,
            correction_latency=latency if repaired else 0,
            task_latency={str(z): latency for z in repaired},
            corrected=len(repaired),
            uncorrectable=0,
            clean=m0.N - len(repaired),
            uncorrectable_tasks=[],
            correction_order=[],
            frames_downloaded=frames,
            download_cycles=timing.write_cycles(frames),
            exposure_cycles=sum(busy_cycles(states[z], latency) for z in repaired),
            restored=memory.equals(m0),
        )
        _check_counts(rec, m0.N)
        metrics.records.append(rec)
    return metrics


def redundancy_curve(task_counts, frames_per_task, geometry):
    """Rows of (N, proposed bits, scrubbing bits)."""
    return [(N, *redundancy_for(N, frames_per_task, geometry.v, geometry.h)) for N in task_counts]


def latency_curve(proposed, baseline=None):
    """Mean correction latency grouped by number of faulty tasks per run."""
    def grouped(records):
        groups = {}
        for r in records:
            groups.setdefault(len(r["true_faulty"]), []).append(r["correction_latency"])
        return {k: float(np.mean(v)) for k, v in groups.items()}

    p = grouped(proposed.records)
    b = grouped(baseline.records) if baseline is not None else {}
    return [(k, p[k], b.get(k, float("nan"))) for k in sorted(p)]
