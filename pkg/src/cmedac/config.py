"""INI campaign configuration.

Sections and keys (all optional; defaults reproduce the 10 task x 100 frame,
101 x 32 bit setup)::

    [memory]    v, h, content = random|zero, content_seed
    [tasks]     count, frames_per_task  or  frames = 100,80,...
                exec_cycles, idle_cycles, phases   (one value or one per task)
                dependencies = edges.txt   (path relative to the config file)
                edges = 0 1; 0 2            (inline alternative)
    [faults]    kind, burst_length, frames_per_task, tasks_affected, allow_dummy
    [weights]   w_a, w_b, w_c, w_d          (each in [0, 1])
    [timing]    clock_period, read_cycles_per_frame, write_cycles_per_frame,
                ec_cycles_per_frame, hash_f_max, hash_clock_cycles, hash_n_msg
    [campaign]  runs, seed, transitive_criticality, scrub_mode = readback|blind
"""

import configparser
import os

from .faults import FaultModel
from .memory import FrameGeometry
from .scheduler import CycleError, DependencyGraph, Weights
from .sim import CampaignConfig, MemorySpec
from .timing import TimingModel

SECTIONS = ("memory", "tasks", "faults", "weights", "timing", "campaign")


class ConfigError(ValueError):
    pass


def _ints(text, n, name):
    values = [int(float(p)) for p in str(text).replace(";", ",").split(",") if p.strip()]
    if len(values) == 1:
        return values * n
    if len(values) != n:
        raise ConfigError(f"[tasks] {name}: {len(values)} values for {n} tasks")
    return values


def _inline_edges(text):
    edges = []
    for item in text.split(";"):
        if item.strip():
            a, b = item.split()
            edges.append((int(a), int(b)))
    return edges


def parse_config(text, base_dir="."):
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    unknown = set(cp.sections()) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    for sec in SECTIONS:
        if not cp.has_section(sec):
            cp.add_section(sec)

    try:
        mem, tasks = cp["memory"], cp["tasks"]
        geometry = FrameGeometry(mem.getint("v", 101), mem.getint("h", 32))
        if "frames" in tasks:
            frames = [int(p) for p in tasks["frames"].replace(";", ",").split(",") if p.strip()]
        else:
            frames = [tasks.getint("frames_per_task", 100)] * tasks.getint("count", 10)
        N = len(frames)
        edges = []
        if "dependencies" in tasks:
            path = os.path.join(base_dir, tasks["dependencies"])
            edges = list(DependencyGraph.from_file(N, path).edges)
        if "edges" in tasks:
            edges += _inline_edges(tasks["edges"])
        DependencyGraph.from_edges(N, edges)
        memory = MemorySpec(
            frames=frames,
            geometry=geometry,
            exec_cycles=_ints(tasks.get("exec_cycles", "20000"), N, "exec_cycles"),
            idle_cycles=_ints(tasks.get("idle_cycles", "20000"), N, "idle_cycles"),
            phases=_ints(tasks.get("phases", "0"), N, "phases"),
            edges=tuple(sorted(set(edges))),
            content=mem.get("content", "random"),
            content_seed=mem.getint("content_seed", 0),
        )
        f = cp["faults"]
        fault_model = FaultModel(
            kind=f.get("kind", "adjacent-burst"),
            burst_length=f.getint("burst_length", 1),
            frames_per_task=f.getint("frames_per_task", 1),
            tasks_affected=f.getint("tasks_affected", 1),
            allow_dummy=f.getboolean("allow_dummy", False),
        )
        w = cp["weights"]
        weights = Weights(*(w.getfloat(k, d) for k, d in
                            (("w_a", 1.0), ("w_b", 1.0), ("w_c", 1.0), ("w_d", 0.0))))
        t = cp["timing"]
        timing = TimingModel(
            clock_period=t.getfloat("clock_period", 10e-9),
            read_cycles_per_frame=t.getint("read_cycles_per_frame", 101),
            write_cycles_per_frame=t.getint("write_cycles_per_frame", 101),
            ec_cycles_per_frame=t.getint("ec_cycles_per_frame", 1),
            hash_f_max=t.getfloat("hash_f_max", 344e6),
            hash_clock_cycles=t.getint("hash_clock_cycles", 24),
            hash_n_msg=t.getint("hash_n_msg", 2),
        )
        c = cp["campaign"]
        return CampaignConfig(
            memory=memory,
            fault_model=fault_model,
            weights=weights,
            timing=timing,
            runs=c.getint("runs", 1),
            seed=c.getint("seed", 0),
            transitive_criticality=c.getboolean("transitive_criticality", True),
            scrub_mode=c.get("scrub_mode", "readback"),
        )
    except CycleError as exc:
        raise ConfigError(f"dependency graph: {exc}") from exc
    except (ValueError, OSError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, os.path.dirname(os.path.abspath(path)))
