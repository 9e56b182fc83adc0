"""Criticality-aware download manager.

Tasks are ranked for correction by a final priority combining inverse
slack, relative area, criticality (share of tasks depending on it) and
execution length. Ties go to the task whose next execution phase is
nearest (smaller status register), then to the lower task id.

All register arithmetic is in whole clock cycles.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

# stand-in for P when the residual slack is zero, so 1/P stays finite
ZERO_SLACK_EPSILON = 0.5


class CycleError(ValueError):
    """Dependency graph contains a cycle."""


@dataclass(frozen=True)
class DependencyGraph:
    n_tasks: int
    edges: tuple  # (producer, dependent) pairs

    def __post_init__(self):
        for a, b in self.edges:
            if not (0 <= a < self.n_tasks and 0 <= b < self.n_tasks):
                raise ValueError(f"edge {a}->{b} references a task outside 0..{self.n_tasks - 1}")
            if a == b:
                raise CycleError(f"task {a} depends on itself")
        self.topological_order()

    @classmethod
    def from_edges(cls, n_tasks, edges):
        return cls(n_tasks, tuple(sorted({(int(a), int(b)) for a, b in edges})))

    @classmethod
    def from_text(cls, n_tasks, text):
        edges = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'producer dependent', got {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
        return cls.from_edges(n_tasks, edges)

    @classmethod
    def from_file(cls, n_tasks, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(n_tasks, fh.read())

    def children(self):
        out = [[] for _ in range(self.n_tasks)]
        for a, b in self.edges:
            out[a].append(b)
        return out

    def topological_order(self):
        indeg = [0] * self.n_tasks
        for _, b in self.edges:
            indeg[b] += 1
        children = self.children()
        ready = deque(z for z in range(self.n_tasks) if indeg[z] == 0)
        order = []
        while ready:
            z = ready.popleft()
            order.append(z)
            for c in children[z]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != self.n_tasks:
            raise CycleError("task dependency graph is not acyclic")
        return order

    def descendants(self, z):
        children = self.children()
        seen, stack = set(), list(children[z])
        while stack:
            c = stack.pop()
            if c not in seen:
                seen.add(c)
                stack.extend(children[c])
        return seen


def criticality(graph, n_tasks=None, transitive=True):
    """Fraction of all tasks that depend on each task.

    With ``transitive=False`` only direct dependents are counted.
    """
    n_tasks = graph.n_tasks if n_tasks is None else n_tasks
    if n_tasks < graph.n_tasks:
        raise ValueError("n_tasks smaller than the graph")
    children = graph.children()
    zeta = np.zeros(n_tasks)
    for z in range(graph.n_tasks):
        count = len(graph.descendants(z)) if transitive else len(set(children[z]))
        zeta[z] = count / n_tasks
    return zeta


@dataclass(frozen=True)
class TaskTimingState:
    """Execution/idle phase of one task.

    ``position`` counts cycles since the current execution phase started and
    runs over ``0..E+I``: positions ``< E`` are busy, the rest idle. The
    status register is ``E + I - position``; it reaches 0 on the last idle
    cycle and is reloaded with ``E + I`` on the next tick.
    """

    exec_cycles: int
    idle_cycles: int
    position: int = 0

    def __post_init__(self):
        if self.exec_cycles < 1 or self.idle_cycles < 0:
            raise ValueError("need exec_cycles >= 1 and idle_cycles >= 0")
        if not 0 <= self.position <= self.period - 1:
            raise ValueError(f"position {self.position} outside 0..{self.period - 1}")

    @property
    def period(self):
        # register states E+I, ..., 1, 0
        return self.exec_cycles + self.idle_cycles + 1

    @property
    def busy(self):
        return self.position < self.exec_cycles

    @property
    def PE(self):
        return self.position if self.busy else 0

    @property
    def PI(self):
        return 0 if self.busy else self.position - self.exec_cycles

    @property
    def St(self):
        return self.exec_cycles + self.idle_cycles - self.position

    @classmethod
    def from_phase(cls, exec_cycles, idle_cycles, busy, PE=0, PI=0):
        position = PE if busy else exec_cycles + PI
        return cls(exec_cycles, idle_cycles, position)

    @classmethod
    def from_status(cls, exec_cycles, idle_cycles, St):
        return cls(exec_cycles, idle_cycles, exec_cycles + idle_cycles - St)


def init_status(state):
    """Status register from the phase signals (busy, PE, PI)."""
    E, I = state.exec_cycles, state.idle_cycles
    if state.busy:
        return (E - state.PE) + I
    return I - state.PI


def tick(state):
    """One rising clock edge: reload at 0, otherwise decrement the register."""
    return advance(state, 1)


def advance(state, cycles):
    return TaskTimingState(state.exec_cycles, state.idle_cycles,
                           (state.position + cycles) % state.period)


def busy_cycles(state, cycles):
    """Busy cycles among the next ``cycles`` cycles starting at ``state``."""
    period, E = state.period, state.exec_cycles
    full, rest = divmod(cycles, period)
    count = full * E
    p = state.position
    for q in range(p, p + rest):
        if q % period < E:
            count += 1
    return count


@dataclass(frozen=True)
class Weights:
    w_a: float = 1.0  # inverse residual slack
    w_b: float = 1.0  # relative area
    w_c: float = 1.0  # criticality
    w_d: float = 0.0  # execution length

    def __post_init__(self):
        for name, value in zip("abcd", self.as_tuple()):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"weight w_{name}={value} outside [0, 1]")

    def as_tuple(self):
        return (self.w_a, self.w_b, self.w_c, self.w_d)

    @classmethod
    def parse(cls, text):
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError("weights need four comma-separated values w_a,w_b,w_c,w_d")
        return cls(*parts)


@dataclass(frozen=True)
class PrioritySpec:
    weights: Weights
    eta_i: int          # frames of this task
    eta: int            # frames in the whole memory
    ec_cycles: int      # correction cost
    rt_cycles: int      # reconfiguration (download) cost
    ed_cycles: int = 0  # detection cost, informational


def priority(state, spec):
    """Residual slack ``St - (EC + RT)``, or None when the correction would not fit."""
    cost = spec.ec_cycles + spec.rt_cycles
    if cost > state.St:
        return None
    return state.St - cost


def final_priority(P, spec, zeta_i, exec_cycles):
    if spec.eta <= 0:
        raise ValueError("total frame count eta must be positive")
    if P < 0:
        raise ValueError("P must be non-negative")
    w = spec.weights
    inv_slack = 1.0 / (P if P > 0 else ZERO_SLACK_EPSILON)
    return (w.w_a * inv_slack + w.w_b * spec.eta_i / spec.eta
            + w.w_c * zeta_i + w.w_d * exec_cycles)


def select(candidates):
    """Pick from (task, FP, St) triples: max FP, then min St, then min id.

    Returns None when there is nothing to choose.
    """
    if not candidates:
        return None
    return min(candidates, key=lambda c: (-c[1], c[2], c[0]))[0]
