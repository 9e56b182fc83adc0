"""Which damaged task gets the download port first."""
from cmedac.scheduler import (DependencyGraph, PrioritySpec, TaskTimingState, Weights, criticality,
                              final_priority, priority, select, tick)

#
# Ten tasks A..J. Criticality is the share of tasks downstream of each one.
names = "ABCDEFGHIJ"
edges = "AB AC AD BE BF BG CH CI DI DJ".split()
graph = DependencyGraph.from_edges(10, [(names.index(a), names.index(b)) for a, b in edges])
for label, transitive in [("all descendants", True), ("direct children", False)]:
    zeta = criticality(graph, transitive=transitive)
    print(label.ljust(16), " ".join("%s:%.1f" % (n, z) for n, z in zip(names, zeta)))

#
# The status register counts down to the next execution phase and reloads at zero.
s = TaskTimingState.from_phase(10, 6, busy=True, PE=4)
trace = []
for _ in range(20):
    trace.append(s.St)
    s = tick(s)
print("St trace:", trace)

#
# Slack after paying for correction and rewrite; None means wait.
spec = PrioritySpec(Weights(1, 1, 1, 0), eta_i=100, eta=1000, ec_cycles=3, rt_cycles=2)
for St in (12, 5, 4):
    print("St=%2d ->" % St, priority(TaskTimingState.from_status(10, 6, St), spec))

#
# Three candidates: tight slack wins under w_a, criticality wins under w_c.
zeta = criticality(graph)
tasks = {0: (40, 5000), 4: (1, 800), 2: (9, 300)}  # id -> (slack P, exec cycles)
for w in [Weights(1, 0, 0, 0), Weights(0, 0, 1, 0), Weights(1, 0.5, 1, 0)]:
    spec = PrioritySpec(w, 100, 1000, 0, 0)
    fp = {z: final_priority(P, spec, zeta[z], E) for z, (P, E) in tasks.items()}
    chosen = select([(z, fp[z], tasks[z][0]) for z in tasks])
    print(w.as_tuple(), {names[z]: round(float(v), 3) for z, v in fp.items()}, "->", names[chosen])
