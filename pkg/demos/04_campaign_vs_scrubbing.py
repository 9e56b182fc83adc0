"""A seeded injection campaign against full-frame scrubbing."""
from dataclasses import replace

from cmedac.cli import render_summary
from cmedac.faults import FaultModel
from cmedac.sim import CampaignConfig, MemorySpec, latency_curve, run_campaign, run_scrub_baseline

config = CampaignConfig(
    memory=MemorySpec(edges=((0, 1), (0, 2), (1, 3))),
    fault_model=FaultModel("adjacent-burst", burst_length=6, tasks_affected=2),
    runs=20,
    seed=7,
)

proposed = run_campaign(config)
baseline = run_scrub_baseline(config)
print(render_summary(proposed.summary()))
print(render_summary(baseline.summary()))

#
# Mean correction latency as the number of faulty tasks grows.
print("faulty  proposed  scrubbing")
for tasks in (1, 3, 6, 10):
    cfg = replace(config, fault_model=replace(config.fault_model, tasks_affected=tasks), runs=5)
    for k, p, b in latency_curve(run_campaign(cfg), run_scrub_baseline(cfg)):
        print("%6d  %8.0f  %9.0f" % (k, p, b))

#
# Two frames hit in one task: detected, reported, left for a full rewrite.
cfg = replace(config, fault_model=FaultModel("random-multi", burst_length=3, frames_per_task=2), runs=5)
s = run_campaign(cfg).summary()
print("two-frame faults: corrected %d, uncorrectable %d" % (s["corrected"], s["uncorrectable"]))
