"""Command-line driver: ``cmedac <command> [options]``.

Exit codes: 0 success, 2 configuration or input error, 3 invariant
violation during a run.
"""

import argparse
import json
import os
import sys
from dataclasses import replace

from . import faults, sim
from .config import ConfigError, load_config
from .corrector import outcomes_to_json
from .detector import scan
from .memory import read_golden, write_golden
from .scheduler import Weights, advance

OUT_ENV = "CMEDAC_OUT"
COMMANDS = ("snapshot", "inject", "scan", "correct", "campaign", "baseline", "report")


class InputError(Exception):
    pass


def build_parser():
    p = argparse.ArgumentParser(prog="cmedac", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="INI campaign configuration (defaults if omitted)")
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./cmedac-out)")
    p.add_argument("--seed", type=int, help="override [campaign] seed")
    p.add_argument("--runs", type=int, help="override [campaign] runs")
    p.add_argument("--fault-model", choices=faults.KINDS, help="override [faults] kind")
    p.add_argument("--weights", help="w_a,w_b,w_c,w_d")
    p.add_argument("--baseline", action="store_true",
                   help="campaign: also run the scrubbing baseline")
    p.add_argument("--transitive-criticality", action=argparse.BooleanOptionalAction,
                   default=None, help="count indirect dependents in criticality")
    p.add_argument("--golden", help="golden-store file (default OUT/golden.txt)")
    p.add_argument("--pattern", help="fault pattern file (default OUT/pattern.txt if present)")
    return p


def _config(args):
    config = load_config(args.config) if args.config else sim.CampaignConfig()
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.runs is not None:
        changes["runs"] = args.runs
    if args.fault_model:
        changes["fault_model"] = replace(config.fault_model, kind=args.fault_model)
    if args.weights:
        try:
            changes["weights"] = Weights.parse(args.weights)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if args.transitive_criticality is not None:
        changes["transitive_criticality"] = args.transitive_criticality
    try:
        return replace(config, **changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _out_dir(args):
    out = args.out or os.environ.get(OUT_ENV) or "cmedac-out"
    os.makedirs(out, exist_ok=True)
    return out


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _faulty_memory(args, config, out):
    """Config memory with the pattern file applied, plus the golden store."""
    setup = sim.CampaignSetup(config)
    golden_path = args.golden or os.path.join(out, "golden.txt")
    try:
        golden = read_golden(golden_path) if os.path.exists(golden_path) or args.golden else setup.golden
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot load golden store {golden_path}: {exc}") from exc
    memory = setup.golden_memory.copy()
    if not golden.matches_shape(memory):
        raise InputError(f"golden store {golden_path} does not match the configured memory")
    setup.golden = golden
    pattern_path = args.pattern or os.path.join(out, "pattern.txt")
    if args.pattern or os.path.exists(pattern_path):
        try:
            with open(pattern_path, encoding="utf-8") as fh:
                pattern = faults.FaultPattern.from_text(fh.read())
            faults.apply(pattern, memory)
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot apply fault pattern {pattern_path}: {exc}") from exc
    return setup, memory


def cmd_snapshot(args, config, out):
    setup = sim.CampaignSetup(config)
    path = os.path.join(out, "golden.txt")
    write_golden(setup.golden, path)
    print(f"wrote {path} ({setup.golden_memory.N} task digests)")


def cmd_inject(args, config, out):
    setup = sim.CampaignSetup(config)
    model = replace(config.fault_model, seed=config.run_seed(0))
    pattern = faults.generate(model, setup.golden_memory)
    path = os.path.join(out, "pattern.txt")
    _write(path, pattern.to_text())
    print(f"wrote {path} ({len(pattern)} flips in tasks {pattern.tasks()})")


def cmd_scan(args, config, out):
    setup, memory = _faulty_memory(args, config, out)
    report = scan(memory, setup.golden, config.timing)
    _write(os.path.join(out, "scan.json"), report.to_json() + "\n")
    print(report.to_json())


def cmd_correct(args, config, out):
    setup, memory = _faulty_memory(args, config, out)
    report = scan(memory, setup.golden, config.timing)
    states = [advance(s, report.scan_cycles) for s in setup.initial_states()]
    outcomes, *_ = sim.drain(setup, memory, report.faulty_tasks, states, report.scan_cycles)
    text = outcomes_to_json(outcomes.values())
    _write(os.path.join(out, "outcomes.json"), text + "\n")
    print(text)


def _emit(metrics, out, prefix):
    _write(os.path.join(out, f"{prefix}metrics.jsonl"), metrics.to_jsonl())
    _write(os.path.join(out, f"{prefix}summary.csv"), metrics.summary_csv())


def _plot_data(config, out, proposed, baseline=None):
    geom = config.memory.geometry
    n = max(config.memory.frames)
    rows = sim.redundancy_curve(range(1, 51), n, geom)
    _write(os.path.join(out, "redundancy_vs_tasks.dat"),
           "# tasks proposed_bits scrubbing_bits\n" + "".join(f"{a} {b} {c}\n" for a, b, c in rows))
    rows = sim.latency_curve(proposed, baseline)
    _write(os.path.join(out, "latency_vs_faults.dat"),
           "# faulty_tasks proposed_mean_cycles scrubbing_mean_cycles\n"
           + "".join(f"{a} {b:.6g} {c:.6g}\n" for a, b, c in rows))


def cmd_campaign(args, config, out):
    metrics = sim.run_campaign(config)
    _emit(metrics, out, "")
    baseline = None
    if args.baseline:
        baseline = sim.run_scrub_baseline(config)
        _emit(baseline, out, "baseline_")
    _plot_data(config, out, metrics, baseline)
    print(render_summary(metrics.summary()))
    if baseline is not None:
        print(render_summary(baseline.summary()))


def cmd_baseline(args, config, out):
    baseline = sim.run_scrub_baseline(config)
    _emit(baseline, out, "baseline_")
    print(render_summary(baseline.summary()))


def render_summary(s):
    if not s.get("runs"):
        return f"[{s.get('mode', 'proposed')}] no runs"
    lines = [
        f"[{s['mode']}] runs: {s['runs']}",
        f"  faulty tasks: {s['faulty_tasks']}  corrected: {s['corrected']}  "
        f"uncorrectable: {s['uncorrectable']}",
        f"  correction success rate: {s['correction_success_rate']:.4f}",
        f"  detection: {100 * s['detection_rate']:.2f}%  false negatives: {s['false_negatives']}  "
        f"false positives: {s['false_positives']}",
        f"  detection latency mean/max: {s['mean_detection_latency']:.1f} / "
        f"{s['max_detection_latency']} cycles",
        f"  correction latency mean/max: {s['mean_correction_latency']:.1f} / "
        f"{s['max_correction_latency']} cycles",
        f"  frames downloaded: {s['frames_downloaded']}  download cycles: {s['download_cycles']}",
        f"  exposure cycles: {s['exposure_cycles']}",
        "  redundancy (bits):",
        f"    detection only (digests): {s['redundancy_detection']}",
        f"    proposed (digests + parity frames): {s['redundancy_proposed']}",
        f"    scrubbing (full golden image): {s['redundancy_scrubbing']}",
    ]
    return "\n".join(lines)


def cmd_report(args, config, out):
    found = False
    for prefix, mode in (("", "proposed"), ("baseline_", "scrub")):
        path = os.path.join(out, f"{prefix}metrics.jsonl")
        if not os.path.exists(path):
            continue
        found = True
        with open(path, encoding="utf-8") as fh:
            records = [json.loads(line) for line in fh if line.strip()]
        print(render_summary(sim.summarize(records, mode)))
    if not found:
        raise InputError(f"no metrics files in {out}")


HANDLERS = {
    "snapshot": cmd_snapshot,
    "inject": cmd_inject,
    "scan": cmd_scan,
    "correct": cmd_correct,
    "campaign": cmd_campaign,
    "baseline": cmd_baseline,
    "report": cmd_report,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = None if args.command == "report" else _config(args)
        out = _out_dir(args)
        HANDLERS[args.command](args, config, out)
    except (ConfigError, InputError) as exc:
        print(f"cmedac: error: {exc}", file=sys.stderr)
        return 2
    except sim.InvariantViolation as exc:
        print(f"cmedac: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
