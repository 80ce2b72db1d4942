"""Command-line interface: check, generate, bench, serve."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .bench import run_benchmark
from .checker import (
    ALL_PROPERTIES,
    ExplorationConfig,
    Property,
    StateSpaceLimitExceeded,
    Verdict,
    explore,
)
from .bpmn_xml import parse_bpmn, serialize_bpmn
from .generators import generate_blocks, generate_parallel
from .model import ProcessModel
from .quickfix import suggest_fixes
from .report import check_report

_PROPERTY_FLAGS = {
    "safeness": Property.SAFENESS,
    "option-to-complete": Property.OPTION_TO_COMPLETE,
    "proper-completion": Property.PROPER_COMPLETION,
    "no-dead-activities": Property.NO_DEAD_ACTIVITIES,
}

_DISPLAY = {
    Property.SAFENESS: "Safeness",
    Property.OPTION_TO_COMPLETE: "Option To Complete",
    Property.PROPER_COMPLETION: "Proper Completion",
    Property.NO_DEAD_ACTIVITIES: "No Dead Activities",
}


def _parse_properties(raw: str | None) -> frozenset[Property]:
    if not raw:
        return frozenset(ALL_PROPERTIES)
    chosen = []
    for name in raw.split(","):
        name = name.strip().lower()
        if name not in _PROPERTY_FLAGS:
            raise argparse.ArgumentTypeError(
                f"unknown property '{name}' (choose from {', '.join(_PROPERTY_FLAGS)})"
            )
        chosen.append(_PROPERTY_FLAGS[name])
    return frozenset(chosen)


def _load_model(path: str) -> ProcessModel | int:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return 2
    parsed = parse_bpmn(text)
    if isinstance(parsed, list):
        for issue in parsed:
            print(f"error: {issue}", file=sys.stderr)
        return 2
    for warning in parsed.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return parsed


def _cmd_check(args) -> int:
    model = _load_model(args.path)
    if isinstance(model, int):
        return model
    config = ExplorationConfig(max_states=args.max_states, properties=args.properties)
    try:
        result, record = explore(model, config)
    except StateSpaceLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.format == "json":
            print(json.dumps(_partial_report(model, exc), indent=2, sort_keys=True))
        return 2
    fixes = suggest_fixes(model, result) if args.quick_fixes else []
    if args.format == "json":
        print(json.dumps(check_report(result, record.initial, fixes), indent=2, sort_keys=True))
    else:
        for prop in ALL_PROPERTIES:
            verdict = result.verdicts.get(prop)
            if verdict is None:
                continue
            line = f"{_DISPLAY[prop]}: {verdict.value}"
            problems = {
                Property.SAFENESS: result.unsafe_flow_ids,
                Property.PROPER_COMPLETION: result.improper_end_event_ids,
                Property.NO_DEAD_ACTIVITIES: result.dead_activity_ids,
            }.get(prop, frozenset())
            if verdict is Verdict.VIOLATED and problems:
                line += f" ({', '.join(sorted(problems))})"
            print(line)
        print(
            f"states: {result.state_count}, transitions: {result.transition_count}, "
            f"elapsed: {result.elapsed_ms:.1f} ms"
        )
        for fix in fixes:
            print(f"fix [{fix.id}] {fix.target_property.value} @ {fix.anchor_element}: {fix.rationale}")
    return 0 if result.all_fulfilled() else 1


def _partial_report(model, exc: StateSpaceLimitExceeded) -> dict:
    from .semantics import initial_state

    return check_report(exc.partial, initial_state(model))


def _parse_range(raw: str) -> range:
    parts = raw.split(":")
    try:
        numbers = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid range '{raw}' (use K, LO:HI, or LO:HI:STEP)")
    if len(numbers) == 1:
        return range(numbers[0], numbers[0] + 1)
    if len(numbers) == 2:
        return range(numbers[0], numbers[1] + 1)
    if len(numbers) == 3:
        return range(numbers[0], numbers[1] + 1, numbers[2])
    raise argparse.ArgumentTypeError(f"invalid range '{raw}'")


def _cmd_generate(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if args.kind == "parallel":
        if args.n is None or args.m is None:
            print("error: parallel generation needs --n and --m", file=sys.stderr)
            return 2
        if args.n < 1 or args.m < 1:
            print("error: --n and --m must be >= 1", file=sys.stderr)
            return 2
        path = out_dir / f"parallel_{args.n}_{args.m}.bpmn"
        path.write_text(serialize_bpmn(generate_parallel(args.n, args.m)), encoding="utf-8")
        written.append(path)
    else:
        if args.k is None:
            print("error: blocks generation needs --k", file=sys.stderr)
            return 2
        ks = list(args.k)
        if not ks or min(ks) < 1:
            print("error: --k values must be >= 1", file=sys.stderr)
            return 2
        for k in ks:
            path = out_dir / f"blocks_{k:03d}.bpmn"
            path.write_text(serialize_bpmn(generate_blocks(k)), encoding="utf-8")
            written.append(path)
    for path in written:
        print(path)
    return 0


def _cmd_bench(args) -> int:
    models = []
    for pair in args.parallel.split(",") if args.parallel else []:
        try:
            n, m = (int(v) for v in pair.lower().split("x"))
        except ValueError:
            print(f"error: invalid parallel spec '{pair}' (use NxM)", file=sys.stderr)
            return 2
        models.append((f"parallel_{n}_{m}", {"branches": n, "length": m}, generate_parallel(n, m)))
    if args.blocks:
        for k in _parse_range(args.blocks):
            models.append((f"blocks_{k}", {"blocks": k}, generate_blocks(k)))
    for path in args.files:
        model = _load_model(path)
        if isinstance(model, int):
            return model
        models.append((Path(path).stem, {}, model))

    records = run_benchmark(models, repetitions=args.repetitions)
    rows = [
        {
            "name": r.name,
            "params": json.dumps(r.params, sort_keys=True),
            "states": r.state_count,
            "mean_ms": round(r.mean_ms, 3),
            "runs": r.runs,
            "error": r.error or "",
        }
        for r in records
    ]
    if args.format == "json":
        payload = json.dumps(rows, indent=2)
        if args.out:
            Path(args.out).write_text(payload + "\n", encoding="utf-8")
        else:
            print(payload)
    else:
        out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
        try:
            writer = csv.DictWriter(out, fieldnames=["name", "params", "states", "mean_ms", "runs", "error"])
            writer.writeheader()
            writer.writerows(rows)
        finally:
            if args.out:
                out.close()
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bpmncheck",
        description="Soundness and safeness checking for BPMN process models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="check a BPMN file")
    p_check.add_argument("path")
    p_check.add_argument("--properties", type=_parse_properties, default=frozenset(ALL_PROPERTIES))
    p_check.add_argument("--max-states", type=int, default=1_048_576)
    p_check.add_argument("--format", choices=("text", "json"), default="text")
    p_check.add_argument("--quick-fixes", action="store_true")
    p_check.set_defaults(func=_cmd_check)

    p_gen = sub.add_parser("generate", help="write synthetic benchmark models")
    p_gen.add_argument("kind", choices=("parallel", "blocks"))
    p_gen.add_argument("--n", type=int, help="parallel: branch count")
    p_gen.add_argument("--m", type=int, help="parallel: branch length")
    p_gen.add_argument("--k", type=_parse_range, help="blocks: count or LO:HI[:STEP]")
    p_gen.add_argument("--out-dir", default=".")
    p_gen.set_defaults(func=_cmd_generate)

    p_bench = sub.add_parser("bench", help="run timing benchmarks")
    p_bench.add_argument("files", nargs="*", help="BPMN files to bench")
    p_bench.add_argument("--parallel", help="comma-separated NxM pairs, e.g. 5x1,10x1")
    p_bench.add_argument("--blocks", help="block counts K or LO:HI[:STEP]")
    p_bench.add_argument("--repetitions", type=int, default=10)
    p_bench.add_argument("--format", choices=("csv", "json"), default="csv")
    p_bench.add_argument("--out")
    p_bench.set_defaults(func=_cmd_bench)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=int(os.environ.get("BPMNCHECK_PORT", "8000")))
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
