"""Command-line umbrella: render, evolve, sweep, metrics, corpus, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .corpus import build_corpus, corpus_report, write_bins_csv
from .errors import StudioError
from .evolution import (DEFAULT_POPULATION, InnovationRegistry, MutationConfig,
                        Session, branch, next_generation, scratch_population)
from .genome import canonical_json, load_genome, save_genome
from .nullmodels import residual_scores, resolve_parent
from .render import render, render_node, save_png
from .sweep import FINE_STEP, SweepSpec, sweep


def _registry_for(*genomes) -> InnovationRegistry:
    high = 0
    for g in genomes:
        for n in g.nodes:
            high = max(high, n.innovation)
        for c in g.connections:
            high = max(high, c.innovation)
    return InnovationRegistry(next_id=high + 1)


def _cmd_render(args) -> int:
    genome = load_genome(args.genome)
    if args.node is not None:
        buffer = render_node(genome, args.node, args.width, args.height)
    else:
        buffer = render(genome, args.width, args.height)
    save_png(buffer, args.out)
    print(f"wrote {args.out} ({buffer.width}x{buffer.height}, "
          f"{'gray' if buffer.channels == 1 else 'rgb'})")
    return 0


def _cmd_evolve(args) -> int:
    rng = np.random.default_rng(args.seed)
    config = MutationConfig()
    selected = [int(s) for s in args.select.split(",") if s.strip() != ""]
    if args.source == "scratch":
        registry = InnovationRegistry()
        population = scratch_population(args.palette, args.population, registry, rng)
        origin = None
    else:
        parent = load_genome(args.source)
        registry = _registry_for(parent)
        population = branch(parent, registry, config, rng, args.population)
        origin = parent.id
    session = Session(id="cli", population=population, origin=origin,
                      generation=0, registry=registry, rng_seed=args.seed)
    for _ in range(args.steps):
        session = next_generation(session, selected, config, rng)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, genome in enumerate(session.population):
        save_genome(genome, out / f"slot_{i:02d}.json", parent_id=origin)
        save_png(render(genome, args.size, args.size), out / f"slot_{i:02d}.png")
    print(f"generation {session.generation}: wrote {len(session.population)} "
          f"genomes to {out}")
    return 0


def _cmd_sweep(args) -> int:
    genome = load_genome(args.genome)
    step = FINE_STEP if args.fine else args.step
    spec = SweepSpec(connection=args.connection, lo=args.lo, hi=args.hi,
                     step=step, image_size=(args.size, args.size))
    result = sweep(genome, spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    digits = max(3, len(str(len(result.frames) - 1)))
    for index, (weight, buffer) in enumerate(result.frames):
        save_png(buffer, out / f"frame_{index:0{digits}d}_w{weight:+.2f}.png")
    save_png(result.baseline_image, out / "baseline.png")
    summary = {
        "connection": args.connection,
        "baseline_weight": result.baseline_weight,
        "lo": spec.lo, "hi": spec.hi, "step": spec.step,
        "frames": len(result.frames),
        "impact": result.impact.summary(),
    }
    (out / "impact.json").write_text(canonical_json(summary) + "\n", encoding="utf-8")
    print(f"wrote {len(result.frames)} frames and impact.json to {out}")
    return 0


def _cmd_metrics(args) -> int:
    genome = load_genome(args.genome)
    parent = load_genome(args.parent) if args.parent else None
    registry = _registry_for(*(g for g in (genome, parent) if g is not None))
    parent = resolve_parent(genome, parent, registry)
    scores = residual_scores(genome, parent, nulls=args.nulls, seed=args.seed,
                             registry=registry)
    text = canonical_json(scores)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


def _cmd_corpus(args) -> int:
    docs = []
    for path in sorted(Path(args.dir).glob("*.json")):
        docs.append(json.loads(path.read_text(encoding="utf-8")))
    records, skipped = build_corpus(docs, nulls=args.nulls, seed=args.seed)
    rng = np.random.default_rng(None if args.seed is None else [args.seed, len(records)])
    report = corpus_report(records, bins=args.bins, rng=rng)
    report["skipped_genomes"] = skipped
    report_path = Path(args.report)
    report_path.write_text(canonical_json(report) + "\n", encoding="utf-8")
    write_bins_csv(report, report_path.with_suffix(".bins.csv"))
    print(f"report on {report['n']} genomes -> {report_path} "
          f"({len(skipped)} skipped)")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    ui_dir = args.ui
    if ui_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "static"
        ui_dir = str(bundled) if bundled.is_dir() else None
    app = create_app(args.store, ui_dir=ui_dir, default_population=args.population)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cppnstudio",
                                     description="CPPN image breeding and analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render a genome (or one node) to PNG")
    p.add_argument("--genome", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int, default=256)
    p.add_argument("--height", type=int, default=256)
    p.add_argument("--node", type=int, default=None,
                   help="render this node's activation instead of the output")
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("evolve", help="scripted evolution from scratch or a genome file")
    p.add_argument("--from", dest="source", required=True,
                   help="'scratch' or a genome JSON file to branch from")
    p.add_argument("--select", required=True, help="comma-separated slot indices")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--palette", choices=("gray", "color"), default="gray")
    p.add_argument("--population", type=int, default=DEFAULT_POPULATION)
    p.add_argument("--size", type=int, default=256, help="PNG size for the output grid")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_evolve)

    p = sub.add_parser("sweep", help="sweep one connection weight and write frames")
    p.add_argument("--genome", required=True)
    p.add_argument("--connection", type=int, required=True)
    p.add_argument("--lo", type=float, default=-3.0)
    p.add_argument("--hi", type=float, default=3.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--fine", action="store_true", help="use the 0.01 step")
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("metrics", help="residual modularity/hierarchy of a genome")
    p.add_argument("--genome", required=True)
    p.add_argument("--parent", default=None,
                   help="parent genome JSON (defaults to the minimal seed topology)")
    p.add_argument("--nulls", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_metrics)

    p = sub.add_parser("corpus", help="residual statistics over a directory of genomes")
    p.add_argument("--dir", required=True)
    p.add_argument("--nulls", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--report", required=True)
    p.set_defaults(fn=_cmd_corpus)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--store", default="./studio-store")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--population", type=int, default=DEFAULT_POPULATION)
    p.add_argument("--ui", default=None, help="directory of static UI assets")
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except StudioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
