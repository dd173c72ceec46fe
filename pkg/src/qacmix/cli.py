"""Command line entry points: ingest, run, enumerate, synthetic, serve.

Every command that writes a file goes through one canonical JSON writer,
so rerunning a command with the same inputs and seed produces a
byte-identical file.
"""

from __future__ import annotations

import argparse
import json
import logging
from dataclasses import replace
from pathlib import Path

from .config import ExperimentConfig, load_config
from .engines import build_engines
from .replay import (
    build_tuples,
    doc_to_tuples,
    enumerate_mixtures,
    load_query_log,
    make_probability_environment,
    results_table,
    run_experiment,
    run_synthetic,
    tuples_to_doc,
    write_json,
)
from .rng import Xoshiro256, derive_seed
from .service import SuggestService, create_app
from .strategies import build_strategy

logger = logging.getLogger(__name__)


def _load_inputs(config: ExperimentConfig):
    """Engines come from the raw log; tuples from it too unless pre-ingested."""
    if not config.log:
        raise SystemExit("config needs a log path for this command")
    records = load_query_log(config.log)
    engines = build_engines(records, half_life_days=config.half_life_days)
    if config.tuples:
        doc = json.loads(Path(config.tuples).read_text(encoding="utf-8"))
        tuples = doc_to_tuples(doc)
    else:
        tuples = build_tuples(records, config.min_prefix_len, config.max_prefix_len)
    if not tuples:
        raise SystemExit("no replay tuples; the log has no usable queries")
    return engines, tuples


def _apply_overrides(config: ExperimentConfig, args) -> ExperimentConfig:
    if getattr(args, "seed", None) is not None:
        config = replace(config, seed=args.seed)
    if getattr(args, "episodes", None) is not None:
        config = replace(config, episodes=args.episodes)
    return config


def cmd_ingest(args) -> int:
    records = load_query_log(args.log)
    tuples = build_tuples(records, args.min_prefix_len, args.max_prefix_len)
    doc = tuples_to_doc(tuples)
    doc["records"] = len(records)
    doc["users"] = len({r.user_id for r in records})
    write_json(args.out, doc)
    print(f"ingested {len(records)} records into {len(tuples)} tuples -> {args.out}")
    return 0


def cmd_run(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    engines, tuples = _load_inputs(config)
    mixture = config.mixture()
    results = run_experiment(
        config.strategy,
        engines,
        tuples,
        mixture,
        episodes=config.episodes,
        repeats=config.repeats,
        assignment=config.assignment,
    )
    baseline_label = f"single:{config.baseline}"
    baseline_results = run_experiment(
        "single",
        engines,
        tuples,
        mixture,
        episodes=config.episodes,
        repeats=config.repeats,
        assignment=[config.baseline],
    )
    table = results_table(
        {config.strategy: results, baseline_label: baseline_results},
        baseline=baseline_label,
    )
    for row in table["rows"]:
        print(
            f"{row['strategy']:>24}  episodes={row['episodes']}  "
            f"clicks={row['clicks_mean']:.1f}  increase={row['increase_pct']}%"
        )
    if args.out:
        doc = {"table": table, "results": [r.to_dict() for r in results]}
        write_json(args.out, doc)
        print(f"wrote {args.out}")
    return 0


def cmd_enumerate(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    engines, tuples = _load_inputs(config)
    rows = enumerate_mixtures(
        engines, tuples, config.mixture(), episodes=config.episodes
    )
    best, worst = rows[0], rows[-1]
    print(f"enumerated {len(rows)} assignments over {config.episodes} episodes")
    print(f"best : {'+'.join(best['assignment'])}  clicks={best['clicks']}")
    print(f"worst: {'+'.join(worst['assignment'])}  clicks={worst['clicks']}")
    if args.out:
        write_json(args.out, {"episodes": config.episodes, "rows": rows})
        print(f"wrote {args.out}")
    return 0


def cmd_synthetic(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    if config.synthetic is None:
        raise SystemExit("config needs a synthetic section for this command")
    spec = config.synthetic
    env = make_probability_environment(
        spec.probs, spec.decay, config.display_size, tuple(spec.prefixes)
    )
    mixture = config.mixture()
    strategy = build_strategy(
        config.strategy,
        env.engines,
        replace(mixture, seed=derive_seed(config.seed, 0)),
        config.assignment,
    )
    rng = Xoshiro256(derive_seed(config.seed, 1))
    result = run_synthetic(
        strategy, env, config.episodes, rng, record_fills=True
    )
    window = result.fills[-max(1, config.episodes // 5):]
    top_counts: dict[str, int] = {}
    for fill in window:
        if fill:
            top_counts[fill[0]] = top_counts.get(fill[0], 0) + 1
    shares = {
        name: round(count / len(window), 4) for name, count in sorted(top_counts.items())
    }
    print(
        f"{strategy.name}: {result.clicks}/{result.episodes} clicks "
        f"(rate {result.click_rate:.4f})"
    )
    print(f"final-window engine shares at position 1: {shares}")
    if args.out:
        doc = result.to_dict()
        doc["position1_shares_final_window"] = shares
        write_json(args.out, doc)
        print(f"wrote {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    config = _apply_overrides(load_config(args.config), args)
    engines, _ = _load_inputs(config)
    strategy = build_strategy(
        config.strategy, engines, config.mixture(), config.assignment
    )
    service = SuggestService(
        strategy,
        ttl_seconds=config.ttl_seconds,
        expire_updates=config.expire_updates,
    )
    app = create_app(service, static_dir=args.static)
    print(f"serving {config.strategy} over {sorted(engines)} on {args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qacmix",
        description="Query auto-completion by a learned mixture of engines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a query log into replay tuples")
    p.add_argument("--log", required=True, help="delimited log file")
    p.add_argument("--out", required=True, help="output tuples JSON")
    p.add_argument("--min-prefix-len", type=int, default=1)
    p.add_argument("--max-prefix-len", type=int, default=None)
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("run", help="replay a strategy against a log")
    p.add_argument("--config", required=True, help="experiment YAML")
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.add_argument("--episodes", type=int, default=None, help="override episode count")
    p.add_argument("--out", default=None, help="write results JSON here")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("enumerate", help="score every fixed engine assignment")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--episodes", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("synthetic", help="run against a simulated click model")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--episodes", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_synthetic)

    p = sub.add_parser("serve", help="serve suggestions over HTTP")
    p.add_argument("--config", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static", default=None,
                   help="directory of web client assets to serve at /")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
