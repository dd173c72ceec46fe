"""Compare every learning strategy across canned synthetic environments.

Three click models with different structure: one engine dominating at all
ranks, sharp per-rank differences that only (engine, rank) actions can
price, and an indifferent environment where nothing should separate.
Each (environment, strategy) cell reports mean clicks over several seeds
with a random-selection baseline for scale.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from qacmix.engines import StaticEngine
from qacmix.replay import (
    SyntheticEnvironment,
    make_probability_environment,
    run_synthetic,
    write_json,
)
from qacmix.rng import Xoshiro256, derive_seed
from qacmix.strategies import LEARNED_KINDS, MixtureConfig, build_strategy


def rank_contrast() -> SyntheticEnvironment:
    engines = {
        "A": StaticEngine("A", {"p": ["pa1", "pa2"], "q": ["q shared", "qa2"]}),
        "B": StaticEngine("B", {"p": ["pb1", "pb2"], "q": ["q shared", "qb2"]}),
        "C": StaticEngine("C", {"p": ["pc1", "pc2"], "q": ["qc1", "qc2"]}),
    }
    base = {"A": (0.9, 0.0), "B": (0.6, 0.0), "C": (0.3, 0.3)}
    return SyntheticEnvironment(
        engines=engines,
        prob=lambda item, prefix: base[item.engine][item.rank - 1],
        prefixes=("p", "q"),
    )


def environments(display_size: int) -> dict:
    decay = [1.0, 0.8, 0.6, 0.4, 0.2][:display_size]
    return {
        "dominant": (
            make_probability_environment(
                {"east": 0.1, "north": 0.6, "south": 0.1, "west": 0.1},
                decay,
                display_size,
            ),
            display_size,
        ),
        "rank_contrast": (rank_contrast(), 2),
        "indifferent": (
            make_probability_environment(
                {"east": 0.25, "north": 0.25, "south": 0.25, "west": 0.25},
                decay,
                display_size,
            ),
            display_size,
        ),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--episodes", type=int, default=5000)
    parser.add_argument("--seeds", type=int, default=3)
    parser.add_argument("--display-size", type=int, default=5)
    parser.add_argument("--base-seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="write the matrix as JSON")
    args = parser.parse_args(argv)

    kinds = sorted(LEARNED_KINDS) + ["random"]
    matrix = {}
    for env_name, (env, size) in environments(args.display_size).items():
        matrix[env_name] = {}
        for kind in kinds:
            clicks = []
            for s in range(args.seeds):
                seed = args.base_seed + s
                config = MixtureConfig(display_size=size, seed=derive_seed(seed, 0))
                strategy = build_strategy(kind, env.engines, config)
                rng = Xoshiro256(derive_seed(seed, 1))
                clicks.append(run_synthetic(strategy, env, args.episodes, rng).clicks)
            matrix[env_name][kind] = {
                "clicks": clicks,
                "mean": sum(clicks) / len(clicks),
                "rate": sum(clicks) / len(clicks) / args.episodes,
            }

    width = max(len(k) for k in kinds)
    for env_name, cells in matrix.items():
        print(f"\n{env_name} ({args.episodes} episodes x {args.seeds} seeds)")
        for kind in kinds:
            cell = cells[kind]
            spread = f"[{min(cell['clicks'])}..{max(cell['clicks'])}]"
            print(f"  {kind:<{width}}  mean={cell['mean']:>8.1f}  "
                  f"rate={cell['rate']:.4f}  {spread}")

    if args.out:
        write_json(args.out, {
            "episodes": args.episodes,
            "seeds": args.seeds,
            "matrix": matrix,
        })
        print(f"\nwrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
