"""Latency benchmark for the live suggest path on a large corpus.

Builds a ~100k-entry query log, constructs the standard engine pool, and
times strategy.fill end to end (trie lookups for every engine plus one
Thompson sample per candidate action). Reports percentiles; the budget to
stay under on commodity hardware is p99 < 10 ms.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from qacmix.engines import QueryContext, QueryRecord, build_engines
from qacmix.rng import Xoshiro256
from qacmix.strategies import MixtureConfig, build_strategy

ADJECTIVES = [f"adj{i:02d}" for i in range(60)]
NOUNS = [f"noun{i:02d}" for i in range(60)]
TAILS = [f"tail{i:02d}" for i in range(30)]


def build_records(entries: int, rng: Xoshiro256) -> list[QueryRecord]:
    records = []
    t = 1_700_000_000.0
    for _ in range(entries):
        query = (
            f"{ADJECTIVES[rng.randrange(len(ADJECTIVES))]} "
            f"{NOUNS[rng.randrange(len(NOUNS))]} "
            f"{TAILS[rng.randrange(len(TAILS))]}"
        )
        records.append(QueryRecord(t, f"u{rng.randrange(50):02d}", query))
        t += 1.0
    return records


def percentile(sorted_values, q: float) -> float:
    index = min(len(sorted_values) - 1, int(q * len(sorted_values)))
    return sorted_values[index]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--entries", type=int, default=100_000)
    parser.add_argument("--fills", type=int, default=2000)
    parser.add_argument("--strategy", default="ranked")
    parser.add_argument("--display-size", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget-ms", type=float, default=None,
                        help="exit nonzero when p99 exceeds this")
    args = parser.parse_args(argv)

    rng = Xoshiro256(args.seed)
    build_start = time.perf_counter()
    records = build_records(args.entries, rng)
    engines = build_engines(records)
    config = MixtureConfig(display_size=args.display_size, seed=args.seed)
    strategy = build_strategy(args.strategy, engines, config)
    print(f"built {len(records)} records / {len(engines)} engines "
          f"in {time.perf_counter() - build_start:.1f}s")

    # query-shaped prefixes of every length, cycling through the users
    probes = []
    for _ in range(args.fills):
        record = records[rng.randrange(len(records))]
        prefix = record.query[: 1 + rng.randrange(len(record.query) - 1)]
        probes.append((prefix, QueryContext(user_id=record.user_id)))

    for prefix, context in probes[:50]:
        strategy.fill(prefix, context)  # warm up

    timings = []
    for prefix, context in probes:
        start = time.perf_counter()
        displayed = strategy.fill(prefix, context)
        timings.append(time.perf_counter() - start)
        strategy.feedback(displayed, None)
    timings.sort()

    p50, p90, p99 = (percentile(timings, q) for q in (0.50, 0.90, 0.99))
    print(f"fills={len(timings)}  p50={p50 * 1e3:.3f}ms  "
          f"p90={p90 * 1e3:.3f}ms  p99={p99 * 1e3:.3f}ms  "
          f"max={timings[-1] * 1e3:.3f}ms")
    print(f"throughput: {len(timings) / sum(timings):.0f} fills/s")
    if args.budget_ms is not None and p99 * 1e3 > args.budget_ms:
        print(f"FAIL: p99 above {args.budget_ms}ms budget")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
