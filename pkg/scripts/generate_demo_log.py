"""Generate a synthetic query log for demos and experiments.

Demand follows a zipf-like curve over two-word queries, each user leans
toward one topic bucket, and timestamps advance with jittered gaps, so the
resulting CSV exercises popularity, recency, and per-user signals at once.
The output is deterministic for a given seed.
"""

import argparse
import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from qacmix.rng import Xoshiro256

TOPICS = {
    "travel": ["flights to", "hotels in", "weather in", "map of"],
    "food": ["recipe for", "calories in", "restaurants near", "how to cook"],
    "tech": ["review of", "price of", "specs of", "compare"],
}
OBJECTS = {
    "travel": ["paris", "tokyo", "lisbon", "oslo", "quito", "sydney"],
    "food": ["paella", "ramen", "quiche", "ceviche", "goulash", "tacos"],
    "tech": ["quantum pad", "pixel drone", "zen laptop", "aero phone"],
}


def build_queries() -> dict[str, list[str]]:
    return {
        topic: [f"{head} {obj}" for head in heads for obj in OBJECTS[topic]]
        for topic, heads in TOPICS.items()
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="CSV path to write")
    parser.add_argument("--records", type=int, default=5000)
    parser.add_argument("--users", type=int, default=12)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = Xoshiro256(args.seed)
    by_topic = build_queries()
    topics = sorted(by_topic)
    # each user favors one topic bucket but wanders 25% of the time
    favorites = [topics[rng.randrange(len(topics))] for _ in range(args.users)]

    rows = []
    t = 1_700_000_000.0
    for _ in range(args.records):
        user = rng.randrange(args.users)
        topic = favorites[user]
        if rng.random() < 0.25:
            topic = topics[rng.randrange(len(topics))]
        pool = by_topic[topic]
        # zipf-ish pick: squaring a uniform skews mass toward low indices
        index = int(len(pool) * rng.random() * rng.random())
        rows.append((f"{t:.0f}", f"u{user:02d}", pool[index]))
        t += 5.0 + rng.random() * 120.0

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["timestamp", "user_id", "query"])
        writer.writerows(rows)
    queries = len({row[2] for row in rows})
    print(f"wrote {len(rows)} records ({queries} distinct queries, "
          f"{args.users} users) -> {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
