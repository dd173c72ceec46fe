"""Offline evaluation: replaying logged queries through mixture strategies.

A query log becomes (prefix, query, user) tuples, one per proper prefix of
each logged query. An episode samples a tuple, shows the strategy's list
for the prefix, and clicks exactly the position whose text equals the full
query; if the query is not on the list the episode ends with no click.
Click positions use a sentinel of display_size + 1 for "no click" even
when fewer items were displayed, so position histograms share one width.

Seeds: a repeat r of a run with base seed s works from seed s + r; the
strategy's bandits and the episode sampler get independent derived streams
so neither can alias the other.
"""

from __future__ import annotations

import csv
import itertools
import json
import logging
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .engines import (
    Engine,
    PatternEngine,
    QueryContext,
    QueryRecord,
    normalize_query,
)
from .rng import Xoshiro256, derive_seed
from .strategies import (
    DisplayedItem,
    DisplayedList,
    FixedMixtureStrategy,
    MixtureConfig,
    MixtureStrategy,
    build_strategy,
)

logger = logging.getLogger(__name__)

LOG_COLUMNS = ("timestamp", "user_id", "query")


@dataclass(frozen=True)
class ReplayTuple:
    """One replayable interaction: the typed prefix and the query it became."""

    prefix: str
    query: str
    user_id: str | None = None


@dataclass
class ExperimentResult:
    """Outcome counts for one replay or synthetic run."""

    strategy: str
    seed: int
    episodes: int
    clicks: int
    position_counts: tuple[int, ...]
    fills: list[tuple[str, ...]] | None = None

    @property
    def click_rate(self) -> float:
        return self.clicks / self.episodes if self.episodes else 0.0

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "seed": self.seed,
            "episodes": self.episodes,
            "clicks": self.clicks,
            "click_rate": self.click_rate,
            "position_counts": list(self.position_counts),
        }


def load_query_log(path: str | Path) -> list[QueryRecord]:
    """Parse a delimited log with a timestamp,user_id,query header.

    The delimiter is taken from the header line: tab when one is present,
    comma otherwise. Rows with a non-numeric timestamp are an error, not
    skipped, so corrupt inputs fail loudly.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        header = fh.readline()
        if not header.strip():
            raise ValueError(f"{path}: empty log file")
        delimiter = "\t" if "\t" in header else ","
        columns = [c.strip() for c in header.rstrip("\n\r").split(delimiter)]
        missing = set(LOG_COLUMNS) - set(columns)
        if missing:
            raise ValueError(f"{path}: header is missing columns {sorted(missing)}")
        reader = csv.DictReader(fh, fieldnames=columns, delimiter=delimiter)
        records = []
        for lineno, row in enumerate(reader, start=2):
            query = (row.get("query") or "").strip()
            if not any((v or "").strip() for v in row.values()):
                continue
            try:
                timestamp = float(row["timestamp"])
            except (TypeError, ValueError):
                raise ValueError(
                    f"{path}:{lineno}: bad timestamp {row.get('timestamp')!r}"
                ) from None
            records.append(QueryRecord(timestamp, (row.get("user_id") or "").strip(), query))
        return records


def split_log(
    records: Iterable[QueryRecord], train_fraction: float
) -> tuple[list[QueryRecord], list[QueryRecord]]:
    """Time-ordered split: the earliest fraction trains, the rest evaluates."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be strictly between 0 and 1")
    ordered = sorted(records, key=lambda r: (r.timestamp, r.user_id, r.query))
    cut = int(len(ordered) * train_fraction)
    return ordered[:cut], ordered[cut:]


def build_tuples(
    records: Iterable[QueryRecord],
    min_prefix_len: int = 1,
    max_prefix_len: int | None = None,
) -> list[ReplayTuple]:
    """Expand each record into one tuple per proper prefix of its query.

    Prefix lengths run from min_prefix_len to len(query) - 1; queries too
    short to yield any prefix are skipped (counted in a log line). Prefixes
    are slices of the normalized query, so replay matching is exact.
    """
    if min_prefix_len < 1:
        raise ValueError("min_prefix_len must be at least 1")
    tuples: list[ReplayTuple] = []
    skipped = 0
    for record in records:
        query = normalize_query(record.query)
        if len(query) <= min_prefix_len:
            skipped += 1
            continue
        top = len(query) - 1
        if max_prefix_len is not None:
            top = min(top, max_prefix_len)
        for length in range(min_prefix_len, top + 1):
            tuples.append(ReplayTuple(query[:length], query, record.user_id or None))
    if skipped:
        logger.info("build_tuples: skipped %d records with no usable prefix", skipped)
    return tuples


def click_index(displayed: DisplayedList, query: str, display_size: int) -> int:
    """Position whose text equals the query, else the no-click sentinel.

    The sentinel is display_size + 1 regardless of how many items were
    actually shown, so histograms from truncated lists line up.
    """
    position = displayed.position_of(normalize_query(query))
    return position if position is not None else display_size + 1


def sample_episode_indices(n_tuples: int, episodes: int, rng: Xoshiro256) -> list[int]:
    """Uniform with-replacement draw of tuple indices for an episode stream."""
    if n_tuples <= 0:
        raise ValueError("need at least one replay tuple")
    return [rng.randrange(n_tuples) for _ in range(episodes)]


def build_suggestion_cache(
    engines: Mapping[str, Engine],
    tuples: Sequence[ReplayTuple],
    indices: Iterable[int],
    display_size: int,
) -> dict[tuple[str, str | None], dict[str, list[str]]]:
    """Prefetch every engine's list once per distinct (prefix, user) pair.

    Shared across strategies replaying the same episode stream; engines
    are pure functions of (prefix, context), so this changes nothing but
    the run time.
    """
    cache: dict[tuple[str, str | None], dict[str, list[str]]] = {}
    for idx in indices:
        t = tuples[idx]
        key = (t.prefix, t.user_id)
        if key not in cache:
            context = QueryContext(user_id=t.user_id)
            cache[key] = {
                name: engine.suggest(t.prefix, display_size, context)
                for name, engine in engines.items()
            }
    return cache


def replay_episodes(
    strategy: MixtureStrategy,
    tuples: Sequence[ReplayTuple],
    indices: Sequence[int],
    learn: bool = True,
    cache: Mapping[tuple[str, str | None], Mapping[str, Sequence[str]]] | None = None,
) -> ExperimentResult:
    """Run one episode per index and tally clicks by position."""
    size = strategy.config.display_size
    counts = [0] * (size + 1)
    clicks = 0
    for idx in indices:
        t = tuples[idx]
        suggestions = cache.get((t.prefix, t.user_id)) if cache is not None else None
        displayed = strategy.fill(t.prefix, QueryContext(user_id=t.user_id), suggestions)
        c = click_index(displayed, t.query, size)
        counts[c - 1] += 1
        if c <= size:
            clicks += 1
        if learn:
            strategy.feedback(displayed, c if c <= size else None)
    return ExperimentResult(
        strategy=strategy.name,
        seed=strategy.config.seed,
        episodes=len(indices),
        clicks=clicks,
        position_counts=tuple(counts),
    )


def run_experiment(
    kind: str,
    engines: Mapping[str, Engine],
    tuples: Sequence[ReplayTuple],
    config: MixtureConfig,
    episodes: int,
    repeats: int = 1,
    assignment: Sequence[str] | None = None,
    learn: bool = True,
) -> list[ExperimentResult]:
    """Replay a strategy over fresh episode streams, one per repeat.

    Repeat r reseeds everything from config.seed + r: the strategy's
    bandits from one derived stream, episode sampling from another.
    """
    results = []
    for r in range(repeats):
        seed_r = config.seed + r
        strategy = build_strategy(
            kind, engines, replace(config, seed=derive_seed(seed_r, 0)), assignment
        )
        ep_rng = Xoshiro256(derive_seed(seed_r, 1))
        indices = sample_episode_indices(len(tuples), episodes, ep_rng)
        result = replay_episodes(strategy, tuples, indices, learn=learn)
        result.seed = seed_r
        results.append(result)
    return results


def increase_pct(clicks: int, baseline_clicks: int) -> float | None:
    """Percent improvement over a baseline, rounded to two decimals."""
    if baseline_clicks <= 0:
        return None
    return round(100.0 * (clicks - baseline_clicks) / baseline_clicks, 2)


def results_table(
    results_by_strategy: Mapping[str, Sequence[ExperimentResult]], baseline: str
) -> dict:
    """Mean clicks per strategy with percent increase over the baseline."""
    if baseline not in results_by_strategy:
        raise ValueError(f"baseline {baseline!r} is not among the results")
    base_runs = results_by_strategy[baseline]
    base_mean = sum(r.clicks for r in base_runs) / len(base_runs)
    rows = []
    for name in sorted(results_by_strategy):
        runs = results_by_strategy[name]
        mean = sum(r.clicks for r in runs) / len(runs)
        rows.append(
            {
                "strategy": name,
                "episodes": runs[0].episodes,
                "clicks": [r.clicks for r in runs],
                "clicks_mean": mean,
                "increase_pct": increase_pct(mean, base_mean),
            }
        )
    return {"baseline": baseline, "rows": rows}


def enumerate_mixtures(
    engines: Mapping[str, Engine],
    tuples: Sequence[ReplayTuple],
    config: MixtureConfig,
    episodes: int,
    assignments: Iterable[Sequence[str]] | None = None,
    max_assignments: int = 5000,
) -> list[dict]:
    """Score every fixed engine-per-position assignment on one episode stream.

    All assignments see the same sampled episodes, so their click counts
    are directly comparable, and a learned strategy run against the same
    stream (same config.seed) competes on identical data. Fixed lists are
    stateless, so each distinct tuple is filled once and weighted by how
    often it was drawn. Results are sorted best first.
    """
    names = sorted(engines)
    if assignments is None:
        total = len(names) ** config.display_size
        if total > max_assignments:
            raise ValueError(
                f"{total} assignments exceed the cap of {max_assignments}; "
                "pass an explicit assignment list"
            )
        assignments = itertools.product(names, repeat=config.display_size)
    ep_rng = Xoshiro256(derive_seed(config.seed, 1))
    indices = sample_episode_indices(len(tuples), episodes, ep_rng)
    cache = build_suggestion_cache(engines, tuples, indices, config.display_size)
    index_weights = Counter(indices)
    rows = []
    for assignment in assignments:
        strategy = FixedMixtureStrategy(engines, config, assignment)
        clicks = 0
        counts = [0] * (config.display_size + 1)
        for idx, weight in index_weights.items():
            t = tuples[idx]
            displayed = strategy.fill(
                t.prefix, QueryContext(user_id=t.user_id), cache[(t.prefix, t.user_id)]
            )
            c = click_index(displayed, t.query, config.display_size)
            counts[c - 1] += weight
            if c <= config.display_size:
                clicks += weight
        rows.append(
            {
                "assignment": list(assignment),
                "episodes": episodes,
                "clicks": clicks,
                "click_rate": clicks / episodes if episodes else 0.0,
                "position_counts": counts,
            }
        )
    rows.sort(key=lambda row: (-row["clicks"], row["assignment"]))
    return rows


@dataclass
class SyntheticEnvironment:
    """A simulated user: engines to mix plus a per-item click probability."""

    engines: dict[str, Engine]
    prob: Callable[[DisplayedItem, str], float]
    prefixes: tuple[str, ...] = ("q",)

    def __post_init__(self):
        if not self.prefixes:
            raise ValueError("at least one prefix is required")


def make_probability_environment(
    probs: Mapping[str, float],
    decay: Sequence[float],
    display_size: int,
    prefixes: tuple[str, ...] = ("q",),
) -> SyntheticEnvironment:
    """Engines with disjoint suggestion texts and click chance p_e * decay_m."""
    if len(decay) < display_size:
        raise ValueError("decay must cover every display position")
    for name, p in probs.items():
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"click probability for {name!r} must be in [0, 1]")
    engines = {
        name: PatternEngine(
            name, lambda prefix, k, name=name: [f"{prefix}{name}#{r}" for r in range(1, k + 1)]
        )
        for name in probs
    }
    decay = tuple(decay)

    def prob(item: DisplayedItem, prefix: str) -> float:
        return probs[item.engine] * decay[item.position - 1]

    return SyntheticEnvironment(engines=engines, prob=prob, prefixes=prefixes)


def run_synthetic(
    strategy: MixtureStrategy,
    env: SyntheticEnvironment,
    episodes: int,
    rng: Xoshiro256,
    learn: bool = True,
    record_fills: bool = False,
) -> ExperimentResult:
    """Simulate episodes: the user scans top-down and clicks at most once."""
    size = strategy.config.display_size
    counts = [0] * (size + 1)
    clicks = 0
    fills: list[tuple[str, ...]] | None = [] if record_fills else None
    for _ in range(episodes):
        prefix = env.prefixes[rng.randrange(len(env.prefixes))]
        displayed = strategy.fill(prefix)
        clicked = None
        for item in displayed.items:
            if rng.random() < env.prob(item, prefix):
                clicked = item.position
                break
        counts[(clicked or size + 1) - 1] += 1
        if clicked is not None:
            clicks += 1
        if learn:
            strategy.feedback(displayed, clicked)
        if fills is not None:
            fills.append(tuple(item.engine for item in displayed.items))
    return ExperimentResult(
        strategy=strategy.name,
        seed=strategy.config.seed,
        episodes=episodes,
        clicks=clicks,
        position_counts=tuple(counts),
        fills=fills,
    )


def write_json(path: str | Path, doc) -> None:
    """Canonical JSON writer: sorted keys, two-space indent, one trailing newline."""
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def tuples_to_doc(tuples: Sequence[ReplayTuple]) -> dict:
    return {
        "tuples": [[t.prefix, t.query, t.user_id or ""] for t in tuples],
    }


def doc_to_tuples(doc: Mapping) -> list[ReplayTuple]:
    return [
        ReplayTuple(prefix, query, user or None)
        for prefix, query, user in doc["tuples"]
    ]
