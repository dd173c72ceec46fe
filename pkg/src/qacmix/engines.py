"""Suggestion engines: ranked completion candidates for a query prefix.

Four engines are built from a query log, each a deliberately simple,
self-contained source of candidates:

  popularity    corpus-wide query frequency
  recency       frequency discounted by exponential time decay
  user_history  the requesting user's own past queries plus session context
  dictionary    completes the last token of the prefix from a word lexicon

All engines share one contract: suggest(prefix, k, context) returns up to k
distinct texts, every one an extension of the normalized prefix, ranked by
engine-specific score descending with ties broken by text ascending.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .trie import WeightedTrie


@dataclass(frozen=True)
class QueryRecord:
    """One query-log line: when, who, what."""

    timestamp: float
    user_id: str
    query: str


@dataclass(frozen=True)
class QueryContext:
    """Per-request context available to engines at suggest time."""

    user_id: str | None = None
    session_queries: tuple[str, ...] = ()


def normalize_query(text: str) -> str:
    """Lowercase, collapse runs of whitespace to single spaces, trim both ends."""
    return " ".join(text.lower().split())


def normalize_prefix(text: str) -> str:
    """Like normalize_query but keeps one trailing space if the input had one.

    Prefixes are character slices of normalized queries, so a trailing space
    is meaningful: it says the last word is complete.
    """
    core = normalize_query(text)
    if core and text != text.rstrip():
        return core + " "
    return core


class Engine(ABC):
    """A named source of ranked completions for a prefix."""

    name: str

    @abstractmethod
    def suggest(
        self, prefix: str, k: int, context: QueryContext | None = None
    ) -> list[str]:
        """Up to k distinct completions of the prefix, best first."""


class PopularityEngine(Engine):
    """Ranks completions by how often the full query appears in the log."""

    def __init__(self, records: Iterable[QueryRecord], name: str = "popularity"):
        self.name = name
        counts = Counter(normalize_query(r.query) for r in records)
        counts.pop("", None)
        self._trie = WeightedTrie()
        for query, count in counts.items():
            self._trie.insert(query, float(count))

    def suggest(self, prefix, k, context=None):
        if k <= 0:
            return []
        return [text for text, _ in self._trie.top_k(normalize_prefix(prefix), k)]


class RecencyEngine(Engine):
    """Popularity with exponential time decay: recent queries count for more.

    Each occurrence contributes exp(-lambda * age) where age is seconds
    before reference_time and lambda is derived from the half life. An
    infinite half life reduces to plain popularity.
    """

    def __init__(
        self,
        records: Iterable[QueryRecord],
        half_life_days: float = 7.0,
        reference_time: float | None = None,
        name: str = "recency",
    ):
        if half_life_days <= 0:
            raise ValueError("half_life_days must be positive")
        self.name = name
        self.half_life_days = half_life_days
        records = list(records)
        if reference_time is None:
            reference_time = max((r.timestamp for r in records), default=0.0)
        self.reference_time = reference_time
        rate = math.log(2.0) / (half_life_days * 86400.0)
        weights: dict[str, float] = defaultdict(float)
        for r in records:
            query = normalize_query(r.query)
            if not query:
                continue
            age = max(reference_time - r.timestamp, 0.0)
            weights[query] += math.exp(-rate * age)
        self._trie = WeightedTrie()
        for query, weight in weights.items():
            self._trie.insert(query, weight)

    def suggest(self, prefix, k, context=None):
        if k <= 0:
            return []
        return [text for text, _ in self._trie.top_k(normalize_prefix(prefix), k)]


class UserHistoryEngine(Engine):
    """Ranks the requesting user's own past queries; no cross-user backoff.

    Session queries passed in the context are counted once each on top of
    the stored history, so freshly issued queries surface immediately. A
    user with no history and no session gets nothing.
    """

    def __init__(self, records: Iterable[QueryRecord], name: str = "user_history"):
        self.name = name
        self._by_user: dict[str, Counter] = defaultdict(Counter)
        for r in records:
            query = normalize_query(r.query)
            if query:
                self._by_user[r.user_id][query] += 1

    def suggest(self, prefix, k, context=None):
        if k <= 0 or context is None or context.user_id is None:
            return []
        counts = Counter(self._by_user.get(context.user_id, ()))
        for raw in context.session_queries:
            query = normalize_query(raw)
            if query:
                counts[query] += 1
        prefix = normalize_prefix(prefix)
        matches = [(q, c) for q, c in counts.items() if q.startswith(prefix)]
        matches.sort(key=lambda qc: (-qc[1], qc[0]))
        return [q for q, _ in matches[:k]]


class DictionaryEngine(Engine):
    """Completes the last, still-unfinished token from a word lexicon.

    The lexicon is the set of whitespace tokens in the log with occurrence
    counts. The suggestion echoes the whole prefix with its last token
    completed; a prefix ending in a space has no token to complete.
    """

    def __init__(self, records: Iterable[QueryRecord], name: str = "dictionary"):
        self.name = name
        counts: Counter = Counter()
        for r in records:
            counts.update(normalize_query(r.query).split())
        self._words = WeightedTrie()
        for word, count in counts.items():
            self._words.insert(word, float(count))

    def suggest(self, prefix, k, context=None):
        if k <= 0:
            return []
        prefix = normalize_prefix(prefix)
        if not prefix or prefix.endswith(" "):
            return []
        head, _, last = prefix.rpartition(" ")
        out = []
        for word, _ in self._words.top_k(last, k):
            out.append(f"{head} {word}" if head else word)
        return out


class StaticEngine(Engine):
    """Fixed prefix -> suggestions table; the workhorse of deterministic tests."""

    def __init__(self, name: str, table: Mapping[str, Sequence[str]]):
        self.name = name
        self._table = {}
        for prefix, suggestions in table.items():
            norm = normalize_prefix(prefix)
            texts = [normalize_query(s) for s in suggestions]
            for text in texts:
                if not text.startswith(norm):
                    raise ValueError(
                        f"suggestion {text!r} does not extend prefix {norm!r}"
                    )
            if len(set(texts)) != len(texts):
                raise ValueError(f"duplicate suggestions for prefix {norm!r}")
            self._table[norm] = texts

    def suggest(self, prefix, k, context=None):
        if k <= 0:
            return []
        return list(self._table.get(normalize_prefix(prefix), ())[:k])


@dataclass
class PatternEngine(Engine):
    """Suggestions computed by a callable; for synthetic environments."""

    name: str
    fn: Callable[[str, int], Sequence[str]]

    def suggest(self, prefix, k, context=None):
        if k <= 0:
            return []
        return list(self.fn(normalize_prefix(prefix), k))[:k]


def build_engines(
    records: Iterable[QueryRecord],
    half_life_days: float = 7.0,
    reference_time: float | None = None,
) -> dict[str, Engine]:
    """The standard four log-built engines, keyed by name."""
    records = list(records)
    engines = [
        PopularityEngine(records),
        RecencyEngine(
            records, half_life_days=half_life_days, reference_time=reference_time
        ),
        UserHistoryEngine(records),
        DictionaryEngine(records),
    ]
    return {e.name: e for e in engines}
