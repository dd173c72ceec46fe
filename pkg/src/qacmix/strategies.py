"""Mixture strategies: filling M display positions from several engines.

Every strategy fills positions top to bottom under one hard rule: a text
may appear only once in the list. When an engine is chosen for a position,
it contributes its highest-ranked suggestion not already displayed; an
engine with nothing new to offer is simply unavailable at that position
and receives no penalty for it.

The learned strategies differ along two axes:

  per-position   one bandit per display position (ranked family) versus a
                 single bandit shared by all positions (cascade family)
  explicit       actions are (engine, rank) pairs instead of bare engines,
                 so the bandit can distinguish an engine's first suggestion
                 from its deeper ones

Credit assignment follows the family. Ranked: every displayed position is
updated each episode, success at the clicked position, failure elsewhere
(no click means failure everywhere). Cascade: a click at position c blames
only the positions above it and credits c, positions below c learn
nothing; no click blames every displayed position.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Mapping, Sequence

from .bandit import ActionKey, ThompsonSampler
from .engines import Engine, QueryContext, normalize_prefix
from .rng import Xoshiro256, derive_seed


class FeedbackError(ValueError):
    """Feedback that does not match the displayed list."""


@dataclass(frozen=True)
class MixtureConfig:
    """Shared knobs: list length, Beta prior, and the strategy's seed."""

    display_size: int = 5
    prior: tuple[float, float] = (1.0, 1.0)
    seed: int = 0

    def __post_init__(self):
        if self.display_size < 1:
            raise ValueError("display_size must be at least 1")
        if self.prior[0] <= 0 or self.prior[1] <= 0:
            raise ValueError("prior parameters must be positive")


@dataclass(frozen=True)
class DisplayedItem:
    """One filled slot: which engine's suggestion, at which of its ranks."""

    position: int
    engine: str
    rank: int
    text: str


@dataclass(frozen=True)
class DisplayedList:
    """The suggestion list shown for one prefix; may be shorter than M."""

    prefix: str
    items: tuple[DisplayedItem, ...]

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(item.text for item in self.items)

    def position_of(self, text: str) -> int | None:
        for item in self.items:
            if item.text == text:
                return item.position
        return None


def _next_rank(texts: Sequence[str], used: set[str]) -> int | None:
    """Smallest 1-based rank whose text is not yet displayed, if any."""
    for i, text in enumerate(texts):
        if text not in used:
            return i + 1
    return None


class MixtureStrategy(ABC):
    """Fill a list for a prefix, then learn from where the click landed."""

    name: str
    config: MixtureConfig
    engines: Mapping[str, Engine]
    samplers: list[ThompsonSampler]

    @abstractmethod
    def fill(
        self,
        prefix: str,
        context: QueryContext | None = None,
        suggestions: Mapping[str, Sequence[str]] | None = None,
    ) -> DisplayedList:
        """Build the displayed list. A prefetched suggestions table
        (engine name -> ranked texts) skips the engine calls; replay uses
        that to share one fetch across many strategies."""

    def feedback(self, displayed: DisplayedList, clicked_position: int | None) -> None:
        """Default: validate and learn nothing (baselines)."""
        self._check_click(displayed, clicked_position)

    def _fetch(self, prefix, context, suggestions):
        if suggestions is not None:
            return suggestions
        m = self.config.display_size
        return {
            name: self.engines[name].suggest(prefix, m, context)
            for name in self._engine_names
        }

    @property
    def _engine_names(self) -> list[str]:
        return sorted(self.engines)

    def _check_click(self, displayed: DisplayedList, clicked_position: int | None):
        if clicked_position is None:
            return
        filled = len(displayed.items)
        if not 1 <= clicked_position <= filled:
            raise FeedbackError(
                f"clicked position {clicked_position} but {filled} items were displayed"
            )

    def snapshot(self) -> dict:
        return {
            "kind": self.name,
            "display_size": self.config.display_size,
            "prior": list(self.config.prior),
            "seed": self.config.seed,
            "samplers": [s.snapshot() for s in self.samplers],
        }

    def load_snapshot(self, doc: Mapping) -> None:
        if doc.get("kind") != self.name:
            raise ValueError(f"snapshot is for {doc.get('kind')!r}, not {self.name!r}")
        samplers = [ThompsonSampler.restore(d) for d in doc["samplers"]]
        if len(samplers) != len(self.samplers):
            raise ValueError(
                f"snapshot has {len(samplers)} bandits, expected {len(self.samplers)}"
            )
        self.samplers = samplers


class LearnedMixtureStrategy(MixtureStrategy):
    """The four bandit-driven strategies, selected by two flags."""

    def __init__(
        self,
        engines: Mapping[str, Engine],
        config: MixtureConfig,
        per_position: bool,
        explicit: bool,
        name: str,
    ):
        if not engines:
            raise ValueError("at least one engine is required")
        self.engines = dict(engines)
        self.config = config
        self.per_position = per_position
        self.explicit = explicit
        self.name = name
        initial = [] if explicit else [ActionKey(e) for e in self._engine_names]
        if per_position:
            self.samplers = [
                ThompsonSampler(initial, config.prior, derive_seed(config.seed, m))
                for m in range(config.display_size)
            ]
        else:
            self.samplers = [ThompsonSampler(initial, config.prior, config.seed)]

    def _sampler(self, position: int) -> ThompsonSampler:
        return self.samplers[position - 1] if self.per_position else self.samplers[0]

    def _key(self, item: DisplayedItem) -> ActionKey:
        return ActionKey(item.engine, item.rank if self.explicit else None)

    def fill(self, prefix, context=None, suggestions=None):
        prefix = normalize_prefix(prefix)
        table = self._fetch(prefix, context, suggestions)
        used: set[str] = set()
        items: list[DisplayedItem] = []
        for position in range(1, self.config.display_size + 1):
            candidates: dict[ActionKey, tuple[int, str]] = {}
            for engine in self._engine_names:
                texts = table.get(engine, ())
                rank = _next_rank(texts, used)
                if rank is None or rank > self.config.display_size:
                    continue
                key = ActionKey(engine, rank if self.explicit else None)
                candidates[key] = (rank, texts[rank - 1])
            if not candidates:
                break
            chosen = self._sampler(position).select(candidates)
            rank, text = candidates[chosen]
            items.append(DisplayedItem(position, chosen.engine, rank, text))
            used.add(text)
        return DisplayedList(prefix=prefix, items=tuple(items))

    def feedback(self, displayed, clicked_position):
        self._check_click(displayed, clicked_position)
        for item in displayed.items:
            sampler = self._sampler(item.position)
            key = self._key(item)
            if self.per_position:
                sampler.update(key, 1 if item.position == clicked_position else 0)
            else:
                if clicked_position is None:
                    sampler.update(key, 0)
                elif item.position < clicked_position:
                    sampler.update(key, 0)
                elif item.position == clicked_position:
                    sampler.update(key, 1)
                # Positions below the click teach nothing: the user never
                # considered them, so neither success nor failure applies.


class FixedMixtureStrategy(MixtureStrategy):
    """A hand-chosen engine per position; no learning.

    Exhausted assignment entries are skipped and later entries slide up,
    so the displayed positions stay consecutive. An assignment naming one
    engine five times is exactly that engine's top five suggestions.
    """

    def __init__(
        self,
        engines: Mapping[str, Engine],
        config: MixtureConfig,
        assignment: Sequence[str],
        name: str = "fixed",
    ):
        if len(assignment) != config.display_size:
            raise ValueError(
                f"assignment names {len(assignment)} engines, "
                f"display_size is {config.display_size}"
            )
        unknown = set(assignment) - set(engines)
        if unknown:
            raise ValueError(f"assignment references unknown engines: {sorted(unknown)}")
        self.engines = dict(engines)
        self.config = config
        self.assignment = tuple(assignment)
        self.name = name
        self.samplers = []

    def fill(self, prefix, context=None, suggestions=None):
        prefix = normalize_prefix(prefix)
        table = self._fetch(prefix, context, suggestions)
        used: set[str] = set()
        items: list[DisplayedItem] = []
        for engine in self.assignment:
            rank = _next_rank(table.get(engine, ()), used)
            if rank is None or rank > self.config.display_size:
                continue
            text = table[engine][rank - 1]
            items.append(DisplayedItem(len(items) + 1, engine, rank, text))
            used.add(text)
        return DisplayedList(prefix=prefix, items=tuple(items))


class RandomMixtureStrategy(MixtureStrategy):
    """Uniform engine choice at every position; the no-learning control."""

    def __init__(
        self,
        engines: Mapping[str, Engine],
        config: MixtureConfig,
        name: str = "random",
    ):
        if not engines:
            raise ValueError("at least one engine is required")
        self.engines = dict(engines)
        self.config = config
        self.name = name
        self.samplers = []
        self.rng = Xoshiro256(config.seed)

    def fill(self, prefix, context=None, suggestions=None):
        prefix = normalize_prefix(prefix)
        table = self._fetch(prefix, context, suggestions)
        used: set[str] = set()
        items: list[DisplayedItem] = []
        for position in range(1, self.config.display_size + 1):
            available: list[tuple[str, int]] = []
            for engine in self._engine_names:
                rank = _next_rank(table.get(engine, ()), used)
                if rank is not None and rank <= self.config.display_size:
                    available.append((engine, rank))
            if not available:
                break
            engine, rank = self.rng.choice(available)
            text = table[engine][rank - 1]
            items.append(DisplayedItem(position, engine, rank, text))
            used.add(text)
        return DisplayedList(prefix=prefix, items=tuple(items))

    def snapshot(self):
        doc = super().snapshot()
        doc["rng_state"] = list(self.rng.getstate())
        return doc

    def load_snapshot(self, doc):
        super().load_snapshot(doc)
        self.rng.setstate(tuple(doc["rng_state"]))


LEARNED_KINDS = {
    "ranked": (True, False),
    "cascade": (False, False),
    "ranked_explicit": (True, True),
    "cascade_explicit": (False, True),
}

STRATEGY_KINDS = tuple(LEARNED_KINDS) + ("fixed", "single", "random")


def build_strategy(
    kind: str,
    engines: Mapping[str, Engine],
    config: MixtureConfig,
    assignment: Sequence[str] | None = None,
) -> MixtureStrategy:
    """Construct a strategy by kind name.

    "fixed" needs an assignment of display_size engine names; "single"
    needs exactly one name and repeats it across the list.
    """
    if kind in LEARNED_KINDS:
        per_position, explicit = LEARNED_KINDS[kind]
        return LearnedMixtureStrategy(engines, config, per_position, explicit, kind)
    if kind == "fixed":
        if not assignment:
            raise ValueError("fixed strategy requires an assignment")
        return FixedMixtureStrategy(engines, config, assignment)
    if kind == "single":
        if not assignment or len(assignment) != 1:
            raise ValueError("single strategy takes exactly one engine name")
        full = [assignment[0]] * config.display_size
        return FixedMixtureStrategy(engines, config, full, name="single")
    if kind == "random":
        return RandomMixtureStrategy(engines, config)
    raise ValueError(f"unknown strategy kind {kind!r}; choose from {STRATEGY_KINDS}")
