"""Beta-Bernoulli Thompson sampling over a dynamic set of actions.

Actions are either bare engine ids or (engine, rank) pairs; posteriors are
conjugate Beta distributions updated with one-unit success/failure outcomes.
Selection draws one posterior sample per candidate and returns the argmax,
with exact ties broken toward the lowest (engine, rank) key so a seeded
sampler is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .rng import Xoshiro256

SNAPSHOT_FORMAT = "bandit-state-v1"


class NoActionsError(ValueError):
    """select() was called with no candidate actions."""


@dataclass(frozen=True)
class ActionKey:
    """A selectable action: an engine, optionally pinned to a suggestion rank.

    Rank-free keys drive the plain mixture strategies; ranked keys the
    explicit variants. Equality is structural.
    """

    engine: str
    rank: int | None = None

    def __post_init__(self):
        if self.rank is not None and self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")

    @property
    def sort_key(self) -> tuple[str, int]:
        return (self.engine, 0 if self.rank is None else self.rank)


@dataclass
class BetaPosterior:
    """Beta(alpha, beta) posterior for one action's click probability."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("Beta parameters must be positive")

    def update(self, outcome: int) -> None:
        if outcome == 1:
            self.alpha += 1.0
        else:
            self.beta += 1.0

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)


def pick_best(scored: Iterable[tuple[ActionKey, float]]) -> ActionKey:
    """Argmax over (key, sampled value); ties go to the lowest sort key."""
    best_key = None
    best_value = 0.0
    for key, value in scored:
        if (
            best_key is None
            or value > best_value
            or (value == best_value and key.sort_key < best_key.sort_key)
        ):
            best_key, best_value = key, value
    if best_key is None:
        raise NoActionsError("no candidate actions to choose from")
    return best_key


class ThompsonSampler:
    """Posterior state plus a seeded generator; one instance per bandit.

    Actions never listed at construction are created lazily at the prior the
    first time they are selected over or updated, which is how the explicit
    strategies discover (engine, rank) pairs mid-run. Single-writer: callers
    must serialize select/update on one instance.
    """

    def __init__(
        self,
        actions: Iterable[ActionKey] = (),
        prior: tuple[float, float] = (1.0, 1.0),
        seed: int = 0,
    ):
        a0, b0 = float(prior[0]), float(prior[1])
        if a0 <= 0 or b0 <= 0:
            raise ValueError(f"prior parameters must be positive, got ({a0}, {b0})")
        self.prior = (a0, b0)
        self.seed = seed
        self.rng = Xoshiro256(seed)
        self.posteriors: dict[ActionKey, BetaPosterior] = {}
        for key in sorted(set(actions), key=lambda k: k.sort_key):
            self.posteriors[key] = BetaPosterior(a0, b0)

    def posterior(self, key: ActionKey) -> BetaPosterior:
        """The key's posterior, created at the prior on first sight."""
        post = self.posteriors.get(key)
        if post is None:
            post = BetaPosterior(*self.prior)
            self.posteriors[key] = post
        return post

    def update(self, key: ActionKey, outcome: int) -> None:
        if outcome not in (0, 1):
            raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
        self.posterior(key).update(outcome)

    def select(self, available: Iterable[ActionKey]) -> ActionKey:
        """Thompson draw: sample every candidate's posterior, take the argmax.

        Candidates are sampled in sorted key order so the stream consumption
        is reproducible regardless of the caller's collection type.
        """
        keys = sorted(set(available), key=lambda k: k.sort_key)
        if not keys:
            raise NoActionsError("select() needs at least one available action")
        scored = []
        for key in keys:
            post = self.posterior(key)
            scored.append((key, self.rng.beta(post.alpha, post.beta)))
        return pick_best(scored)

    def pulls(self, key: ActionKey) -> float:
        """Observed update count for the key (posterior mass beyond the prior)."""
        post = self.posteriors.get(key)
        if post is None:
            return 0.0
        return post.alpha + post.beta - self.prior[0] - self.prior[1]

    def snapshot(self) -> dict:
        """Serializable state: prior, seed, generator words, posterior table."""
        records = [
            {"engine": k.engine, "rank": k.rank, "alpha": p.alpha, "beta": p.beta}
            for k, p in sorted(self.posteriors.items(), key=lambda kv: kv[0].sort_key)
        ]
        return {
            "format": SNAPSHOT_FORMAT,
            "prior": list(self.prior),
            "seed": self.seed,
            "rng_state": list(self.rng.getstate()),
            "posteriors": records,
        }

    @classmethod
    def restore(cls, doc: Mapping) -> "ThompsonSampler":
        """Rebuild a bit-identical sampler from a snapshot() document."""
        if doc.get("format") != SNAPSHOT_FORMAT:
            raise ValueError(f"unsupported snapshot format: {doc.get('format')!r}")
        state = cls(prior=tuple(doc["prior"]), seed=int(doc["seed"]))
        state.rng.setstate(tuple(doc["rng_state"]))
        for rec in doc["posteriors"]:
            key = ActionKey(rec["engine"], rec["rank"])
            state.posteriors[key] = BetaPosterior(float(rec["alpha"]), float(rec["beta"]))
        return state
