"""HTTP serving: suggestions out, exactly-once click feedback in.

Every /suggest response carries a one-shot ticket. The caller reports the
outcome once through /feedback (a position, or null for no click); a
ticket that ages past the TTL is treated as an abandoned list, which is
itself an observation: no click. The expire_updates switch controls
whether those abandoned lists update the bandits or are dropped silently.

All strategy access happens under one lock: a single writer mutates
posterior state, so concurrent requests serialize.
"""

from __future__ import annotations

import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .engines import QueryContext
from .strategies import DisplayedList, FeedbackError, MixtureStrategy

FINISHED_TOKENS_KEPT = 10_000


class TicketError(KeyError):
    """Base for feedback-token problems; status is the HTTP mapping."""

    status = 404


class UnknownTicketError(TicketError):
    status = 404


class UsedTicketError(TicketError):
    status = 409


class ExpiredTicketError(TicketError):
    status = 410


@dataclass
class EpisodeTicket:
    token: str
    displayed: DisplayedList
    created_at: float


class SuggestService:
    """One strategy behind a ticket ledger and a writer lock."""

    def __init__(
        self,
        strategy: MixtureStrategy,
        ttl_seconds: float = 120.0,
        expire_updates: bool = True,
        clock: Callable[[], float] = time.monotonic,
    ):
        if ttl_seconds <= 0:
            raise ValueError("ttl_seconds must be positive")
        self.strategy = strategy
        self.ttl_seconds = ttl_seconds
        self.expire_updates = expire_updates
        self.clock = clock
        self._lock = threading.Lock()
        self._tickets: dict[str, EpisodeTicket] = {}
        self._finished: OrderedDict[str, str] = OrderedDict()
        self._served = 0
        self._clicks = 0
        self._no_clicks = 0
        self._expired = 0

    def suggest(self, prefix: str, user: str | None = None) -> dict:
        with self._lock:
            self._expire_stale()
            displayed = self.strategy.fill(prefix, QueryContext(user_id=user))
            token = str(uuid.uuid4())
            self._tickets[token] = EpisodeTicket(token, displayed, self.clock())
            self._served += 1
            return {
                "token": token,
                "prefix": displayed.prefix,
                "items": [
                    {
                        "position": item.position,
                        "engine": item.engine,
                        "rank": item.rank,
                        "text": item.text,
                    }
                    for item in displayed.items
                ],
            }

    def feedback(self, token: str, position: int | None) -> dict:
        with self._lock:
            self._expire_stale()
            ticket = self._tickets.pop(token, None)
            if ticket is None:
                state = self._finished.get(token)
                if state == "done":
                    raise UsedTicketError(token)
                if state == "expired":
                    raise ExpiredTicketError(token)
                raise UnknownTicketError(token)
            try:
                self.strategy.feedback(ticket.displayed, position)
            except FeedbackError:
                # Invalid position: the ticket stays open for a corrected call.
                self._tickets[token] = ticket
                raise
            self._mark(token, "done")
            if position is None:
                self._no_clicks += 1
            else:
                self._clicks += 1
            return {"token": token, "applied": True, "position": position}

    def stats(self) -> dict:
        with self._lock:
            self._expire_stale()
            bandits = []
            for i, sampler in enumerate(self.strategy.samplers):
                actions = [
                    {
                        "engine": key.engine,
                        "rank": key.rank,
                        "alpha": post.alpha,
                        "beta": post.beta,
                        "mean": post.mean,
                        "pulls": sampler.pulls(key),
                    }
                    for key, post in sorted(
                        sampler.posteriors.items(), key=lambda kv: kv[0].sort_key
                    )
                ]
                position = i + 1 if len(self.strategy.samplers) > 1 else None
                bandits.append({"position": position, "actions": actions})
            return {
                "strategy": self.strategy.name,
                "display_size": self.strategy.config.display_size,
                "engines": sorted(self.strategy.engines),
                "served": self._served,
                "clicks": self._clicks,
                "no_clicks": self._no_clicks,
                "expired": self._expired,
                "open_tickets": len(self._tickets),
                "ttl_seconds": self.ttl_seconds,
                "expire_updates": self.expire_updates,
                "bandits": bandits,
            }

    def snapshot(self) -> dict:
        with self._lock:
            return self.strategy.snapshot()

    def restore(self, doc: dict) -> None:
        """Load posterior state; open tickets refer to dead state, so drop them."""
        with self._lock:
            self.strategy.load_snapshot(doc)
            for token in self._tickets:
                self._mark(token, "expired")
            self._tickets.clear()

    def _expire_stale(self) -> None:
        now = self.clock()
        stale = [
            token
            for token, ticket in self._tickets.items()
            if now - ticket.created_at > self.ttl_seconds
        ]
        for token in stale:
            ticket = self._tickets.pop(token)
            if self.expire_updates:
                self.strategy.feedback(ticket.displayed, None)
            self._expired += 1
            self._mark(token, "expired")

    def _mark(self, token: str, state: str) -> None:
        self._finished[token] = state
        while len(self._finished) > FINISHED_TOKENS_KEPT:
            self._finished.popitem(last=False)


class FeedbackBody(BaseModel):
    token: str
    position: int | None = None


def create_app(service: SuggestService, static_dir: str | None = None) -> FastAPI:
    """API routes plus, optionally, the web client as static files at /.

    CORS is wide open: the client may be served from any static host and
    the API carries no credentials.
    """
    app = FastAPI(title="qacmix suggest service")
    app.state.service = service
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/suggest")
    def suggest(prefix: str = Query(""), user: str | None = Query(None)):
        return service.suggest(prefix, user)

    @app.post("/feedback")
    def feedback(body: FeedbackBody):
        try:
            return service.feedback(body.token, body.position)
        except TicketError as err:
            raise HTTPException(
                status_code=err.status, detail=f"ticket {body.token}: {type(err).__name__}"
            ) from err
        except FeedbackError as err:
            raise HTTPException(status_code=422, detail=str(err)) from err

    @app.get("/stats")
    def stats():
        return service.stats()

    @app.post("/admin/snapshot")
    def snapshot():
        return service.snapshot()

    @app.post("/admin/restore")
    def restore(doc: dict):
        try:
            service.restore(doc)
        except ValueError as err:
            raise HTTPException(status_code=400, detail=str(err)) from err
        return {"restored": True}

    if static_dir is not None:
        # mounted last so the API routes above keep precedence
        app.mount("/", StaticFiles(directory=static_dir, html=True))

    return app
