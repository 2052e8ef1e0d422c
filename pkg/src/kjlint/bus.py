"""Synchronous publish/subscribe bus with priority ordering and label filters."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import Any

log = logging.getLogger(__name__)

MAX_DEPTH = 64

SubscriptionId = int
Handler = Callable[["Message"], Any]
Predicate = Callable[["Message"], bool]


class BusOverflow(RuntimeError):
    """Handlers re-published more than MAX_DEPTH levels deep."""


@dataclass(frozen=True)
class Message:
    kind: str
    payload: Any = None
    labels: frozenset[str] = frozenset()
    origin: str = ""

    def __post_init__(self) -> None:
        if not self.kind:
            raise ValueError("message kind must be non-empty")
        object.__setattr__(self, "labels", frozenset(self.labels))


@dataclass(frozen=True)
class Subscription:
    id: SubscriptionId
    kind: str
    priority: int
    handler: Handler = field(compare=False)
    label_filter: frozenset[str] | None = None
    predicate: Predicate | None = field(default=None, compare=False)

    def accepts(self, msg: Message) -> str | None:
        """None when ``msg`` should be delivered, else the skip reason."""
        if self.label_filter is not None and not self.label_filter <= msg.labels:
            return "label-mismatch"
        if self.predicate is not None and not self.predicate(msg):
            return "predicate-mismatch"
        return None


@dataclass
class DeliveryReport:
    delivered_to: list[SubscriptionId] = field(default_factory=list)
    skipped: list[tuple[SubscriptionId, str]] = field(default_factory=list)
    failures: list[tuple[SubscriptionId, str]] = field(default_factory=list)


class MessageBus:
    def __init__(self) -> None:
        self._subs: dict[SubscriptionId, Subscription] = {}
        self._ids = itertools.count(1)
        self._depth = 0

    def subscribe(self, kind: str, handler: Handler, priority: int = 0,
                  label_filter: Iterable[str] | None = None,
                  predicate: Predicate | None = None) -> SubscriptionId:
        if not kind:
            raise ValueError("subscription kind must be non-empty")
        sid = next(self._ids)
        labels = frozenset(label_filter) if label_filter is not None else None
        self._subs[sid] = Subscription(sid, kind, priority, handler, labels, predicate)
        return sid

    def unsubscribe(self, sid: SubscriptionId) -> bool:
        return self._subs.pop(sid, None) is not None

    def subscriptions(self, kind: str) -> list[Subscription]:
        """Active subscriptions for ``kind`` in delivery order (ids grow with registration)."""
        return sorted((s for s in self._subs.values() if s.kind == kind),
                      key=lambda s: (s.priority, s.id))

    def publish(self, msg: Message) -> DeliveryReport:
        if self._depth >= MAX_DEPTH:
            raise BusOverflow(f"re-entrant publish deeper than {MAX_DEPTH} (kind {msg.kind!r})")
        report = DeliveryReport()
        snapshot = self.subscriptions(msg.kind)
        self._depth += 1
        try:
            for sub in snapshot:
                reason = sub.accepts(msg)
                if reason is not None:
                    report.skipped.append((sub.id, reason))
                    continue
                report.delivered_to.append(sub.id)
                try:
                    sub.handler(msg)
                except BusOverflow:
                    raise
                except Exception as exc:  # isolate one failing handler from the rest
                    log.warning("handler %d for %r failed: %s", sub.id, msg.kind, exc)
                    report.failures.append((sub.id, f"{type(exc).__name__}: {exc}"))
        finally:
            self._depth -= 1
        return report
