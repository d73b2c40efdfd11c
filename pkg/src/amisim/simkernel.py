"""Deterministic discrete-event kernel and message bus.

Nodes (meters, Aggregators, the head-end) register a handler and exchange
messages over explicitly declared links. Time is integer simulated seconds.
All randomness flows from a single master seed, forked per consumer by a
stable label, so runs with the same (scenario, seed) replay identically.
"""

from __future__ import annotations

import hashlib
import heapq
import random
from dataclasses import dataclass, field
from typing import Callable

from .errors import InvalidDirection, NoRoute, PastEvent

# Message kinds and the node-role pairs each kind may travel between.
READING_BROADCAST = "ReadingBroadcast"
REPORT = "Report"
PASSTHRU_READ_REQUEST = "PassthruReadRequest"
PASSTHRU_READ_RESPONSE = "PassthruReadResponse"
CONNECT_COMMAND = "ConnectCommand"
COMMAND_ACK = "CommandAck"

ROLE_METER = "meter"
ROLE_AGGREGATOR = "aggregator"
ROLE_HEADEND = "headend"
ROLE_DRIVER = "driver"  # internal tick sources; never a message endpoint

ALLOWED_FLOWS: dict[str, frozenset[tuple[str, str]]] = {
    READING_BROADCAST: frozenset({(ROLE_METER, ROLE_AGGREGATOR)}),
    REPORT: frozenset({(ROLE_AGGREGATOR, ROLE_HEADEND)}),
    PASSTHRU_READ_REQUEST: frozenset({(ROLE_HEADEND, ROLE_AGGREGATOR)}),
    PASSTHRU_READ_RESPONSE: frozenset({(ROLE_AGGREGATOR, ROLE_HEADEND)}),
    CONNECT_COMMAND: frozenset(
        {(ROLE_HEADEND, ROLE_AGGREGATOR), (ROLE_AGGREGATOR, ROLE_METER)}
    ),
    COMMAND_ACK: frozenset(
        {(ROLE_METER, ROLE_AGGREGATOR), (ROLE_AGGREGATOR, ROLE_HEADEND)}
    ),
}


def derive_seed(master: int, label: str) -> int:
    """Derive a child seed from the master seed and a stable label.

    Uses SHA-256 so the result is identical across processes and platforms
    (unlike the built-in ``hash``). Adding a new consumer label never
    perturbs the streams of existing consumers.
    """
    digest = hashlib.sha256(f"{master}|{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class SimClock:
    """Simulation time in whole seconds; advances only via event processing."""

    now: int = 0


@dataclass(frozen=True)
class LinkProfile:
    """Delivery delay of one directed link.

    ``latency_s`` is a fixed delay; ``jitter_s`` is the maximum of a seeded
    uniform additive delay. With ``jitter_s == 0`` delivery is per-link FIFO.
    """

    latency_s: int = 1
    jitter_s: int = 0

    def __post_init__(self):
        if self.latency_s < 0 or self.jitter_s < 0:
            raise ValueError("latency_s and jitter_s must be non-negative")


@dataclass(frozen=True)
class Message:
    kind: str
    body: object = None


@dataclass(frozen=True)
class Tick:
    """Timer payload targeted at a node; not a bus message."""

    tag: str


@dataclass(order=True, slots=True)
class Event:
    fire_at: int
    seq: int
    target: str = field(compare=False)
    payload: object = field(compare=False)
    source: str | None = field(compare=False, default=None)


@dataclass
class _Node:
    node_id: str
    role: str
    handler: Callable


class Simulation:
    """Single-threaded deterministic event loop over registered nodes.

    Handlers are invoked as ``handler(sim, now, payload, source)`` where
    ``payload`` is a :class:`Message` for deliveries or a :class:`Tick` for
    timers, and ``source`` is the sending node id (``None`` for timers).
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.clock = SimClock(0)
        self._queue: list[Event] = []
        self._next_seq = 0
        self._nodes: dict[str, _Node] = {}
        self._links: dict[tuple[str, str], LinkProfile] = {}
        self._rngs: dict[str, random.Random] = {}
        self.sent_count = 0
        self.delivered_count = 0
        self.log_sinks: list[Callable[[str], None]] = []

    # -- topology ----------------------------------------------------------

    def add_node(self, node_id: str, role: str, handler: Callable) -> None:
        if node_id in self._nodes:
            raise ValueError(f"duplicate node id {node_id!r}")
        self._nodes[node_id] = _Node(node_id, role, handler)

    def add_link(self, frm: str, to: str, profile: LinkProfile) -> None:
        for node_id in (frm, to):
            if node_id not in self._nodes:
                raise ValueError(f"unknown node {node_id!r}")
        self._links[(frm, to)] = profile

    def has_link(self, frm: str, to: str) -> bool:
        return (frm, to) in self._links

    def role_of(self, node_id: str) -> str:
        return self._nodes[node_id].role

    # -- randomness --------------------------------------------------------

    def rng_for(self, label: str) -> random.Random:
        """Return the per-label RNG stream, created on first use."""
        rng = self._rngs.get(label)
        if rng is None:
            rng = random.Random(derive_seed(self.seed, label))
            self._rngs[label] = rng
        return rng

    # -- scheduling --------------------------------------------------------

    @property
    def pending_count(self) -> int:
        return len(self._queue)

    def schedule(self, fire_at: int, target: str, payload: object,
                 source: str | None = None) -> Event:
        """Enqueue an event; equal-time events dequeue in enqueue order."""
        if fire_at < self.clock.now:
            raise PastEvent(
                f"fire_at {fire_at} is before clock {self.clock.now}"
            )
        if target not in self._nodes:
            raise ValueError(f"unknown node {target!r}")
        event = Event(fire_at, self._next_seq, target, payload, source)
        self._next_seq += 1
        heapq.heappush(self._queue, event)
        return event

    def send(self, frm: str, to: str, msg: Message) -> Event:
        """Schedule delivery of ``msg`` over the (frm, to) link.

        Raises NoRoute when the link is absent and InvalidDirection when the
        message kind may not flow between the two node roles.
        """
        profile = self._links.get((frm, to))
        if profile is None:
            raise NoRoute(f"no link {frm!r} -> {to!r}")
        flow = (self._nodes[frm].role, self._nodes[to].role)
        if flow not in ALLOWED_FLOWS.get(msg.kind, frozenset()):
            raise InvalidDirection(
                f"{msg.kind} may not flow {flow[0]} -> {flow[1]}"
            )
        delay = profile.latency_s
        if profile.jitter_s > 0:
            delay += self.rng_for(f"jitter:{frm}->{to}").randint(
                0, profile.jitter_s
            )
        self.sent_count += 1
        return self.schedule(self.clock.now + delay, to, msg, source=frm)

    # -- execution ---------------------------------------------------------

    def run_until(self, t_end: int) -> int:
        """Process all events with fire_at <= t_end in (fire_at, seq) order.

        The clock ends at exactly ``t_end`` whether or not events remain
        beyond it. Returns the number of events processed.
        """
        if t_end < self.clock.now:
            raise ValueError(f"t_end {t_end} is before clock {self.clock.now}")
        processed = 0
        queue = self._queue
        while queue and queue[0].fire_at <= t_end:
            event = heapq.heappop(queue)
            self.clock.now = event.fire_at
            payload = event.payload
            if isinstance(payload, Message):
                self.delivered_count += 1
                if self.log_sinks:
                    record = (
                        f"t={event.fire_at} seq={event.seq} "
                        f"kind={payload.kind} from={event.source} "
                        f"to={event.target}"
                    )
                    for sink in self.log_sinks:
                        sink(record)
            self._nodes[event.target].handler(
                self, event.fire_at, payload, event.source
            )
            processed += 1
        self.clock.now = t_end
        return processed


class EventLogDigest:
    """SHA-256 over the newline-delimited event log, used as a run digest."""

    def __init__(self):
        self._hash = hashlib.sha256()

    def sink(self, record: str) -> None:
        self._hash.update(record.encode())
        self._hash.update(b"\n")

    def hexdigest(self) -> str:
        return self._hash.hexdigest()
