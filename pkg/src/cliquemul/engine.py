"""Synchronous fully-connected message-passing simulator with round accounting.

The model: n nodes, every pair joined by a link, computation proceeds in
phases.  In a phase every node reads the mailbox delivered at the last
phase boundary, updates its private state, and emits messages.  A message
payload is one tagged word: ``(tag, i1, i2, value)``.

Round cost per phase is the routing charge ceil(max(max_send, max_recv) /
(n - 1)) times a configurable constant (default 1), and at least one
round whenever any message crosses a link.  This models the standard
routing result where any pattern in which every node sends and receives
at most n-1 words is deliverable in O(1) rounds; the charge is the
number of such batches.

Handlers must derive everything, including message destinations, from
the node id, the node's private state, the delivered mailbox, and data
previously broadcast to all nodes.  The engine hands a handler only
those objects, so violations take deliberate effort; destinations
outside [0, n) raise SimulationError.

Mailbox delivery order is canonical: sender id ascending, then emission
order.  Messages to self are delivered free of charge and excluded from
the load counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

Word = tuple
Message = tuple  # (dst, tag, i1, i2, value)
Handler = Callable[[int, dict, list], list]


class SimulationError(RuntimeError):
    """A protocol step violated the communication model."""


@dataclass
class PhaseRecord:
    label: str
    rounds: int
    max_send: int
    max_recv: int
    total_msgs: int


class RoundLedger:
    """Per-phase communication loads and the rounds charged for them."""

    def __init__(self, lenzen_constant: int = 1):
        if lenzen_constant < 1:
            raise ValueError("routing constant must be >= 1")
        self.lenzen_constant = lenzen_constant
        self.records: list[PhaseRecord] = []

    def charge_for_loads(
        self, label: str, n: int, max_send: int, max_recv: int, total_msgs: int
    ) -> int:
        if total_msgs == 0:
            rounds = 0
        else:
            rounds = self.lenzen_constant * math.ceil(max(max_send, max_recv) / (n - 1))
            rounds = max(rounds, 1)
        self.records.append(PhaseRecord(label, rounds, max_send, max_recv, total_msgs))
        return rounds

    def total_rounds(self, prefix: str | None = None) -> int:
        return sum(r.rounds for r in self.records
                   if prefix is None or r.label.startswith(prefix))

    def records_for(self, prefix: str) -> list[PhaseRecord]:
        return [r for r in self.records if r.label.startswith(prefix)]

    def mark(self) -> int:
        """Index of the next record; use with ``since`` to slice one run."""
        return len(self.records)

    def since(self, mark: int) -> list[PhaseRecord]:
        return self.records[mark:]

    def to_csv(self) -> str:
        lines = ["phase,rounds,max_send,max_recv,total_msgs"]
        for r in self.records:
            lines.append(f"{r.label},{r.rounds},{r.max_send},{r.max_recv},{r.total_msgs}")
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(self.to_csv())


class CliqueEngine:
    """Holds per-node state dicts and mailboxes; executes phases."""

    def __init__(self, n: int, lenzen_constant: int = 1):
        if n < 1:
            raise ValueError("need at least one node")
        self.n = n
        self.states: list[dict] = [{} for _ in range(n)]
        self.inboxes: list[list] = [[] for _ in range(n)]
        self.ledger = RoundLedger(lenzen_constant)

    def run_phase(self, label: str, handler: Handler) -> int:
        """Run one phase; returns rounds charged.

        ``handler(v, state, inbox)`` returns an iterable of messages
        ``(dst, tag, i1, i2, value)``.  The inbox passed in is consumed:
        whatever the handler does not copy into its state is gone at the
        next phase boundary.
        """
        n = self.n
        new_inboxes: list[list] = [[] for _ in range(n)]
        sends = [0] * n
        recvs = [0] * n
        total = 0
        emitted = 0
        for v in range(n):
            out = handler(v, self.states[v], self.inboxes[v])
            if not out:
                continue
            for msg in out:
                emitted += 1
                dst = msg[0]
                if dst == v:
                    new_inboxes[v].append((v,) + tuple(msg[1:]))
                    continue
                if not (0 <= dst < n):
                    raise SimulationError(
                        f"phase {label!r}: node {v} addressed nonexistent node {dst}"
                    )
                sends[v] += 1
                recvs[dst] += 1
                total += 1
                new_inboxes[dst].append((v,) + tuple(msg[1:]))
        delivered = sum(len(box) for box in new_inboxes)
        if delivered != emitted:
            raise SimulationError(f"phase {label!r}: message conservation violated")
        self.inboxes = new_inboxes
        return self.ledger.charge_for_loads(label, n, max(sends), max(recvs), total)

    def run_broadcast(self, label: str, word_fn) -> int:
        """Each node sends ``word_fn(v, state)`` (or None) to every other node."""
        n = self.n

        def handler(v, state, inbox):
            word = word_fn(v, state)
            if word is None:
                return []
            return [(u,) + tuple(word) for u in range(n) if u != v]

        return self.run_phase(label, handler)

    def drain_inboxes(self) -> list[list]:
        boxes, self.inboxes = self.inboxes, [[] for _ in range(self.n)]
        return boxes


def run_protocol(n: int, initial_states: list[dict],
                 phases: list[tuple[str, Handler]],
                 lenzen_constant: int = 1) -> tuple[list[dict], RoundLedger]:
    """Convenience driver: seed states, run a fixed phase list, return outcome."""
    if len(initial_states) != n:
        raise ValueError("one initial state per node required")
    engine = CliqueEngine(n, lenzen_constant)
    for v in range(n):
        engine.states[v].update(initial_states[v])
    for label, handler in phases:
        engine.run_phase(label, handler)
    return engine.states, engine.ledger
