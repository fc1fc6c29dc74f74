"""Messages and bit accounting for the one-round coordinator model.

Vertex ids are sent as fixed-width integers of ``ceil(log2(num_vertices))``
bits; an edge costs two ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

__all__ = ["Message", "CommLedger", "bits_per_vertex", "message_bits"]


def bits_per_vertex(num_vertices: int) -> int:
    return max(1, math.ceil(math.log2(num_vertices))) if num_vertices > 1 else 1


@dataclass(frozen=True)
class Message:
    """What one machine sends to the coordinator."""

    origin: int
    edges: tuple[tuple[int, int], ...] = ()
    fixed_vertices: tuple[int, ...] = ()
    num_vertices: int = 0
    n_left: int | None = None


def message_bits(m: Message, bpv: int) -> int:
    return len(m.edges) * 2 * bpv + len(m.fixed_vertices) * bpv


@dataclass
class CommLedger:
    bits_per_vertex: int
    per_machine: list[int] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.per_machine)

    @property
    def max_machine(self) -> int:
        return max(self.per_machine, default=0)

    @classmethod
    def from_messages(cls, messages: Sequence[Message], bpv: int) -> "CommLedger":
        return cls(bpv, [message_bits(m, bpv) for m in messages])
