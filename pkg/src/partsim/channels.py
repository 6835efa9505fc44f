"""Sampling and queuing port state and operations.

Ports are named per partition; a channel connects one source port to one
(queuing) or more (sampling) destination ports.  The hypervisor copy cost
delays a message's visibility: a message written at t with payload size n
can be observed by readers no earlier than t + fixed + per_byte*n.

Payload content is modeled as a size plus a deterministic checksum rather
than stored bytes, so multi-megabyte payloads cost nothing to simulate
while receivers can still verify message identity.

Operations never raise for application-level failures; they return a
PortStatus so callers (the scripted workloads) can record the miss and
proceed.  A NOT_OWNER result is the spatial-isolation violation that the
health monitor turns into a MEMORY_VIOLATION event; that wiring lives in
the engine, not here.
"""

from __future__ import annotations

import enum
import zlib
from dataclasses import dataclass, field

from .config import ChannelKind, ChannelSpec, SystemConfig
from .units import Duration


class PortStatus(enum.Enum):
    OK = "OK"
    EMPTY = "EMPTY"
    FULL = "FULL"
    NOT_OWNER = "NOT_OWNER"
    TOO_LARGE = "TOO_LARGE"
    BAD_KIND = "BAD_KIND"


@dataclass(frozen=True)
class Message:
    payload_size: int
    written_at: Duration
    source_partition: int
    seq: int
    checksum: int

    def verify(self) -> bool:
        return self.checksum == payload_checksum(
            self.source_partition, self.seq, self.payload_size
        )


def payload_checksum(source_partition: int, seq: int, payload_size: int) -> int:
    return zlib.crc32(f"{source_partition}:{seq}:{payload_size}".encode("ascii"))


@dataclass
class SamplingPortState:
    """Latest-value cell.  ``writes`` holds the pending and current
    messages as (message, visible_at) pairs in write order; a write drops
    every older entry it will supersede by its own visibility time."""

    channel: ChannelSpec
    writes: list[tuple[Message, Duration]] = field(default_factory=list)


@dataclass
class QueuingPortState:
    """Bounded FIFO of (message, visible_at) pairs in write order."""

    channel: ChannelSpec
    fifo: list[tuple[Message, Duration]] = field(default_factory=list)


class PortTable:
    """All port state for one simulation, keyed by (partition, port name).

    Lives inside a SimState and shares its single-owner contract.
    """

    def __init__(self, config: SystemConfig):
        self._copy_cost = config.copy_cost
        self._states: list[SamplingPortState | QueuingPortState] = []
        self._source_of: dict[tuple[int, str], int] = {}
        self._dest_of: dict[tuple[int, str], int] = {}
        self._next_seq: list[int] = []
        for index, ch in enumerate(config.channels):
            if ch.kind is ChannelKind.SAMPLING:
                self._states.append(SamplingPortState(channel=ch))
            else:
                self._states.append(QueuingPortState(channel=ch))
            self._next_seq.append(0)
            self._source_of[(ch.source.partition_id, ch.source.port)] = index
            for d in ch.destinations:
                self._dest_of[(d.partition_id, d.port)] = index

    def channel_label(self, index: int) -> str:
        return f"c{index}"

    def state(self, index: int) -> SamplingPortState | QueuingPortState:
        return self._states[index]

    def _make_message(self, index: int, partition_id: int, size: int, now: Duration) -> Message:
        seq = self._next_seq[index]
        self._next_seq[index] = seq + 1
        return Message(
            payload_size=size,
            written_at=now,
            source_partition=partition_id,
            seq=seq,
            checksum=payload_checksum(partition_id, seq, size),
        )

    # -- port operations -----------------------------------------------------

    def sampling_write(
        self, partition_id: int, port: str, payload_size: int, now: Duration
    ) -> tuple[PortStatus, Message | None]:
        index = self._source_of.get((partition_id, port))
        if index is None:
            return PortStatus.NOT_OWNER, None
        st = self._states[index]
        if not isinstance(st, SamplingPortState):
            return PortStatus.BAD_KIND, None
        if payload_size > st.channel.max_message_size:
            return PortStatus.TOO_LARGE, None
        msg = self._make_message(index, partition_id, payload_size, now)
        visible_at = now + self._copy_cost.of(payload_size)
        # anything that would become visible no earlier than this newer
        # message can never be read again
        st.writes = [e for e in st.writes if e[1] < visible_at]
        st.writes.append((msg, visible_at))
        return PortStatus.OK, msg

    def sampling_read(
        self, partition_id: int, port: str, now: Duration
    ) -> tuple[PortStatus, Message | None, bool]:
        index = self._dest_of.get((partition_id, port))
        if index is None:
            return PortStatus.NOT_OWNER, None, False
        st = self._states[index]
        if not isinstance(st, SamplingPortState):
            return PortStatus.BAD_KIND, None, False
        visible = [e for e in st.writes if e[1] <= now]
        if not visible:
            return PortStatus.EMPTY, None, False
        msg = visible[-1][0]  # write order == (written_at, seq) order
        st.writes = [e for e in st.writes if e[0] is msg or e[1] > now]
        refresh = st.channel.refresh_period or 0
        valid = (now - msg.written_at) <= refresh
        return PortStatus.OK, msg, valid

    def queuing_send(
        self, partition_id: int, port: str, payload_size: int, now: Duration
    ) -> tuple[PortStatus, Message | None]:
        index = self._source_of.get((partition_id, port))
        if index is None:
            return PortStatus.NOT_OWNER, None
        st = self._states[index]
        if not isinstance(st, QueuingPortState):
            return PortStatus.BAD_KIND, None
        if payload_size > st.channel.max_message_size:
            return PortStatus.TOO_LARGE, None
        if len(st.fifo) >= (st.channel.capacity or 0):
            return PortStatus.FULL, None
        msg = self._make_message(index, partition_id, payload_size, now)
        st.fifo.append((msg, now + self._copy_cost.of(payload_size)))
        return PortStatus.OK, msg

    def queuing_receive(
        self, partition_id: int, port: str, now: Duration
    ) -> tuple[PortStatus, Message | None]:
        index = self._dest_of.get((partition_id, port))
        if index is None:
            return PortStatus.NOT_OWNER, None
        st = self._states[index]
        if not isinstance(st, QueuingPortState):
            return PortStatus.BAD_KIND, None
        # strict FIFO: a later message never bypasses an in-flight head
        if not st.fifo or st.fifo[0][1] > now:
            return PortStatus.EMPTY, None
        msg, _ = st.fifo.pop(0)
        return PortStatus.OK, msg

    # -- engine-facing dispatch by channel kind ----------------------------

    def send(
        self, partition_id: int, port: str, payload_size: int, now: Duration
    ) -> tuple[PortStatus, Message | None, str, str]:
        """SEND script action: write or enqueue depending on channel kind.

        Returns (status, message, channel label, op token).
        """
        index = self._source_of.get((partition_id, port))
        if index is None:
            return PortStatus.NOT_OWNER, None, "-", "SEND"
        if isinstance(self._states[index], SamplingPortState):
            status, msg = self.sampling_write(partition_id, port, payload_size, now)
            return status, msg, self.channel_label(index), "WRITE"
        status, msg = self.queuing_send(partition_id, port, payload_size, now)
        return status, msg, self.channel_label(index), "SEND"

    def receive(
        self, partition_id: int, port: str, now: Duration
    ) -> tuple[PortStatus, Message | None, str, str]:
        index = self._dest_of.get((partition_id, port))
        if index is None:
            return PortStatus.NOT_OWNER, None, "-", "RECV"
        status, msg = self.queuing_receive(partition_id, port, now)
        return status, msg, self.channel_label(index), "RECV"

    def read(
        self, partition_id: int, port: str, now: Duration
    ) -> tuple[PortStatus, Message | None, bool, str, str]:
        index = self._dest_of.get((partition_id, port))
        if index is None:
            return PortStatus.NOT_OWNER, None, False, "-", "READ"
        status, msg, valid = self.sampling_read(partition_id, port, now)
        return status, msg, valid, self.channel_label(index), "READ"
