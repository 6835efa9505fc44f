"""Scripted partition applications.

A script is a straight-line list of actions executed inside the owning
partition's slots.  COMPUTE consumes virtual time; SEND/RECEIVE/READ are
port calls at the current offset; MARK drops a labelled timestamp into the
trace (the harness measures latency between marks).

Text grammar, one action per line::

    compute 100us
    send out 64        # or: send out $payload
    recv in
    read in
    mark tx

Execution semantics:

* The cursor survives across slots: actions that do not fit run in the
  partition's next slot.  A COMPUTE truncated by the slot end raises a
  slot-overrun health event and its remainder carries over.
* A COMPUTE that cannot even start (offset already at slot end) simply
  resumes next slot; only a truncated, running COMPUTE is an overrun.
* Port actions cost a fixed api_call_cost; a successful RECEIVE/READ
  additionally costs the hypervisor copy time of the delivered payload.
* RECEIVE and READ never block; on EMPTY the script records the miss in
  the trace and proceeds.
* mode=REPEAT_EACH_SLOT restarts a *completed* pass at the next slot
  start, at most one fresh pass per slot; mode=ONCE runs a single pass.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .units import Duration, parse_duration

PAYLOAD_PLACEHOLDER = "$payload"


class ScriptError(ValueError):
    """Malformed script text."""


class ScriptMode(enum.Enum):
    ONCE = "ONCE"
    REPEAT_EACH_SLOT = "REPEAT_EACH_SLOT"


@dataclass(frozen=True)
class Compute:
    duration: Duration


@dataclass(frozen=True)
class Send:
    port: str
    size: int | None  # None = bind to the scenario's current payload size


@dataclass(frozen=True)
class Receive:
    port: str


@dataclass(frozen=True)
class Read:
    port: str


@dataclass(frozen=True)
class Mark:
    label: str


Action = Compute | Send | Receive | Read | Mark


@dataclass(frozen=True)
class AppScript:
    partition_id: int
    actions: tuple[Action, ...]
    mode: ScriptMode = ScriptMode.ONCE

    def bind_payload(self, payload_size: int) -> AppScript:
        """Resolve ``$payload`` sends against a concrete size."""
        bound = tuple(
            Send(a.port, payload_size) if isinstance(a, Send) and a.size is None else a
            for a in self.actions
        )
        return AppScript(partition_id=self.partition_id, actions=bound, mode=self.mode)


@dataclass
class AppCursor:
    """Per-partition execution position; carry holds the unfinished part
    of an overrun COMPUTE and is positive only after a SLOT_OVERRUN."""

    index: int = 0
    carry: Duration = 0


@dataclass(frozen=True)
class PendingAction:
    """The next port/mark action, due at an absolute time inside the slot."""

    time: Duration
    index: int


@dataclass(frozen=True)
class PendingOverrun:
    """A running COMPUTE will be truncated at the slot end."""

    demanded: Duration
    remaining: Duration


def parse_action(line: str) -> Action:
    parts = line.split()
    if not parts:
        raise ScriptError("empty action line")
    op, args = parts[0].lower(), parts[1:]
    if op == "compute" and len(args) == 1:
        return Compute(duration=parse_duration(args[0]))
    if op == "send" and len(args) == 2:
        if args[1] == PAYLOAD_PLACEHOLDER:
            return Send(port=args[0], size=None)
        size = int(args[1])
        if size <= 0:
            raise ScriptError(f"send size must be positive: {line!r}")
        return Send(port=args[0], size=size)
    if op == "recv" and len(args) == 1:
        return Receive(port=args[0])
    if op == "read" and len(args) == 1:
        return Read(port=args[0])
    if op == "mark" and len(args) == 1:
        return Mark(label=args[0])
    raise ScriptError(f"unrecognized action {line!r}")


def parse_script(
    lines: list[str], partition_id: int, mode: ScriptMode = ScriptMode.ONCE
) -> AppScript:
    actions = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            actions.append(parse_action(line))
        except ValueError as exc:
            raise ScriptError(f"partition {partition_id}: {exc}") from None
    return AppScript(partition_id=partition_id, actions=tuple(actions), mode=mode)


def plan_until_next_action(
    script: AppScript, cursor: AppCursor, t: Duration, slot_end: Duration
) -> PendingAction | PendingOverrun | None:
    """Advance the cursor across COMPUTEs that finish by ``slot_end``.

    Returns what the engine must schedule next: a PendingAction for the
    next port/mark action, a PendingOverrun if a compute is truncated, or
    None when the pass is complete or nothing more can start this slot.
    Completed COMPUTEs update the cursor in place; an overrun leaves the
    cursor on the truncated COMPUTE (the engine stores the carry once the
    health event fires).
    """
    actions = script.actions
    while True:
        if cursor.index >= len(actions):
            return None
        if t >= slot_end:
            return None  # remainder resumes at the partition's next slot
        action = actions[cursor.index]
        if isinstance(action, Compute):
            need = cursor.carry if cursor.carry > 0 else action.duration
            if t + need <= slot_end:
                t += need
                cursor.carry = 0
                cursor.index += 1
                continue
            return PendingOverrun(demanded=need, remaining=slot_end - t)
        return PendingAction(time=t, index=cursor.index)
