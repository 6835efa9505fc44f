"""Broker-mediated publish/subscribe emulation with a load-sensitive
delay model.

Every message travels publisher -> server -> subscriber; there is no
direct path by construction.  The transmission time for one subscriber is

    link1(size) + processing(size) * (1 + load_factor * cpu_load) + link2(size)

plus one truncated-normal jitter draw per link (negative draws clamp to
zero).  CPU load enters multiplicatively on the server processing term
only, so the stressed-minus-relaxed delta isolates the load-induced delay;
links are load-independent.  memory_load is recorded in delivery records
for report parity but has no effect on timing.

Everything is deterministic given the generator passed in.  Jitter draws
come from that generator in path order (uplink first, then the chosen
downlink); the harness derives one generator per repetition with
``repetition_rng``.

The DEFAULT_* values below are a desk-scale CALIBRATION, not a
measurement: they are chosen so that a 1 MB payload under full CPU load
shows a delay of about 5 ms against the idle baseline, the order of
magnitude a physical broker deployment exhibits.  Change them freely in
scenario files.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .units import Duration

# calibration constants (see module docstring)
DEFAULT_LINK_BASE = 200_000  # 200 us per hop
DEFAULT_LINK_PER_BYTE = 0
DEFAULT_JITTER_STDDEV = 50_000  # 50 us
DEFAULT_PROC_FIXED = 20_000  # 20 us
DEFAULT_PROC_PER_BYTE = 5  # 5 ns/byte -> 5 ms for 1 MB
DEFAULT_LOAD_FACTOR = 1.0

_SEED_STRIDE = 1_000_003  # repetition seed = base_seed * stride + repetition


@dataclass(frozen=True)
class LinkModel:
    base_latency: Duration
    per_byte: Duration = 0
    jitter_stddev: Duration = 0

    def __post_init__(self) -> None:
        if self.base_latency < 0 or self.per_byte < 0 or self.jitter_stddev < 0:
            raise ValueError("link parameters must be non-negative")


@dataclass(frozen=True)
class LoadProfile:
    cpu_load: float
    memory_load: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.cpu_load <= 1.0:
            raise ValueError(f"cpu_load must be in [0,1], got {self.cpu_load}")
        if not 0.0 <= self.memory_load <= 1.0:
            raise ValueError(f"memory_load must be in [0,1], got {self.memory_load}")


@dataclass(frozen=True)
class BrokerTopology:
    publisher: str
    server: str
    subscribers: tuple[str, ...]
    uplink: LinkModel
    downlinks: tuple[LinkModel, ...]
    proc_fixed: Duration = DEFAULT_PROC_FIXED
    proc_per_byte: Duration = DEFAULT_PROC_PER_BYTE
    load_factor: float = DEFAULT_LOAD_FACTOR

    def __post_init__(self) -> None:
        if not self.subscribers:
            raise ValueError("a broker topology needs at least one subscriber")
        if len(self.downlinks) != len(self.subscribers):
            raise ValueError("one downlink per subscriber")
        if self.proc_fixed < 0 or self.proc_per_byte < 0 or self.load_factor < 0:
            raise ValueError("processing parameters must be non-negative")


@dataclass(frozen=True)
class DeliveryRecord:
    payload_size: int
    sent_at: Duration
    delivered_at: tuple[Duration, ...]  # one per subscriber
    load: LoadProfile


def default_topology(n_subscribers: int = 1, jitter: bool = True) -> BrokerTopology:
    """The calibrated demo topology (see module docstring)."""
    stddev = DEFAULT_JITTER_STDDEV if jitter else 0
    link = LinkModel(
        base_latency=DEFAULT_LINK_BASE,
        per_byte=DEFAULT_LINK_PER_BYTE,
        jitter_stddev=stddev,
    )
    return BrokerTopology(
        publisher="pub",
        server="broker",
        subscribers=tuple(f"sub{i}" for i in range(n_subscribers)),
        uplink=link,
        downlinks=(link,) * n_subscribers,
    )


def repetition_rng(seed: int, repetition: int) -> random.Random:
    """Disjoint, documented per-repetition stream derivation."""
    return random.Random(seed * _SEED_STRIDE + repetition)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def _link_time(link: LinkModel, size: int, rng: random.Random) -> Duration:
    t = link.base_latency + link.per_byte * size
    if link.jitter_stddev > 0:
        t += max(0, _round_half_up(rng.gauss(0.0, link.jitter_stddev)))
    return t


def tx_time(
    topology: BrokerTopology,
    size: int,
    load: LoadProfile,
    rng: random.Random,
    subscriber: int = 0,
) -> Duration:
    """One publisher-to-subscriber transmission time in nanoseconds."""
    if size <= 0:
        raise ValueError("payload size must be positive")
    processing = topology.proc_fixed + topology.proc_per_byte * size
    loaded = _round_half_up(processing * (1.0 + topology.load_factor * load.cpu_load))
    return (
        _link_time(topology.uplink, size, rng)
        + loaded
        + _link_time(topology.downlinks[subscriber], size, rng)
    )


def tx_delay(stressed: Duration, relaxed: Duration) -> Duration:
    """Stressed transmission time minus relaxed transmission time.

    Exact signed subtraction; jitter can make individual values negative
    and they are reported as-is.
    """
    return stressed - relaxed


def publish(
    topology: BrokerTopology,
    size: int,
    t: Duration,
    load: LoadProfile,
    rng: random.Random,
) -> DeliveryRecord:
    """Deliver one message to every subscriber; independent draws each."""
    delivered = tuple(
        t + tx_time(topology, size, load, rng, subscriber=i)
        for i in range(len(topology.subscribers))
    )
    return DeliveryRecord(payload_size=size, sent_at=t, delivered_at=delivered, load=load)
