"""Scenario definition, experiment execution, statistics, CSV reporting.

A scenario is a flat key-value file with sections.  It either embeds the
system XML (partitioned mode) or describes a broker topology (broker
mode), plus the partition scripts, the health table, payload sizes,
repetition count, and the RNG seed::

    name = cookbook
    mode = partitioned            # or: broker
    seed = 1
    repetitions = 100
    payload_sizes = 64            # comma-separated byte counts
    max_frames = 2                # per-repetition run bound (partitioned)
    api_call_cost = 0ns

    [system]                      # inline XML (or: system_file = rel/path.xml)
    <SystemDescription ...> ... </SystemDescription>

    [script 0]                    # one section per partition id
    mode = once                   # or: repeat
    compute 100us
    send out $payload
    mark tx

    [health]                      # optional action table overrides
    SLOT_OVERRUN = LOG            # per-kind default
    SLOT_OVERRUN 0 = HALT_PARTITION   # per-partition override

    [broker]                      # broker mode topology (defaults are the
    subscribers = 1               # documented calibration constants)
    uplink = base=200us per_byte=0ns jitter=50us
    downlink = base=200us per_byte=0ns jitter=50us
    proc_fixed = 20us
    proc_per_byte = 5ns
    load_factor = 1.0

    [loads]                       # broker mode: one pair per line
    0.0,0.0 -> 1.0,0.75           # relaxed cpu,mem -> stressed cpu,mem

Partitioned runs boot a fresh simulation per repetition and measure the
latency between the producer's ``tx`` mark and the consumer's ``rx`` mark
(the first one that follows a successful receive), together with the
scheduled transition gap between the two slots involved.  Broker runs
evaluate the transmission time under both load profiles per repetition and
record the stressed-minus-relaxed delay.

CSV column contract (exact order; unused fields empty)::

    scenario,mode,repetition,payload_bytes,t_send_ns,t_recv_ns,latency_ns,
    gap_ns,latency_to_gap_ratio,tx_relaxed_ns,tx_stressed_ns,tx_delay_ns

Output is byte-deterministic for a fixed scenario and seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

from . import middleware, trace as trace_mod, workload
from .config import Finding, SystemConfig, parse_config, transition_gap, validate
from .health import HealthAction, HealthTable, HmKind
from .middleware import BrokerTopology, LinkModel, LoadProfile
from .scheduler import SimState
from .units import Duration, parse_duration
from .workload import AppScript, Mark, Read, Receive, ScriptMode, Send

CSV_COLUMNS = (
    "scenario", "mode", "repetition", "payload_bytes",
    "t_send_ns", "t_recv_ns", "latency_ns", "gap_ns", "latency_to_gap_ratio",
    "tx_relaxed_ns", "tx_stressed_ns", "tx_delay_ns",
)

DEFAULT_PAYLOAD_SIZES = (1, 1_000_000, 6_000_000)
DEFAULT_REPETITIONS = 100
DEFAULT_MAX_FRAMES = 16


class Mode(enum.Enum):
    PARTITIONED = "partitioned"
    BROKER = "broker"


class ScenarioError(ValueError):
    """Malformed scenario file."""


class ScenarioInvalid(ScenarioError):
    def __init__(self, findings: list[Finding]):
        super().__init__("; ".join(str(f) for f in findings) or "invalid scenario")
        self.findings = findings


class MeasurementError(RuntimeError):
    """The run ended without observing the tx/rx mark pair."""


class EmptyResult(ValueError):
    """summarize() over zero repetitions."""


@dataclass
class Scenario:
    name: str
    mode: Mode
    system: SystemConfig | None = None
    topology: BrokerTopology | None = None
    scripts: dict[int, AppScript] = field(default_factory=dict)
    payload_sizes: tuple[int, ...] = DEFAULT_PAYLOAD_SIZES
    repetitions: int = DEFAULT_REPETITIONS
    seed: int = 0
    health_table: HealthTable = field(default_factory=HealthTable)
    load_pairs: tuple[tuple[LoadProfile, LoadProfile], ...] = ()
    api_call_cost: Duration = 0
    max_frames: int = DEFAULT_MAX_FRAMES


@dataclass(frozen=True)
class RepetitionRecord:
    scenario: str
    mode: Mode
    repetition: int
    payload_bytes: int
    t_send_ns: int | None = None
    t_recv_ns: int | None = None
    latency_ns: int | None = None
    gap_ns: int | None = None
    latency_to_gap_ratio: float | None = None
    tx_relaxed_ns: int | None = None
    tx_stressed_ns: int | None = None
    tx_delay_ns: int | None = None


@dataclass
class RunResult:
    scenario: str
    mode: Mode
    rows: list[RepetitionRecord]
    trace: list[trace_mod.TraceRecord] | None = None
    halted: bool = False


@dataclass(frozen=True)
class SummaryStats:
    count: int
    metric: str  # "latency" or "tx_delay"
    mean: int
    minimum: int
    maximum: int
    p50: int
    p99: int
    scheduled_gap: int | None = None
    latency_to_gap_ratio: float | None = None
    overhead_ratio: float | None = None


# --------------------------------------------------------------------------
# scenario file parsing


def _split_sections(text: str) -> tuple[dict[str, str], dict[str, list[str]]]:
    top: dict[str, str] = {}
    sections: dict[str, list[str]] = {}
    current: list[str] | None = None
    for raw in text.splitlines():
        line = raw.rstrip()
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            name = stripped[1:-1].strip()
            if name in sections:
                raise ScenarioError(f"duplicate section [{name}]")
            sections[name] = []
            current = sections[name]
            continue
        if current is None:
            if "=" not in stripped:
                raise ScenarioError(f"expected 'key = value' before sections, got {line!r}")
            key, _, value = stripped.partition("=")
            top[key.strip()] = value.strip()
        else:
            current.append(line)
    return top, sections


def _kv_lines(lines: list[str], section: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for line in lines:
        if "=" not in line:
            raise ScenarioError(f"[{section}]: expected 'key = value', got {line.strip()!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def _parse_link(value: str, where: str) -> LinkModel:
    base, per_byte, jitter = 0, 0, 0
    for token in value.split():
        key, _, val = token.partition("=")
        if key == "base":
            base = parse_duration(val)
        elif key == "per_byte":
            per_byte = parse_duration(val)
        elif key == "jitter":
            jitter = parse_duration(val)
        else:
            raise ScenarioError(f"{where}: unknown link field {key!r}")
    return LinkModel(base_latency=base, per_byte=per_byte, jitter_stddev=jitter)


def _parse_load(value: str, where: str) -> LoadProfile:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 2:
        raise ScenarioError(f"{where}: expected 'cpu,mem', got {value!r}")
    try:
        return LoadProfile(cpu_load=float(parts[0]), memory_load=float(parts[1]))
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _parse_broker(lines: list[str]) -> BrokerTopology:
    kv = _kv_lines(lines, "broker")
    n_subscribers = int(kv.pop("subscribers", "1"))
    default_link = LinkModel(
        base_latency=middleware.DEFAULT_LINK_BASE,
        per_byte=middleware.DEFAULT_LINK_PER_BYTE,
        jitter_stddev=middleware.DEFAULT_JITTER_STDDEV,
    )
    uplink = downlink = default_link
    if "uplink" in kv:
        uplink = _parse_link(kv.pop("uplink"), "[broker] uplink")
    if "downlink" in kv:
        downlink = _parse_link(kv.pop("downlink"), "[broker] downlink")
    proc_fixed = parse_duration(kv.pop("proc_fixed", f"{middleware.DEFAULT_PROC_FIXED}ns"))
    proc_per_byte = parse_duration(kv.pop("proc_per_byte", f"{middleware.DEFAULT_PROC_PER_BYTE}ns"))
    load_factor = float(kv.pop("load_factor", str(middleware.DEFAULT_LOAD_FACTOR)))
    if kv:
        raise ScenarioError(f"[broker]: unknown keys {sorted(kv)}")
    return BrokerTopology(
        publisher="pub",
        server="broker",
        subscribers=tuple(f"sub{i}" for i in range(n_subscribers)),
        uplink=uplink,
        downlinks=(downlink,) * n_subscribers,
        proc_fixed=proc_fixed,
        proc_per_byte=proc_per_byte,
        load_factor=load_factor,
    )


def _parse_health(lines: list[str]) -> HealthTable:
    table = HealthTable()
    for line in lines:
        if "=" not in line:
            raise ScenarioError(f"[health]: expected 'KIND [partition] = ACTION', got {line!r}")
        lhs, _, rhs = line.partition("=")
        try:
            action = HealthAction[rhs.strip()]
        except KeyError:
            raise ScenarioError(f"[health]: unknown action {rhs.strip()!r}") from None
        parts = lhs.split()
        try:
            kind = HmKind[parts[0]]
        except KeyError:
            raise ScenarioError(f"[health]: unknown event kind {parts[0]!r}") from None
        if len(parts) == 1:
            table.set_default(kind, action)
        elif len(parts) == 2:
            table.set_override(kind, int(parts[1]), action)
        else:
            raise ScenarioError(f"[health]: malformed line {line!r}")
    return table


def _parse_script_section(lines: list[str], partition_id: int) -> AppScript:
    mode = ScriptMode.ONCE
    action_lines = []
    for line in lines:
        stripped = line.strip()
        if stripped.lower().startswith("mode") and "=" in stripped:
            value = stripped.partition("=")[2].strip().lower()
            if value == "once":
                mode = ScriptMode.ONCE
            elif value == "repeat":
                mode = ScriptMode.REPEAT_EACH_SLOT
            else:
                raise ScenarioError(f"[script {partition_id}]: unknown mode {value!r}")
        else:
            action_lines.append(stripped)
    return workload.parse_script(action_lines, partition_id, mode)


def parse_scenario(text: str, base_dir: Path | None = None) -> Scenario:
    """Parse a scenario document; raises ScenarioError / ScenarioInvalid."""
    top, sections = _split_sections(text)

    known_top = {"name", "mode", "seed", "repetitions", "payload_sizes",
                 "api_call_cost", "max_frames", "system_file"}
    unknown = set(top) - known_top
    if unknown:
        raise ScenarioError(f"unknown keys {sorted(unknown)}")
    if "name" not in top or "mode" not in top:
        raise ScenarioError("scenario needs 'name' and 'mode'")
    try:
        mode = Mode(top["mode"].lower())
    except ValueError:
        raise ScenarioError(f"mode must be partitioned or broker, got {top['mode']!r}") from None

    payload_sizes = tuple(
        int(p) for p in top.get("payload_sizes", "").split(",") if p.strip()
    ) or DEFAULT_PAYLOAD_SIZES

    system = None
    if "system" in sections:
        system = parse_config("\n".join(sections.pop("system")))
    elif "system_file" in top:
        path = Path(top["system_file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        system = parse_config(path.read_text(encoding="utf-8"))

    scripts: dict[int, AppScript] = {}
    topology = None
    health_table = HealthTable()
    load_pairs: list[tuple[LoadProfile, LoadProfile]] = []
    for name, lines in sections.items():
        if name.startswith("script "):
            pid = int(name.split()[1])
            scripts[pid] = _parse_script_section(lines, pid)
        elif name == "health":
            health_table = _parse_health(lines)
        elif name == "broker":
            topology = _parse_broker(lines)
        elif name == "loads":
            for line in lines:
                relaxed_text, sep, stressed_text = line.partition("->")
                if not sep:
                    raise ScenarioError(f"[loads]: expected 'r_cpu,r_mem -> s_cpu,s_mem', got {line!r}")
                load_pairs.append(
                    (_parse_load(relaxed_text, "[loads] relaxed"),
                     _parse_load(stressed_text, "[loads] stressed"))
                )
        else:
            raise ScenarioError(f"unknown section [{name}]")

    if mode is Mode.BROKER and topology is None:
        topology = middleware.default_topology()
    if mode is Mode.BROKER and not load_pairs:
        load_pairs = [(LoadProfile(0.0, 0.0), LoadProfile(1.0, 0.75))]

    scenario = Scenario(
        name=top["name"],
        mode=mode,
        system=system,
        topology=topology,
        scripts=scripts,
        payload_sizes=payload_sizes,
        repetitions=int(top.get("repetitions", str(DEFAULT_REPETITIONS))),
        seed=int(top.get("seed", "0")),
        health_table=health_table,
        load_pairs=tuple(load_pairs),
        api_call_cost=parse_duration(top.get("api_call_cost", "0ns")),
        max_frames=int(top.get("max_frames", str(DEFAULT_MAX_FRAMES))),
    )
    findings = validate_scenario(scenario)
    if findings:
        raise ScenarioInvalid(findings)
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), base_dir=path.parent)


def validate_scenario(sc: Scenario) -> list[Finding]:
    findings: list[Finding] = []

    def err(code: str, location: str, message: str) -> None:
        findings.append(Finding(code=code, severity="ERROR", location=location, message=message))

    if sc.repetitions < 1:
        err("REPETITIONS", "scenario", "repetitions must be >= 1")
    if not sc.payload_sizes or any(p <= 0 for p in sc.payload_sizes):
        err("PAYLOAD", "scenario", "payload sizes must be positive")

    if sc.mode is Mode.PARTITIONED:
        if sc.system is None:
            err("NO_SYSTEM", "scenario", "partitioned mode needs a [system] section")
            return findings
        findings.extend(validate(sc.system))
        partitions = {p.id for p in sc.system.partitions}
        sources = {(c.source.partition_id, c.source.port): c for c in sc.system.channels}
        dests = {(d.partition_id, d.port): c
                 for c in sc.system.channels for d in c.destinations}
        for pid, script in sc.scripts.items():
            loc = f"script {pid}"
            if pid not in partitions:
                err("UNKNOWN_PARTITION", loc, "script references a missing partition")
                continue
            for action in script.actions:
                if isinstance(action, Send):
                    ch = sources.get((pid, action.port))
                    if ch is None:
                        err("SCRIPT_PORT", loc, f"partition {pid} owns no source port {action.port!r}")
                    elif action.size is None and any(
                        p > ch.max_message_size for p in sc.payload_sizes
                    ):
                        err("SCRIPT_SIZE", loc,
                            f"payload sweep exceeds maxMessageSize={ch.max_message_size}")
                elif isinstance(action, Receive):
                    ch = dests.get((pid, action.port))
                    if ch is None:
                        err("SCRIPT_PORT", loc, f"partition {pid} owns no destination port {action.port!r}")
                    elif ch.capacity is None:
                        err("SCRIPT_KIND", loc, f"recv on sampling port {action.port!r} (use read)")
                elif isinstance(action, Read):
                    ch = dests.get((pid, action.port))
                    if ch is None:
                        err("SCRIPT_PORT", loc, f"partition {pid} owns no destination port {action.port!r}")
                    elif ch.refresh_period is None:
                        err("SCRIPT_KIND", loc, f"read on queuing port {action.port!r} (use recv)")
    else:
        if sc.topology is None:
            err("NO_TOPOLOGY", "scenario", "broker mode needs a topology")
        if not sc.load_pairs:
            err("NO_LOADS", "scenario", "broker mode needs at least one load pair")
    return findings


# --------------------------------------------------------------------------
# execution


def _has_measurement_marks(scripts: dict[int, AppScript]) -> bool:
    labels = {
        a.label for s in scripts.values() for a in s.actions if isinstance(a, Mark)
    }
    return "tx" in labels and "rx" in labels


def _slot_at(system: SystemConfig, partition_id: int, t: Duration) -> int | None:
    offset = t % system.plan.major_frame
    for slot in system.plan.slots:
        if slot.partition_id == partition_id and slot.start <= offset < slot.end:
            return slot.slot_id
    return None


def _measure(records: list[trace_mod.TraceRecord], system: SystemConfig):
    """Extract (t_send, t_recv, gap) from one repetition's trace.

    t_send is the first ``tx`` mark; t_recv is the first ``rx`` mark at or
    after the first successful receive/read, so the measured endpoint
    reflects an actual delivery.
    """
    t_send = send_partition = None
    delivery_time = delivery_partition = None
    t_recv = None
    for r in records:
        if isinstance(r, trace_mod.MarkRecord) and r.label == "tx" and t_send is None:
            t_send, send_partition = r.time, r.partition
        elif (
            isinstance(r, trace_mod.PortOpRecord)
            and r.op in ("RECV", "READ")
            and r.result in ("OK", "STALE")
            and delivery_time is None
        ):
            delivery_time, delivery_partition = r.time, r.partition
        elif (
            isinstance(r, trace_mod.MarkRecord)
            and r.label == "rx"
            and delivery_time is not None
            and r.time >= delivery_time
            and t_recv is None
        ):
            t_recv = r.time
    if t_send is None or t_recv is None:
        return None
    from_slot = _slot_at(system, send_partition, t_send)
    to_slot = _slot_at(system, delivery_partition, delivery_time)
    gap = None
    if from_slot is not None and to_slot is not None and from_slot != to_slot:
        gap = transition_gap(system.plan, from_slot, to_slot)
    return t_send, t_recv, gap


def run_scenario(
    sc: Scenario,
    *,
    until: Duration | None = None,
    frames: int | None = None,
    seed: int | None = None,
) -> RunResult:
    """Execute every repetition and collect per-repetition records.

    ``until``/``frames`` override the per-repetition run bound of
    partitioned scenarios; ``seed`` overrides the scenario seed (broker
    jitter only; partitioned runs draw no randomness).
    """
    findings = validate_scenario(sc)
    if findings:
        raise ScenarioInvalid(findings)
    if sc.mode is Mode.PARTITIONED:
        return _run_partitioned(sc, until=until, frames=frames)
    return _run_broker(sc, seed=sc.seed if seed is None else seed)


def _run_partitioned(
    sc: Scenario, *, until: Duration | None, frames: int | None
) -> RunResult:
    system = sc.system
    assert system is not None
    frame = system.plan.major_frame
    explicit_bound = until is not None or frames is not None
    if until is not None:
        bound = until
    elif frames is not None:
        bound = frames * frame
    else:
        bound = sc.max_frames * frame
    measuring = _has_measurement_marks(sc.scripts)

    rows: list[RepetitionRecord] = []
    first_trace: list[trace_mod.TraceRecord] | None = None
    halted = False
    for payload in sc.payload_sizes:
        bound_scripts = {pid: s.bind_payload(payload) for pid, s in sc.scripts.items()}
        for rep in range(sc.repetitions):
            sim = SimState(
                system,
                scripts=bound_scripts,
                health_table=sc.health_table,
                api_call_cost=sc.api_call_cost,
            )
            sim.boot()
            sim.run_until(bound)
            if first_trace is None:
                first_trace = sim.trace
            halted = halted or sim.halted
            if not measuring:
                continue
            measured = _measure(sim.trace, system)
            if measured is None:
                if explicit_bound or sim.halted:
                    continue  # caller asked for a bounded/aborted run
                raise MeasurementError(
                    f"{sc.name}: no tx/rx mark pair observed within {bound} ns"
                )
            t_send, t_recv, gap = measured
            latency = t_recv - t_send
            ratio = latency / gap if gap else None
            rows.append(
                RepetitionRecord(
                    scenario=sc.name,
                    mode=sc.mode,
                    repetition=rep,
                    payload_bytes=payload,
                    t_send_ns=t_send,
                    t_recv_ns=t_recv,
                    latency_ns=latency,
                    gap_ns=gap,
                    latency_to_gap_ratio=ratio,
                )
            )
    return RunResult(scenario=sc.name, mode=sc.mode, rows=rows, trace=first_trace, halted=halted)


def _run_broker(sc: Scenario, *, seed: int) -> RunResult:
    topology = sc.topology
    assert topology is not None
    rows: list[RepetitionRecord] = []
    counter = 0
    for payload in sc.payload_sizes:
        for relaxed, stressed in sc.load_pairs:
            for rep in range(sc.repetitions):
                rng = middleware.repetition_rng(seed, counter)
                counter += 1
                relaxed_ns = middleware.tx_time(topology, payload, relaxed, rng)
                stressed_ns = middleware.tx_time(topology, payload, stressed, rng)
                rows.append(
                    RepetitionRecord(
                        scenario=sc.name,
                        mode=sc.mode,
                        repetition=rep,
                        payload_bytes=payload,
                        tx_relaxed_ns=relaxed_ns,
                        tx_stressed_ns=stressed_ns,
                        tx_delay_ns=middleware.tx_delay(stressed_ns, relaxed_ns),
                    )
                )
    return RunResult(scenario=sc.name, mode=sc.mode, rows=rows)


# --------------------------------------------------------------------------
# statistics


def _mean_round_half_up(values: list[int]) -> int:
    n = len(values)
    return (2 * sum(values) + n) // (2 * n)


def _nearest_rank(sorted_values: list[int], percentile: int) -> int:
    n = len(sorted_values)
    rank = max(1, (percentile * n + 99) // 100)  # ceil(p*n/100)
    return sorted_values[rank - 1]


def summarize(rows: list[RepetitionRecord]) -> SummaryStats:
    """Exact integer statistics: mean rounded to the nearest ns (ties up),
    percentiles by nearest rank."""
    if not rows:
        raise EmptyResult("no repetitions to summarize")
    if any(r.latency_ns is not None for r in rows):
        metric = "latency"
        values = [r.latency_ns for r in rows if r.latency_ns is not None]
    elif any(r.tx_delay_ns is not None for r in rows):
        metric = "tx_delay"
        values = [r.tx_delay_ns for r in rows if r.tx_delay_ns is not None]
    else:
        raise EmptyResult("rows carry neither latency nor tx_delay")
    ordered = sorted(values)
    mean = _mean_round_half_up(values)
    gap = next((r.gap_ns for r in rows if r.gap_ns), None)
    return SummaryStats(
        count=len(values),
        metric=metric,
        mean=mean,
        minimum=ordered[0],
        maximum=ordered[-1],
        p50=_nearest_rank(ordered, 50),
        p99=_nearest_rank(ordered, 99),
        scheduled_gap=gap,
        latency_to_gap_ratio=(mean / gap) if (metric == "latency" and gap) else None,
        overhead_ratio=((mean - gap) / gap) if (metric == "latency" and gap) else None,
    )


def group_rows(rows: list[RepetitionRecord]) -> dict[tuple[str, int], list[RepetitionRecord]]:
    groups: dict[tuple[str, int], list[RepetitionRecord]] = {}
    for r in rows:
        groups.setdefault((r.scenario, r.payload_bytes), []).append(r)
    return dict(sorted(groups.items()))


# --------------------------------------------------------------------------
# CSV


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, Mode):
        return value.value
    return str(value)


def format_csv(rows: list[RepetitionRecord]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        lines.append(",".join(_cell(getattr(r, col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def export_csv(rows: list[RepetitionRecord], path: str | Path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(format_csv(rows))


def read_csv(path: str | Path) -> list[RepetitionRecord]:
    """Read rows back; raises ScenarioError on a malformed file."""
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines or tuple(lines[0].split(",")) != CSV_COLUMNS:
        raise ScenarioError(f"{path}: missing or wrong CSV header")
    rows = []
    for number, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(CSV_COLUMNS):
            raise ScenarioError(f"{path}:{number}: expected {len(CSV_COLUMNS)} fields")
        record = dict(zip(CSV_COLUMNS, cells))
        try:
            rows.append(
                RepetitionRecord(
                    scenario=record["scenario"],
                    mode=Mode(record["mode"]),
                    repetition=int(record["repetition"]),
                    payload_bytes=int(record["payload_bytes"]),
                    t_send_ns=int(record["t_send_ns"]) if record["t_send_ns"] else None,
                    t_recv_ns=int(record["t_recv_ns"]) if record["t_recv_ns"] else None,
                    latency_ns=int(record["latency_ns"]) if record["latency_ns"] else None,
                    gap_ns=int(record["gap_ns"]) if record["gap_ns"] else None,
                    latency_to_gap_ratio=(
                        float(record["latency_to_gap_ratio"])
                        if record["latency_to_gap_ratio"] else None
                    ),
                    tx_relaxed_ns=int(record["tx_relaxed_ns"]) if record["tx_relaxed_ns"] else None,
                    tx_stressed_ns=int(record["tx_stressed_ns"]) if record["tx_stressed_ns"] else None,
                    tx_delay_ns=int(record["tx_delay_ns"]) if record["tx_delay_ns"] else None,
                )
            )
        except ValueError as exc:
            raise ScenarioError(f"{path}:{number}: {exc}") from None
    return rows
