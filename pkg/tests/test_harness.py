"""Scenario files, experiment execution, statistics, CSV contract."""

import hashlib

import pytest

from partsim import HealthAction, HmKind, LoadProfile, Mode
from partsim.harness import (
    CSV_COLUMNS,
    EmptyResult,
    RepetitionRecord,
    ScenarioError,
    ScenarioInvalid,
    export_csv,
    format_csv,
    parse_scenario,
    read_csv,
    run_scenario,
    summarize,
)

from conftest import make_cookbook_scenario

BROKER_SCN = """
name = quiet-broker
mode = broker
seed = 3
repetitions = 50
payload_sizes = 1000

[broker]
subscribers = 1
uplink = base=100us per_byte=1ns jitter=0ns
downlink = base=100us per_byte=1ns jitter=0ns
proc_fixed = 10us
proc_per_byte = 3ns
load_factor = 2.0

[loads]
0.5,0.25 -> 0.5,0.25
"""


def test_parse_cookbook_scenario():
    sc = parse_scenario(make_cookbook_scenario())
    assert sc.name == "cookbook" and sc.mode is Mode.PARTITIONED
    assert sc.payload_sizes == (64,)
    assert sc.scripts.keys() == {0, 1}
    assert sc.system.plan.major_frame == 1_000_000


def test_parse_broker_scenario():
    sc = parse_scenario(BROKER_SCN)
    assert sc.mode is Mode.BROKER
    assert sc.topology.load_factor == 2.0
    assert sc.load_pairs == ((LoadProfile(0.5, 0.25), LoadProfile(0.5, 0.25)),)


def test_parse_health_section():
    text = make_cookbook_scenario(extra_sections=(
        "[health]\nSLOT_OVERRUN = HALT_PARTITION\nTRAP 1 = HALT_SYSTEM\n"
    ))
    table = parse_scenario(text).health_table
    assert table.resolve(HmKind.SLOT_OVERRUN, 0) is HealthAction.HALT_PARTITION
    assert table.resolve(HmKind.TRAP, 1) is HealthAction.HALT_SYSTEM
    assert table.resolve(HmKind.TRAP, 0) is HealthAction.LOG


def test_unknown_keys_rejected():
    with pytest.raises(ScenarioError):
        parse_scenario("name = x\nmode = broker\nbogus = 1\n")
    with pytest.raises(ScenarioError):
        parse_scenario("name = x\nmode = teleport\n")


def test_script_port_validation():
    text = make_cookbook_scenario().replace("send out $payload", "send elsewhere 64")
    with pytest.raises(ScenarioInvalid) as err:
        parse_scenario(text)
    assert any(f.code == "SCRIPT_PORT" for f in err.value.findings)


def test_payload_exceeding_channel_rejected():
    text = make_cookbook_scenario(payloads="1,1000000", max_message_size=64)
    with pytest.raises(ScenarioInvalid) as err:
        parse_scenario(text)
    assert any(f.code == "SCRIPT_SIZE" for f in err.value.findings)


def test_cookbook_latency_law():
    """Hand-simulated oracle: send at 100us into P0's slot, receive at the
    start of P1's slot at 500us -> latency 400us over a 100us gap."""
    result = run_scenario(parse_scenario(make_cookbook_scenario(repetitions=5)))
    assert len(result.rows) == 5
    for row in result.rows:
        assert row.t_send_ns == 100_000
        assert row.t_recv_ns == 500_000
        assert row.latency_ns == 400_000
        assert row.gap_ns == 100_000
        assert row.latency_to_gap_ratio == 4.0
        assert row.latency_ns == row.t_recv_ns - row.t_send_ns


@pytest.mark.parametrize("copy_ns", [1_000, 50_000])
def test_copy_cost_shifts_latency_exactly(copy_ns):
    text = make_cookbook_scenario(copy_fixed=f"{copy_ns}ns", repetitions=3)
    for row in run_scenario(parse_scenario(text)).rows:
        assert row.latency_ns == 400_000 + copy_ns
        assert row.gap_ns == 100_000  # the schedule is untouched


def test_broker_equal_loads_zero_jitter():
    result = run_scenario(parse_scenario(BROKER_SCN))
    assert len(result.rows) == 50
    assert all(r.tx_delay_ns == 0 for r in result.rows)
    assert all(r.tx_relaxed_ns == r.tx_stressed_ns for r in result.rows)


def test_run_is_reproducible():
    text = make_cookbook_scenario(repetitions=4)
    a = format_csv(run_scenario(parse_scenario(text)).rows)
    b = format_csv(run_scenario(parse_scenario(text)).rows)
    assert hashlib.sha256(a.encode()).hexdigest() == hashlib.sha256(b.encode()).hexdigest()


def test_broker_seed_changes_jittered_rows():
    text = BROKER_SCN.replace("jitter=0ns", "jitter=20us")
    text = text.replace("0.5,0.25 -> 0.5,0.25", "0.0,0.0 -> 1.0,0.5")
    base = run_scenario(parse_scenario(text))
    same = run_scenario(parse_scenario(text), seed=3)
    other = run_scenario(parse_scenario(text), seed=4)
    assert format_csv(base.rows) == format_csv(same.rows)
    assert format_csv(base.rows) != format_csv(other.rows)


# -- summarize ----------------------------------------------------------------


def rows_from_latencies(values, gap=100_000):
    return [
        RepetitionRecord(
            scenario="s", mode=Mode.PARTITIONED, repetition=i, payload_bytes=1,
            t_send_ns=0, t_recv_ns=v, latency_ns=v, gap_ns=gap,
            latency_to_gap_ratio=v / gap,
        )
        for i, v in enumerate(values)
    ]


def test_summarize_single_repetition():
    stats = summarize(rows_from_latencies([123_456]))
    assert stats.mean == stats.minimum == stats.maximum == stats.p50 == stats.p99 == 123_456


def test_summarize_fixed_arithmetic():
    stats = summarize(rows_from_latencies([1_000, 2_000, 3_000, 4_000]))
    assert stats.p50 == 2_000  # nearest-rank
    assert stats.p99 == 4_000
    assert stats.mean == 2_500  # 2.5us, exact
    assert stats.minimum <= stats.mean <= stats.maximum
    assert stats.p50 <= stats.p99


def test_summarize_mean_rounds_ties_up():
    stats = summarize(rows_from_latencies([1, 2]))  # 1.5 -> 2
    assert stats.mean == 2


def test_summarize_ratio_example():
    stats = summarize(rows_from_latencies([102_100], gap=100_000))
    assert stats.latency_to_gap_ratio == pytest.approx(1.021)
    assert stats.overhead_ratio == pytest.approx(0.021)
    assert f"{stats.overhead_ratio * 100:.1f}%" == "2.1%"


def test_summarize_empty():
    with pytest.raises(EmptyResult):
        summarize([])


# -- CSV ----------------------------------------------------------------------


def test_csv_header_contract():
    assert ",".join(CSV_COLUMNS) == (
        "scenario,mode,repetition,payload_bytes,t_send_ns,t_recv_ns,latency_ns,"
        "gap_ns,latency_to_gap_ratio,tx_relaxed_ns,tx_stressed_ns,tx_delay_ns"
    )


def test_csv_empty_result_is_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    export_csv([], path)
    assert path.read_text() == ",".join(CSV_COLUMNS) + "\n"


def test_csv_row_count(tmp_path):
    rows = run_scenario(parse_scenario(make_cookbook_scenario(repetitions=100))).rows
    path = tmp_path / "out.csv"
    export_csv(rows, path)
    assert len(path.read_text().splitlines()) == 101


def test_csv_reexport_is_byte_identical(tmp_path):
    rows = run_scenario(parse_scenario(make_cookbook_scenario(repetitions=7))).rows
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    export_csv(rows, p1)
    export_csv(rows, p2)
    assert hashlib.sha256(p1.read_bytes()).digest() == hashlib.sha256(p2.read_bytes()).digest()


def test_csv_round_trip(tmp_path):
    rows = run_scenario(parse_scenario(make_cookbook_scenario(repetitions=3))).rows
    path = tmp_path / "rt.csv"
    export_csv(rows, path)
    assert read_csv(path) == rows


def test_csv_malformed_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("nope,nope\n1,2\n")
    with pytest.raises(ScenarioError):
        read_csv(bad)
    short = tmp_path / "short.csv"
    short.write_text(",".join(CSV_COLUMNS) + "\nonly,three,cells\n")
    with pytest.raises(ScenarioError):
        read_csv(short)
