import csv
import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from dialectic import build, load_example
from dialectic.bench import (
    CSV_COLUMNS,
    BenchConfig,
    attack_rule,
    gen_instance,
    goal_rule,
    log_to_jsonl,
    rows_to_csv,
    run_benchmark,
    run_once,
    sweep,
)
from dialectic.dsl import canonical_document, parse_spec, serialize_spec
from dialectic.fsm import check_invariants
from dialectic.logic import lit

SMALL = BenchConfig(runs=1, num_arguments=4, max_attacks_per_agent=2)


def test_config_validation():
    for bad in (dict(runs=0), dict(timeout=0), dict(num_arguments=1)):
        with pytest.raises(ValueError):
            BenchConfig(**bad)


def test_chain_example_fits_the_schema():
    doc = load_example("chain")
    attacks = [("b", "a"), ("c", "b")]
    assert doc.system.rules1 == (goal_rule("a"), attack_rule("c", "b", attacks))
    assert doc.system.rules2 == (attack_rule("b", "a", attacks),)


@given(st.integers(0, 2**63 - 1))
def test_instances_match_schema(seed):
    inst = gen_instance(seed, SMALL)
    rules1, rules2 = inst.doc.system.rules1, inst.doc.system.rules2
    everything = inst.attacks1 + inst.attacks2
    assert rules1[0] == goal_rule(inst.goal)
    assert rules1[1:] == tuple(attack_rule(u, v, everything) for u, v in inst.attacks1)
    assert rules2 == tuple(attack_rule(u, v, everything) for u, v in inst.attacks2)
    assert inst.arguments1 and inst.arguments2
    assert sorted(inst.arguments1 + inst.arguments2) == ["x1", "x2", "x3", "x4"]
    for u, v in inst.attacks1:
        assert u in inst.arguments1 and v in inst.arguments2
    for u, v in inst.attacks2:
        assert u in inst.arguments2 and v in inst.arguments1
    assert len(set(inst.attacks1)) == len(inst.attacks1) <= 2
    assert inst.goal in inst.arguments1
    init = inst.doc.initial
    assert init.p == frozenset()
    assert lit("g", inst.goal) in init.s1
    assert {lit("n", x) for x in inst.arguments2} <= init.s2
    assert parse_spec(serialize_spec(inst.doc)) == canonical_document(inst.doc)


@settings(max_examples=40)
@given(st.integers(0, 2**63 - 1))
def test_instances_build_well_formed_machines(seed):
    inst = gen_instance(seed, BenchConfig(runs=1, num_arguments=8, max_attacks_per_agent=6))
    assert check_invariants(build(inst.doc)) == []


def test_same_seed_same_document():
    a = gen_instance(12345, BenchConfig())
    b = gen_instance(12345, BenchConfig())
    assert a == b
    assert serialize_spec(a.doc) == serialize_spec(b.doc)


def test_single_run_row():
    cfg = BenchConfig(runs=1, num_arguments=6, max_attacks_per_agent=4, seed=9)
    row, log = run_benchmark(cfg)
    (rec,) = log
    assert rec["outcome"] == "ok" and row.timeouts == 0
    assert row.avg_fsm_nodes == rec["fsm_states"]
    assert row.avg_fsm_transitions == rec["fsm_transitions"]
    assert row.avg_tree_nodes == rec["tree_nodes"]
    assert row.avg_attacks == rec["avg_attacks"]
    assert row.median_runtime == row.avg_runtime == rec["runtime_s"]


def strip_timing(records):
    return [{k: v for k, v in r.items() if k != "runtime_s"} for r in records]


def test_benchmark_is_reproducible():
    cfg = BenchConfig(runs=8, num_arguments=8, max_attacks_per_agent=5, seed=4)
    (row1, log1), (row2, log2) = run_benchmark(cfg), run_benchmark(cfg)
    assert strip_timing(log1) == strip_timing(log2)
    assert (row1.avg_fsm_nodes, row1.avg_tree_nodes) == (row2.avg_fsm_nodes, row2.avg_tree_nodes)


def test_parallel_matches_serial():
    cfg = BenchConfig(runs=4, num_arguments=6, max_attacks_per_agent=4, seed=2)
    par = BenchConfig(runs=4, num_arguments=6, max_attacks_per_agent=4, seed=2, parallelism=2)
    assert strip_timing(run_benchmark(cfg)[1]) == strip_timing(run_benchmark(par)[1])


def test_timeouts_are_counted_not_fatal():
    cfg = BenchConfig(runs=3, num_arguments=20, max_attacks_per_agent=20, timeout=1e-9)
    row, log = run_benchmark(cfg)
    assert row.timeouts == 3
    assert all(r["outcome"] == "timeout" for r in log)
    assert row.avg_fsm_nodes != row.avg_fsm_nodes  # nan: no completed runs
    assert "nan" in rows_to_csv([row])


def test_cyclic_fallback_is_logged(monkeypatch):
    from dialectic import bench

    monkeypatch.setattr(bench, "gen_instance", lambda seed, cfg: _cyclic())
    rec = run_once(0, SMALL)
    assert rec["outcome"] == "ok"
    assert rec["tree_end"] == f"depth:{bench.FALLBACK_DEPTH}"


def _cyclic():
    from dialectic.bench import Instance

    return Instance(load_example("claims"), ("a",), ("b",), (), (), "a")


def test_csv_and_log_format():
    rows, log = sweep(BenchConfig(runs=3, num_arguments=6, seed=1), [0, 3])
    text = rows_to_csv(rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert tuple(parsed[0]) == CSV_COLUMNS
    assert len(parsed) == 3
    assert all(len(r) == 8 for r in parsed)
    assert parsed[1][0] == "0.00"  # no attacks drawn at density 0
    lines = log_to_jsonl(log).splitlines()
    assert len(lines) == 6
    first = json.loads(lines[0])
    assert {"seed", "fsm_states", "tree_nodes", "outcome", "runtime_s", "max_attacks"} <= set(first)
