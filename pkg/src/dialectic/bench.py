"""Random dialogue instances and the timing benchmark over them."""

from __future__ import annotations

import csv
import io
import json
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .dsl import SpecDocument
from .execution import ExecutionState, Rule
from .fsm import BuildAborted, build_machine
from .game import EndFunction, NonTerminatingSearch, SearchAborted, bfs_tree, minimax
from .logic import ActionUnit, Atom, Literal, Op, Term, conj, disj

CSV_COLUMNS = (
    "avg_attacks",
    "avg_fsm_nodes",
    "avg_fsm_transitions",
    "avg_tree_nodes",
    "avg_runtime_s",
    "median_runtime_s",
    "timeouts",
    "seed",
)

FALLBACK_DEPTH = 40


@dataclass(frozen=True)
class BenchConfig:
    runs: int = 100
    num_arguments: int = 20
    max_attacks_per_agent: int = 20
    timeout: float = 100.0
    seed: int = 0
    parallelism: int = 1

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.num_arguments < 2:
            raise ValueError("need at least two arguments")


@dataclass(frozen=True)
class BenchRow:
    avg_attacks: float
    avg_fsm_nodes: float
    avg_fsm_transitions: float
    avg_tree_nodes: float
    avg_runtime: float
    median_runtime: float
    timeouts: int
    seed: int


@dataclass(frozen=True)
class Instance:
    """A generated document plus the argument structure it encodes."""

    doc: SpecDocument
    arguments1: tuple[str, ...]
    arguments2: tuple[str, ...]
    attacks1: tuple[tuple[str, str], ...]
    attacks2: tuple[tuple[str, str], ...]
    goal: str


def _atom(pred: str, *args: str) -> Atom:
    return Atom(pred, tuple(Term(a) for a in args))


def _unit(op: Op, pred: str, *args: str) -> ActionUnit:
    return ActionUnit(op, Literal(_atom(pred, *args)))


def argument_names(n: int) -> list[str]:
    return [f"x{i}" for i in range(1, n + 1)]


def posited(arg: str, attacks: Iterable[tuple[str, str]]):
    """Condition that ``arg`` is on the table: as an argument or as an attacker."""
    options = [_atom("a", arg)] + [_atom("a", u, v) for u, v in sorted(attacks) if u == arg]
    return disj(*options)


def goal_rule(x: str) -> Rule:
    return Rule(
        conj(_atom("g", x), _atom("n", x)),
        conj(_unit(Op.PUB_ADD, "a", x), _unit(Op.PRIV_DEL, "n", x)),
    )


def attack_rule(u: str, v: str, all_attacks: Iterable[tuple[str, str]]) -> Rule:
    return Rule(
        conj(posited(v, all_attacks), _atom("n", u), _atom("e", u, v)),
        conj(_unit(Op.PUB_ADD, "a", u, v), _unit(Op.PRIV_DEL, "n", u)),
    )


def gen_instance(seed: int, cfg: BenchConfig) -> Instance:
    rng = random.Random(seed)
    names = argument_names(cfg.num_arguments)
    while True:
        owner = [rng.randint(1, 2) for _ in names]
        if 1 in owner and 2 in owner:
            break
    own = {
        1: [x for x, o in zip(names, owner) if o == 1],
        2: [x for x, o in zip(names, owner) if o == 2],
    }
    attacks: dict[int, list[tuple[str, str]]] = {}
    for agent in (1, 2):
        count = rng.randint(0, cfg.max_attacks_per_agent)
        drawn = {(rng.choice(own[agent]), rng.choice(own[3 - agent])) for _ in range(count)}
        attacks[agent] = sorted(drawn)
    goal = rng.choice(own[1])
    everything = attacks[1] + attacks[2]

    rules1 = [goal_rule(goal)] + [attack_rule(u, v, everything) for u, v in attacks[1]]
    rules2 = [attack_rule(u, v, everything) for u, v in attacks[2]]

    def private(agent: int) -> frozenset:
        lits = [Literal(_atom("n", x)) for x in own[agent]]
        lits += [Literal(_atom("e", u, v)) for u, v in attacks[agent]]
        if agent == 1:
            lits.append(Literal(_atom("g", goal)))
        return frozenset(lits)

    initial = ExecutionState(s1=private(1), s2=private(2))
    doc = SpecDocument.build(rules1, rules2, initial, name=f"random-{seed}")
    return Instance(
        doc,
        tuple(own[1]),
        tuple(own[2]),
        tuple(attacks[1]),
        tuple(attacks[2]),
        goal,
    )


def run_seeds(cfg: BenchConfig) -> list[int]:
    rng = random.Random(cfg.seed)
    return [rng.getrandbits(63) for _ in range(cfg.runs)]


def run_once(seed: int, cfg: BenchConfig, run: int = 0) -> dict:
    """One benchmark run; returns its log record."""
    inst = gen_instance(seed, cfg)
    record = {
        "run": run,
        "seed": seed,
        "max_attacks": cfg.max_attacks_per_agent,
        "attacks1": len(inst.attacks1),
        "attacks2": len(inst.attacks2),
        "avg_attacks": (len(inst.attacks1) + len(inst.attacks2)) / 2,
        "fsm_states": None,
        "fsm_transitions": None,
        "tree_nodes": None,
        "tree_end": None,
        "root": None,
        "runtime_s": None,
        "outcome": "ok",
    }
    started = time.monotonic()
    deadline = started + cfg.timeout
    try:
        doc = inst.doc
        fsm = build_machine(doc.system.rules1, doc.system.rules2, doc.initial, deadline=deadline)
        record["fsm_states"] = len(fsm.states)
        record["fsm_transitions"] = len(fsm.transitions)
        try:
            end = EndFunction("exhaustive")
            tree = bfs_tree(fsm, end, deadline=deadline)
        except NonTerminatingSearch:
            end = EndFunction("fixed-depth", FALLBACK_DEPTH)
            tree = bfs_tree(fsm, end, deadline=deadline)
        record["tree_end"] = str(end)
        record["tree_nodes"] = len(tree)
        record["root"] = str(minimax(tree).root_value)
    except (BuildAborted, SearchAborted):
        record["outcome"] = "timeout"
    record["runtime_s"] = time.monotonic() - started
    return record


def _mean(values: Sequence[float]) -> float:
    return statistics.fmean(values) if values else float("nan")


def summarize(records: Sequence[dict], seed: int) -> BenchRow:
    done = [r for r in records if r["outcome"] == "ok"]
    times = [r["runtime_s"] for r in records]
    return BenchRow(
        avg_attacks=_mean([r["avg_attacks"] for r in records]),
        avg_fsm_nodes=_mean([r["fsm_states"] for r in done]),
        avg_fsm_transitions=_mean([r["fsm_transitions"] for r in done]),
        avg_tree_nodes=_mean([r["tree_nodes"] for r in done]),
        avg_runtime=_mean(times),
        median_runtime=statistics.median(times),
        timeouts=len(records) - len(done),
        seed=seed,
    )


def _run_star(args: tuple[int, BenchConfig, int]) -> dict:
    return run_once(*args)


def run_benchmark(cfg: BenchConfig) -> tuple[BenchRow, list[dict]]:
    """Run ``cfg.runs`` instances; returns the summary row and the per-run log."""
    jobs = [(s, cfg, i) for i, s in enumerate(run_seeds(cfg))]
    if cfg.parallelism > 1:
        with ProcessPoolExecutor(cfg.parallelism) as pool:
            records = list(pool.map(_run_star, jobs))
    else:
        records = [_run_star(j) for j in jobs]
    return summarize(records, cfg.seed), records


def sweep(base: BenchConfig, densities: Sequence[int]) -> tuple[list[BenchRow], list[dict]]:
    """One row per attack density, each over ``base.runs`` runs."""
    rows, log = [], []
    for k in densities:
        cfg = BenchConfig(**{**asdict(base), "max_attacks_per_agent": k})
        row, records = run_benchmark(cfg)
        rows.append(row)
        log.extend(records)
    return rows, log


def _fmt(x: float, places: int) -> str:
    return "nan" if x != x else f"{x:.{places}f}"


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(
            [
                _fmt(r.avg_attacks, 2),
                _fmt(r.avg_fsm_nodes, 2),
                _fmt(r.avg_fsm_transitions, 2),
                _fmt(r.avg_tree_nodes, 2),
                _fmt(r.avg_runtime, 3),
                _fmt(r.median_runtime, 3),
                r.timeouts,
                r.seed,
            ]
        )
    return buf.getvalue()


def log_to_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
