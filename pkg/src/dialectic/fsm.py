"""Compile a rule system plus an initial state into its dialogue FSM.

States are ``(turn, s1, p, s2)`` where ``turn`` names the agent to move and
0 marks a terminal.  A state whose content is dead for both agents is entered
with a pass and then closes with a second pass; the intermediate state of that
closing pair carries ``passed=True`` so that it never merges with a state of
the same turn and content that was reached by a real move.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

import jsonschema

from .dsl import format_literals, parse_action_unit, parse_literal
from .execution import (
    PASS,
    ExecutionState,
    Label,
    Rule,
    action_set_key,
    candidate_actions,
)
from .logic import EMPTY_ACTIONS

SCHEMA_ID = "dialectic-fsm/v1"


class BuildAborted(RuntimeError):
    def __init__(self, message: str, states: int):
        super().__init__(message)
        self.states = states


class StateSpaceExceeded(BuildAborted):
    pass


class BuildTimeout(BuildAborted):
    pass


class FsmFormatError(ValueError):
    pass


@dataclass(frozen=True)
class FsmState:
    turn: int
    s1: frozenset
    p: frozenset
    s2: frozenset
    passed: bool = False

    @property
    def content(self) -> tuple[frozenset, frozenset, frozenset]:
        return (self.s1, self.p, self.s2)

    @property
    def terminal(self) -> bool:
        return self.turn == 0

    def __str__(self) -> str:
        sets = ", ".join("{" + format_literals(s) + "}" for s in self.content)
        return f"({self.turn}, {sets})"


@dataclass(frozen=True)
class Transition:
    source: FsmState
    label: Label
    target: FsmState


@dataclass(frozen=True)
class DialogueFSM:
    """States and transitions are kept in discovery order, which is canonical."""

    states: tuple[FsmState, ...]
    transitions: tuple[Transition, ...]
    start: FsmState
    terminals: tuple[FsmState, ...]
    alphabet: tuple[Label, ...]

    @cached_property
    def _out(self) -> dict[FsmState, tuple[Transition, ...]]:
        out: dict[FsmState, list[Transition]] = {s: [] for s in self.states}
        for tr in self.transitions:
            out[tr.source].append(tr)
        return {s: tuple(sorted(ts, key=lambda t: t.label.sort_key())) for s, ts in out.items()}

    @cached_property
    def _index(self) -> dict[FsmState, int]:
        return {s: i for i, s in enumerate(self.states)}

    def outgoing(self, state: FsmState) -> tuple[Transition, ...]:
        return self._out[state]

    def step(self, state: FsmState, label: Label) -> Optional[FsmState]:
        for tr in self._out.get(state, ()):
            if tr.label == label:
                return tr.target
        return None

    def index(self, state: FsmState) -> int:
        return self._index[state]

    def name(self, state: FsmState) -> str:
        return f"s{self._index[state] + 1}"

    def summary(self) -> str:
        return (
            f"states={len(self.states)} transitions={len(self.transitions)} "
            f"terminals={len(self.terminals)}"
        )


def _private(state: FsmState, agent: int) -> frozenset:
    return state.s1 if agent == 1 else state.s2


def _apply(units, private: frozenset, public: frozenset) -> tuple[frozenset, frozenset]:
    dels = {u.literal for u in units if not u.op.public and not u.op.adds}
    adds = {u.literal for u in units if not u.op.public and u.op.adds}
    pdels = {u.literal for u in units if u.op.public and not u.op.adds}
    padds = {u.literal for u in units if u.op.public and u.op.adds}
    return (private - dels) | adds, (public - pdels) | padds


def build_machine(
    rules1: Sequence[Rule],
    rules2: Sequence[Rule],
    initial: ExecutionState,
    max_states: Optional[int] = None,
    deadline: Optional[float] = None,
) -> DialogueFSM:
    """Build the FSM by alternating breadth-first expansion of each agent's states.

    ``deadline`` is an absolute :func:`time.monotonic` value checked between
    state expansions.
    """
    if initial.a1 or initial.a2:
        raise ValueError("initial state must have empty action components")
    rules = {1: tuple(rules1), 2: tuple(rules2)}
    memo: dict[tuple[int, frozenset, frozenset], list[frozenset]] = {}

    def moves(agent: int, private: frozenset, public: frozenset) -> list[frozenset]:
        key = (agent, private, public)
        if key not in memo:
            cands = candidate_actions(rules[agent], private, public)
            memo[key] = sorted(cands, key=action_set_key)
        return memo[key]

    def expand(state: FsmState) -> Iterator[tuple[Label, FsmState]]:
        if state.terminal:
            return
        if state.passed:
            yield PASS, FsmState(0, *state.content)
            return
        x = state.turn
        y = 3 - x
        options = moves(x, _private(state, x), state.p)
        if options == [EMPTY_ACTIONS]:
            dead = moves(y, _private(state, y), state.p) == [EMPTY_ACTIONS]
            yield PASS, FsmState(y, *state.content, passed=dead)
            return
        for actions in options:
            private, public = _apply(actions, _private(state, x), state.p)
            if x == 1:
                yield Label(actions, EMPTY_ACTIONS), FsmState(2, private, public, state.s2)
            else:
                yield Label(EMPTY_ACTIONS, actions), FsmState(1, state.s1, public, private)

    start = FsmState(1, initial.s1, initial.p, initial.s2)
    order = [start]
    seen = {start}
    transitions: list[Transition] = []
    frontier = [start]
    while frontier:
        layer: list[FsmState] = []
        for state in frontier:
            if deadline is not None and time.monotonic() > deadline:
                raise BuildTimeout("build timed out", len(order))
            for label, target in expand(state):
                transitions.append(Transition(state, label, target))
                if target not in seen:
                    seen.add(target)
                    order.append(target)
                    layer.append(target)
                    if max_states is not None and len(order) > max_states:
                        raise StateSpaceExceeded(
                            f"state-space cap exceeded ({len(order)} > {max_states})", len(order)
                        )
        frontier = layer
    return _assemble(order, transitions, start)


def _assemble(states, transitions, start) -> DialogueFSM:
    alphabet: dict[Label, None] = {}
    for tr in transitions:
        alphabet.setdefault(tr.label, None)
    return DialogueFSM(
        states=tuple(states),
        transitions=tuple(transitions),
        start=start,
        terminals=tuple(s for s in states if s.terminal),
        alphabet=tuple(sorted(alphabet, key=Label.sort_key)),
    )


def accepts(fsm: DialogueFSM, trace: Sequence[Label]) -> bool:
    state: Optional[FsmState] = fsm.start
    for label in trace:
        state = fsm.step(state, label)
        if state is None:
            return False
    return state.terminal


def accepted_traces(fsm: DialogueFSM, max_length: int) -> set[tuple[Label, ...]]:
    """Every accepted trace of at most ``max_length`` labels."""
    found: set[tuple[Label, ...]] = set()
    stack: list[tuple[FsmState, tuple[Label, ...]]] = [(fsm.start, ())]
    while stack:
        state, trace = stack.pop()
        if state.terminal:
            found.add(trace)
            continue
        if len(trace) == max_length:
            continue
        for tr in fsm.outgoing(state):
            stack.append((tr.target, trace + (tr.label,)))
    return found


def find_cycle(fsm: DialogueFSM) -> Optional[FsmState]:
    """A state on some cycle reachable from the start, or None."""
    colour: dict[FsmState, int] = {}
    stack: list[tuple[FsmState, Iterator[Transition]]] = [(fsm.start, iter(fsm.outgoing(fsm.start)))]
    colour[fsm.start] = 1
    while stack:
        state, it = stack[-1]
        tr = next(it, None)
        if tr is None:
            colour[state] = 2
            stack.pop()
            continue
        c = colour.get(tr.target, 0)
        if c == 1:
            return tr.target
        if c == 0:
            colour[tr.target] = 1
            stack.append((tr.target, iter(fsm.outgoing(tr.target))))
    return None


def check_invariants(fsm: DialogueFSM) -> list[str]:
    """Structural problems with ``fsm``; empty when it is well formed."""
    problems = []
    if fsm.start.turn != 1:
        problems.append("start state does not have turn 1")
    if set(fsm.terminals) != {s for s in fsm.states if s.turn == 0}:
        problems.append("terminals differ from turn-0 states")
    if set(fsm.alphabet) != {tr.label for tr in fsm.transitions}:
        problems.append("alphabet differs from transition labels")
    for tr in fsm.transitions:
        src, lab, dst = tr.source, tr.label, tr.target
        if src.turn == 0:
            problems.append(f"terminal {fsm.name(src)} has an outgoing transition")
        elif src.turn == 1 and (lab.a2 or dst.turn not in (0, 2)):
            problems.append(f"turn violation on {fsm.name(src)} -> {fsm.name(dst)}")
        elif src.turn == 2 and (lab.a1 or dst.turn not in (0, 1)):
            problems.append(f"turn violation on {fsm.name(src)} -> {fsm.name(dst)}")
    labels_seen: set[tuple[FsmState, Label]] = set()
    for tr in fsm.transitions:
        if (tr.source, tr.label) in labels_seen:
            problems.append(f"nondeterministic label out of {fsm.name(tr.source)}")
        labels_seen.add((tr.source, tr.label))
    reached = {fsm.start}
    todo = [fsm.start]
    while todo:
        for tr in fsm.outgoing(todo.pop()):
            if tr.target not in reached:
                reached.add(tr.target)
                todo.append(tr.target)
    if reached != set(fsm.states):
        problems.append("unreachable states present")
    return problems


# -- export / import ---------------------------------------------------------


def _units(actions) -> list[str]:
    return list(action_set_key(actions))


def _lits(s: frozenset) -> list[str]:
    return sorted(map(str, s))


def to_dict(fsm: DialogueFSM) -> dict:
    idx = fsm.index
    return {
        "schema": SCHEMA_ID,
        "states": [
            {
                "id": i,
                "turn": s.turn,
                "passed": s.passed,
                "private1": _lits(s.s1),
                "public": _lits(s.p),
                "private2": _lits(s.s2),
            }
            for i, s in enumerate(fsm.states)
        ],
        "transitions": [
            {
                "source": idx(t.source),
                "a1": _units(t.label.a1),
                "a2": _units(t.label.a2),
                "target": idx(t.target),
            }
            for t in fsm.transitions
        ],
        "start": idx(fsm.start),
        "terminals": [idx(s) for s in fsm.terminals],
        "alphabet": [{"a1": _units(l.a1), "a2": _units(l.a2)} for l in fsm.alphabet],
    }


def export_json(fsm: DialogueFSM) -> str:
    return json.dumps(to_dict(fsm), indent=2, ensure_ascii=False) + "\n"


_STR_LIST = {"type": "array", "items": {"type": "string"}}
_LABEL = {
    "type": "object",
    "required": ["a1", "a2"],
    "properties": {"a1": _STR_LIST, "a2": _STR_LIST},
}
JSON_SCHEMA = {
    "type": "object",
    "required": ["schema", "states", "transitions", "start", "terminals", "alphabet"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "states": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "turn", "private1", "public", "private2"],
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "turn": {"enum": [0, 1, 2]},
                    "passed": {"type": "boolean"},
                    "private1": _STR_LIST,
                    "public": _STR_LIST,
                    "private2": _STR_LIST,
                },
            },
        },
        "transitions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["source", "a1", "a2", "target"],
                "properties": {
                    "source": {"type": "integer", "minimum": 0},
                    "target": {"type": "integer", "minimum": 0},
                    "a1": _STR_LIST,
                    "a2": _STR_LIST,
                },
            },
        },
        "start": {"type": "integer", "minimum": 0},
        "terminals": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "alphabet": {"type": "array", "items": _LABEL},
    },
}


def import_json(text: str) -> DialogueFSM:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FsmFormatError(f"invalid JSON: {exc}") from exc
    try:
        jsonschema.validate(data, JSON_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise FsmFormatError(f"schema violation at {where}: {exc.message}") from exc
    try:
        states = []
        for i, raw in enumerate(data["states"]):
            if raw["id"] != i:
                raise FsmFormatError(f"state ids must be 0..n-1 in order (got {raw['id']} at {i})")
            states.append(
                FsmState(
                    raw["turn"],
                    frozenset(map(parse_literal, raw["private1"])),
                    frozenset(map(parse_literal, raw["public"])),
                    frozenset(map(parse_literal, raw["private2"])),
                    raw.get("passed", False),
                )
            )

        def state(i: int) -> FsmState:
            if i >= len(states):
                raise FsmFormatError(f"unknown state id {i}")
            return states[i]

        def label(raw: dict) -> Label:
            return Label(
                frozenset(map(parse_action_unit, raw["a1"])),
                frozenset(map(parse_action_unit, raw["a2"])),
            )

        transitions = [
            Transition(state(t["source"]), label(t), state(t["target"])) for t in data["transitions"]
        ]
        fsm = DialogueFSM(
            states=tuple(states),
            transitions=tuple(transitions),
            start=state(data["start"]),
            terminals=tuple(state(i) for i in data["terminals"]),
            alphabet=tuple(label(l) for l in data["alphabet"]),
        )
    except ValueError as exc:
        if isinstance(exc, FsmFormatError):
            raise
        raise FsmFormatError(f"malformed content: {exc}") from exc
    if len(set(states)) != len(states):
        raise FsmFormatError("duplicate states")
    return fsm


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(fsm: DialogueFSM) -> str:
    lines = ["digraph fsm {", "  rankdir=LR;", "  node [shape=circle];", "  __start [shape=point];"]
    for s in fsm.states:
        shape = "doublecircle" if s.terminal else "circle"
        text = f"{fsm.name(s)}\\n{_dot_escape(str(s))}"
        lines.append(f'  {fsm.name(s)} [shape={shape}, label="{text}"];')
    lines.append(f"  __start -> {fsm.name(fsm.start)};")
    for t in fsm.transitions:
        text = _dot_escape(str(t.label))
        lines.append(f'  {fsm.name(t.source)} -> {fsm.name(t.target)} [label="{text}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
