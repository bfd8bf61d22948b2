"""Execution semantics for two-agent systems of action rules.

Agent 1 acts at odd steps, agent 2 at even steps.  An agent whose rules fire
must act on a minimal disjunct of a fired head; it passes only when nothing
fires.  A dialogue ends after two consecutive passes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .logic import (
    EMPTY_ACTIONS,
    ActionUnit,
    Formula,
    Literal,
    entails,
    format_formula,
    minimal_disjuncts,
)


@dataclass(frozen=True)
class Rule:
    condition: Formula
    head: Formula

    def __str__(self) -> str:
        return f"{format_formula(self.condition)} => {format_formula(self.head)}"


@dataclass(frozen=True)
class ExecutionState:
    s1: frozenset = frozenset()
    a1: frozenset = frozenset()
    p: frozenset = frozenset()
    a2: frozenset = frozenset()
    s2: frozenset = frozenset()

    @property
    def content(self) -> tuple[frozenset, frozenset, frozenset]:
        return (self.s1, self.p, self.s2)

    def without_actions(self) -> ExecutionState:
        return ExecutionState(self.s1, EMPTY_ACTIONS, self.p, EMPTY_ACTIONS, self.s2)


@dataclass(frozen=True)
class Execution:
    """States e(0)..e(n).  ``finite`` executions end at the terminal index t = n."""

    states: tuple[ExecutionState, ...]
    finite: bool

    @property
    def t(self) -> Optional[int]:
        return len(self.states) - 1 if self.finite else None

    def __len__(self) -> int:
        return len(self.states) - 1


@dataclass(frozen=True)
class System:
    rules1: tuple[Rule, ...] = ()
    rules2: tuple[Rule, ...] = ()
    initials: tuple[ExecutionState, ...] = field(default=())

    def __post_init__(self) -> None:
        for init in self.initials:
            if init.a1 or init.a2:
                raise ValueError("initial states must have empty action components")

    def rules(self, agent: int) -> tuple[Rule, ...]:
        return self.rules1 if agent == 1 else self.rules2


@dataclass(frozen=True)
class Label:
    """A transition letter: the action sets of agent 1 and agent 2."""

    a1: frozenset = frozenset()
    a2: frozenset = frozenset()

    @property
    def empty(self) -> bool:
        return not self.a1 and not self.a2

    def sort_key(self) -> tuple:
        return (action_set_key(self.a1), action_set_key(self.a2))

    def __str__(self) -> str:
        return f"{format_action_set(self.a1)}/{format_action_set(self.a2)}"


PASS = Label()


def literal_key(l: Literal) -> str:
    return str(l)


def action_set_key(actions: Iterable[ActionUnit]) -> tuple[str, ...]:
    return tuple(sorted(map(str, actions)))


def format_action_set(actions: Iterable[ActionUnit]) -> str:
    return "{" + ", ".join(action_set_key(actions)) + "}"


def format_trace(trace: Sequence[Label]) -> str:
    return " ".join(map(str, trace))


def fired_heads(rules: Sequence[Rule], private: frozenset, public: frozenset) -> list[Formula]:
    view = private | public
    return [r.head for r in rules if entails(view, r.condition)]


def candidate_actions(rules: Sequence[Rule], private: frozenset, public: frozenset) -> frozenset:
    """Action sets the agent may perform; ``{frozenset()}`` when nothing fires."""
    out: set[frozenset] = set()
    for head in fired_heads(rules, private, public):
        out |= minimal_disjuncts(head)
    return frozenset(out) if out else frozenset((EMPTY_ACTIONS,))


def _update(state: frozenset, actions: Iterable[ActionUnit], public: bool) -> frozenset:
    dels = {u.literal for u in actions if u.op.public == public and not u.op.adds}
    adds = {u.literal for u in actions if u.op.public == public and u.op.adds}
    if not dels and not adds:
        return state
    return (state - dels) | adds


def apply_actions(state: ExecutionState, a1: frozenset, a2: frozenset) -> ExecutionState:
    """Propagate ``state``'s contents through ``a1`` and ``a2``.

    The returned state carries the propagated contents and records ``a1``/``a2``
    as its action components.  Deletions are applied before additions.
    """
    return ExecutionState(
        s1=_update(state.s1, a1, public=False),
        a1=frozenset(a1),
        p=_update(state.p, tuple(a1) + tuple(a2), public=True),
        a2=frozenset(a2),
        s2=_update(state.s2, a2, public=False),
    )


def agent_candidates(system: System, agent: int, state: ExecutionState) -> list[frozenset]:
    private = state.s1 if agent == 1 else state.s2
    cands = candidate_actions(system.rules(agent), private, state.p)
    return sorted(cands, key=action_set_key)


def enumerate_executions(
    system: System, initial: ExecutionState, max_steps: int
) -> list[Execution]:
    """Depth-first enumeration of every execution from ``initial``.

    Executions that end (two consecutive passes) within ``max_steps`` action
    steps are returned as finite; the others are cut after step ``max_steps``
    and flagged as truncated prefixes.
    """
    if max_steps < 2:
        raise ValueError("max_steps must be at least 2")
    if initial.a1 or initial.a2:
        raise ValueError("initial state must have empty action components")
    out: list[Execution] = []
    row0 = initial.without_actions()
    # stack entries: rows so far, the last of which still needs its action
    stack: list[tuple[ExecutionState, ...]] = [(row0, row0)]
    while stack:
        rows = stack.pop()
        m = len(rows) - 1
        agent = 1 if m % 2 else 2
        current = rows[-1]
        branches = []
        for actions in agent_candidates(system, agent, current):
            a1, a2 = (actions, EMPTY_ACTIONS) if agent == 1 else (EMPTY_ACTIONS, actions)
            row = ExecutionState(current.s1, a1, current.p, a2, current.s2)
            done = rows[:-1] + (row,)
            previous = rows[-2]
            if not actions and m >= 2 and not (previous.a1 or previous.a2):
                final = apply_actions(row, a1, a2).without_actions()
                out.append(Execution(done + (final,), finite=True))
            elif m == max_steps:
                out.append(Execution(done, finite=False))
            else:
                nxt = apply_actions(row, a1, a2).without_actions()
                branches.append(done + (nxt,))
        stack.extend(reversed(branches))
    return out


def reflect(e: Execution) -> tuple[Label, ...]:
    """The labels of steps 1..t-1 (for a truncated prefix, every recorded step)."""
    rows = e.states[1:-1] if e.finite else e.states[1:]
    return tuple(Label(r.a1, r.a2) for r in rows)


def generates(system: System, e: Execution) -> bool:
    """Declarative re-check that ``system`` generates the finite execution ``e``."""
    if not e.finite:
        return False
    rows = e.states
    t = len(rows) - 1
    if t < 3 or rows[0] not in system.initials:
        return False
    if rows[0].a1 or rows[0].a2 or rows[t].a1 or rows[t].a2:
        return False
    for n in range(t):
        nxt = apply_actions(rows[n], rows[n].a1, rows[n].a2)
        if nxt.content != rows[n + 1].content:
            return False
    acted = [bool(r.a1 or r.a2) for r in rows]
    if acted[t - 1] or acted[t - 2]:
        return False
    if any(not acted[n] and not acted[n + 1] for n in range(1, t - 2)):
        return False
    for m in range(1, t):
        agent = 1 if m % 2 else 2
        mine, other = (rows[m].a1, rows[m].a2) if agent == 1 else (rows[m].a2, rows[m].a1)
        if other:
            return False
        private = rows[m].s1 if agent == 1 else rows[m].s2
        heads = fired_heads(system.rules(agent), private, rows[m].p)
        if not heads:
            if mine:
                return False
        elif not any(mine in minimal_disjuncts(h) for h in heads):
            return False
    return True


__all__ = [
    "Execution",
    "ExecutionState",
    "Label",
    "PASS",
    "Rule",
    "System",
    "apply_actions",
    "candidate_actions",
    "enumerate_executions",
    "fired_heads",
    "generates",
    "reflect",
]
