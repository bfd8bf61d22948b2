"""Search trees over dialogue FSMs and their minimax valuation.

Agent 1 is MAX and moves at the root (depth 1); nodes at odd depth take the
maximum of their children, nodes at even depth the minimum.
"""

from __future__ import annotations

import enum
import json
import re
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Optional

from .argumentation import extract_graph, grounded_fixpoint
from .execution import Label
from .fsm import DialogueFSM, FsmState, find_cycle

GOAL_PREDICATE = "g"


class NonTerminatingSearch(ValueError):
    def __init__(self, state_name: str):
        super().__init__(
            f"non-terminating under exhaustive end function (cycle through {state_name})"
        )
        self.state_name = state_name


class SearchAborted(RuntimeError):
    def __init__(self, message: str, nodes: int):
        super().__init__(message)
        self.nodes = nodes


@dataclass(frozen=True)
class EndFunction:
    kind: str
    depth: Optional[int] = None

    KINDS = ("exhaustive", "non-repetitive", "fixed-depth")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown end function {self.kind!r}")
        if self.kind == "fixed-depth" and (self.depth is None or self.depth < 1):
            raise ValueError("fixed-depth end function needs depth >= 1")

    @classmethod
    def parse(cls, text: str) -> EndFunction:
        """``exhaustive``, ``norepeat`` (or ``non-repetitive``), or ``depth:N``."""
        if text == "exhaustive":
            return EXHAUSTIVE
        if text in ("norepeat", "non-repetitive"):
            return NON_REPETITIVE
        m = re.fullmatch(r"depth:(\d+)", text)
        if m:
            return cls("fixed-depth", int(m.group(1)))
        raise ValueError(f"unknown end function {text!r}")

    def __str__(self) -> str:
        return f"depth:{self.depth}" if self.kind == "fixed-depth" else self.kind


EXHAUSTIVE = EndFunction("exhaustive")
NON_REPETITIVE = EndFunction("non-repetitive")


class Utility(enum.Enum):
    GROUNDED = "grounded"
    WEIGHTED = "weighted"


@dataclass(eq=False)
class SearchNode:
    state: FsmState
    depth: int
    index: int
    label: Optional[Label] = None
    parent: Optional[SearchNode] = None
    children: list[SearchNode] = field(default_factory=list)
    is_leaf: bool = False

    def path(self) -> Iterator[FsmState]:
        node: Optional[SearchNode] = self
        while node is not None:
            yield node.state
            node = node.parent


@dataclass
class SearchTree:
    fsm: DialogueFSM
    end: EndFunction
    nodes: list[SearchNode]  # breadth-first order

    @property
    def root(self) -> SearchNode:
        return self.nodes[0]

    def leaves(self) -> list[SearchNode]:
        return [n for n in self.nodes if n.is_leaf]

    def __len__(self) -> int:
        return len(self.nodes)


def closes(fsm: DialogueFSM, state: FsmState) -> bool:
    """True if ``state`` is followed only by two passes into a terminal."""
    state_out = fsm.outgoing(state)
    if len(state_out) != 1 or not state_out[0].label.empty:
        return False
    nxt = fsm.outgoing(state_out[0].target)
    return len(nxt) == 1 and nxt[0].label.empty and nxt[0].target.terminal


def bfs_tree(
    fsm: DialogueFSM,
    end: EndFunction = EXHAUSTIVE,
    max_nodes: Optional[int] = None,
    deadline: Optional[float] = None,
) -> SearchTree:
    """Unroll ``fsm`` breadth-first from its start state until ``end`` stops each branch.

    Under the exhaustive and fixed-depth end functions a branch reaching a
    dialogue's closing pair of passes stops at the last state before them.
    """
    if end.kind == "exhaustive":
        loop = find_cycle(fsm)
        if loop is not None:
            raise NonTerminatingSearch(fsm.name(loop))
    root = SearchNode(fsm.start, 1, 0)
    nodes = [root]
    queue = deque([root])
    while queue:
        node = queue.popleft()
        if deadline is not None and time.monotonic() > deadline:
            raise SearchAborted("search timed out", len(nodes))
        state = node.state
        if end.kind == "non-repetitive":
            on_path = set(node.path())
            succ = [t for t in fsm.outgoing(state) if t.target not in on_path and not t.target.terminal]
        elif state.terminal or closes(fsm, state):
            succ = []
        elif end.kind == "fixed-depth" and node.depth >= end.depth:
            succ = []
        else:
            succ = list(fsm.outgoing(state))
        if not succ:
            node.is_leaf = True
            continue
        for tr in succ:
            child = SearchNode(tr.target, node.depth + 1, len(nodes), tr.label, node)
            node.children.append(child)
            nodes.append(child)
            queue.append(child)
        if max_nodes is not None and len(nodes) > max_nodes:
            raise SearchAborted(f"search tree exceeded {max_nodes} nodes", len(nodes))
    return SearchTree(fsm, end, nodes)


@lru_cache(maxsize=8192)
def _grounded(public: frozenset) -> frozenset:
    return grounded_fixpoint(extract_graph(public))


def goals(state: FsmState) -> set[str]:
    return {
        str(l.atom.args[0])
        for l in state.s1
        if l.positive and l.atom.predicate == GOAL_PREDICATE and l.atom.arity == 1
    }


def leaf_utility(leaf: SearchNode, util: Utility = Utility.GROUNDED) -> Fraction:
    won = bool(goals(leaf.state) & _grounded(leaf.state.p))
    value = Fraction(int(won))
    if util is Utility.WEIGHTED:
        value /= leaf.depth
    return value


def propagate(
    tree: SearchTree,
    leaf_value: Callable[[SearchNode], Fraction],
    max_at_odd: bool = True,
) -> list[Fraction]:
    """Post-order valuation; returns values indexed like ``tree.nodes``."""
    values: list[Optional[Fraction]] = [None] * len(tree.nodes)
    for node in reversed(tree.nodes):
        if node.is_leaf:
            values[node.index] = leaf_value(node)
        else:
            pick = max if (node.depth % 2 == 1) == max_at_odd else min
            values[node.index] = pick(values[c.index] for c in node.children)
    return values  # type: ignore[return-value]


@dataclass
class MinimaxTree:
    tree: SearchTree
    utility: Utility
    values: list[Fraction]

    @property
    def root_value(self) -> Fraction:
        return self.values[0]

    def value(self, node: SearchNode) -> Fraction:
        return self.values[node.index]


def minimax(tree: SearchTree, util: Utility = Utility.GROUNDED) -> MinimaxTree:
    cache: dict[tuple[FsmState, int], Fraction] = {}

    def score(leaf: SearchNode) -> Fraction:
        key = (leaf.state, leaf.depth)
        if key not in cache:
            cache[key] = leaf_utility(leaf, util)
        return cache[key]

    return MinimaxTree(tree, util, propagate(tree, score))


# -- export ------------------------------------------------------------------


def tree_to_dict(mt: MinimaxTree) -> dict:
    fsm = mt.tree.fsm
    return {
        "end": str(mt.tree.end),
        "utility": mt.utility.value,
        "root": str(mt.root_value),
        "nodes": [
            {
                "id": n.index,
                "parent": None if n.parent is None else n.parent.index,
                "depth": n.depth,
                "state": fsm.name(n.state),
                "label": None if n.label is None else str(n.label),
                "leaf": n.is_leaf,
                "value": str(mt.value(n)),
            }
            for n in mt.tree.nodes
        ],
    }


def export_tree_json(mt: MinimaxTree) -> str:
    return json.dumps(tree_to_dict(mt), indent=2, ensure_ascii=False) + "\n"


def export_tree_dot(mt: MinimaxTree) -> str:
    fsm = mt.tree.fsm
    lines = ["digraph tree {", "  node [shape=box];"]
    for n in mt.tree.nodes:
        lines.append(f'  n{n.index} [label="{fsm.name(n.state)} [{mt.value(n)}]"];')
    for n in mt.tree.nodes:
        for c in n.children:
            lines.append(f"  n{n.index} -> n{c.index};")
    lines.append("}")
    return "\n".join(lines) + "\n"
