"""Dialogue systems in propositional executable logic, compiled to finite state machines."""

from importlib import resources

from .argumentation import ArgumentGraph, extract_graph, grounded_bruteforce, grounded_fixpoint
from .dsl import ParseError, SemanticError, SpecDocument, parse_spec, serialize_spec
from .execution import (
    Execution,
    ExecutionState,
    Label,
    Rule,
    System,
    apply_actions,
    candidate_actions,
    enumerate_executions,
    fired_heads,
    reflect,
)
from .fsm import DialogueFSM, FsmState, accepts, build_machine, export_dot, export_json, import_json
from .game import EndFunction, Utility, bfs_tree, leaf_utility, minimax
from .logic import entails, is_consistent, minimal_disjuncts, satisfies

__version__ = "0.1.0"

EXAMPLES = ("claims", "chain", "chain_literal", "fork", "two_goals", "silent")


def example_text(name: str) -> str:
    """Source text of a bundled example system."""
    return resources.files(__package__).joinpath("data", f"{name}.dsl").read_text(encoding="utf-8")


def load_example(name: str) -> SpecDocument:
    return parse_spec(example_text(name))


def build(doc: SpecDocument, **kwargs) -> DialogueFSM:
    return build_machine(doc.system.rules1, doc.system.rules2, doc.initial, **kwargs)
