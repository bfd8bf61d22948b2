"""Shared hypothesis strategies and small utilities for the test suite."""

from pathlib import Path

from hypothesis import strategies as st

from dialectic.argumentation import ArgumentGraph
from dialectic.dsl import SpecDocument
from dialectic.execution import ExecutionState, Rule
from dialectic.logic import ActionUnit, And, Atom, Literal, Not, Op, Or, Term

DATA = Path(__file__).parent / "data"

CONSTANTS = ("a", "b", "c")
PREDICATES = ("p", "q", "r")


def small_atoms(predicates=PREDICATES, constants=CONSTANTS, max_arity=1):
    term = st.builds(Term, st.sampled_from(constants), st.booleans())
    return st.builds(
        Atom,
        st.sampled_from(predicates),
        st.lists(term, max_size=max_arity).map(tuple),
    )


def literals(atoms=None):
    return st.builds(Literal, atoms if atoms is not None else small_atoms(), st.booleans())


def conditions(atoms=None, max_leaves=6):
    leaves = atoms if atoms is not None else small_atoms()
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.builds(Not, inner),
            st.lists(inner, min_size=2, max_size=3).map(lambda xs: And(tuple(xs))),
            st.lists(inner, min_size=2, max_size=3).map(lambda xs: Or(tuple(xs))),
        ),
        max_leaves=max_leaves,
    )


def action_units(atoms=None):
    return st.builds(ActionUnit, st.sampled_from(list(Op)), literals(atoms))


def action_formulas(units=None, max_leaves=6):
    leaves = units if units is not None else action_units()
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.lists(inner, min_size=2, max_size=3).map(lambda xs: And(tuple(xs))),
            st.lists(inner, min_size=2, max_size=3).map(lambda xs: Or(tuple(xs))),
        ),
        max_leaves=max_leaves,
    )


def states(atoms=None, max_size=6):
    return st.frozensets(literals(atoms), max_size=max_size)


@st.composite
def documents(draw, max_rules=3):
    """Arbitrary (not necessarily meaningful) spec documents."""
    rule = st.builds(Rule, conditions(), action_formulas())
    rules1 = draw(st.lists(rule, max_size=max_rules))
    rules2 = draw(st.lists(rule, max_size=max_rules))
    initial = ExecutionState(s1=draw(states()), p=draw(states()), s2=draw(states()))
    text = st.text(st.characters(blacklist_categories=("Cs", "Cc")), max_size=12)
    name = draw(st.none() | text)
    comment = draw(st.none() | text)
    return SpecDocument.build(rules1, rules2, initial, name=name, comment=comment)


# Restricted vocabulary for systems whose executions are enumerated in full:
# positive literals over two nullary predicates and three unary ones keep the
# reachable state space small while still exercising negation, disjunctive
# heads and public deletions.
SYSTEM_ATOMS = small_atoms(predicates=("p", "q"), constants=("a", "b"), max_arity=1)


@st.composite
def small_systems(draw):
    unit = st.builds(ActionUnit, st.sampled_from(list(Op)), st.builds(Literal, SYSTEM_ATOMS))
    rule = st.builds(
        Rule,
        conditions(SYSTEM_ATOMS, max_leaves=3),
        action_formulas(unit, max_leaves=3),
    )
    rules1 = draw(st.lists(rule, max_size=2))
    rules2 = draw(st.lists(rule, max_size=2))
    pos = st.frozensets(st.builds(Literal, SYSTEM_ATOMS), max_size=3)
    initial = ExecutionState(s1=draw(pos), p=draw(pos), s2=draw(pos))
    return SpecDocument.build(rules1, rules2, initial)


@st.composite
def graphs(draw, max_args=12):
    n = draw(st.integers(0, max_args))
    args = [f"x{i}" for i in range(n)]
    if not args:
        return ArgumentGraph()
    pairs = st.tuples(st.sampled_from(args), st.sampled_from(args))
    attacks = draw(st.frozensets(pairs, max_size=2 * n))
    return ArgumentGraph.from_attacks(args, attacks)


def random_document(rng):
    """A seeded pseudo-random document built with :mod:`random` (no hypothesis)."""

    def r_atom():
        args = tuple(Term(rng.choice(CONSTANTS), rng.random() < 0.2) for _ in range(rng.randint(0, 2)))
        return Atom(rng.choice(PREDICATES), args)

    def r_literal():
        return Literal(r_atom(), rng.random() < 0.7)

    def r_condition(depth=0):
        roll = rng.random()
        if depth >= 3 or roll < 0.4:
            return r_atom()
        if roll < 0.55:
            return Not(r_condition(depth + 1))
        parts = tuple(r_condition(depth + 1) for _ in range(rng.randint(2, 3)))
        return And(parts) if roll < 0.8 else Or(parts)

    def r_action(depth=0):
        if depth >= 3 or rng.random() < 0.45:
            return ActionUnit(rng.choice(list(Op)), r_literal())
        parts = tuple(r_action(depth + 1) for _ in range(rng.randint(2, 3)))
        return And(parts) if rng.random() < 0.5 else Or(parts)

    def r_rules():
        return [Rule(r_condition(), r_action()) for _ in range(rng.randint(0, 3))]

    def r_state():
        return frozenset(r_literal() for _ in range(rng.randint(0, 5)))

    def r_text():
        if rng.random() < 0.5:
            return None
        return "".join(rng.choice('ab "\\#;{}xyz-é') for _ in range(rng.randint(0, 10)))

    initial = ExecutionState(s1=r_state(), p=r_state(), s2=r_state())
    return SpecDocument.build(r_rules(), r_rules(), initial, name=r_text(), comment=r_text())
