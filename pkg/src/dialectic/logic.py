"""Ground propositional language: atoms, literals, condition and action formulas.

Conditions are classical formulas over atoms; action formulas are and/or trees
over action units.  Everything here is immutable and hashable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, Optional, Union


@dataclass(frozen=True, order=True)
class Term:
    """A constant, optionally wrapped in object-level negation (``~a``)."""

    name: str
    negated: bool = False

    def __str__(self) -> str:
        return f"~{self.name}" if self.negated else self.name


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        if not self.predicate:
            raise ValueError("atom predicate must be nonempty")

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def complement(self) -> Literal:
        return Literal(self.atom, not self.positive)

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"!{self.atom}"


StateSet = frozenset  # frozenset[Literal]


def atom(predicate: str, *args: str) -> Atom:
    """Build an atom from strings, ``~x`` marking object-level negation."""
    terms = tuple(Term(a[1:], True) if a.startswith("~") else Term(a) for a in args)
    return Atom(predicate, terms)


def lit(predicate: str, *args: str, positive: bool = True) -> Literal:
    return Literal(atom(predicate, *args), positive)


def is_consistent(state: Iterable[Literal]) -> bool:
    state = state if isinstance(state, (set, frozenset)) else frozenset(state)
    return not any(not l.positive and Literal(l.atom, True) in state for l in state)


# -- formula trees ---------------------------------------------------------


@dataclass(frozen=True)
class Not:
    operand: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class And:
    operands: tuple["Formula", ...]

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    operands: tuple["Formula", ...]

    def __str__(self) -> str:
        return format_formula(self)


class Op(enum.Enum):
    PRIV_ADD = "priv+"
    PRIV_DEL = "priv-"
    PUB_ADD = "pub+"
    PUB_DEL = "pub-"

    @property
    def public(self) -> bool:
        return self in (Op.PUB_ADD, Op.PUB_DEL)

    @property
    def adds(self) -> bool:
        return self in (Op.PRIV_ADD, Op.PUB_ADD)


@dataclass(frozen=True)
class ActionUnit:
    op: Op
    literal: Literal

    def __str__(self) -> str:
        return f"{self.op.value} {self.literal}"


ActionSet = frozenset  # frozenset[ActionUnit]
EMPTY_ACTIONS: frozenset = frozenset()

Formula = Union[Atom, Not, And, Or, ActionUnit]


def conj(*operands: Formula) -> Formula:
    return operands[0] if len(operands) == 1 else And(tuple(operands))


def disj(*operands: Formula) -> Formula:
    return operands[0] if len(operands) == 1 else Or(tuple(operands))


def format_formula(f: Formula) -> str:
    """Render with minimal parentheses under ``!`` > ``&`` > ``|``."""
    if isinstance(f, (Atom, ActionUnit)):
        return str(f)
    if isinstance(f, Not):
        inner = format_formula(f.operand)
        return f"!{inner}" if isinstance(f.operand, (Atom, Not)) else f"!({inner})"
    if isinstance(f, And):
        return " & ".join(
            f"({format_formula(o)})" if isinstance(o, (Or, And)) else format_formula(o)
            for o in f.operands
        )
    if isinstance(f, Or):
        return " | ".join(
            f"({format_formula(o)})" if isinstance(o, Or) else format_formula(o)
            for o in f.operands
        )
    raise TypeError(f"not a formula: {f!r}")


def canonical(f: Formula) -> Formula:
    """Flatten nested and/or and sort the operands of each by rendered text."""
    if isinstance(f, (Atom, ActionUnit)):
        return f
    if isinstance(f, Not):
        return Not(canonical(f.operand))
    kind = type(f)
    flat: list[Formula] = []
    for o in f.operands:
        o = canonical(o)
        if type(o) is kind:
            flat.extend(o.operands)
        else:
            flat.append(o)
    flat.sort(key=format_formula)
    return kind(tuple(flat))


def formula_leaves(f: Formula) -> Iterator[Formula]:
    if isinstance(f, (Atom, ActionUnit)):
        yield f
    elif isinstance(f, Not):
        yield from formula_leaves(f.operand)
    else:
        for o in f.operands:
            yield from formula_leaves(o)


# -- classical entailment ----------------------------------------------------


def evaluate(f: Formula, assignment: Mapping[Atom, bool]) -> bool:
    if isinstance(f, Atom):
        return assignment[f]
    if isinstance(f, Not):
        return not evaluate(f.operand, assignment)
    if isinstance(f, And):
        return all(evaluate(o, assignment) for o in f.operands)
    if isinstance(f, Or):
        return any(evaluate(o, assignment) for o in f.operands)
    raise TypeError(f"not a condition formula: {f!r}")


def _kleene(f: Formula, assignment: Mapping[Atom, bool]) -> Optional[bool]:
    # strong Kleene; None means undetermined by the partial assignment
    if isinstance(f, Atom):
        return assignment.get(f)
    if isinstance(f, Not):
        v = _kleene(f.operand, assignment)
        return None if v is None else not v
    if isinstance(f, And):
        result: Optional[bool] = True
        for o in f.operands:
            v = _kleene(o, assignment)
            if v is False:
                return False
            if v is None:
                result = None
        return result
    if isinstance(f, Or):
        result = False
        for o in f.operands:
            v = _kleene(o, assignment)
            if v is True:
                return True
            if v is None:
                result = None
        return result
    raise TypeError(f"not a condition formula: {f!r}")


def entails(state: Iterable[Literal], formula: Formula) -> bool:
    """Classical entailment of a ground condition by a set of literals.

    The state fixes the truth value of every atom it mentions; the formula is
    entailed when it holds under every completion of that partial valuation.
    An inconsistent state entails everything.
    """
    state = state if isinstance(state, (set, frozenset)) else frozenset(state)
    if not is_consistent(state):
        return True
    assignment: dict[Atom, bool] = {}
    free: list[Atom] = []
    for a in {leaf for leaf in formula_leaves(formula)}:
        if Literal(a, True) in state:
            assignment[a] = True
        elif Literal(a, False) in state:
            assignment[a] = False
        else:
            free.append(a)
    settled = _kleene(formula, assignment)
    if settled is not None:
        return settled
    for values in product((False, True), repeat=len(free)):
        assignment.update(zip(free, values))
        if not evaluate(formula, assignment):
            return False
    return True


# -- action formulas ---------------------------------------------------------


def satisfies(actions: Iterable[ActionUnit], formula: Formula) -> bool:
    actions = actions if isinstance(actions, (set, frozenset)) else frozenset(actions)
    if isinstance(formula, ActionUnit):
        return formula in actions
    if isinstance(formula, And):
        return all(satisfies(actions, o) for o in formula.operands)
    if isinstance(formula, Or):
        return any(satisfies(actions, o) for o in formula.operands)
    raise TypeError(f"not an action formula: {formula!r}")


def _dnf(f: Formula) -> set[frozenset]:
    if isinstance(f, ActionUnit):
        return {frozenset((f,))}
    if isinstance(f, Or):
        out: set[frozenset] = set()
        for o in f.operands:
            out |= _dnf(o)
        return out
    if isinstance(f, And):
        out = {frozenset()}
        for o in f.operands:
            out = {a | b for a in out for b in _dnf(o)}
        return out
    raise TypeError(f"not an action formula: {f!r}")


def minimal_disjuncts(head: Formula) -> frozenset:
    """All subset-minimal action sets that satisfy ``head``."""
    sets = _dnf(head)
    return frozenset(s for s in sets if not any(o < s for o in sets))
