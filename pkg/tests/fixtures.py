"""Worked-example machines, propagated by hand from the bundled rule files.

States are listed in discovery order as (turn, private1, public, private2);
a ``*`` after the turn marks the closing state entered by the first of the
two final passes.  Transitions name states by 1-based position.
"""

from dialectic.dsl import parse_action_unit, parse_literal
from dialectic.execution import Label
from dialectic.fsm import FsmState


def _set(text, parse):
    return frozenset(parse(x.strip()) for x in text.split(";") if x.strip())


def label(a1="", a2=""):
    return Label(_set(a1, parse_action_unit), _set(a2, parse_action_unit))


def state(turn, s1, p, s2):
    passed = isinstance(turn, str)
    turn = int(str(turn).rstrip("*"))
    return FsmState(turn, _set(s1, parse_literal), _set(p, parse_literal), _set(s2, parse_literal), passed)


PASS = label()

CLAIM = label("pub+ c(a); pub- c(~a)")
COUNTER = label("", "pub+ c(~a); pub- c(a)")
CLAIMS = {
    "counts": (3, 3, 0),
    "states": [
        state(1, "b(a)", "", "b(~a)"),
        state(2, "b(a)", "c(a)", "b(~a)"),
        state(1, "b(a)", "c(~a)", "b(~a)"),
    ],
    "transitions": [(1, CLAIM, 2), (2, COUNTER, 3), (3, CLAIM, 2)],
}

POSIT_A = label("pub+ a(a); priv- n(a)")
B_ON_A = label("", "pub+ a(b,a); priv- n(b)")
C_ON_B = label("pub+ a(c,b); priv- n(c)")
CHAIN = {
    "counts": (6, 5, 1),
    "states": [
        state(1, "g(a); n(a); n(c); e(c,b)", "", "n(b); e(b,a)"),
        state(2, "g(a); n(c); e(c,b)", "a(a)", "n(b); e(b,a)"),
        state(1, "g(a); n(c); e(c,b)", "a(a); a(b,a)", "e(b,a)"),
        state(2, "g(a); e(c,b)", "a(a); a(b,a); a(c,b)", "e(b,a)"),
        state("1*", "g(a); e(c,b)", "a(a); a(b,a); a(c,b)", "e(b,a)"),
        state(0, "g(a); e(c,b)", "a(a); a(b,a); a(c,b)", "e(b,a)"),
    ],
    "transitions": [(1, POSIT_A, 2), (2, B_ON_A, 3), (3, C_ON_B, 4), (4, PASS, 5), (5, PASS, 6)],
}

C_ON_A = label("", "pub+ a(c,a); priv- n(c)")
_FORK2 = "n(b); n(c); e(b,a); e(c,a)"
FORK = {
    "counts": (9, 9, 1),
    "states": [
        state(1, "g(a); n(a)", "", _FORK2),
        state(2, "g(a)", "a(a)", _FORK2),
        state(1, "g(a)", "a(a); a(b,a)", "n(c); e(b,a); e(c,a)"),
        state(1, "g(a)", "a(a); a(c,a)", "n(b); e(b,a); e(c,a)"),
        state(2, "g(a)", "a(a); a(b,a)", "n(c); e(b,a); e(c,a)"),
        state(2, "g(a)", "a(a); a(c,a)", "n(b); e(b,a); e(c,a)"),
        state(1, "g(a)", "a(a); a(b,a); a(c,a)", "e(b,a); e(c,a)"),
        state("2*", "g(a)", "a(a); a(b,a); a(c,a)", "e(b,a); e(c,a)"),
        state(0, "g(a)", "a(a); a(b,a); a(c,a)", "e(b,a); e(c,a)"),
    ],
    "transitions": [
        (1, POSIT_A, 2),
        (2, B_ON_A, 3),
        (2, C_ON_A, 4),
        (3, PASS, 5),
        (4, PASS, 6),
        (5, C_ON_A, 7),
        (6, B_ON_A, 7),
        (7, PASS, 8),
        (8, PASS, 9),
    ],
}

ARGUE_B = label("pub+ a(b); priv- n(b); priv- g(a)")
ARGUE_A = label("pub+ a(a); priv- n(a); priv- g(b)")
TWO_GOALS = {
    "counts": (8, 7, 2),
    "states": [
        state(1, "g(a); g(b); n(a); n(b)", "", "n(c); e(c,a)"),
        state(2, "g(b); n(a)", "a(b)", "n(c); e(c,a)"),
        state(2, "g(a); n(b)", "a(a)", "n(c); e(c,a)"),
        state("1*", "g(b); n(a)", "a(b)", "n(c); e(c,a)"),
        state(1, "g(a); n(b)", "a(a); a(c,a)", "e(c,a)"),
        state(0, "g(b); n(a)", "a(b)", "n(c); e(c,a)"),
        state("2*", "g(a); n(b)", "a(a); a(c,a)", "e(c,a)"),
        state(0, "g(a); n(b)", "a(a); a(c,a)", "e(c,a)"),
    ],
    "transitions": [
        (1, ARGUE_B, 2),
        (1, ARGUE_A, 3),
        (2, PASS, 4),
        (3, C_ON_A, 5),
        (4, PASS, 6),
        (5, PASS, 7),
        (7, PASS, 8),
    ],
    "terminal_names": ("s6", "s8"),
}

MACHINES = {"claims": CLAIMS, "chain": CHAIN, "fork": FORK, "two_goals": TWO_GOALS}


def check_machine(fsm, expected):
    """Assert ``fsm`` equals a fixture exactly: counts, states, transitions."""
    counts = (len(fsm.states), len(fsm.transitions), len(fsm.terminals))
    assert counts == expected["counts"], counts
    assert list(fsm.states) == expected["states"]
    got = {(fsm.index(t.source) + 1, t.label, fsm.index(t.target) + 1) for t in fsm.transitions}
    assert got == set(expected["transitions"])
