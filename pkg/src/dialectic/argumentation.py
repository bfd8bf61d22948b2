"""Abstract argument graphs read out of public states, and grounded semantics."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .logic import Literal

ARGUMENT_PREDICATE = "a"
MAX_BRUTEFORCE = 20


@dataclass(frozen=True)
class ArgumentGraph:
    arguments: frozenset = frozenset()
    attacks: frozenset = frozenset()  # (attacker, attacked) pairs

    def __post_init__(self) -> None:
        for u, v in self.attacks:
            if u not in self.arguments or v not in self.arguments:
                raise ValueError(f"attack ({u}, {v}) has an endpoint outside the arguments")

    @classmethod
    def from_attacks(cls, arguments: Iterable[str], attacks: Iterable[tuple[str, str]]) -> ArgumentGraph:
        attacks = frozenset(attacks)
        nodes = set(arguments)
        for u, v in attacks:
            nodes.update((u, v))
        return cls(frozenset(nodes), attacks)

    def attackers(self) -> dict[str, set[str]]:
        out: dict[str, set[str]] = {x: set() for x in self.arguments}
        for u, v in self.attacks:
            out[v].add(u)
        return out


def extract_graph(public: Iterable[Literal]) -> ArgumentGraph:
    """Arguments from ``a(x)``, attacks from ``a(u,v)``; attack endpoints count as arguments."""
    args: set[str] = set()
    attacks: set[tuple[str, str]] = set()
    for l in public:
        if not l.positive or l.atom.predicate != ARGUMENT_PREDICATE:
            continue
        terms = [str(t) for t in l.atom.args]
        if len(terms) == 1:
            args.add(terms[0])
        elif len(terms) == 2:
            attacks.add((terms[0], terms[1]))
    return ArgumentGraph.from_attacks(args, attacks)


def characteristic(g: ArgumentGraph, s: frozenset, attackers=None) -> frozenset:
    """Arguments all of whose attackers are attacked by ``s``."""
    attackers = attackers if attackers is not None else g.attackers()
    hit = {v for u, v in g.attacks if u in s}
    return frozenset(x for x in g.arguments if attackers[x] <= hit)


def grounded_iterates(g: ArgumentGraph) -> list[frozenset]:
    """The chain empty, F(empty), F(F(empty)), ... up to its fixed point."""
    attackers = g.attackers()
    chain = [frozenset()]
    while True:
        nxt = characteristic(g, chain[-1], attackers)
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)


def grounded_fixpoint(g: ArgumentGraph) -> frozenset:
    return grounded_iterates(g)[-1]


def conflict_free(g: ArgumentGraph, s: frozenset) -> bool:
    return not any(u in s and v in s for u, v in g.attacks)


def admissible(g: ArgumentGraph, s: frozenset) -> bool:
    return conflict_free(g, s) and s <= characteristic(g, s)


def grounded_bruteforce(g: ArgumentGraph) -> frozenset:
    """Smallest complete extension, found by checking every subset of arguments."""
    n = len(g.arguments)
    if n > MAX_BRUTEFORCE:
        raise ValueError(f"brute force limited to {MAX_BRUTEFORCE} arguments (got {n})")
    attackers = g.attackers()
    complete = []
    args = sorted(g.arguments)
    for k in range(n + 1):
        for combo in combinations(args, k):
            s = frozenset(combo)
            if conflict_free(g, s) and characteristic(g, s, attackers) == s:
                complete.append(s)
    minimal = [s for s in complete if all(s <= o for o in complete)]
    if len(minimal) != 1:
        raise AssertionError("complete extensions have no least element")
    return minimal[0]


def parse_graph(text: str) -> ArgumentGraph:
    """Read ``arg <id>`` / ``att <u> <v>`` lines; ``#`` starts a comment."""
    args: set[str] = set()
    attacks: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "arg" and len(parts) == 2:
            args.add(parts[1])
        elif parts[0] == "att" and len(parts) == 3:
            attacks.add((parts[1], parts[2]))
        else:
            raise ValueError(f"line {lineno}: expected 'arg <id>' or 'att <u> <v>', got {raw.strip()!r}")
    return ArgumentGraph.from_attacks(args, attacks)
