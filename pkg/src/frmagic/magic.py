"""Magic-set rewriting for ground queries with every argument bound.

The rewriting keeps the original rule text: each rule defining a predicate
reached from the query gets one magic atom per head atom prepended to its
body, and bindings flow from a head atom to every other IDB atom of the rule
through a magic rule with a single magic body atom.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Tuple

from .analysis import idb_predicates
from .errors import ReservedPrefix
from .syntax import (
    MAGIC_PREFIX,
    Atom,
    Literal,
    Program,
    Query,
    Rule,
    is_magic,
    term_functors,
)


def magic_atom_of(a: Atom) -> Atom:
    if is_magic(a.predicate):
        raise ReservedPrefix(a.predicate)
    return Atom(MAGIC_PREFIX + a.predicate, a.args)


def demagic(a: Atom) -> Atom:
    """Inverse of ``magic_atom_of``."""
    if not is_magic(a.predicate):
        raise ValueError(f"{a} is not a magic atom")
    return Atom(a.predicate[len(MAGIC_PREFIX):], a.args)


@dataclass(frozen=True)
class RewrittenProgram:
    magic_rules: Tuple[Rule, ...]
    modified_rules: Tuple[Rule, ...]
    edb: Tuple[Rule, ...]
    query: Query

    @property
    def seed(self) -> Rule:
        return self.magic_rules[0]

    @property
    def program(self) -> Program:
        return Program(self.magic_rules + self.modified_rules + self.edb)

    def sections(self) -> Dict[str, Tuple[Rule, ...]]:
        return {"magic": self.magic_rules, "modified": self.modified_rules, "edb": self.edb}

    def __str__(self):
        return str(self.program)


def _check_reserved(p: Program, q: Query) -> None:
    for r in p.rules:
        for a in r.atoms:
            if is_magic(a.predicate):
                raise ReservedPrefix(a.predicate)
    if is_magic(q.atom.predicate):
        raise ReservedPrefix(q.atom.predicate)


def seed_query(p: Program, q: Query) -> Tuple[Program, Query]:
    """Make every functor of the query occur in the program.

    When the query mentions a functor the program lacks, a fact over a fresh
    predicate carrying the query's arguments is appended.
    """
    wanted = set()
    for t in q.atom.args:
        wanted.update(term_functors(t))
    if wanted <= p.functors():
        return p, q
    taken = set(p.predicates()) | {q.atom.predicate}
    name, k = "aux", 0
    while name in taken:
        k += 1
        name = f"aux_{k}"
    return Program(p.rules + (Rule([Atom(name, q.atom.args)]),)), q


def dms_rewrite(p: Program, q: Query) -> RewrittenProgram:
    """Rewrite ``p`` for the ground query ``q``.

    Predicates are processed in first-reached order; each is handled once.
    Magic rules are listed seed first and then in emission order, duplicates
    removed; a rule reached through several head atoms yields a single
    modified rule.
    """
    _check_reserved(p, q)
    idb = idb_predicates(p)
    g = q.atom.predicate

    magic: Dict[Rule, None] = {Rule([magic_atom_of(q.atom)]): None}
    modified: Dict[Rule, None] = {}
    pending = deque([g]) if g in idb else deque()
    queued = set(pending)
    done = set()

    while pending:
        pred = pending.popleft()
        done.add(pred)
        for r in p.rules:
            for h in r.head:
                if h.predicate != pred:
                    continue
                magic_body = [Literal(magic_atom_of(a), True) for a in r.head]
                body = list(dict.fromkeys(magic_body + list(r.body)))
                modified.setdefault(Rule(r.head, body))
                trigger = [Literal(magic_atom_of(h), True)]
                for a in r.atoms:
                    if a == h or a.predicate not in idb:
                        continue
                    magic.setdefault(Rule([magic_atom_of(a)], trigger))
                    if a.predicate not in done and a.predicate not in queued:
                        queued.add(a.predicate)
                        pending.append(a.predicate)

    edb = tuple(r for r in p.rules if not any(a.predicate in idb for a in r.head))
    return RewrittenProgram(tuple(magic), tuple(modified), edb, q)


def magic_rule_shape_ok(rw: RewrittenProgram) -> bool:
    """Seed is a ground magic fact; every other magic rule is ``magic_q :- magic_p``."""
    seed, rest = rw.magic_rules[0], rw.magic_rules[1:]
    if not (seed.is_fact and is_magic(seed.head[0].predicate)):
        return False
    for r in rest:
        if len(r.head) != 1 or len(r.body) != 1:
            return False
        if not r.body[0].positive:
            return False
        if not (is_magic(r.head[0].predicate) and is_magic(r.body[0].atom.predicate)):
            return False
    return True
