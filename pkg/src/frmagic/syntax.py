"""Terms, atoms, rules and programs, plus substitution and unification.

Every value here is immutable and hashable.  Hashes are computed once at
construction because ground atoms are used heavily as dictionary keys
during grounding and solving.
"""
from __future__ import annotations

import re
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

CONS = "cons"
NIL = "nil"
MAGIC_PREFIX = "magic_"

_PLAIN_SYMBOL = re.compile(r"[a-z][A-Za-z0-9_]*\Z|[0-9]+\Z")


# ---------------------------------------------------------------------------
# terms


class Variable:
    __slots__ = ("name", "_hash")

    ground = False

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("V", name))

    def __eq__(self, other):
        return isinstance(other, Variable) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Variable({self.name!r})"

    def __str__(self):
        return self.name


class Functional:
    """``functor(args...)``; constants are arity-0 functional terms."""

    __slots__ = ("functor", "args", "ground", "_hash")

    def __init__(self, functor: str, args: Iterable["Term"] = ()):
        self.functor = functor
        self.args = tuple(args)
        self.ground = all(a.ground for a in self.args)
        self._hash = hash((functor, self.args))

    @property
    def arity(self) -> int:
        return len(self.args)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Functional)
            and self._hash == other._hash
            and self.functor == other.functor
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Functional({self.functor!r}, {self.args!r})"

    def __str__(self):
        return render_term(self)


Term = Union[Variable, Functional]


def const(name: str) -> Functional:
    return Functional(name)


def cons(head: Term, tail: Term) -> Functional:
    return Functional(CONS, (head, tail))


def nil() -> Functional:
    return Functional(NIL)


def make_list(items: Iterable[Term], tail: Optional[Term] = None) -> Term:
    """Right-fold ``items`` into cons cells ending in ``tail`` (default nil)."""
    result = nil() if tail is None else tail
    for item in reversed(list(items)):
        result = cons(item, result)
    return result


def term_variables(t: Term) -> Iterator[str]:
    if isinstance(t, Variable):
        yield t.name
    elif not t.ground:
        for a in t.args:
            yield from term_variables(a)


def term_functors(t: Term) -> Iterator[Tuple[str, int]]:
    if isinstance(t, Functional):
        yield (t.functor, len(t.args))
        for a in t.args:
            yield from term_functors(a)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Functional):
        for a in t.args:
            yield from subterms(a)


def term_depth(t: Term) -> int:
    if isinstance(t, Variable) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


# ---------------------------------------------------------------------------
# atoms, literals, rules


class Atom:
    __slots__ = ("predicate", "args", "ground", "_hash")

    def __init__(self, predicate: str, args: Iterable[Term] = ()):
        self.predicate = predicate
        self.args = tuple(args)
        self.ground = all(a.ground for a in self.args)
        self._hash = hash((predicate, self.args, "A"))

    @property
    def arity(self) -> int:
        return len(self.args)

    def variables(self) -> Iterator[str]:
        for a in self.args:
            yield from term_variables(a)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Atom)
            and self._hash == other._hash
            and self.predicate == other.predicate
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return str(self) < str(other)

    def __repr__(self):
        return f"Atom({str(self)!r})"

    def __str__(self):
        if not self.args:
            return render_symbol(self.predicate)
        return f"{render_symbol(self.predicate)}({','.join(render_term(a) for a in self.args)})"


class Literal:
    __slots__ = ("atom", "positive", "_hash")

    def __init__(self, atom: Atom, positive: bool = True):
        self.atom = atom
        self.positive = positive
        self._hash = hash((atom, positive))

    def __eq__(self, other):
        return (
            isinstance(other, Literal)
            and self.positive == other.positive
            and self.atom == other.atom
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Literal({str(self)!r})"

    def __str__(self):
        return str(self.atom) if self.positive else f"not {self.atom}"


def pos(a: Atom) -> Literal:
    return Literal(a, True)


def neg(a: Atom) -> Literal:
    return Literal(a, False)


class Rule:
    """A disjunctive rule ``h1 v ... v hn :- body``.

    ``head`` is a non-empty tuple of atoms, ``body`` a tuple of literals.
    """

    __slots__ = ("head", "body", "_hash")

    def __init__(self, head: Iterable[Atom], body: Iterable[Literal] = ()):
        self.head = tuple(head)
        self.body = tuple(body)
        if not self.head:
            raise ValueError("a rule needs at least one head atom")
        self._hash = hash((self.head, self.body))

    @property
    def positive_body(self) -> Tuple[Atom, ...]:
        return tuple(l.atom for l in self.body if l.positive)

    @property
    def negative_body(self) -> Tuple[Atom, ...]:
        return tuple(l.atom for l in self.body if not l.positive)

    @property
    def atoms(self) -> Tuple[Atom, ...]:
        """H(r) + B+(r) + B-(r) without repetitions, in textual order."""
        seen = dict.fromkeys(self.head)
        for l in self.body:
            seen.setdefault(l.atom)
        return tuple(seen)

    @property
    def ground(self) -> bool:
        return all(a.ground for a in self.head) and all(l.atom.ground for l in self.body)

    @property
    def is_fact(self) -> bool:
        return not self.body and len(self.head) == 1 and self.head[0].ground

    def variables(self) -> Tuple[str, ...]:
        seen = {}
        for a in self.head:
            seen.update(dict.fromkeys(a.variables()))
        for l in self.body:
            seen.update(dict.fromkeys(l.atom.variables()))
        return tuple(seen)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Rule)
            and self._hash == other._hash
            and self.head == other.head
            and self.body == other.body
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Rule({str(self)!r})"

    def __str__(self):
        head = " v ".join(str(a) for a in self.head)
        if not self.body:
            return head + "."
        return f"{head} :- {', '.join(str(l) for l in self.body)}."


class Program:
    """An ordered collection of rules (duplicates are kept as written)."""

    __slots__ = ("rules",)

    def __init__(self, rules: Iterable[Rule] = ()):
        self.rules = tuple(rules)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __eq__(self, other):
        return isinstance(other, Program) and self.rules == other.rules

    def __hash__(self):
        return hash(self.rules)

    def __repr__(self):
        return f"Program({len(self.rules)} rules)"

    def __str__(self):
        return "".join(f"{r}\n" for r in self.rules)

    def predicates(self) -> Dict[str, int]:
        """Predicate name -> arity, in first-occurrence order."""
        preds: Dict[str, int] = {}
        for r in self.rules:
            for a in r.atoms:
                preds.setdefault(a.predicate, a.arity)
        return preds

    def functors(self) -> set:
        """All (functor, arity) pairs occurring in terms of the program."""
        found = set()
        for r in self.rules:
            for a in r.atoms:
                for t in a.args:
                    found.update(term_functors(t))
        return found

    def facts(self) -> Tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.is_fact)


class Query:
    """A ground query atom ``g(t)?``."""

    __slots__ = ("atom",)

    def __init__(self, atom: Atom):
        if not atom.ground:
            raise ValueError(f"query {atom} is not ground")
        self.atom = atom

    def __eq__(self, other):
        return isinstance(other, Query) and self.atom == other.atom

    def __hash__(self):
        return hash(("Q", self.atom))

    def __repr__(self):
        return f"Query({str(self)!r})"

    def __str__(self):
        return f"{self.atom}?"


# ---------------------------------------------------------------------------
# rendering


def render_symbol(name: str) -> str:
    if _PLAIN_SYMBOL.match(name):
        return name
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def render_term(t: Term) -> str:
    if isinstance(t, Variable):
        return t.name
    if t.functor == NIL and not t.args:
        return "[]"
    if t.functor == CONS and len(t.args) == 2:
        items = []
        while isinstance(t, Functional) and t.functor == CONS and len(t.args) == 2:
            items.append(render_term(t.args[0]))
            t = t.args[1]
        if isinstance(t, Functional) and t.functor == NIL and not t.args:
            return f"[{','.join(items)}]"
        return f"[{','.join(items)}|{render_term(t)}]"
    if not t.args:
        return render_symbol(t.functor)
    return f"{render_symbol(t.functor)}({','.join(render_term(a) for a in t.args)})"


def render(x) -> str:
    """Text for a program, rule, atom, literal, query or term."""
    if isinstance(x, (Variable, Functional)):
        return render_term(x)
    if isinstance(x, Program):
        return str(x)
    return str(x)


# ---------------------------------------------------------------------------
# substitutions and unification

Substitution = Dict[str, Term]


def apply_term(s: Substitution, t: Term) -> Term:
    if isinstance(t, Variable):
        return s.get(t.name, t)
    if t.ground:
        return t
    return Functional(t.functor, [apply_term(s, a) for a in t.args])


def apply_atom(s: Substitution, a: Atom) -> Atom:
    if a.ground or not s:
        return a
    return Atom(a.predicate, [apply_term(s, t) for t in a.args])


def apply_literal(s: Substitution, l: Literal) -> Literal:
    return Literal(apply_atom(s, l.atom), l.positive)


def apply_rule(s: Substitution, r: Rule) -> Rule:
    if not s:
        return r
    return Rule(
        [apply_atom(s, a) for a in r.head],
        [Literal(apply_atom(s, l.atom), l.positive) for l in r.body],
    )


def apply(s: Substitution, x):
    """Apply ``s`` simultaneously to a term, atom, literal, rule or program."""
    if isinstance(x, (Variable, Functional)):
        return apply_term(s, x)
    if isinstance(x, Atom):
        return apply_atom(s, x)
    if isinstance(x, Literal):
        return apply_literal(s, x)
    if isinstance(x, Rule):
        return apply_rule(s, x)
    if isinstance(x, Program):
        return Program(apply_rule(s, r) for r in x.rules)
    raise TypeError(f"cannot apply a substitution to {type(x).__name__}")


def _walk(t: Term, s: Substitution) -> Term:
    while isinstance(t, Variable) and t.name in s:
        t = s[t.name]
    return t


def _occurs(name: str, t: Term, s: Substitution) -> bool:
    t = _walk(t, s)
    if isinstance(t, Variable):
        return t.name == name
    return any(_occurs(name, a, s) for a in t.args)


def _unify_terms(x: Term, y: Term, s: Substitution) -> bool:
    stack = [(x, y)]
    while stack:
        a, b = stack.pop()
        a = _walk(a, s)
        b = _walk(b, s)
        if a is b or a == b:
            continue
        if isinstance(a, Variable):
            if _occurs(a.name, b, s):
                return False
            s[a.name] = b
        elif isinstance(b, Variable):
            if _occurs(b.name, a, s):
                return False
            s[b.name] = a
        else:
            if a.functor != b.functor or len(a.args) != len(b.args):
                return False
            stack.extend(zip(a.args, b.args))
    return True


def _resolve(t: Term, s: Substitution) -> Term:
    t = _walk(t, s)
    if isinstance(t, Variable) or t.ground:
        return t
    return Functional(t.functor, [_resolve(a, s) for a in t.args])


def unify(a, b) -> Optional[Substitution]:
    """Most general unifier of two atoms (or two terms), with occurs check.

    Returns ``None`` when no unifier exists.  The result is idempotent:
    no variable of its domain occurs in its range.
    """
    s: Substitution = {}
    if isinstance(a, Atom):
        if not isinstance(b, Atom) or a.predicate != b.predicate or a.arity != b.arity:
            return None
        pairs = zip(a.args, b.args)
    else:
        pairs = [(a, b)]
    for x, y in pairs:
        if not _unify_terms(x, y, s):
            return None
    return {name: _resolve(t, s) for name, t in s.items()}


def match_term(pattern: Term, ground: Term, s: Substitution) -> bool:
    """One-way matching of ``pattern`` onto the ground term, extending ``s``.

    ``s`` may be partially updated when matching fails; callers pass a copy.
    """
    if isinstance(pattern, Variable):
        bound = s.get(pattern.name)
        if bound is None:
            s[pattern.name] = ground
            return True
        return bound == ground
    if pattern.ground:
        return pattern == ground
    if (
        not isinstance(ground, Functional)
        or pattern.functor != ground.functor
        or len(pattern.args) != len(ground.args)
    ):
        return False
    for p, g in zip(pattern.args, ground.args):
        if not match_term(p, g, s):
            return False
    return True


def match_atom(pattern: Atom, ground: Atom, s: Substitution) -> Optional[Substitution]:
    """Extend ``s`` so that ``pattern`` instantiates to ``ground``; ``None`` if impossible."""
    if pattern.predicate != ground.predicate or len(pattern.args) != len(ground.args):
        return None
    out = dict(s)
    for p, g in zip(pattern.args, ground.args):
        if not match_term(p, g, out):
            return None
    return out


def is_magic(predicate: str) -> bool:
    return predicate.startswith(MAGIC_PREFIX)
