"""Bottom-up intelligent instantiation over a component ordering.

``inst`` produces the A-restricted instances of a module by matching
positive body atoms against an atom index, never by enumerating the
universe.  ``simpl`` removes what the already-grounded part decides.
``phi_fixpoint`` iterates both to the least fixpoint of one module and
``intelligent_instantiation`` chains the modules.

Iterations after the first are evaluated semi-naively: an instance is only
built when at least one positive body atom was new in the previous round.
Because simplification acts rule by rule against a fixed ``R``, the
fixpoint is the same as the naive one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .analysis import ComponentOrdering, classify_edb_idb, module_of
from .errors import LimitExceeded, PreconditionViolation, UnsafeRule
from .syntax import Atom, Literal, Program, Rule, apply_atom, match_term

DEFAULT_MAX_GROUND_RULES = 1_000_000
DEFAULT_MAX_ITERATIONS = 100_000


@dataclass(frozen=True)
class GroundingLimits:
    max_ground_rules: int = DEFAULT_MAX_GROUND_RULES
    max_iterations: int = DEFAULT_MAX_ITERATIONS

    def __post_init__(self):
        if self.max_ground_rules < 1 or self.max_iterations < 1:
            raise ValueError("grounding limits must be at least 1")


@dataclass(frozen=True)
class ComponentStats:
    component: Tuple[str, ...]
    rules: int
    iterations: int


@dataclass(frozen=True)
class GroundProgram:
    rules: Tuple[Rule, ...]
    derived_atoms: frozenset = field(default=None)
    stats: Tuple[ComponentStats, ...] = ()

    def __post_init__(self):
        if self.derived_atoms is None:
            object.__setattr__(
                self, "derived_atoms", frozenset(a for r in self.rules for a in r.head)
            )

    @classmethod
    def from_rules(cls, rules: Iterable[Rule]) -> "GroundProgram":
        rules = tuple(dict.fromkeys(rules))
        for r in rules:
            if not r.ground:
                raise ValueError(f"rule {r} is not ground")
        return cls(rules)

    def atoms(self) -> Tuple[Atom, ...]:
        """Every atom occurring in the program, in first-occurrence order."""
        seen: Dict[Atom, None] = {}
        for r in self.rules:
            for a in r.atoms:
                seen.setdefault(a)
        return tuple(seen)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __str__(self):
        return "".join(f"{r}\n" for r in self.rules)

    def as_program(self) -> Program:
        return Program(self.rules)


# ---------------------------------------------------------------------------
# atom index


class _AtomIndex:
    """Append-only set of ground atoms grouped by predicate.

    Positions let a round look only at atoms up to a mark, which is how the
    semi-naive split into old and new atoms is expressed.
    """

    def __init__(self):
        self.by_pred: Dict[str, List[Atom]] = {}
        self.position: Dict[Atom, int] = {}

    def add(self, a: Atom) -> bool:
        if a in self.position:
            return False
        lst = self.by_pred.setdefault(a.predicate, [])
        self.position[a] = len(lst)
        lst.append(a)
        return True

    def marks(self) -> Dict[str, int]:
        return {p: len(l) for p, l in self.by_pred.items()}

    def __contains__(self, a):
        return a in self.position

    def __len__(self):
        return len(self.position)


def _check_safe(r: Rule) -> None:
    bound = set()
    for a in r.positive_body:
        bound.update(a.variables())
    missing = [v for v in r.variables() if v not in bound]
    if missing:
        raise UnsafeRule(r, missing)


def _match_args(pattern: Atom, ground: Atom, s: dict) -> Optional[dict]:
    out = dict(s)
    for p, g in zip(pattern.args, ground.args):
        if not match_term(p, g, out):
            return None
    return out


def _join(body: Sequence[Atom], k: int, s: dict, ranges, index: _AtomIndex, out: list):
    """Enumerate substitutions matching ``body[k:]``.

    ``ranges[j]`` is a ``(lo_marks, hi_marks)`` pair: body atom ``j`` may only
    match atoms whose position lies in ``[lo, hi)`` for its predicate.
    """
    if k == len(body):
        out.append(s)
        return
    pattern = body[k]
    lo_marks, hi_marks = ranges[k]
    pred = pattern.predicate
    lo = lo_marks.get(pred, 0) if lo_marks is not None else 0
    hi = hi_marks.get(pred, 0)
    if lo >= hi:
        return
    inst = apply_atom(s, pattern)
    if inst.ground:
        pos = index.position.get(inst)
        if pos is not None and lo <= pos < hi:
            _join(body, k + 1, s, ranges, index, out)
        return
    candidates = index.by_pred.get(pred, ())
    arity = len(pattern.args)
    for j in range(lo, hi):
        g = candidates[j]
        if len(g.args) != arity:
            continue
        s2 = _match_args(inst, g, s)
        if s2 is not None:
            _join(body, k + 1, s2, ranges, index, out)


def _ground_rule(r: Rule, s: dict) -> Rule:
    # head and body are sets; instantiation may merge atoms
    return Rule(
        dict.fromkeys(apply_atom(s, a) for a in r.head),
        dict.fromkeys(Literal(apply_atom(s, l.atom), l.positive) for l in r.body),
    )


def _instances(r: Rule, index: _AtomIndex, prev: Optional[Dict[str, int]], cur: Dict[str, int]):
    """Ground instances of ``r`` over the index up to ``cur``.

    With ``prev`` given, only instances using at least one atom added after
    ``prev`` are produced (each exactly once).
    """
    body = r.positive_body
    if not body:
        if prev is None:
            yield r
        return
    substitutions: list = []
    if prev is None:
        _join(body, 0, {}, [(None, cur)] * len(body), index, substitutions)
    else:
        for k in range(len(body)):
            ranges = [(None, prev)] * k + [(prev, cur)] + [(None, cur)] * (len(body) - k - 1)
            _join(body, 0, {}, ranges, index, substitutions)
    for s in substitutions:
        yield _ground_rule(r, s)


def inst(module: Iterable[Rule], atoms: Iterable[Atom]) -> Tuple[Rule, ...]:
    """All A-restricted instances of the module rules, for ``A = atoms``."""
    module = tuple(module)
    for r in module:
        _check_safe(r)
    index = _AtomIndex()
    for a in atoms:
        index.add(a)
    cur = index.marks()
    out: Dict[Rule, None] = {}
    for r in module:
        for rg in _instances(r, index, None, cur):
            out.setdefault(rg)
    return tuple(out)


# ---------------------------------------------------------------------------
# simplification


class _Context:
    """What simplification needs to know about R: its facts and head atoms."""

    def __init__(self, rules: Iterable[Rule] = ()):
        self.facts: Set[Atom] = set()
        self.heads: Set[Atom] = set()
        for r in rules:
            self.add(r)

    def add(self, r: Rule) -> None:
        if not r.body and len(r.head) == 1:
            self.facts.add(r.head[0])
        self.heads.update(r.head)


def _simplify_one(rg: Rule, ctx: _Context, lower: Set[str], current: Set[str]) -> Optional[Rule]:
    facts = ctx.facts
    for a in rg.head:
        if a in facts:
            return None
    for l in rg.body:
        if not l.positive and l.atom in facts:
            return None
    body = []
    changed = False
    for l in rg.body:
        a = l.atom
        if l.positive:
            if a in facts:
                changed = True
                continue
        else:
            if a.predicate in current:
                raise PreconditionViolation(
                    f"negative literal on {a.predicate} inside its own component: {rg}"
                )
            if a.predicate in lower and a not in ctx.heads:
                changed = True
                continue
        body.append(l)
    if not changed:
        return rg
    return Rule(rg.head, body)


def _lower_and_current(ordering: ComponentOrdering, i: int) -> Tuple[Set[str], Set[str]]:
    lower: Set[str] = set()
    for c in ordering.components[:i]:
        lower.update(c)
    return lower, set(ordering.components[i])


def simpl(t: Iterable[Rule], r: Iterable[Rule], ordering: ComponentOrdering, i: int) -> Tuple[Rule, ...]:
    """Simplify the ground rules ``t`` against the ground rules ``r``.

    Drops rules whose head or negative body meets a fact of ``r``; removes
    positive body atoms that are facts of ``r`` and negative body atoms of
    lower components that no rule of ``r`` can derive.
    """
    ctx = _Context(r)
    lower, current = _lower_and_current(ordering, i)
    out: Dict[Rule, None] = {}
    for rg in t:
        s = _simplify_one(rg, ctx, lower, current)
        if s is not None:
            out.setdefault(s)
    return tuple(out)


# ---------------------------------------------------------------------------
# fixpoint


def _fixpoint(
    module: Sequence[Rule],
    ctx: _Context,
    index: _AtomIndex,
    lower: Set[str],
    current: Set[str],
    limits: GroundingLimits,
    base_size: int,
    simplify: bool,
    label: Tuple[str, ...] = (),
) -> Tuple[List[Rule], int]:
    """Iterate Phi from the empty set; returns the rules and the round count.

    ``index`` must already hold the head atoms of R; heads of new rules are
    appended to it as rounds complete.
    """
    for r in module:
        _check_safe(r)
    result: Dict[Rule, None] = {}
    prev: Optional[Dict[str, int]] = None
    rounds = 0
    while True:
        if rounds >= limits.max_iterations:
            raise LimitExceeded(
                f"component {list(label)} did not reach a fixpoint within "
                f"{limits.max_iterations} iterations",
                component=label,
                size=len(result),
                iterations=rounds,
            )
        rounds += 1
        cur = index.marks()
        before = len(result)
        new_heads: List[Atom] = []
        for r in module:
            for rg in _instances(r, index, prev, cur):
                if simplify:
                    rg = _simplify_one(rg, ctx, lower, current)
                    if rg is None:
                        continue
                if rg in result:
                    continue
                result[rg] = None
                new_heads.extend(rg.head)
                if base_size + len(result) > limits.max_ground_rules:
                    raise LimitExceeded(
                        f"component {list(label)} exceeded {limits.max_ground_rules} ground rules",
                        component=label,
                        size=len(result),
                        iterations=rounds,
                    )
        assert len(result) >= before  # S only grows
        added = False
        for a in new_heads:
            added |= index.add(a)
        if not added:
            # No new atom means no new instance next round: fixpoint reached.
            return list(result), rounds
        prev = cur


def phi_fixpoint(
    module: Iterable[Rule],
    r: Iterable[Rule],
    ordering: ComponentOrdering,
    i: int,
    limits: GroundingLimits = GroundingLimits(),
    simplify: bool = True,
) -> Tuple[Rule, ...]:
    """Least fixpoint of ``S -> Simpl(Inst(heads(R u S)), R)`` for one module."""
    r = tuple(r)
    ctx = _Context(r)
    index = _AtomIndex()
    for rule in r:
        for a in rule.head:
            index.add(a)
    lower, current = _lower_and_current(ordering, i) if len(ordering) else (set(), set())
    rules, _ = _fixpoint(
        tuple(module), ctx, index, lower, current, limits, len(r), simplify,
        tuple(sorted(ordering[i])) if len(ordering) else (),
    )
    return tuple(rules)


def intelligent_instantiation(
    p: Program,
    ordering: ComponentOrdering,
    limits: GroundingLimits = GroundingLimits(),
    simplify: bool = True,
) -> GroundProgram:
    """Ground ``p`` module by module, starting from its EDB facts."""
    split = classify_edb_idb(p)
    accumulated: Dict[Rule, None] = dict.fromkeys(split.edb_rules)
    ctx = _Context(accumulated)
    index = _AtomIndex()
    for rule in accumulated:
        for a in rule.head:
            index.add(a)
    lower: Set[str] = set()
    stats = []
    for i, comp in enumerate(ordering.components):
        module = module_of(p, ordering, i)
        current = set(comp)
        label = tuple(sorted(comp))
        rules, rounds = _fixpoint(
            module, ctx, index, lower, current, limits, len(accumulated), simplify, label
        )
        for rg in rules:
            if rg not in accumulated:
                accumulated[rg] = None
            ctx.add(rg)
        stats.append(ComponentStats(label, len(rules), rounds))
        lower |= current
    return GroundProgram(tuple(accumulated), stats=tuple(stats))


def least_model(rules: Iterable[Rule], limits: GroundingLimits = GroundingLimits()) -> frozenset:
    """Least model of a positive normal program, by forward chaining."""
    rules = tuple(rules)
    for r in rules:
        if len(r.head) != 1 or r.negative_body:
            raise PreconditionViolation(f"rule {r} is not positive and normal")
    index = _AtomIndex()
    ground, _ = _fixpoint(rules, _Context(), index, set(), set(), limits, 0, False, ("least_model",))
    return frozenset(a for r in ground for a in r.head)
