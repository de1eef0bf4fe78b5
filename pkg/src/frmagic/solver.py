"""Stable models of finite ground programs and brave/cautious entailment.

``stable_models`` splits the ground program along the strongly connected
components of its atom dependency graph (head atoms of one rule are kept
together) and solves the components bottom-up.  A component whose local
rules are normal and positive has exactly one answer, its least model; any
other component is searched with supportedness pruning and a SAT-style
minimality check.

``brute_force_stable_models`` is the independent oracle: it enumerates every
interpretation with the bitmask kernels.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import kernels
from .analysis import classify_edb_idb, strongly_connected_components
from .errors import CapReached, PreconditionViolation, TooLarge
from .grounder import GroundingLimits, GroundProgram, least_model
from .magic import RewrittenProgram, demagic, magic_atom_of
from .syntax import Atom, Program, Query, Rule, is_magic

BRUTE_FORCE_MAX_ATOMS = 22

Interpretation = FrozenSet[Atom]


class EntailmentMode(str, enum.Enum):
    BRAVE = "brave"
    CAUTIOUS = "cautious"


@dataclass(frozen=True)
class AnswerReport:
    answer: bool
    mode: EntailmentMode
    witness: Optional[Interpretation]
    model_count: int


def _rules(g) -> Tuple[Rule, ...]:
    if isinstance(g, (GroundProgram, Program)):
        return g.rules
    return tuple(g)


def model_key(m: Iterable[Atom]) -> List[str]:
    return sorted(str(a) for a in m)


def sort_models(models: Iterable[Interpretation]) -> List[Interpretation]:
    return sorted(models, key=model_key)


# ---------------------------------------------------------------------------
# reduct and models


def reduct(g, i: Iterable[Atom]) -> GroundProgram:
    """Drop rules with a negative body atom in ``i``; strip negation from the rest."""
    i = frozenset(i)
    kept = []
    for r in _rules(g):
        if any(a in i for a in r.negative_body):
            continue
        kept.append(Rule(r.head, [l for l in r.body if l.positive]))
    return GroundProgram(tuple(dict.fromkeys(kept)))


def is_model(g, i: Iterable[Atom]) -> bool:
    i = frozenset(i)
    for r in _rules(g):
        body_true = all(a in i for a in r.positive_body) and not any(
            a in i for a in r.negative_body
        )
        if body_true and not any(a in i for a in r.head):
            return False
    return True


# ---------------------------------------------------------------------------
# integer encoding


class _Encoded:
    def __init__(self, rules: Sequence[Rule], extra: Iterable[Atom] = ()):
        seen: Dict[Atom, None] = {}
        for r in rules:
            for a in r.atoms:
                seen.setdefault(a)
        for a in extra:
            seen.setdefault(a)
        self.atoms: List[Atom] = sorted(seen, key=str)
        self.index = {a: k for k, a in enumerate(self.atoms)}
        ix = self.index
        self.rules = [
            (
                tuple(dict.fromkeys(ix[a] for a in r.head)),
                tuple(dict.fromkeys(ix[a] for a in r.positive_body)),
                tuple(dict.fromkeys(ix[a] for a in r.negative_body)),
            )
            for r in rules
        ]

    def decode(self, ints: Iterable[int]) -> Interpretation:
        return frozenset(self.atoms[k] for k in ints)


# ---------------------------------------------------------------------------
# main search


def _least_model_normal(rules, atoms) -> set:
    """Forward chaining with body counters for positive normal rules."""
    watching: Dict[int, List[int]] = {}
    missing = []
    queue = []
    true = set()
    for k, (h, p, _) in enumerate(rules):
        missing.append(len(p))
        for b in p:
            watching.setdefault(b, []).append(k)
        if not p:
            queue.append(h[0])
    while queue:
        a = queue.pop()
        if a in true:
            continue
        true.add(a)
        for k in watching.get(a, ()):
            missing[k] -= 1
            if missing[k] == 0:
                queue.append(rules[k][0][0])
    return true


def _satisfiable(clauses: List[List[int]]) -> bool:
    """DPLL over integer literals (``+v`` true, ``-v - 1`` false)."""

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            neg = -lit - 1
            if neg in c:
                c = [x for x in c if x != neg]
                if not c:
                    return None
            out.append(c)
        return out

    stack = [clauses]
    while stack:
        cls = stack.pop()
        # unit propagation
        while cls is not None:
            unit = next((c[0] for c in cls if len(c) == 1), None)
            if unit is None:
                break
            cls = simplify(cls, unit)
        if cls is None:
            continue
        if not cls:
            return True
        lit = cls[0][0]
        # try the negative polarity first; small models are what we look for
        for choice in (lit, -lit - 1) if lit < 0 else (-lit - 1, lit):
            nxt = simplify(cls, choice)
            if nxt is not None:
                stack.append(nxt)
    return False


def _is_minimal(rules, m: frozenset) -> bool:
    """No proper subset of ``m`` is a model of the reduct of ``rules`` w.r.t. ``m``."""
    relevant = []
    for h, p, n in rules:
        if any(b in m for b in n):
            continue
        if not all(b in m for b in p):
            continue
        relevant.append(([x for x in h if x in m], p))
    if all(len(h) <= 1 for h, _ in relevant):
        normal = [((h[0],), p, ()) for h, p in relevant if h]
        return _least_model_normal(normal, m) == set(m)
    # candidate-reduction: drop one true atom at a time, let propagation re-close
    facts = {h[0] for h, p in relevant if not p and len(h) == 1}
    removable = [a for a in m if a not in facts]
    if not removable:
        return True
    clauses = [list(h) + [-b - 1 for b in p] for h, p in relevant]
    clauses.append([-a - 1 for a in removable])
    return not _satisfiable(clauses)


def _local_models(rules, local: Sequence[int]) -> List[frozenset]:
    """Stable models of a component once lower atoms are decided."""
    if not rules:
        return [frozenset()]
    if all(len(h) == 1 and not n for h, _, n in rules):
        return [frozenset(_least_model_normal(rules, local))]

    order = sorted(local)
    pos_of = {a: k for k, a in enumerate(order)}
    support: Dict[int, List[int]] = {a: [] for a in order}
    touching: Dict[int, List[int]] = {a: [] for a in order}
    for k, (h, p, n) in enumerate(rules):
        for a in h:
            support[a].append(k)
        for a in set(h) | set(p) | set(n):
            touching[a].append(k)
    value: Dict[int, bool] = {}

    def rule_violated(k):
        h, p, n = rules[k]
        if any(value.get(a) is not True for a in p):
            return False
        if any(value.get(a) is not False for a in n):
            return False
        return all(value.get(a) is False for a in h)

    def unsupported(a):
        for k in support[a]:
            h, p, n = rules[k]
            if any(value.get(b) is False for b in p):
                continue
            if any(value.get(b) is True for b in n):
                continue
            if any(value.get(b) is True for b in h if b != a):
                continue
            return False
        return True

    def consistent(a):
        for k in touching[a]:
            if rule_violated(k):
                return False
        for b in order[: pos_of[a] + 1]:
            if value[b] and unsupported(b):
                return False
        for k in touching[a]:
            for b in rules[k][0]:
                if value.get(b) is True and unsupported(b):
                    return False
        return True

    found = []

    def search(depth):
        if depth == len(order):
            m = frozenset(a for a in order if value[a])
            if _is_minimal(rules, m):
                found.append(m)
            return
        a = order[depth]
        for choice in (False, True):
            value[a] = choice
            if consistent(a):
                search(depth + 1)
            del value[a]

    search(0)
    return found


def _components(enc: _Encoded):
    n = len(enc.atoms)
    succ: Dict[int, List[int]] = {a: [] for a in range(n)}
    for h, p, neg in enc.rules:
        for a in h:
            succ[a].extend(p)
            succ[a].extend(neg)
            succ[a].extend(x for x in h if x != a)
    comps = strongly_connected_components(list(range(n)), succ)
    owner = {}
    for ci, comp in enumerate(comps):
        for a in comp:
            owner[a] = ci
    comp_rules: List[list] = [[] for _ in comps]
    for r in enc.rules:
        comp_rules[owner[r[0][0]]].append(r)
    return comps, comp_rules


def _search(enc: _Encoded, cap: Optional[int]) -> List[frozenset]:
    comps, comp_rules = _components(enc)
    local_sets = [frozenset(c) for c in comps]
    results: List[frozenset] = []
    stack = [(0, set())]
    while stack:
        ci, true = stack.pop()
        alive = True
        while ci < len(comps):
            local = local_sets[ci]
            reduced = []
            for h, p, n in comp_rules[ci]:
                if any(b not in local and b not in true for b in p):
                    continue
                if any(b not in local and b in true for b in n):
                    continue
                reduced.append(
                    (h, tuple(b for b in p if b in local), tuple(b for b in n if b in local))
                )
            options = _local_models(reduced, comps[ci])
            if not options:
                alive = False
                break
            for extra in reversed(options[1:]):
                stack.append((ci + 1, true | extra))
            true |= options[0]
            ci += 1
        if alive:
            results.append(frozenset(true))
            if cap is not None and len(results) >= cap:
                break
    return results


def stable_models(g, cap: Optional[int] = None) -> List[Interpretation]:
    """All stable models, sorted by their sorted atom lists.

    With ``cap`` set, raises ``CapReached`` carrying the models found once
    that many have been produced.
    """
    enc = _Encoded(_rules(g))
    found = _search(enc, cap)
    models = sort_models(enc.decode(m) for m in found)
    if cap is not None and len(models) >= cap:
        raise CapReached(models)
    return models


def is_stable_model(g, m: Iterable[Atom]) -> bool:
    """``m`` is a model of ``g`` and a minimal model of the reduct w.r.t. ``m``."""
    m = frozenset(m)
    rules = _rules(g)
    if not is_model(rules, m):
        return False
    enc = _Encoded(rules, m)
    return _is_minimal(enc.rules, frozenset(enc.index[a] for a in m))


# ---------------------------------------------------------------------------
# oracle


def brute_force_stable_models(g) -> List[Interpretation]:
    """Exhaustive oracle over all ``2**n`` interpretations (``n <= 22``)."""
    enc = _Encoded(_rules(g))
    n = len(enc.atoms)
    if n > BRUTE_FORCE_MAX_ATOMS:
        raise TooLarge(f"{n} atoms exceeds the brute-force limit of {BRUTE_FORCE_MAX_ATOMS}")
    heads, pos, neg = _masks(enc)
    masks = kernels.brute_force_stable_masks(heads, pos, neg, n)
    return sort_models(_unmask(enc, m) for m in masks)


def brute_force_is_stable(g, m: Iterable[Atom]) -> bool:
    """Oracle check of a single candidate by subset enumeration."""
    m = frozenset(m)
    enc = _Encoded(_rules(g), m)
    if len(enc.atoms) > 63:
        raise TooLarge("bitmask oracle supports at most 63 atoms")
    heads, pos, neg = _masks(enc)
    mask = sum(1 << enc.index[a] for a in m)
    return kernels.is_minimal_model_of_reduct(heads, pos, neg, mask)


def _masks(enc: _Encoded):
    def mask(ints):
        out = 0
        for k in ints:
            out |= 1 << k
        return out

    heads = [mask(h) for h, _, _ in enc.rules]
    pos = [mask(p) for _, p, _ in enc.rules]
    neg = [mask(n) for _, _, n in enc.rules]
    return heads, pos, neg


def _unmask(enc: _Encoded, m: int) -> Interpretation:
    return frozenset(a for k, a in enumerate(enc.atoms) if m >> k & 1)


# ---------------------------------------------------------------------------
# entailment


def entails_models(models: Sequence[Interpretation], q: Query, mode: EntailmentMode) -> AnswerReport:
    mode = EntailmentMode(mode)
    with_q = [m for m in models if q.atom in m]
    without_q = [m for m in models if q.atom not in m]
    if mode is EntailmentMode.BRAVE:
        answer = bool(with_q)
    else:
        # universal quantification: vacuously true without stable models
        answer = not without_q
    pool = with_q if answer else without_q
    return AnswerReport(answer, mode, pool[0] if pool else None, len(models))


def entails(g, q: Query, mode: EntailmentMode = EntailmentMode.CAUTIOUS) -> AnswerReport:
    return entails_models(stable_models(g), q, mode)


# ---------------------------------------------------------------------------
# proof objects


def is_unfounded_set(g, i: Iterable[Atom], x: Iterable[Atom]) -> bool:
    i = frozenset(i)
    x = frozenset(x)
    i_minus_x = i - x
    for r in _rules(g):
        if not any(a in x for a in r.head):
            continue
        if not all(a in i for a in r.positive_body):
            continue  # 1.a
        if any(a in i for a in r.negative_body):
            continue  # 1.b
        if any(a in x for a in r.positive_body):
            continue  # 2
        if any(a in i_minus_x for a in r.head):
            continue  # 3
        return False
    return True


def killed_atoms(
    g_dms,
    m: Iterable[Atom],
    n: Iterable[Atom],
    base_predicates: Iterable[str],
    edb_predicates: Iterable[str] = (),
    universe: Iterable[Atom] = (),
) -> FrozenSet[Atom]:
    """False original atoms that are EDB or carry a true magic atom in ``n``.

    The base is infinite in general; candidates are the atoms of ``g_dms``,
    the atoms in ``universe`` and the originals of the magic atoms in ``n``.
    """
    m = frozenset(m)
    n = frozenset(n)
    rules = _rules(g_dms)
    if not n <= m:
        raise PreconditionViolation("N must be a subset of M")
    if not is_model(reduct(rules, m), n):
        raise PreconditionViolation("N must be a model of the reduct w.r.t. M")
    base = frozenset(base_predicates)
    edb = frozenset(edb_predicates)
    candidates: Dict[Atom, None] = {}
    for r in rules:
        for a in r.atoms:
            candidates.setdefault(a)
    for a in universe:
        candidates.setdefault(a)
    for a in n:
        if is_magic(a.predicate):
            candidates.setdefault(demagic(a))
    killed = set()
    for a in candidates:
        if is_magic(a.predicate) or a.predicate not in base or a in n:
            continue
        if a.predicate in edb or magic_atom_of(a) in n:
            killed.add(a)
    return frozenset(killed)


def magic_atoms_model(rw: RewrittenProgram, limits: GroundingLimits = GroundingLimits()) -> frozenset:
    """The unique stable model of the magic rules, by least fixpoint."""
    return least_model(rw.magic_rules, limits)


def magic_variant(
    i: Iterable[Atom],
    p: Program,
    rw: RewrittenProgram,
    limits: GroundingLimits = GroundingLimits(),
) -> Interpretation:
    """EDB facts, the magic model, and the atoms of ``i`` marked relevant by it."""
    i = frozenset(i)
    star = magic_atoms_model(rw, limits)
    edb_atoms = {r.head[0] for r in classify_edb_idb(p).edb_rules}
    kept = {a for a in i if not is_magic(a.predicate) and magic_atom_of(a) in star}
    return frozenset(edb_atoms | star | kept)
