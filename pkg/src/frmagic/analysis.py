"""Predicate-level structure of a program.

Dependency graph, components and the labelled component graph drive the
modular grounder; stratification and the fr-safety check gate the magic-set
rewriting; ``relevant_atoms`` explores the ground atoms a query depends on.
"""
from __future__ import annotations

import enum
import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import NoOrdering
from .syntax import (
    Atom,
    Functional,
    Program,
    Query,
    Rule,
    apply_rule,
    match_atom,
)


# ---------------------------------------------------------------------------
# EDB / IDB


@dataclass(frozen=True)
class EdbIdbSplit:
    edb_predicates: FrozenSet[str]
    idb_predicates: FrozenSet[str]
    edb_rules: Tuple[Rule, ...]
    idb_rules: Tuple[Rule, ...]


def idb_predicates(p: Program) -> FrozenSet[str]:
    """Predicates with at least one defining rule that is not a fact."""
    return frozenset(
        a.predicate for r in p.rules if not r.is_fact for a in r.head
    )


def classify_edb_idb(p: Program) -> EdbIdbSplit:
    """Split predicates and rules into the extensional and intensional parts.

    Predicates that occur only in rule bodies have no defining rule at all;
    they are classified EDB (every defining rule is, vacuously, a fact).
    """
    idb = idb_predicates(p)
    edb = frozenset(p.predicates()) - idb
    idb_rules = tuple(r for r in p.rules if any(a.predicate in idb for a in r.head))
    edb_rules = tuple(r for r in p.rules if not any(a.predicate in idb for a in r.head))
    return EdbIdbSplit(edb, idb, edb_rules, idb_rules)


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class DependencyGraph:
    """Positive dependencies among IDB predicates; edge ``(q, p)`` means q -> p."""

    nodes: Tuple[str, ...]
    edges: FrozenSet[Tuple[str, str]]

    def successors(self) -> Dict[str, List[str]]:
        succ: Dict[str, List[str]] = {n: [] for n in self.nodes}
        for q, p in sorted(self.edges):
            succ[q].append(p)
        return succ


def dependency_graph(p: Program) -> DependencyGraph:
    idb = idb_predicates(p)
    edges = set()
    for r in p.rules:
        for h in r.head:
            if h.predicate not in idb:
                continue
            for b in r.positive_body:
                if b.predicate in idb:
                    edges.add((b.predicate, h.predicate))
    return DependencyGraph(tuple(sorted(idb)), frozenset(edges))


def strongly_connected_components(nodes: Sequence, successors) -> List[List]:
    """Iterative Tarjan.

    ``successors`` maps a node to an iterable of nodes.  Components come out
    in reverse topological order of the edge relation: a component is emitted
    only after every component reachable from it.
    """
    index: Dict = {}
    low: Dict = {}
    on_stack = set()
    stack: List = []
    result: List[List] = []
    counter = itertools.count()
    for root in nodes:
        if root in index:
            continue
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors.get(root, ())))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                result.append(comp)
    return result


Component = FrozenSet[str]


def _component_key(c: Iterable[str]) -> str:
    return min(c)


def components(g: DependencyGraph) -> List[Component]:
    """SCCs of the dependency graph, sorted by smallest member predicate."""
    sccs = strongly_connected_components(list(g.nodes), g.successors())
    return sorted((frozenset(c) for c in sccs), key=_component_key)


@dataclass(frozen=True)
class ComponentGraph:
    nodes: Tuple[Component, ...]
    # (source, target, label) with label "+" or "-"
    edges: FrozenSet[Tuple[Component, Component, str]]

    def component_of(self, predicate: str) -> Optional[Component]:
        for c in self.nodes:
            if predicate in c:
                return c
        return None

    def labelled_successors(self) -> Dict[Component, List[Tuple[Component, str]]]:
        succ: Dict[Component, List[Tuple[Component, str]]] = {c: [] for c in self.nodes}
        for src, dst, label in self.edges:
            succ[src].append((dst, label))
        return succ


def component_graph(p: Program) -> ComponentGraph:
    comps = components(dependency_graph(p))
    owner = {pred: c for c in comps for pred in c}
    plus, minus = set(), set()
    for r in p.rules:
        heads = {owner[a.predicate] for a in r.head if a.predicate in owner}
        for c in heads:
            for b in r.positive_body:
                if b.predicate in owner:
                    plus.add((owner[b.predicate], c))
            for b in r.negative_body:
                if b.predicate in owner:
                    minus.add((owner[b.predicate], c))
    edges = {(s, d, "+") for s, d in plus}
    edges |= {(s, d, "-") for s, d in minus if (s, d) not in plus}
    return ComponentGraph(tuple(comps), frozenset(edges))


# ---------------------------------------------------------------------------
# stratification


@dataclass(frozen=True)
class Stratification:
    """Verdict of ``is_stratified``.

    ``cycle`` is empty when stratified; otherwise a closed walk of
    ``(source, target, sign)`` dependency edges with at least one ``"-"``.
    Edge ``(q, p, s)`` reads "p depends on q with sign s".
    """

    stratified: bool
    cycle: Tuple[Tuple[str, str, str], ...] = ()

    def __bool__(self):
        return self.stratified


def full_dependencies(p: Program) -> Dict[Tuple[str, str], str]:
    """All (body predicate, head predicate) dependencies; "-" wins when both signs occur."""
    deps: Dict[Tuple[str, str], str] = {}
    for r in p.rules:
        for h in r.head:
            for l in r.body:
                key = (l.atom.predicate, h.predicate)
                if not l.positive:
                    deps[key] = "-"
                else:
                    deps.setdefault(key, "+")
    return deps


def is_stratified(p: Program) -> Stratification:
    deps = full_dependencies(p)
    nodes = sorted(p.predicates())
    succ: Dict[str, List[str]] = {n: [] for n in nodes}
    for (q, h) in sorted(deps):
        succ[q].append(h)
    scc_of = {}
    for i, comp in enumerate(strongly_connected_components(nodes, succ)):
        for n in comp:
            scc_of[n] = i
    for (q, h), sign in sorted(deps.items()):
        if sign == "-" and scc_of[q] == scc_of[h]:
            return Stratification(False, _close_cycle(q, h, deps, succ, scc_of))
    return Stratification(True)


def _close_cycle(q, h, deps, succ, scc_of):
    """Negative edge q -> h plus a shortest path h -> q inside their SCC."""
    first = ((q, h, "-"),)
    if q == h:
        return first
    parent = {h: None}
    queue = deque([h])
    while queue:
        v = queue.popleft()
        if v == q:
            break
        for w in succ[v]:
            if w not in parent and scc_of[w] == scc_of[q]:
                parent[w] = v
                queue.append(w)
    path = []
    v = q
    while parent[v] is not None:
        u = parent[v]
        path.append((u, v, deps[(u, v)]))
        v = u
    return first + tuple(reversed(path))


# ---------------------------------------------------------------------------
# component ordering and modules


@dataclass(frozen=True)
class ComponentOrdering:
    components: Tuple[Component, ...]

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def index_of(self) -> Dict[str, int]:
        return {pred: i for i, c in enumerate(self.components) for pred in c}


def _paths(cg: ComponentGraph):
    """Reachability split into strong (all "+") and any-with-a-"-" paths."""
    succ = cg.labelled_successors()
    strong: Dict[Component, set] = {}
    weak: Dict[Component, set] = {}
    for src in cg.nodes:
        # state: (node, seen_minus)
        seen = {(src, False)}
        queue = deque([(src, False)])
        s_reach, w_reach = set(), set()
        while queue:
            v, minus = queue.popleft()
            for w, label in succ[v]:
                state = (w, minus or label == "-")
                if state in seen:
                    continue
                seen.add(state)
                (w_reach if state[1] else s_reach).add(w)
                queue.append(state)
        strong[src] = s_reach
        weak[src] = w_reach
    return strong, weak


def ordering_violations(cg: ComponentGraph, ordering: ComponentOrdering) -> List[str]:
    """Every broken ordering condition, described in words (empty when valid)."""
    strong, weak = _paths(cg)
    problems = []
    if sorted(map(sorted, ordering.components)) != sorted(map(sorted, cg.nodes)):
        problems.append("ordering does not list each component exactly once")
    comps = ordering.components
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            ci, cj = comps[i], comps[j]
            if ci in strong.get(cj, ()):
                problems.append(f"strong path from {sorted(cj)} to {sorted(ci)}")
            if ci in weak.get(cj, ()) and cj not in weak.get(ci, ()):
                problems.append(
                    f"weak path from {sorted(cj)} to {sorted(ci)} without a weak path back"
                )
    return problems


def component_ordering(p: Program) -> ComponentOrdering:
    """Deterministic total order of the components.

    Kahn's algorithm on the component graph, breaking ties by the
    lexicographically smallest member predicate.
    """
    cg = component_graph(p)
    indeg = {c: 0 for c in cg.nodes}
    succ: Dict[Component, set] = {c: set() for c in cg.nodes}
    for src, dst, _ in cg.edges:
        if src != dst and dst not in succ[src]:
            succ[src].add(dst)
            indeg[dst] += 1
    heap = [(_component_key(c), c) for c in cg.nodes if indeg[c] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, c = heapq.heappop(heap)
        order.append(c)
        for d in sorted(succ[c], key=_component_key):
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(heap, (_component_key(d), d))
    if len(order) != len(cg.nodes):
        raise NoOrdering("the component graph has a cycle; the program is not stratified")
    ordering = ComponentOrdering(tuple(order))
    problems = ordering_violations(cg, ordering)
    if problems:
        raise NoOrdering("; ".join(problems))
    return ordering


def module_of(p: Program, ordering: ComponentOrdering, i: int) -> Tuple[Rule, ...]:
    """Rules defining a predicate of the i-th component and none of a lower one."""
    if not 0 <= i < len(ordering):
        raise IndexError(f"component index {i} out of range")
    index = ordering.index_of()
    target = ordering[i]
    out = []
    for r in p.rules:
        heads = [a.predicate for a in r.head]
        if not any(h in target for h in heads):
            continue
        if any(index.get(h, i) < i for h in heads):
            continue
        out.append(r)
    return tuple(out)


# ---------------------------------------------------------------------------
# fr-safety


@dataclass(frozen=True)
class SafetyViolation:
    rule: Rule
    head_atom: Atom
    missing: Tuple[str, ...]

    def __str__(self):
        return (
            f"{self.rule}  variable(s) {', '.join(self.missing)} "
            f"do not occur in head atom {self.head_atom}"
        )


@dataclass(frozen=True)
class FrSafety:
    safe: bool
    reachable: FrozenSet[str]
    violations: Tuple[SafetyViolation, ...] = ()

    def __bool__(self):
        return self.safe


def reachable_predicates(p: Program, start: str) -> FrozenSet[str]:
    """Predicates reachable from ``start`` through rules whose head mentions a reached one."""
    by_head: Dict[str, List[Rule]] = {}
    for r in p.rules:
        for a in r.head:
            by_head.setdefault(a.predicate, []).append(r)
    seen = {start}
    queue = deque([start])
    while queue:
        pred = queue.popleft()
        for r in by_head.get(pred, ()):
            for a in r.atoms:
                if a.predicate not in seen:
                    seen.add(a.predicate)
                    queue.append(a.predicate)
    return frozenset(seen)


def check_fr_safety(p: Program, q: Query) -> FrSafety:
    """Every variable of a reachable rule must occur in each reachable head atom.

    Sufficient for the all-bound magic-set rewriting: only then does every
    magic rule carry ground bindings.  It is not a complete test for finite
    recursion.
    """
    reach = reachable_predicates(p, q.atom.predicate)
    violations = []
    for r in p.rules:
        if not any(a.predicate in reach for a in r.head):
            continue
        variables = r.variables()
        for h in r.head:
            if h.predicate not in reach:
                continue
            present = set(h.variables())
            missing = tuple(v for v in variables if v not in present)
            if missing:
                violations.append(SafetyViolation(r, h, missing))
    return FrSafety(not violations, reach, tuple(violations))


# ---------------------------------------------------------------------------
# relevant atoms


class RelevanceStatus(str, enum.Enum):
    COMPLETE = "complete"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class RelevanceReport:
    """Relevant ground atoms of a query and the ground rules that produced them.

    ``ground_rules`` holds every ground instance with a relevant head atom that
    was discovered; when the status is complete this is the whole relevant
    ground restriction of the program.
    """

    explored: FrozenSet[Atom]
    status: RelevanceStatus
    ground_rules: Tuple[Rule, ...] = field(default=(), repr=False)

    @property
    def complete(self) -> bool:
        return self.status is RelevanceStatus.COMPLETE


def _constants(p: Program, q: Query) -> Optional[List[Functional]]:
    """Finite universe as a list of constants, or ``None`` when it is infinite."""
    functors = set(p.functors())
    functors |= set(Program([Rule([q.atom])]).functors())
    if any(arity > 0 for _, arity in functors):
        return None
    return [Functional(n) for n in sorted(name for name, _ in functors)]


def relevant_atoms(p: Program, q: Query, budget: int = 10_000) -> RelevanceReport:
    """Least set containing the query and closed under rule instantiation.

    Each relevant atom is unified with every rule head atom; the resulting
    ground instance contributes all of its atoms.  The exploration stops with
    ``BUDGET_EXHAUSTED`` as soon as the set would grow past ``budget`` or an
    instance leaves variables unbound over an infinite universe.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    universe = None
    universe_known = False
    rules_by_pred: Dict[str, List[Tuple[Rule, Atom]]] = {}
    for r in p.rules:
        for h in r.head:
            rules_by_pred.setdefault(h.predicate, []).append((r, h))

    explored: Dict[Atom, None] = {q.atom: None}
    ground_rules: Dict[Rule, None] = {}
    queue = deque([q.atom])

    def exhausted():
        return RelevanceReport(
            frozenset(explored), RelevanceStatus.BUDGET_EXHAUSTED, tuple(ground_rules)
        )

    while queue:
        a = queue.popleft()
        for r, h in rules_by_pred.get(a.predicate, ()):
            theta = match_atom(h, a, {})
            if theta is None:
                continue
            rest = [v for v in r.variables() if v not in theta]
            if rest:
                if not universe_known:
                    universe = _constants(p, q)
                    universe_known = True
                if universe is None:
                    return exhausted()
                thetas = []
                for values in itertools.product(universe, repeat=len(rest)):
                    t = dict(theta)
                    t.update(zip(rest, values))
                    thetas.append(t)
            else:
                thetas = [theta]
            for t in thetas:
                rg = apply_rule(t, r)
                ground_rules.setdefault(rg)
                for b in rg.atoms:
                    if b not in explored:
                        if len(explored) >= budget:
                            return exhausted()
                        explored[b] = None
                        queue.append(b)
    return RelevanceReport(frozenset(explored), RelevanceStatus.COMPLETE, tuple(ground_rules))
