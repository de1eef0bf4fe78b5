"""Deterministic Turing machines as programs over ``conf/4``.

A configuration is ``conf(State, Left, Symbol, Right)``: ``Left`` holds the
cells left of the head with the nearest first, ``Right`` the cells to its
right.  Each rule has the source configuration in its head and the successor
in its body, so the query (the initial configuration) depends on the run.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple, Union

from .errors import SpecInvalid
from .syntax import Atom, Functional, Literal, Program, Query, Rule, Variable, cons, const, make_list, nil

BLANK = "_"
LEFT, RIGHT = "L", "R"
DEFAULT_MAX_STEPS = 10_000

TMInput = Union[str, Sequence[str]]


@dataclass(frozen=True)
class TMSpec:
    alphabet: Tuple[str, ...]
    states: Tuple[str, ...]
    initial: str
    final: str
    delta: Dict[Tuple[str, str], Tuple[str, str, str]] = field(default_factory=dict)

    def __post_init__(self):
        alphabet = tuple(dict.fromkeys(self.alphabet))
        if BLANK not in alphabet:
            alphabet += (BLANK,)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", tuple(dict.fromkeys(self.states)))
        object.__setattr__(self, "delta", dict(self.delta))
        self.validate()

    def validate(self) -> None:
        states, sigma = set(self.states), set(self.alphabet)
        if self.initial not in states:
            raise SpecInvalid(f"initial state {self.initial!r} is not declared")
        if self.final not in states:
            raise SpecInvalid(f"final state {self.final!r} is not declared")
        if self.initial == self.final:
            raise SpecInvalid("initial and final state must differ")
        for (s, v), (s2, v2, d) in self.delta.items():
            if s == self.final:
                raise SpecInvalid(f"transition out of the final state on {v!r}")
            for name in (s, s2):
                if name not in states:
                    raise SpecInvalid(f"undeclared state {name!r}")
            for sym in (v, v2):
                if sym not in sigma:
                    raise SpecInvalid(f"symbol {sym!r} is not in the alphabet")
            if d not in (LEFT, RIGHT):
                raise SpecInvalid(f"direction must be L or R, got {d!r}")

    def symbols_of(self, x: TMInput) -> Tuple[str, ...]:
        xs = tuple(x)
        for sym in xs:
            if sym == BLANK:
                raise SpecInvalid("input contains the blank symbol")
            if sym not in self.alphabet:
                raise SpecInvalid(f"input symbol {sym!r} is not in the alphabet")
        return xs


_LINE = re.compile(r"^\s*(alphabet|states|initial|final|delta)\s*:\s*(.*?)\s*$")
_DELTA = re.compile(r"^(\S+)\s+(\S+)\s*->\s*(\S+)\s+(\S+)\s+([LR])$")


def parse_tm_spec(text: str) -> TMSpec:
    """Read the line format (``alphabet:``, ``states:``, ``initial:``, ``final:``, ``delta:``).

    Blank lines and lines starting with ``#`` or ``%`` are ignored.
    """
    fields: Dict[str, List[str]] = {}
    delta: Dict[Tuple[str, str], Tuple[str, str, str]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#%":
            continue
        m = _LINE.match(line)
        if m is None:
            raise SpecInvalid(f"line {lineno}: cannot read {stripped!r}")
        key, value = m.groups()
        if key == "delta":
            d = _DELTA.match(value)
            if d is None:
                raise SpecInvalid(f"line {lineno}: expected 's v -> s2 v2 L|R'")
            s, v, s2, v2, move = d.groups()
            if (s, v) in delta:
                raise SpecInvalid(f"line {lineno}: second transition for ({s}, {v})")
            delta[(s, v)] = (s2, v2, move)
        else:
            if key in fields:
                raise SpecInvalid(f"line {lineno}: repeated {key!r}")
            fields[key] = value.split()
    for key in ("alphabet", "states", "initial", "final"):
        if key not in fields:
            raise SpecInvalid(f"missing {key!r} line")
    for key in ("initial", "final"):
        if len(fields[key]) != 1:
            raise SpecInvalid(f"{key!r} takes exactly one state")
    return TMSpec(
        tuple(fields["alphabet"]),
        tuple(fields["states"]),
        fields["initial"][0],
        fields["final"][0],
        delta,
    )


def format_tm_spec(m: TMSpec) -> str:
    lines = [
        "alphabet: " + " ".join(m.alphabet),
        "states: " + " ".join(m.states),
        f"initial: {m.initial}",
        f"final: {m.final}",
    ]
    for (s, v), (s2, v2, d) in sorted(m.delta.items()):
        lines.append(f"delta: {s} {v} -> {s2} {v2} {d}")
    return "\n".join(lines) + "\n"


def _sanitize(names: Sequence[str], reserved: Dict[str, str]) -> Dict[str, str]:
    """Map names to lowercase identifiers or digit strings, suffixing on collision."""
    out: Dict[str, str] = {}
    used = set(reserved.values())
    out.update(reserved)
    for name in names:
        if name in out:
            continue
        if name.isdigit():
            base = name
        else:
            base = re.sub(r"[^a-z0-9_]", "_", name.lower())
            if not base or not base[0].isalpha():
                base = "c" + base
        cand, k = base, 1
        while cand in used:
            k += 1
            cand = f"{base}_{k}"
        used.add(cand)
        out[name] = cand
    return out


class _Names:
    def __init__(self, m: TMSpec):
        self.state = _sanitize(m.states, {})
        self.symbol = _sanitize(m.alphabet, {BLANK: "blank"})

    def s(self, name: str) -> Functional:
        return const(self.state[name])

    def v(self, name: str) -> Functional:
        return const(self.symbol[name])


def _conf(*args) -> Atom:
    return Atom("conf", args)


def encode_machine(m: TMSpec) -> Program:
    """One final-state fact plus the transition rules, in sorted (state, symbol) order."""
    m.validate()
    n = _Names(m)
    L, V, R = Variable("L"), Variable("V"), Variable("R")
    rules = [Rule([_conf(n.s(m.final), L, V, R)])]
    for (s, v) in sorted(m.delta):
        s2, v2, d = m.delta[(s, v)]
        src, dst = n.s(s), n.s(s2)
        cur, wrote = n.v(v), n.v(v2)
        if d == LEFT:
            rules.append(
                Rule(
                    [_conf(src, cons(V, L), cur, R)],
                    [Literal(_conf(dst, L, V, cons(wrote, R)), True)],
                )
            )
        else:
            rules.append(
                Rule(
                    [_conf(src, L, cur, cons(V, R))],
                    [Literal(_conf(dst, cons(wrote, L), V, R), True)],
                )
            )
            rules.append(
                Rule(
                    [_conf(src, L, cur, nil())],
                    [Literal(_conf(dst, cons(wrote, L), n.v(BLANK), nil()), True)],
                )
            )
    return Program(rules)


def conf_atom(m: TMSpec, state: str, left: Sequence[str], head: str, right: Sequence[str]) -> Atom:
    """``left`` is given nearest-first."""
    n = _Names(m)
    return _conf(
        n.s(state),
        make_list([n.v(a) for a in left]),
        n.v(head),
        make_list([n.v(a) for a in right]),
    )


def encode_query(m: TMSpec, x: TMInput) -> Query:
    xs = m.symbols_of(x)
    if xs:
        return Query(conf_atom(m, m.initial, (), xs[0], xs[1:]))
    return Query(conf_atom(m, m.initial, (), BLANK, ()))


class Verdict(str, enum.Enum):
    ACCEPTS = "accepts"
    REJECTS = "rejects"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class Run:
    verdict: Verdict
    steps: int
    trace: Tuple[Atom, ...]


def simulate_tm(m: TMSpec, x: TMInput, max_steps: int = DEFAULT_MAX_STEPS) -> Run:
    """Run ``m`` on an explicit tape.

    Moving left from the first cell leaves the machine stuck, which is a
    rejection.  ``trace`` lists the visited configurations as conf atoms.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    tape = list(m.symbols_of(x)) or [BLANK]
    pos, state = 0, m.initial
    trace = []

    def snapshot():
        trace.append(conf_atom(m, state, tape[:pos][::-1], tape[pos], tape[pos + 1:]))

    snapshot()
    steps = 0
    while True:
        if state == m.final:
            return Run(Verdict.ACCEPTS, steps, tuple(trace))
        if steps >= max_steps:
            return Run(Verdict.TIMEOUT, steps, tuple(trace))
        step = m.delta.get((state, tape[pos]))
        if step is None:
            return Run(Verdict.REJECTS, steps, tuple(trace))
        state, tape[pos], d = step
        if d == LEFT:
            if pos == 0:
                return Run(Verdict.REJECTS, steps, tuple(trace))
            pos -= 1
        else:
            pos += 1
            if pos == len(tape):
                tape.append(BLANK)
        steps += 1
        snapshot()
