"""Core syntax: truth values, atoms, clauses, programs, interpretations.

Everything here is an immutable value. Programs normalize their clause list
to a canonical order at construction time, so structural equality and
deterministic printing come for free.

Conventions carried by the surface syntax: identifiers starting with an
uppercase letter are variables, everything else is a constant or predicate
name. Inspection wrappers (`inspect(a)`, `inspect_neg(a)`) are first-class
subjects: they can occur in bodies, carry truth values in interpretations,
and head fact clauses, but they never head a proper rule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Union

from .errors import GroundingError


class TruthValue(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __repr__(self) -> str:
        return f"TruthValue.{self.name}"


_RANK = {TruthValue.FALSE: 0, TruthValue.UNKNOWN: 1, TruthValue.TRUE: 2}
_BY_RANK = {0: TruthValue.FALSE, 1: TruthValue.UNKNOWN, 2: TruthValue.TRUE}


def tv_not(a: TruthValue) -> TruthValue:
    return _BY_RANK[2 - _RANK[a]]


def tv_and(a: TruthValue, b: TruthValue) -> TruthValue:
    return _BY_RANK[min(_RANK[a], _RANK[b])]


def tv_or(a: TruthValue, b: TruthValue) -> TruthValue:
    return _BY_RANK[max(_RANK[a], _RANK[b])]


def tv_implied_by(head: TruthValue, body: TruthValue) -> TruthValue:
    # Lukasiewicz implication body -> head, i.e. min(1, 1 - body + head)
    # over the ranks 0, 1/2, 1 scaled to 0, 1, 2.
    return _BY_RANK[min(2, 2 - _RANK[body] + _RANK[head])]


def tv_iff(a: TruthValue, b: TruthValue) -> TruthValue:
    return _BY_RANK[2 - abs(_RANK[a] - _RANK[b])]


def is_variable(name: str) -> bool:
    return bool(name) and name[0].isupper()


@dataclass(frozen=True, order=True)
class Atom:
    """A predicate applied to constant or variable arguments (arity >= 0)."""

    predicate: str
    args: tuple[str, ...] = ()

    def is_ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    def variables(self) -> frozenset[str]:
        return frozenset(a for a in self.args if is_variable(a))

    def constants(self) -> frozenset[str]:
        return frozenset(a for a in self.args if not is_variable(a))

    def substitute(self, binding: dict[str, str]) -> "Atom":
        return Atom(self.predicate, tuple(binding.get(a, a) for a in self.args))

    def render(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(self.args)})"


@dataclass(frozen=True)
class Inspect:
    """An inspection point over an atom; `negated` inspects the atom's falsity."""

    atom: Atom
    negated: bool = False

    def is_ground(self) -> bool:
        return self.atom.is_ground()

    def variables(self) -> frozenset[str]:
        return self.atom.variables()

    def constants(self) -> frozenset[str]:
        return self.atom.constants()

    def substitute(self, binding: dict[str, str]) -> "Inspect":
        return Inspect(self.atom.substitute(binding), self.negated)

    def render(self) -> str:
        name = "inspect_neg" if self.negated else "inspect"
        return f"{name}({self.atom.render()})"


Subject = Union[Atom, Inspect]


def subject_key(subject: Subject) -> tuple:
    """Canonical sort key: by (predicate, args), wrappers after their atom."""
    if isinstance(subject, Inspect):
        return (subject.atom.predicate, subject.atom.args, 2 if subject.negated else 1)
    return (subject.predicate, subject.args, 0)


@dataclass(frozen=True)
class BodyLiteral:
    """A possibly negated occurrence of a subject in a body or a query."""

    target: Subject
    positive: bool = True

    def is_ground(self) -> bool:
        return self.target.is_ground()

    def variables(self) -> frozenset[str]:
        return self.target.variables()

    def substitute(self, binding: dict[str, str]) -> "BodyLiteral":
        return BodyLiteral(self.target.substitute(binding), self.positive)

    def negated(self) -> "BodyLiteral":
        return BodyLiteral(self.target, not self.positive)

    def key(self) -> tuple:
        return (*subject_key(self.target), 0 if self.positive else 1)

    def render(self) -> str:
        text = self.target.render()
        return text if self.positive else f"not {text}"


Body = Union[TruthValue, tuple[BodyLiteral, ...]]


def _canonical_body(body: Body) -> Body:
    if isinstance(body, TruthValue):
        if body is TruthValue.UNKNOWN:
            raise ValueError("a constant clause body must be true or false")
        return body
    literals = tuple(sorted(set(body), key=BodyLiteral.key))
    if not literals:
        raise ValueError("clause body must not be empty")
    return literals


@dataclass(frozen=True)
class Clause:
    """`head <- body` where body is a literal conjunction or a truth constant."""

    head: Subject
    body: Body
    _key: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "body", _canonical_body(self.body))
        if isinstance(self.head, Inspect) and not isinstance(self.body, TruthValue):
            raise ValueError("inspection wrappers may only head fact clauses")

    def is_fact(self) -> bool:
        return isinstance(self.body, TruthValue)

    def is_ground(self) -> bool:
        if not self.head.is_ground():
            return False
        if isinstance(self.body, TruthValue):
            return True
        return all(lit.is_ground() for lit in self.body)

    def variables(self) -> frozenset[str]:
        names = set(self.head.variables())
        if not isinstance(self.body, TruthValue):
            for lit in self.body:
                names |= lit.variables()
        return frozenset(names)

    def constants(self) -> frozenset[str]:
        names = set(self.head.constants())
        if not isinstance(self.body, TruthValue):
            for lit in self.body:
                names |= lit.target.constants()
        return frozenset(names)

    def substitute(self, binding: dict[str, str]) -> "Clause":
        if isinstance(self.body, TruthValue):
            return Clause(self.head.substitute(binding), self.body)
        return Clause(
            self.head.substitute(binding),
            tuple(lit.substitute(binding) for lit in self.body),
        )

    def key(self) -> tuple:
        # cached: programs re-sort their clauses on every extension
        if self._key is None:
            if isinstance(self.body, TruthValue):
                body_key = (0, _RANK[self.body])
            else:
                body_key = (1, tuple(lit.key() for lit in self.body))
            object.__setattr__(self, "_key", (*subject_key(self.head), body_key))
        return self._key


@dataclass(frozen=True)
class IntegrityConstraint:
    """A denial: the body must never evaluate to true."""

    body: tuple[BodyLiteral, ...]

    def __post_init__(self):
        object.__setattr__(self, "body", _canonical_body(tuple(self.body)))

    def is_ground(self) -> bool:
        return all(lit.is_ground() for lit in self.body)

    def variables(self) -> frozenset[str]:
        names: set[str] = set()
        for lit in self.body:
            names |= lit.variables()
        return frozenset(names)

    def constants(self) -> frozenset[str]:
        names: set[str] = set()
        for lit in self.body:
            names |= lit.target.constants()
        return frozenset(names)

    def substitute(self, binding: dict[str, str]) -> "IntegrityConstraint":
        return IntegrityConstraint(tuple(lit.substitute(binding) for lit in self.body))

    def key(self) -> tuple:
        return tuple(lit.key() for lit in self.body)


@dataclass(frozen=True)
class Program:
    """A set of clauses, stored deduplicated in canonical order."""

    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        unique = sorted(set(self.clauses), key=Clause.key)
        object.__setattr__(self, "clauses", tuple(unique))

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def is_ground(self) -> bool:
        return all(clause.is_ground() for clause in self.clauses)

    def constant_pool(self) -> frozenset[str]:
        names: set[str] = set()
        for clause in self.clauses:
            names |= clause.constants()
        return frozenset(names)

    def heads(self) -> frozenset[Subject]:
        return frozenset(clause.head for clause in self.clauses)

    def body_subjects(self) -> frozenset[Subject]:
        names: set[Subject] = set()
        for clause in self.clauses:
            if not isinstance(clause.body, TruthValue):
                names |= {lit.target for lit in clause.body}
        return frozenset(names)

    def subjects(self) -> frozenset[Subject]:
        return self.heads() | self.body_subjects()

    def clauses_for(self, head: Subject) -> tuple[Clause, ...]:
        return tuple(c for c in self.clauses if c.head == head)

    def extend(self, extra: Iterable[Clause]) -> "Program":
        return Program(self.clauses + tuple(extra))


@dataclass(frozen=True)
class Interpretation:
    """A three-valued interpretation as a pair of disjoint subject sets."""

    true_set: frozenset[Subject] = frozenset()
    false_set: frozenset[Subject] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "true_set", frozenset(self.true_set))
        object.__setattr__(self, "false_set", frozenset(self.false_set))
        overlap = self.true_set & self.false_set
        if overlap:
            names = ", ".join(sorted(s.render() for s in overlap))
            raise ValueError(f"interpretation assigns both values to: {names}")

    @classmethod
    def empty(cls) -> "Interpretation":
        return cls()

    def value(self, subject: Subject) -> TruthValue:
        if subject in self.true_set:
            return TruthValue.TRUE
        if subject in self.false_set:
            return TruthValue.FALSE
        return TruthValue.UNKNOWN

    def literal_value(self, literal: BodyLiteral) -> TruthValue:
        value = self.value(literal.target)
        return value if literal.positive else tv_not(value)


# --- propositional formulas over ground literals ---------------------------


@dataclass(frozen=True)
class Not:
    inner: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class ImpliedBy:
    head: "Formula"
    body: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[TruthValue, BodyLiteral, Not, And, Or, ImpliedBy, Iff]


def evaluate(formula: Formula, interp: Interpretation) -> TruthValue:
    """Evaluate a formula under the designated three-valued tables."""
    if isinstance(formula, TruthValue):
        return formula
    if isinstance(formula, BodyLiteral):
        return interp.literal_value(formula)
    if isinstance(formula, Not):
        return tv_not(evaluate(formula.inner, interp))
    if isinstance(formula, And):
        value = TruthValue.TRUE
        for part in formula.parts:
            value = tv_and(value, evaluate(part, interp))
        return value
    if isinstance(formula, Or):
        value = TruthValue.FALSE
        for part in formula.parts:
            value = tv_or(value, evaluate(part, interp))
        return value
    if isinstance(formula, ImpliedBy):
        return tv_implied_by(
            evaluate(formula.head, interp), evaluate(formula.body, interp)
        )
    if isinstance(formula, Iff):
        return tv_iff(evaluate(formula.left, interp), evaluate(formula.right, interp))
    raise TypeError(f"not a formula: {formula!r}")


def body_value(body: Body, interp: Interpretation) -> TruthValue:
    """Value of a clause body: a constant, or the conjunction of its literals."""
    if isinstance(body, TruthValue):
        return body
    value = TruthValue.TRUE
    for literal in body:
        value = tv_and(value, interp.literal_value(literal))
    return value


# --- grounding --------------------------------------------------------------


def _ground_one(item, constants: tuple[str, ...]):
    names = sorted(item.variables())
    if not names:
        yield item
        return
    if not constants:
        raise GroundingError("no constants to ground over")
    for values in itertools.product(constants, repeat=len(names)):
        yield item.substitute(dict(zip(names, values)))


def ground_program(
    program: Program, extra_constants: Iterable[str] = ()
) -> Program:
    """Instantiate every clause over the program's constants plus extras.

    Already-ground clauses pass through unchanged; the result is deterministic
    because Program canonicalizes clause order.
    """
    constants = tuple(sorted(program.constant_pool() | set(extra_constants)))
    grounded: list[Clause] = []
    for clause in program.clauses:
        grounded.extend(_ground_one(clause, constants))
    return Program(tuple(grounded))


def ground_constraints(
    constraints: Iterable[IntegrityConstraint], constants: Iterable[str]
) -> tuple[IntegrityConstraint, ...]:
    pool = tuple(sorted(set(constants)))
    grounded: list[IntegrityConstraint] = []
    for ic in constraints:
        grounded.extend(_ground_one(ic, pool))
    return tuple(sorted(set(grounded), key=IntegrityConstraint.key))


def undefined_subjects(program: Program) -> frozenset[Subject]:
    """Subjects occurring in some body but in no head, on a ground program.

    An inspection wrapper in a body contributes both itself and the wrapped
    atom as occurrences.
    """
    if not program.is_ground():
        raise GroundingError("undefined subjects are computed on ground programs")
    occurring: set[Subject] = set()
    for subject in program.body_subjects():
        occurring.add(subject)
        if isinstance(subject, Inspect):
            occurring.add(subject.atom)
    return frozenset(occurring - program.heads())


# --- negative-head encoding -------------------------------------------------


@dataclass(frozen=True)
class NegativeHeadEncoding:
    """The pieces introduced to express a negated conclusion for `predicate`."""

    predicate: str
    primed: str
    bridge: Clause
    constraint: IntegrityConstraint


def encode_negative_head(
    predicate: str,
    arity: int = 0,
    known_primed: frozenset[str] = frozenset(),
) -> NegativeHeadEncoding:
    """Introduce the auxiliary predicate carrying `not predicate(...)` heads.

    Returns the primed name, the bridging clause p(X...) <- not p'(X...), and
    the denial forbidding p and p' to hold together. `known_primed` lets a
    caller (the parser keeps such a registry) reject double priming.
    """
    if predicate in known_primed:
        raise ValueError(f"predicate {predicate!r} is already a primed auxiliary")
    primed = "n" + predicate
    args = tuple(f"X{i + 1}" for i in range(arity)) if arity else ()
    base = Atom(predicate, args)
    aux = Atom(primed, args)
    bridge = Clause(base, (BodyLiteral(aux, positive=False),))
    constraint = IntegrityConstraint((BodyLiteral(base), BodyLiteral(aux)))
    return NegativeHeadEncoding(predicate, primed, bridge, constraint)
