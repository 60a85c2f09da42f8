"""Abduction over weak completion models, with inspection-point discipline.

An abductive framework fixes a ground program, its integrity constraints,
and the pool of abducible facts: a true and a false fact for every undefined
plain atom, plus facts for every inspection wrapper that occurs in a rule
body over an undefined atom. An explanation is a consistent set of pool
facts whose addition to the program makes the observation true in the least
model, keeps the constraints satisfied, and uses inspection points legally.

Inspection legality: a positive inspection fact consumes a producer, a
plain fact of the inspected polarity, that must already be present in the
context or the explanation itself; with an empty context no positive
inspection fact is permitted at all. A false inspection fact is always
legal unless a producer of the inspected polarity is present, which it
would contradict.

The context never enters the model: it supplies producers for inspection
validation and is checked for consistency with the explanation, but the
observation is checked in the least model of program plus explanation
facts alone. Secondary explanations may consume prior abductions, not
import them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    Atom,
    BodyLiteral,
    Clause,
    Inspect,
    IntegrityConstraint,
    Interpretation,
    Program,
    Subject,
    TruthValue,
    ground_constraints,
    ground_program,
    subject_key,
    tv_and,
    undefined_subjects,
)
from .errors import FrameworkError, NoExplanationError, OracleBoundError
from .semantics import least_model, satisfies_ics

_RANK = {TruthValue.FALSE: 0, TruthValue.UNKNOWN: 1, TruthValue.TRUE: 2}


@dataclass(frozen=True)
class AbducibleFact:
    """A candidate hypothesis: a ground subject asserted true or false."""

    subject: Subject
    value: TruthValue

    def __post_init__(self):
        if self.value not in (TruthValue.TRUE, TruthValue.FALSE):
            raise ValueError("an abducible fact asserts true or false")
        if not self.subject.is_ground():
            raise ValueError("abducible facts must be ground")

    def is_inspection(self) -> bool:
        return isinstance(self.subject, Inspect)

    def to_clause(self) -> Clause:
        return Clause(self.subject, self.value)

    def key(self) -> tuple:
        return (*subject_key(self.subject), _RANK[self.value])

    def render(self) -> str:
        return f"{self.subject.render()} = {self.value.value}"


@dataclass(frozen=True)
class Explanation:
    """A consistent set of abducible facts. Empty means 'already entailed'."""

    facts: frozenset[AbducibleFact] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "facts", frozenset(self.facts))
        seen: dict[Subject, TruthValue] = {}
        for fact in self.facts:
            if seen.setdefault(fact.subject, fact.value) != fact.value:
                raise ValueError(
                    f"contradictory facts for {fact.subject.render()}"
                )

    @classmethod
    def empty(cls) -> "Explanation":
        return cls(frozenset())

    def assignment(self) -> dict[Subject, TruthValue]:
        return {fact.subject: fact.value for fact in self.facts}

    def plain_facts(self) -> frozenset[AbducibleFact]:
        return frozenset(f for f in self.facts if not f.is_inspection())

    def inspection_facts(self) -> frozenset[AbducibleFact]:
        return frozenset(f for f in self.facts if f.is_inspection())

    def sorted_facts(self) -> tuple[AbducibleFact, ...]:
        return tuple(sorted(self.facts, key=AbducibleFact.key))

    def key(self) -> tuple:
        return (
            len(self.plain_facts()),
            len(self.inspection_facts()),
            tuple(f.key() for f in self.sorted_facts()),
        )

    def render(self) -> str:
        if not self.facts:
            return "{}"
        return "{" + ", ".join(f.render() for f in self.sorted_facts()) + "}"


@dataclass(frozen=True)
class Observation:
    """A non-empty conjunction of ground literals over plain atoms."""

    literals: frozenset[BodyLiteral]

    def __post_init__(self):
        object.__setattr__(self, "literals", frozenset(self.literals))
        if not self.literals:
            raise ValueError("an observation needs at least one literal")
        for literal in self.literals:
            if isinstance(literal.target, Inspect):
                raise ValueError("observations may not mention inspection points")
            if not literal.is_ground():
                raise ValueError("observations must be ground")

    def negated(self) -> "Observation":
        return Observation(frozenset(lit.negated() for lit in self.literals))

    def sorted_literals(self) -> tuple[BodyLiteral, ...]:
        return tuple(sorted(self.literals, key=BodyLiteral.key))

    def atoms(self) -> frozenset[Atom]:
        return frozenset(lit.target for lit in self.literals)

    def constants(self) -> frozenset[str]:
        names: set[str] = set()
        for lit in self.literals:
            names |= lit.target.constants()
        return frozenset(names)

    def holds_in(self, interp: Interpretation) -> bool:
        return all(
            interp.literal_value(lit) is TruthValue.TRUE for lit in self.literals
        )

    def render(self) -> str:
        return ", ".join(lit.render() for lit in self.sorted_literals())


@dataclass(frozen=True)
class AbductiveFramework:
    """Ground program, ground constraints, and the abducible pool."""

    program: Program
    constraints: tuple[IntegrityConstraint, ...] = ()
    abducibles: frozenset[AbducibleFact] = frozenset()
    non_abducibles: frozenset[Atom] = frozenset()

    def abducible_subjects(self) -> tuple[Subject, ...]:
        return tuple(
            sorted({f.subject for f in self.abducibles}, key=subject_key)
        )

    def model_of(self, explanation: Explanation) -> Interpretation:
        extended = self.program.extend(
            fact.to_clause() for fact in explanation.sorted_facts()
        )
        return least_model(extended)


def build_framework(
    program: Program,
    constraints: Iterable[IntegrityConstraint] = (),
    extra_constants: Iterable[str] = (),
    non_abducibles: Iterable[Atom] = (),
) -> AbductiveFramework:
    """Ground the program and constraints and synthesize the abducible pool.

    `non_abducibles` are undefined atoms to exclude from the pool; each gets
    the guard clause A <- A, which defines it without ever deciding it.
    """
    guards = frozenset(non_abducibles)
    for atom in guards:
        if not isinstance(atom, Atom):
            raise FrameworkError("only plain atoms can be declared non-abducible")
        if not atom.is_ground():
            raise FrameworkError("non-abducible atoms must be ground")
    extras = set(extra_constants)
    for atom in guards:
        extras |= atom.constants()
    ground = ground_program(program, extras)
    for atom in guards:
        if atom in ground.heads():
            raise FrameworkError(
                f"{atom.render()} is defined by the program; a guard is meaningless"
            )
    guarded = ground.extend(
        Clause(atom, (BodyLiteral(atom),)) for atom in sorted(guards)
    )
    ground_ics = ground_constraints(
        constraints, guarded.constant_pool() | extras
    )
    undefined = undefined_subjects(guarded)
    pool: set[AbducibleFact] = set()
    body_subjects = guarded.body_subjects()
    for subject in undefined:
        if isinstance(subject, Inspect):
            if subject not in body_subjects or subject.atom not in undefined:
                continue
        for value in (TruthValue.TRUE, TruthValue.FALSE):
            pool.add(AbducibleFact(subject, value))
    return AbductiveFramework(guarded, ground_ics, frozenset(pool), guards)


def validate_inspection(
    explanation: Explanation,
    context: Explanation = Explanation(),
    *,
    allow_external_producers: bool = False,
) -> bool:
    """Check the producer/consumer discipline for the explanation's facts.

    With `allow_external_producers`, positive inspection facts are accepted
    without a producer in sight; the joint-support search uses this and
    defers the match to a partner explanation.
    """
    producers: dict[Atom, set[TruthValue]] = {}
    for fact in context.facts | explanation.facts:
        if not fact.is_inspection():
            producers.setdefault(fact.subject, set()).add(fact.value)
    context_free = not context.facts
    for fact in explanation.facts:
        if not fact.is_inspection():
            continue
        wrapper = fact.subject
        produced = TruthValue.FALSE if wrapper.negated else TruthValue.TRUE
        available = producers.get(wrapper.atom, set())
        if fact.value is TruthValue.TRUE:
            if allow_external_producers:
                continue
            if context_free or produced not in available:
                return False
        elif produced in available:
            return False
    return True


def check_explanation(
    framework: AbductiveFramework,
    explanation: Explanation,
    observation: Observation,
    context: Explanation = Explanation(),
    *,
    allow_external_producers: bool = False,
) -> bool:
    """True iff the explanation explains the observation in this framework."""
    if not explanation.facts <= framework.abducibles:
        raise FrameworkError("explanation contains facts outside the pool")
    merged: dict[Subject, TruthValue] = context.assignment()
    for fact in explanation.facts:
        if merged.setdefault(fact.subject, fact.value) != fact.value:
            return False
    if not validate_inspection(
        explanation, context, allow_external_producers=allow_external_producers
    ):
        return False
    model = framework.model_of(explanation)
    return observation.holds_in(model) and satisfies_ics(
        model, framework.constraints
    )


def _dependency_cone(
    framework: AbductiveFramework, observation: Observation
) -> set[Subject]:
    """Subjects the observation or a constraint can depend on, producers included."""
    by_head: dict[Subject, list[Clause]] = {}
    for clause in framework.program.clauses:
        by_head.setdefault(clause.head, []).append(clause)
    stack: list[Subject] = list(observation.atoms())
    for ic in framework.constraints:
        stack.extend(lit.target for lit in ic.body)
    seen: set[Subject] = set()
    while stack:
        subject = stack.pop()
        if subject in seen:
            continue
        seen.add(subject)
        if isinstance(subject, Inspect):
            stack.append(subject.atom)
        for clause in by_head.get(subject, ()):
            if not isinstance(clause.body, TruthValue):
                stack.extend(lit.target for lit in clause.body)
    return seen


def explain(
    framework: AbductiveFramework,
    observation: Observation,
    context: Explanation = Explanation(),
    *,
    criterion: str = "subset",
    strict_entailment_gate: bool = False,
    allow_external_producers: bool = False,
) -> tuple[Explanation, ...]:
    """All minimal explanations of the observation, canonically ordered.

    `criterion` is "subset" (minimal under set inclusion; equal plain parts
    are tie-broken toward fewer inspection facts, which inclusion already
    delivers) or "cardinality" (least (plain, inspection) fact counts).
    When the bare program already entails the observation, the result is the
    single empty explanation; `strict_entailment_gate` turns that case into
    no explanations at all.
    """
    if criterion not in ("subset", "cardinality"):
        raise ValueError(f"unknown minimality criterion: {criterion}")

    def valid(candidate: Explanation) -> bool:
        return check_explanation(
            framework,
            candidate,
            observation,
            context,
            allow_external_producers=allow_external_producers,
        )

    if valid(Explanation.empty()):
        return () if strict_entailment_gate else (Explanation.empty(),)

    cone = _dependency_cone(framework, observation)
    subjects = [s for s in framework.abducible_subjects() if s in cone]
    plain = [s for s in subjects if not isinstance(s, Inspect)]
    wrappers = [s for s in subjects if isinstance(s, Inspect)]
    values = (TruthValue.TRUE, TruthValue.FALSE)
    found: list[Explanation] = []
    for n_plain in range(len(plain) + 1):
        for n_insp in range(len(wrappers) + 1):
            if n_plain == n_insp == 0:
                continue
            for chosen_plain in itertools.combinations(plain, n_plain):
                for chosen_insp in itertools.combinations(wrappers, n_insp):
                    chosen = chosen_plain + chosen_insp
                    for assigned in itertools.product(values, repeat=len(chosen)):
                        facts = frozenset(
                            AbducibleFact(s, v) for s, v in zip(chosen, assigned)
                        )
                        if any(e.facts <= facts for e in found):
                            continue
                        candidate = Explanation(facts)
                        if valid(candidate):
                            found.append(candidate)
        if criterion == "cardinality" and found:
            break
    if criterion == "subset":
        kept = [e for e in found if not any(o.facts < e.facts for o in found)]
    else:
        best = min(e.key()[:2] for e in found) if found else None
        kept = [e for e in found if e.key()[:2] == best]
    return tuple(sorted(kept, key=Explanation.key))


def entails(
    framework: AbductiveFramework,
    observation: Observation,
    query: Sequence[BodyLiteral],
    mode: str = "skeptical",
) -> TruthValue:
    """Truth of a literal-conjunction query across all minimal-explanation models.

    Skeptical: true (false) iff the query is true (false) in every model.
    Credulous: true iff true in some model, else false iff false in some
    model. Unknown otherwise.
    """
    if mode not in ("skeptical", "credulous"):
        raise ValueError(f"unknown entailment mode: {mode}")
    explanations = explain(framework, observation)
    if not explanations:
        raise NoExplanationError("no explanation exists")
    values = []
    for explanation in explanations:
        model = framework.model_of(explanation)
        value = TruthValue.TRUE
        for literal in query:
            value = tv_and(value, model.literal_value(literal))
        values.append(value)
    if mode == "skeptical":
        if all(v is TruthValue.TRUE for v in values):
            return TruthValue.TRUE
        if all(v is TruthValue.FALSE for v in values):
            return TruthValue.FALSE
        return TruthValue.UNKNOWN
    if any(v is TruthValue.TRUE for v in values):
        return TruthValue.TRUE
    if any(v is TruthValue.FALSE for v in values):
        return TruthValue.FALSE
    return TruthValue.UNKNOWN


def oracle_explain(
    framework: AbductiveFramework,
    observation: Observation,
    context: Explanation = Explanation(),
    *,
    criterion: str = "subset",
    allow_external_producers: bool = False,
) -> tuple[Explanation, ...]:
    """Brute-force reference: try every consistent pool assignment.

    Deliberately shares no enumeration logic with explain(): it walks the
    full three-way assignment space over all pool subjects (absent, true,
    false) and filters afterwards. Bounded to pools of at most 16 facts.
    """
    if len(framework.abducibles) > 16:
        raise OracleBoundError("oracle bound exceeded: pool larger than 16 facts")
    subjects = framework.abducible_subjects()
    valid: list[Explanation] = []
    for assignment in itertools.product(
        (None, TruthValue.TRUE, TruthValue.FALSE), repeat=len(subjects)
    ):
        facts = frozenset(
            AbducibleFact(subject, value)
            for subject, value in zip(subjects, assignment)
            if value is not None
        )
        candidate = Explanation(facts)
        if check_explanation(
            framework,
            candidate,
            observation,
            context,
            allow_external_producers=allow_external_producers,
        ):
            valid.append(candidate)
    if criterion == "subset":
        kept = [e for e in valid if not any(o.facts < e.facts for o in valid)]
    elif criterion == "cardinality":
        best = min(e.key()[:2] for e in valid) if valid else None
        kept = [e for e in valid if e.key()[:2] == best]
    else:
        raise ValueError(f"unknown minimality criterion: {criterion}")
    return tuple(sorted(kept, key=Explanation.key))
