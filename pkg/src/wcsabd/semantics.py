"""Weak completion semantics: completion, the consequence operator, models.

The weak completion of a program merges clauses with the same head into a
single equivalence `head <-> body_1 v body_2 v ...` and leaves undefined
atoms untouched (they keep the value unknown instead of being completed to
false). The least model is the least fixed point of the one-step consequence
operator started from the empty interpretation.

Inspection closure: an inspection wrapper that occurs in a body but has no
defining clause is closed to false exactly when the program itself contains
a fact asserting the opposite polarity of the inspected atom (a fact A <- F
closes inspect(A); a fact A <- T closes inspect_neg(A)). Failed inspections
are false rather than unknown, but only once the program has actually
committed to the inspected atom's contrary value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import (
    Body,
    Clause,
    Inspect,
    IntegrityConstraint,
    Interpretation,
    Program,
    Subject,
    TruthValue,
    body_value,
    subject_key,
    tv_iff,
    tv_or,
)
from .errors import FixpointError


@dataclass(frozen=True)
class Equivalence:
    """`head <-> body_1 v ... v body_n` from the weak completion."""

    head: Subject
    bodies: tuple[Body, ...]

    def value_in(self, interp: Interpretation) -> TruthValue:
        disjunction = TruthValue.FALSE
        for body in self.bodies:
            disjunction = tv_or(disjunction, body_value(body, interp))
        return tv_iff(interp.value(self.head), disjunction)

    def holds_in(self, interp: Interpretation) -> bool:
        return self.value_in(interp) is TruthValue.TRUE


@dataclass(frozen=True)
class WeakCompletion:
    equivalences: tuple[Equivalence, ...]

    def holds_in(self, interp: Interpretation) -> bool:
        return all(eq.holds_in(interp) for eq in self.equivalences)


def _body_key(body: Body) -> tuple:
    if isinstance(body, TruthValue):
        return (0, body.value)
    return (1, tuple(lit.key() for lit in body))


def weak_complete(program: Program) -> WeakCompletion:
    """Merge same-head clauses into equivalences; drop redundant false bodies.

    A false disjunct is dropped whenever the head has another body; a head
    whose only body is false keeps `head <-> F`.
    """
    by_head: dict[Subject, list[Body]] = {}
    for clause in program.clauses:
        by_head.setdefault(clause.head, []).append(clause.body)
    equivalences = []
    for head in sorted(by_head, key=subject_key):
        bodies = by_head[head]
        kept = [b for b in bodies if b is not TruthValue.FALSE]
        if not kept:
            kept = [TruthValue.FALSE]
        unique = sorted(set(kept), key=_body_key)
        equivalences.append(Equivalence(head, tuple(unique)))
    return WeakCompletion(tuple(equivalences))


def phi_step(program: Program, interp: Interpretation) -> Interpretation:
    """One application of the consequence operator.

    A head becomes true if some of its bodies is true under `interp`, and
    false if it has at least one clause and all its bodies are false.
    """
    values: dict[Subject, list[TruthValue]] = {}
    for clause in program.clauses:
        values.setdefault(clause.head, []).append(body_value(clause.body, interp))
    true_set = {h for h, vs in values.items() if TruthValue.TRUE in vs}
    false_set = {
        h for h, vs in values.items() if all(v is TruthValue.FALSE for v in vs)
    }
    return Interpretation(frozenset(true_set), frozenset(false_set))


def inspection_closure(program: Program) -> tuple[Clause, ...]:
    """Implicit false facts for failed inspection points (see module docs)."""
    heads = program.heads()
    facts: dict[Subject, set[TruthValue]] = {}
    for clause in program.clauses:
        if clause.is_fact():
            facts.setdefault(clause.head, set()).add(clause.body)
    closed = []
    for subject in program.body_subjects():
        if not isinstance(subject, Inspect) or subject in heads:
            continue
        contrary = TruthValue.TRUE if subject.negated else TruthValue.FALSE
        if contrary in facts.get(subject.atom, ()):
            closed.append(Clause(subject, TruthValue.FALSE))
    return tuple(sorted(closed, key=Clause.key))


def least_model(program: Program) -> Interpretation:
    """Least fixed point of the consequence operator from the empty interpretation.

    Applies the inspection closure first, then iterates; convergence within
    |subjects| + 1 steps is an internal invariant.
    """
    closure = inspection_closure(program)
    effective = program.extend(closure) if closure else program
    cap = len(effective.subjects()) + 1
    interp = Interpretation.empty()
    for _ in range(cap):
        following = phi_step(effective, interp)
        if following == interp:
            return interp
        interp = following
    raise FixpointError(f"no fixpoint within {cap} iterations")


def satisfies_ics(
    interp: Interpretation, constraints: Iterable[IntegrityConstraint]
) -> bool:
    """A denial holds unless its body is true (unknown bodies are acceptable)."""
    return all(
        body_value(ic.body, interp) is not TruthValue.TRUE for ic in constraints
    )
