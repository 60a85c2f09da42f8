"""Shared machinery for the test suite.

Random scenarios are ground propositional programs sized so the brute-force
oracle stays cheap: defined atoms are named d0..d3, undefined ones u0..u3,
at most two inspection wrapper forms and two denials, and the abducible
pool never exceeds six subjects. The reference classifiers at the bottom
re-evaluate every label quantifier directly over oracle_explain results:
they share the model computation with the engine but none of its search,
pruning, or qualification code, so a bug on either side shows up as a
disagreement rather than a coincidence.
"""

from __future__ import annotations

import itertools
import random

from wcsabd import (
    AbducibleFact,
    Atom,
    BodyLiteral,
    ClassificationReport,
    Clause,
    Explanation,
    Inspect,
    IntegrityConstraint,
    Interpretation,
    Label,
    NoExplanationError,
    Observation,
    Program,
    TruthValue,
    build_framework,
    classify_contested,
    classify_jointly_supported,
    classify_relevant_consequence,
    classify_side_effect,
    explain,
    least_model,
    oracle_explain,
    phi_step,
    satisfies_ics,
    weak_complete,
)
from wcsabd.core import subject_key
from wcsabd.semantics import inspection_closure

T = TruthValue.TRUE
F = TruthValue.FALSE
U = TruthValue.UNKNOWN

# Hand-typed connective tables: negation, then one row per value pair with
# the expected conjunction, disjunction, implication (first value as the
# head, second as the body), and biconditional. 3 + 9 * 4 = 39 entries.
NEGATION_TABLE = (
    (T, F),
    (U, U),
    (F, T),
)

BINARY_TABLE = (
    (T, T, T, T, T, T),
    (T, U, U, T, T, U),
    (T, F, F, T, T, F),
    (U, T, U, T, U, U),
    (U, U, U, U, T, T),
    (U, F, F, U, T, U),
    (F, T, F, T, F, F),
    (F, U, F, U, U, U),
    (F, F, F, F, T, T),
)


# --- random scenario generation ----------------------------------------------


def random_program(
    rng: random.Random,
    *,
    inspection: bool = True,
    defined: tuple[int, int] = (2, 4),
    undefined: tuple[int, int] | None = None,
    wrapper_count: tuple[int, int] = (0, 2),
    cross_pair: bool = False,
) -> tuple[Program, tuple[IntegrityConstraint, ...]]:
    """A small ground program plus denials; every d-atom has a clause.

    With `cross_pair`, two extra heads j0/j1 are wired so that each consumes
    an inspection of a hypothesis the other asserts plainly; random programs
    practically never produce that shape on their own, and without it the
    joint classifier has nothing to find.
    """
    if undefined is None:
        undefined = (2, 3) if inspection else (2, 4)
    heads = [Atom(f"d{i}") for i in range(rng.randint(*defined))]
    hypotheses = [Atom(f"u{i}") for i in range(rng.randint(*undefined))]
    wrappers: list[Inspect] = []
    if inspection:
        forms = [
            Inspect(atom, negated)
            for atom in hypotheses
            for negated in (False, True)
        ]
        wrappers = rng.sample(forms, min(rng.randint(*wrapper_count), len(forms)))
    plain_targets = heads + hypotheses
    clauses: list[Clause] = []
    for head in heads:
        for _ in range(rng.randint(1, 3)):
            roll = rng.random()
            if roll < 0.10:
                clauses.append(Clause(head, T))
                continue
            if roll < 0.18:
                clauses.append(Clause(head, F))
                continue
            chosen = rng.sample(
                plain_targets, rng.randint(1, min(3, len(plain_targets)))
            )
            literals = [
                BodyLiteral(target, positive=rng.random() >= 0.35)
                for target in chosen
            ]
            if wrappers and rng.random() < 0.45:
                literals.append(BodyLiteral(rng.choice(wrappers)))
            clauses.append(Clause(head, tuple(literals)))
    program = Program(tuple(clauses))
    atoms = sorted(
        (s for s in program.subjects() if isinstance(s, Atom)), key=subject_key
    )
    constraints = tuple(
        IntegrityConstraint(
            tuple(
                BodyLiteral(atom, positive=rng.random() >= 0.4)
                for atom in rng.sample(atoms, rng.randint(1, min(2, len(atoms))))
            )
        )
        for _ in range(rng.randint(0, 2))
    )
    if cross_pair and inspection and len(hypotheses) >= 2:
        x, y = rng.sample(hypotheses, 2)
        program = program.extend(
            (
                Clause(Atom("j0"), (BodyLiteral(x), BodyLiteral(Inspect(y)))),
                Clause(Atom("j1"), (BodyLiteral(Inspect(x)), BodyLiteral(y))),
            )
        )
    return program, constraints


def random_framework(rng: random.Random, **kwargs):
    program, constraints = random_program(rng, **kwargs)
    return build_framework(program, constraints)


def random_observation(rng: random.Random, framework) -> Observation:
    atoms = sorted(
        (s for s in framework.program.subjects() if isinstance(s, Atom)),
        key=subject_key,
    )
    chosen = rng.sample(atoms, rng.randint(1, min(2, len(atoms))))
    return Observation(
        frozenset(
            BodyLiteral(atom, positive=rng.random() >= 0.3) for atom in chosen
        )
    )


def random_context(rng: random.Random, framework, max_facts: int = 2) -> Explanation:
    subjects = framework.abducible_subjects()
    if not subjects:
        return Explanation()
    chosen = rng.sample(subjects, rng.randint(1, min(max_facts, len(subjects))))
    return Explanation(
        frozenset(AbducibleFact(s, rng.choice((T, F))) for s in chosen)
    )


def observation_pair(rng: random.Random, framework, relation: str):
    """A pair of observations with a fighting chance of a nonvacuous label.

    Uniformly random observation pairs almost never relate: the classifiers
    all hinge on one observation's hypotheses feeding an inspection the
    other consumes. This picks a clause with a positive wrapper literal and
    aims the observations at it; returns None when the program offers no
    such clause, in which case the caller falls back to random picks.
    """
    if relation == "joint":
        for first, second in itertools.permutations(framework.program.clauses, 2):
            if _crossing(framework, first, second):
                return (
                    Observation(frozenset({BodyLiteral(first.head)})),
                    Observation(frozenset({BodyLiteral(second.head)})),
                )
        return None
    pool = {s for s in framework.abducible_subjects() if isinstance(s, Atom)}
    candidates = []
    for clause in framework.program.clauses:
        if clause.is_fact() or not isinstance(clause.head, Atom):
            continue
        for literal in clause.body:
            if isinstance(literal.target, Inspect) and literal.positive:
                rest = [lit for lit in clause.body if lit is not literal]
                if all(lit.target in pool for lit in rest):
                    candidates.append((clause, literal.target, rest))
    if not candidates:
        return None
    clause, wrapper, rest = rng.choice(candidates)
    wrapped = wrapper.atom
    if relation == "contested":
        # the primary asserts the contrary producer, forcing the wrapper false
        contrary = BodyLiteral(wrapped, positive=wrapper.negated)
        return (
            Observation(frozenset({contrary})),
            Observation(frozenset({BodyLiteral(clause.head)})),
        )
    producing = BodyLiteral(wrapped, positive=not wrapper.negated)
    if relation == "relevant":
        return (
            Observation(frozenset({producing})),
            Observation(frozenset({BodyLiteral(clause.head)})),
        )
    # side-effect: the primary must also cover the clause's plain needs
    literals = {producing}
    for lit in rest:
        if lit.target in pool and lit.target != wrapped:
            literals.add(BodyLiteral(lit.target, positive=lit.positive))
    return (
        Observation(frozenset(literals)),
        Observation(frozenset({BodyLiteral(clause.head)})),
    )


def _crossing(framework, first: Clause, second: Clause) -> bool:
    if first.is_fact() or second.is_fact() or first.head == second.head:
        return False
    if not (isinstance(first.head, Atom) and isinstance(second.head, Atom)):
        return False
    if len(first.body) != 2 or len(second.body) != 2:
        return False

    def split(clause):
        plain = [l for l in clause.body if isinstance(l.target, Atom) and l.positive]
        wrapped = [
            l.target.atom
            for l in clause.body
            if isinstance(l.target, Inspect) and l.positive and not l.target.negated
        ]
        return {l.target for l in plain}, set(wrapped)

    first_plain, first_wrapped = split(first)
    second_plain, second_wrapped = split(second)
    return bool(first_plain & second_wrapped) and bool(second_plain & first_wrapped)


# --- cross-checks used by both the unit suites and the acceptance suite ------


def assert_explain_matches_oracle(
    framework,
    observation,
    context: Explanation | None = None,
    *,
    criterion: str = "subset",
    allow_external_producers: bool = False,
) -> tuple[Explanation, ...]:
    context = Explanation() if context is None else context
    got = explain(
        framework,
        observation,
        context,
        criterion=criterion,
        allow_external_producers=allow_external_producers,
    )
    want = oracle_explain(
        framework,
        observation,
        context,
        criterion=criterion,
        allow_external_producers=allow_external_producers,
    )
    assert got == want, (
        f"explain/oracle disagreement on {observation.render()} "
        f"(criterion={criterion}): {[e.render() for e in got]} "
        f"vs {[e.render() for e in want]}"
    )
    return got


def assert_phi_behaviour(program: Program) -> None:
    """Monotone iteration, convergence within the bound, fixpoint = model."""
    closure = inspection_closure(program)
    effective = program.extend(closure) if closure else program
    bound = len(effective.subjects()) + 1
    interp = Interpretation.empty()
    for _ in range(bound):
        following = phi_step(effective, interp)
        assert interp.true_set <= following.true_set
        assert interp.false_set <= following.false_set
        if following == interp:
            break
        interp = following
    else:
        raise AssertionError(f"no fixpoint within {bound} steps")
    assert interp == least_model(program)


def assert_weak_completion_satisfied(program: Program) -> None:
    closure = inspection_closure(program)
    effective = program.extend(closure) if closure else program
    assert weak_complete(effective).holds_in(least_model(program))


def assert_least_model_is_model_intersection(program: Program) -> None:
    """The least model is the knowledge meet of all weak-completion models.

    Exhaustive over 3^n interpretations, so callers keep programs small and
    inspection-free.
    """
    completion = weak_complete(program)
    subjects = sorted(program.subjects(), key=subject_key)
    true_meet: frozenset | None = None
    false_meet: frozenset | None = None
    for values in itertools.product((T, F, U), repeat=len(subjects)):
        candidate = Interpretation(
            frozenset(s for s, v in zip(subjects, values) if v is T),
            frozenset(s for s, v in zip(subjects, values) if v is F),
        )
        if not completion.holds_in(candidate):
            continue
        if true_meet is None:
            true_meet, false_meet = candidate.true_set, candidate.false_set
        else:
            true_meet &= candidate.true_set
            false_meet &= candidate.false_set
    assert true_meet is not None, "the weak completion has no model at all"
    model = least_model(program)
    assert model.true_set == true_meet
    assert model.false_set == false_meet


# --- reference classifiers over the oracle ------------------------------------


def _producing(wrapper: Inspect) -> AbducibleFact:
    return AbducibleFact(wrapper.atom, F if wrapper.negated else T)


def _blocking(wrapper: Inspect) -> AbducibleFact:
    return AbducibleFact(wrapper.atom, T if wrapper.negated else F)


def _wrapper_facts(explanation: Explanation, value: TruthValue):
    return [
        fact
        for fact in explanation.facts
        if isinstance(fact.subject, Inspect) and fact.value is value
    ]


def _feeds(consumer: Explanation, producer: Explanation) -> bool:
    own = consumer.plain_facts()
    return any(
        _producing(f.subject) not in own and _producing(f.subject) in producer.facts
        for f in _wrapper_facts(consumer, T)
    )


def _forced(consumer: Explanation, producer: Explanation) -> bool:
    return any(
        _blocking(f.subject) in producer.facts
        for f in _wrapper_facts(consumer, F)
    )


def _side_qualifies(e2, e1, *, forced_false: bool = False) -> bool:
    if not e2.plain_facts() <= e1.facts:
        return False
    return _feeds(e2, e1) or (forced_false and _forced(e2, e1))


def _consumed_part(e2, e1) -> set[AbducibleFact]:
    used = set(e2.plain_facts())
    for fact in _wrapper_facts(e2, T):
        if _producing(fact.subject) in e1.facts:
            used.add(_producing(fact.subject))
    for fact in _wrapper_facts(e2, F):
        if _blocking(fact.subject) in e1.facts:
            used.add(_blocking(fact.subject))
    return used


def _consistent(e1: Explanation, e2: Explanation) -> bool:
    merged: dict = {}
    return not any(
        merged.setdefault(f.subject, f.value) != f.value
        for f in e1.facts | e2.facts
    )


def _inspection_legal(explanation: Explanation, context: Explanation) -> bool:
    providers: dict = {}
    for fact in context.facts | explanation.facts:
        if not isinstance(fact.subject, Inspect):
            providers.setdefault(fact.subject, set()).add(fact.value)
    for fact in explanation.facts:
        if not isinstance(fact.subject, Inspect):
            continue
        needed = F if fact.subject.negated else T
        available = providers.get(fact.subject.atom, set())
        if fact.value is T:
            if not context.facts or needed not in available:
                return False
        elif needed in available:
            return False
    return True


def _closed(labels: set[Label]) -> frozenset[Label]:
    out = set(labels)
    if Label.STRICT_NECESSARY in out:
        out.add(Label.NECESSARY)
    if Label.STRICT_POSSIBLE in out:
        out.add(Label.POSSIBLE)
    if Label.NECESSARY in out:
        out.add(Label.POSSIBLE)
    if Label.NECESSARILY_CONTESTED in out:
        out.add(Label.POSSIBLY_CONTESTED)
    if Label.NECESSARY_RELEVANT in out:
        out.add(Label.POSSIBLE_RELEVANT)
    if Label.NECESSARILY_JOINT in out:
        out.add(Label.POSSIBLY_JOINT)
    return frozenset(out) if out else frozenset({Label.NONE})


def ref_side_effect_labels(
    framework, primary_obs, side_obs, *, strict_literal: bool = False
) -> frozenset[Label]:
    primaries = oracle_explain(framework, primary_obs)
    if not primaries:
        raise NoExplanationError("no explanation for primary observation")
    qualifying, strict = [], []
    for e1 in primaries:
        row = [
            e2
            for e2 in oracle_explain(framework, side_obs, context=e1)
            if _side_qualifies(e2, e1)
        ]
        qualifying.append(row)
        strict.append([e2 for e2 in row if e1.facts <= _consumed_part(e2, e1)])
    labels: set[Label] = set()
    if any(qualifying):
        labels.add(Label.POSSIBLE)
    if all(qualifying):
        labels.add(Label.NECESSARY)
    if all(strict):
        labels.add(Label.STRICT_NECESSARY)
    if any(strict) and (Label.NECESSARY in labels if strict_literal else True):
        labels.add(Label.STRICT_POSSIBLE)
    return _closed(labels)


def ref_contested_labels(framework, primary_obs, side_obs) -> frozenset[Label]:
    primaries = oracle_explain(framework, primary_obs)
    if not primaries:
        raise NoExplanationError("no explanation for primary observation")
    negated = side_obs.negated()
    rows = [
        [
            e2
            for e2 in oracle_explain(framework, negated, context=e1)
            if _side_qualifies(e2, e1, forced_false=True)
        ]
        for e1 in primaries
    ]
    labels: set[Label] = set()
    if any(rows):
        labels.add(Label.POSSIBLY_CONTESTED)
    if all(rows):
        labels.add(Label.NECESSARILY_CONTESTED)
    if labels and negated == primary_obs:
        labels.add(Label.REBUTTAL)
    return _closed(labels)


def ref_relevant_labels(framework, primary_obs, side_obs) -> frozenset[Label]:
    primaries = oracle_explain(framework, primary_obs)
    if not primaries:
        raise NoExplanationError("no explanation for primary observation")
    secondaries: set[Explanation] = set()
    for e1 in primaries:
        secondaries |= set(oracle_explain(framework, side_obs, context=e1))
    matched = [
        any(_consistent(e1, e2) and _feeds(e2, e1) for e1 in primaries)
        for e2 in secondaries
    ]
    labels: set[Label] = set()
    if any(matched):
        labels.add(Label.POSSIBLE_RELEVANT)
    if matched and all(matched):
        labels.add(Label.NECESSARY_RELEVANT)
    return _closed(labels)


def ref_joint_labels(framework, first_obs, second_obs) -> frozenset[Label]:
    first = oracle_explain(framework, first_obs, allow_external_producers=True)
    second = oracle_explain(framework, second_obs, allow_external_producers=True)
    if not first or not second:
        raise NoExplanationError("no explanation for primary observation")
    pairs = []
    for e1, e2 in itertools.product(first, second):
        if not _consistent(e1, e2):
            continue
        if not (_inspection_legal(e1, e2) and _inspection_legal(e2, e1)):
            continue
        if not (_feeds(e1, e2) and _feeds(e2, e1)):
            continue
        model = framework.model_of(Explanation(e1.facts | e2.facts))
        if not (first_obs.holds_in(model) and second_obs.holds_in(model)):
            continue
        if not satisfies_ics(model, framework.constraints):
            continue
        pairs.append((e1, e2))
    labels: set[Label] = set()
    if pairs:
        labels.add(Label.POSSIBLY_JOINT)
        if {e1 for e1, _ in pairs} >= set(first) and {
            e2 for _, e2 in pairs
        } >= set(second):
            labels.add(Label.NECESSARILY_JOINT)
    return _closed(labels)


LIBRARY_CLASSIFIERS = {
    "side-effect": classify_side_effect,
    "contested": classify_contested,
    "relevant": classify_relevant_consequence,
    "joint": classify_jointly_supported,
}

REFERENCE_CLASSIFIERS = {
    "side-effect": ref_side_effect_labels,
    "contested": ref_contested_labels,
    "relevant": ref_relevant_labels,
    "joint": ref_joint_labels,
}

RELATIONS = tuple(LIBRARY_CLASSIFIERS)


def _labels_or_none(callable_, framework, first, second):
    try:
        result = callable_(framework, first, second)
    except NoExplanationError:
        return None
    return result.labels if isinstance(result, ClassificationReport) else result


def assert_classifier_agreement(framework, first, second, relation) -> bool:
    """Compare engine labels with the reference; True when labels were real."""
    got = _labels_or_none(LIBRARY_CLASSIFIERS[relation], framework, first, second)
    want = _labels_or_none(REFERENCE_CLASSIFIERS[relation], framework, first, second)
    assert got == want, (
        f"{relation} disagreement on {first.render()} / {second.render()}: "
        f"{got} vs {want}"
    )
    return got is not None and got != frozenset({Label.NONE})
