"""Classification of observation pairs: side-effects of one another or not.

Four relations over a framework and two observations. In each, a primary
explanation E1 sets the context and a secondary explanation E2 is judged by
how it uses that context through inspection points:

* side-effect: E2 explains the second observation by consuming a producer
  abduced in E1, adding no plain producers of its own beyond E1.
* contested: as side-effect, but E2 explains the negation of the second
  observation; a false inspection fact forced by a contrary producer in E1
  also counts as consuming the context.
* relevant consequence: E2 may add plain producers of its own, as long as
  it stays consistent with E1 and still consumes at least one producer
  found only in E1.
* jointly supported: neither observation is explainable alone; pending
  explanations (inspection consumers left open) pair up so that each side
  produces what the other consumes.

Labels come in necessary and possible strengths, with strict variants for
the side-effect relation, and close under the obvious implications.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .abduction import (
    AbducibleFact,
    AbductiveFramework,
    Explanation,
    Observation,
    explain,
    validate_inspection,
)
from .core import Inspect, TruthValue
from .errors import NoExplanationError
from .semantics import satisfies_ics


class Label(Enum):
    NECESSARY = "NECESSARY"
    STRICT_NECESSARY = "STRICT_NECESSARY"
    POSSIBLE = "POSSIBLE"
    STRICT_POSSIBLE = "STRICT_POSSIBLE"
    NECESSARILY_CONTESTED = "NECESSARILY_CONTESTED"
    POSSIBLY_CONTESTED = "POSSIBLY_CONTESTED"
    REBUTTAL = "REBUTTAL"
    NECESSARY_RELEVANT = "NECESSARY_RELEVANT"
    POSSIBLE_RELEVANT = "POSSIBLE_RELEVANT"
    NECESSARILY_JOINT = "NECESSARILY_JOINT"
    POSSIBLY_JOINT = "POSSIBLY_JOINT"
    NONE = "NONE"


_LABEL_ORDER = {label: index for index, label in enumerate(Label)}

_IMPLICATIONS = {
    Label.STRICT_NECESSARY: (Label.NECESSARY,),
    Label.STRICT_POSSIBLE: (Label.POSSIBLE,),
    Label.NECESSARY: (Label.POSSIBLE,),
    Label.NECESSARILY_CONTESTED: (Label.POSSIBLY_CONTESTED,),
    Label.NECESSARY_RELEVANT: (Label.POSSIBLE_RELEVANT,),
    Label.NECESSARILY_JOINT: (Label.POSSIBLY_JOINT,),
}


def close_labels(labels: set[Label]) -> frozenset[Label]:
    """Close under implications; an empty set becomes {NONE}."""
    closed = set(labels)
    queue = list(labels)
    while queue:
        for implied in _IMPLICATIONS.get(queue.pop(), ()):
            if implied not in closed:
                closed.add(implied)
                queue.append(implied)
    return frozenset(closed) if closed else frozenset({Label.NONE})


@dataclass(frozen=True)
class Witness:
    """One (primary, secondary) explanation pair establishing a label."""

    label: Label
    primary: Explanation
    secondary: Explanation

    def key(self) -> tuple:
        return (_LABEL_ORDER[self.label], self.primary.key(), self.secondary.key())


@dataclass(frozen=True)
class ClassificationReport:
    relation: str
    labels: frozenset[Label]
    witnesses: tuple[Witness, ...]

    def has(self, label: Label) -> bool:
        return label in self.labels

    def sorted_labels(self) -> tuple[Label, ...]:
        return tuple(sorted(self.labels, key=_LABEL_ORDER.get))

    def is_none(self) -> bool:
        return self.labels == frozenset({Label.NONE})


def _producer_for(wrapper: Inspect) -> AbducibleFact:
    value = TruthValue.FALSE if wrapper.negated else TruthValue.TRUE
    return AbducibleFact(wrapper.atom, value)


def _forcing_producer_for(wrapper: Inspect) -> AbducibleFact:
    # the contrary plain fact that closes the wrapper to false
    value = TruthValue.TRUE if wrapper.negated else TruthValue.FALSE
    return AbducibleFact(wrapper.atom, value)


def _positive_inspections(explanation: Explanation) -> list[AbducibleFact]:
    return [
        fact
        for fact in explanation.sorted_facts()
        if fact.is_inspection() and fact.value is TruthValue.TRUE
    ]


def _consumes_from(secondary: Explanation, primary: Explanation) -> bool:
    """Some positive inspection fact in the secondary is fed only by the primary."""
    own = secondary.plain_facts()
    for fact in _positive_inspections(secondary):
        producer = _producer_for(fact.subject)
        if producer not in own and producer in primary.facts:
            return True
    return False


def _forced_false_by(secondary: Explanation, primary: Explanation) -> bool:
    """Some false inspection fact in the secondary is forced by a primary producer."""
    for fact in secondary.sorted_facts():
        if fact.is_inspection() and fact.value is TruthValue.FALSE:
            if _forcing_producer_for(fact.subject) in primary.facts:
                return True
    return False


def _qualifies(
    secondary: Explanation, primary: Explanation, *, forced_false: bool = False
) -> bool:
    if not secondary.plain_facts() <= primary.facts:
        return False
    if _consumes_from(secondary, primary):
        return True
    return forced_false and _forced_false_by(secondary, primary)


def _producer_completion(
    secondary: Explanation, primary: Explanation
) -> frozenset[AbducibleFact]:
    """The secondary's plain facts, plus the primary producers it consumes."""
    completed = set(secondary.plain_facts())
    for fact in _positive_inspections(secondary):
        producer = _producer_for(fact.subject)
        if producer in primary.facts:
            completed.add(producer)
    for fact in secondary.sorted_facts():
        if fact.is_inspection() and fact.value is TruthValue.FALSE:
            forcing = _forcing_producer_for(fact.subject)
            if forcing in primary.facts:
                completed.add(forcing)
    return frozenset(completed)


def _strictly_covers(secondary: Explanation, primary: Explanation) -> bool:
    return primary.facts <= _producer_completion(secondary, primary)


def _consistent_union(first: Explanation, second: Explanation) -> Explanation | None:
    try:
        return Explanation(first.facts | second.facts)
    except ValueError:
        return None


def _primary_explanations(
    framework: AbductiveFramework, observation: Observation
) -> tuple[Explanation, ...]:
    explanations = explain(framework, observation)
    if not explanations:
        raise NoExplanationError("no explanation for primary observation")
    return explanations


def classify_side_effect(
    framework: AbductiveFramework,
    primary_obs: Observation,
    side_obs: Observation,
    *,
    strict_literal: bool = False,
) -> ClassificationReport:
    """Is the second observation a (strict/possible/necessary) side-effect?

    `strict_literal` switches the strict-possible label to the reading under
    which it presupposes necessity; the default ties it to possibility.
    """
    primaries = _primary_explanations(framework, primary_obs)
    rows: list[tuple[Explanation, list[Explanation], list[Explanation]]] = []
    for e1 in primaries:
        secondaries = explain(framework, side_obs, context=e1)
        qualifying = [e2 for e2 in secondaries if _qualifies(e2, e1)]
        strict = [e2 for e2 in qualifying if _strictly_covers(e2, e1)]
        rows.append((e1, qualifying, strict))

    labels: set[Label] = set()
    witnesses: list[Witness] = []

    def first_witness(label: Label, strict_only: bool):
        for e1, qualifying, strict in rows:
            pool = strict if strict_only else qualifying
            if pool:
                witnesses.append(Witness(label, e1, pool[0]))
                return

    if any(qualifying for _, qualifying, _ in rows):
        labels.add(Label.POSSIBLE)
        first_witness(Label.POSSIBLE, strict_only=False)
    if all(qualifying for _, qualifying, _ in rows):
        labels.add(Label.NECESSARY)
        first_witness(Label.NECESSARY, strict_only=False)
    strict_somewhere = any(strict for _, _, strict in rows)
    if all(strict for _, _, strict in rows):
        labels.add(Label.STRICT_NECESSARY)
        first_witness(Label.STRICT_NECESSARY, strict_only=True)
    strict_possible = (
        strict_somewhere and Label.NECESSARY in labels
        if strict_literal
        else strict_somewhere
    )
    if strict_possible:
        labels.add(Label.STRICT_POSSIBLE)
        first_witness(Label.STRICT_POSSIBLE, strict_only=True)

    return ClassificationReport(
        "side-effect", close_labels(labels), tuple(sorted(witnesses, key=Witness.key))
    )


def classify_contested(
    framework: AbductiveFramework,
    primary_obs: Observation,
    side_obs: Observation,
) -> ClassificationReport:
    """Does explaining the first observation argue against the second?

    The secondary explanation targets the negated second observation; a
    false inspection fact forced by a contrary producer in the primary
    counts as context consumption. When the second observation is exactly
    the primary's negation, a contested outcome is additionally a rebuttal.
    """
    primaries = _primary_explanations(framework, primary_obs)
    negated = side_obs.negated()
    rows: list[tuple[Explanation, list[Explanation]]] = []
    for e1 in primaries:
        secondaries = explain(framework, negated, context=e1)
        rows.append(
            (e1, [e2 for e2 in secondaries if _qualifies(e2, e1, forced_false=True)])
        )

    labels: set[Label] = set()
    witnesses: list[Witness] = []

    def first_witness(label: Label):
        for e1, qualifying in rows:
            if qualifying:
                witnesses.append(Witness(label, e1, qualifying[0]))
                return

    if any(qualifying for _, qualifying in rows):
        labels.add(Label.POSSIBLY_CONTESTED)
        first_witness(Label.POSSIBLY_CONTESTED)
    if all(qualifying for _, qualifying in rows):
        labels.add(Label.NECESSARILY_CONTESTED)
        first_witness(Label.NECESSARILY_CONTESTED)
    if labels and negated == primary_obs:
        labels.add(Label.REBUTTAL)
        first_witness(Label.REBUTTAL)

    return ClassificationReport(
        "contested", close_labels(labels), tuple(sorted(witnesses, key=Witness.key))
    )


def classify_relevant_consequence(
    framework: AbductiveFramework,
    primary_obs: Observation,
    side_obs: Observation,
) -> ClassificationReport:
    """As side-effect, but the secondary may bring its own plain producers.

    Necessity quantifies over every contextual secondary explanation found
    under any primary: each must have some consistent primary that feeds one
    of its inspection facts. Possibility asks for a single such pair.
    """
    primaries = _primary_explanations(framework, primary_obs)
    secondaries: list[Explanation] = []
    for e1 in primaries:
        for e2 in explain(framework, side_obs, context=e1):
            if e2 not in secondaries:
                secondaries.append(e2)
    secondaries.sort(key=Explanation.key)

    def partners(e2: Explanation) -> list[Explanation]:
        return [
            e1
            for e1 in primaries
            if _consistent_union(e1, e2) is not None and _consumes_from(e2, e1)
        ]

    matched = {e2: partners(e2) for e2 in secondaries}
    labels: set[Label] = set()
    witnesses: list[Witness] = []
    paired = [(e2, found[0]) for e2, found in matched.items() if found]
    if paired:
        labels.add(Label.POSSIBLE_RELEVANT)
        e2, e1 = paired[0]
        witnesses.append(Witness(Label.POSSIBLE_RELEVANT, e1, e2))
    if secondaries and all(found for found in matched.values()):
        labels.add(Label.NECESSARY_RELEVANT)
        e2, e1 = paired[0]
        witnesses.append(Witness(Label.NECESSARY_RELEVANT, e1, e2))

    return ClassificationReport(
        "relevant", close_labels(labels), tuple(sorted(witnesses, key=Witness.key))
    )


def classify_jointly_supported(
    framework: AbductiveFramework,
    first_obs: Observation,
    second_obs: Observation,
) -> ClassificationReport:
    """Do pending explanations of the two observations complete each other?

    A pending explanation may hold positive inspection facts with no
    producer yet. A pair joins when the union is consistent, each side's
    inspection discipline is met with the other as context, each consumes a
    producer found only in the other, and the union's least model makes both
    observations true without violating a constraint.
    """
    first_pending = explain(framework, first_obs, allow_external_producers=True)
    second_pending = explain(framework, second_obs, allow_external_producers=True)
    if not first_pending or not second_pending:
        raise NoExplanationError("no explanation for primary observation")

    pairs: list[tuple[Explanation, Explanation]] = []
    for e1, e2 in itertools.product(first_pending, second_pending):
        union = _consistent_union(e1, e2)
        if union is None:
            continue
        if not (validate_inspection(e1, e2) and validate_inspection(e2, e1)):
            continue
        if not (_consumes_from(e1, e2) and _consumes_from(e2, e1)):
            continue
        model = framework.model_of(union)
        if not (first_obs.holds_in(model) and second_obs.holds_in(model)):
            continue
        if not satisfies_ics(model, framework.constraints):
            continue
        pairs.append((e1, e2))

    labels: set[Label] = set()
    witnesses: list[Witness] = []
    if pairs:
        labels.add(Label.POSSIBLY_JOINT)
        witnesses.append(Witness(Label.POSSIBLY_JOINT, *pairs[0]))
        first_covered = {e1 for e1, _ in pairs} >= set(first_pending)
        second_covered = {e2 for _, e2 in pairs} >= set(second_pending)
        if first_covered and second_covered:
            labels.add(Label.NECESSARILY_JOINT)
            witnesses.append(Witness(Label.NECESSARILY_JOINT, *pairs[0]))

    return ClassificationReport(
        "joint", close_labels(labels), tuple(sorted(witnesses, key=Witness.key))
    )
