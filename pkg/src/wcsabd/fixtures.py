"""Embedded worked examples and the reproduction checks behind `fixtures`.

Four small programs exercise every part of the engine: the addiction
syllogism (plain and with an inspected abnormality), a two-rule toy, and
the forest-fire program whose observation pairs hit all four
classification relations. Each check rebuilds its scenario from the
program text through the full parse/ground/solve pipeline and compares
against expectations frozen from hand calculation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .abduction import (
    AbductiveFramework,
    Explanation,
    build_framework,
    entails,
    explain,
)
from .classify import (
    Label,
    classify_contested,
    classify_jointly_supported,
    classify_relevant_consequence,
    classify_side_effect,
)
from .core import Atom, Inspect, TruthValue, ground_program
from .frontend import parse_context, parse_observation, parse_program, parse_query
from .semantics import least_model, weak_complete

P_ADD = """\
nadd(X) :- inex(X), not ab1(X).
add(X) :- not nadd(X).
inex(X) :- cig(X), not ab2(X).
ab1(X) :- false.
ab1(X) :- cig(X).
ab2(X) :- false.
cig(a).
:- add(X), nadd(X).
"""

P_ADD_INSP = """\
nadd(X) :- inex(X), not ab1(X).
add(X) :- not nadd(X).
inex(X) :- cig(X), not ab2(X).
ab1(X) :- false.
ab1(X) :- inspect(cig(X)).
ab2(X) :- false.
cig(a).
:- add(X), nadd(X).
"""

P_FIRE = """\
storm :- lightning, not ab1.
storm :- tempest, not ab2.
ffire :- inspect(lightning), not ab3.
ffire :- barbecue, not ab3.
ab3 :- not dry.
rained :- inspect_neg(dry), not ab4.
smoke :- fire, inspect(ffighters).
sirens :- inspect(fire), ffighters.
ab1 :- false.
ab2 :- false.
ab3 :- false.
ab4 :- false.
"""

TOY = """\
a :- b.
a :- c.
"""

STORM_LIGHTNING_CTX = "lightning = true.\n"

PROGRAM_TEXTS = {
    "p_add.lp": P_ADD,
    "p_add_insp.lp": P_ADD_INSP,
    "p_fire.lp": P_FIRE,
    "toy.lp": TOY,
    "storm_lightning.ctx": STORM_LIGHTNING_CTX,
}


@dataclass(frozen=True)
class FixtureResult:
    name: str
    passed: bool
    detail: str = ""


Check = Callable[[], tuple[bool, str]]


def _framework(text: str, extra_constants: Sequence[str] = ()) -> AbductiveFramework:
    program, constraints = parse_program(text)
    return build_framework(program, constraints, extra_constants=extra_constants)


def _equal(actual, expected) -> tuple[bool, str]:
    if actual == expected:
        return True, ""
    return False, f"expected {expected!r}, got {actual!r}"


def _explanations(text: str) -> tuple[Explanation, ...]:
    return tuple(parse_context(part) for part in text.split(";"))


def _check_add_ground_one() -> tuple[bool, str]:
    program, _ = parse_program(P_ADD)
    return _equal(len(ground_program(program)), 7)


def _check_add_ground_two() -> tuple[bool, str]:
    program, _ = parse_program(P_ADD)
    return _equal(len(ground_program(program, {"b"})), 13)


def _check_add_least_model() -> tuple[bool, str]:
    program, _ = parse_program(P_ADD)
    model = least_model(ground_program(program))
    def atoms(names):
        return frozenset(Atom(n, ("a",)) for n in names)
    ok_true = _equal(model.true_set, atoms(["cig", "inex", "add", "ab1"]))
    ok_false = _equal(model.false_set, atoms(["nadd", "ab2"]))
    if not ok_true[0]:
        return ok_true
    return ok_false


def _check_add_weak_completion() -> tuple[bool, str]:
    program, _ = parse_program(P_ADD)
    completion = weak_complete(ground_program(program))
    return _equal(len(completion.equivalences), 6)


def _check_add_pool() -> tuple[bool, str]:
    framework = _framework(P_ADD, ("b",))
    rendered = sorted(f.render() for f in framework.abducibles)
    return _equal(rendered, ["cig(b) = false", "cig(b) = true"])


def _check_add_explanations() -> tuple[bool, str]:
    framework = _framework(P_ADD, ("b",))
    actual = explain(framework, parse_observation("add(b)"))
    return _equal(actual, _explanations("cig(b) = false.; cig(b) = true."))


def _check_add_credulous() -> tuple[bool, str]:
    framework = _framework(P_ADD, ("b",))
    value = entails(
        framework, parse_observation("add(b)"), parse_query("not cig(b)"), "credulous"
    )
    return _equal(value, TruthValue.TRUE)


def _check_add_skeptical() -> tuple[bool, str]:
    framework = _framework(P_ADD, ("b",))
    value = entails(
        framework, parse_observation("add(b)"), parse_query("cig(b)"), "skeptical"
    )
    return _equal(value, TruthValue.UNKNOWN)


def _check_insp_explanation() -> tuple[bool, str]:
    framework = _framework(P_ADD_INSP, ("b",))
    actual = explain(framework, parse_observation("add(b)"))
    return _equal(actual, _explanations("cig(b) = false."))


def _check_insp_skeptical() -> tuple[bool, str]:
    framework = _framework(P_ADD_INSP, ("b",))
    value = entails(
        framework,
        parse_observation("add(b)"),
        parse_query("add(b), not cig(b)"),
        "skeptical",
    )
    return _equal(value, TruthValue.TRUE)


def _check_insp_model_signs() -> tuple[bool, str]:
    framework = _framework(P_ADD_INSP, ("b",))
    model = framework.model_of(_explanations("cig(b) = false.")[0])
    expected = {
        Atom("add", ("b",)): TruthValue.TRUE,
        Inspect(Atom("cig", ("b",))): TruthValue.FALSE,
        Atom("ab1", ("b",)): TruthValue.FALSE,
        Atom("inex", ("b",)): TruthValue.FALSE,
        Atom("nadd", ("b",)): TruthValue.FALSE,
        Atom("ab2", ("b",)): TruthValue.FALSE,
    }
    for subject, value in expected.items():
        if model.value(subject) is not value:
            return False, f"{subject.render()} is {model.value(subject).value}"
    return True, ""


def _check_toy_explanations() -> tuple[bool, str]:
    framework = _framework(TOY)
    actual = explain(framework, parse_observation("a"))
    return _equal(actual, _explanations("b = true.; c = true."))


def _check_toy_skeptical() -> tuple[bool, str]:
    framework = _framework(TOY)
    observation = parse_observation("a")
    for query_text in ("b", "c"):
        value = entails(framework, observation, parse_query(query_text), "skeptical")
        if value is not TruthValue.UNKNOWN:
            return False, f"skeptical {query_text} is {value.value}"
    return True, ""


def _check_toy_credulous() -> tuple[bool, str]:
    framework = _framework(TOY)
    value = entails(framework, parse_observation("a"), parse_query("b"), "credulous")
    return _equal(value, TruthValue.TRUE)


def _check_fire_pool_size() -> tuple[bool, str]:
    return _equal(len(_framework(P_FIRE).abducibles), 20)


def _check_fire_storm_dry() -> tuple[bool, str]:
    framework = _framework(P_FIRE)
    actual = explain(framework, parse_observation("storm, dry"))
    expected = _explanations("dry = true. lightning = true.; dry = true. tempest = true.")
    return _equal(actual, expected)


def _check_fire_context() -> tuple[bool, str]:
    framework = _framework(P_FIRE)
    context = parse_context(STORM_LIGHTNING_CTX)
    actual = explain(framework, parse_observation("ffire"), context)
    wanted = _explanations("dry = true. inspect(lightning) = true.")[0]
    if wanted in actual:
        return True, ""
    return False, f"{wanted.render()} not among {[e.render() for e in actual]}"


def _check_fire_side_effect() -> tuple[bool, str]:
    framework = _framework(P_FIRE)
    report = classify_side_effect(
        framework, parse_observation("storm, dry"), parse_observation("ffire")
    )
    return _equal(report.labels, frozenset({Label.POSSIBLE, Label.STRICT_POSSIBLE}))


def _check_fire_contested() -> tuple[bool, str]:
    framework = _framework(P_FIRE)
    report = classify_contested(
        framework, parse_observation("ffire"), parse_observation("rained")
    )
    expected = frozenset({Label.NECESSARILY_CONTESTED, Label.POSSIBLY_CONTESTED})
    return _equal(report.labels, expected)


def _check_fire_relevant() -> tuple[bool, str]:
    framework = _framework(P_FIRE)
    report = classify_relevant_consequence(
        framework, parse_observation("storm"), parse_observation("ffire")
    )
    return _equal(report.labels, frozenset({Label.POSSIBLE_RELEVANT}))


def _check_fire_joint() -> tuple[bool, str]:
    framework = _framework(P_FIRE)
    report = classify_jointly_supported(
        framework, parse_observation("smoke"), parse_observation("sirens")
    )
    expected = frozenset({Label.NECESSARILY_JOINT, Label.POSSIBLY_JOINT})
    return _equal(report.labels, expected)


DEFAULT_CHECKS: tuple[tuple[str, Check], ...] = (
    ("addiction-ground-count-one", _check_add_ground_one),
    ("addiction-ground-count-two", _check_add_ground_two),
    ("addiction-least-model", _check_add_least_model),
    ("addiction-weak-completion", _check_add_weak_completion),
    ("addiction-pool", _check_add_pool),
    ("addiction-explanations", _check_add_explanations),
    ("addiction-credulous-not-cig", _check_add_credulous),
    ("addiction-skeptical-cig", _check_add_skeptical),
    ("inspected-explanation", _check_insp_explanation),
    ("inspected-skeptical-conclusion", _check_insp_skeptical),
    ("inspected-model-signs", _check_insp_model_signs),
    ("toy-explanations", _check_toy_explanations),
    ("toy-skeptical-unknown", _check_toy_skeptical),
    ("toy-credulous-true", _check_toy_credulous),
    ("fire-pool-size", _check_fire_pool_size),
    ("fire-storm-dry-explanations", _check_fire_storm_dry),
    ("fire-context-explanation", _check_fire_context),
    ("fire-side-effect", _check_fire_side_effect),
    ("fire-contested", _check_fire_contested),
    ("fire-relevant", _check_fire_relevant),
    ("fire-joint", _check_fire_joint),
)


def run_fixtures(
    checks: Sequence[tuple[str, Check]] | None = None
) -> list[FixtureResult]:
    """Run every check, never raising; failures carry a one-line detail."""
    results = []
    for name, check in DEFAULT_CHECKS if checks is None else checks:
        try:
            passed, detail = check()
        except Exception as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(FixtureResult(name, passed, detail))
    return results
