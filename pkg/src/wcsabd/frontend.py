"""Surface syntax and result serialization.

Program grammar, one statement per line-agnostic stream, each ending in `.`:

    head.                      positive fact (same as `head :- true.`)
    head :- false.             negative fact
    head :- lit, lit, ....     rule; `not a` or `~a` negates a body literal
    not head :- body.          negated conclusion, expanded to a primed
                               auxiliary predicate, a bridge rule, and a
                               denial (see encode_negative_head)
    :- lit, lit.               integrity constraint (denial)

Identifiers starting with an uppercase letter are variables. `inspect(a)`
and `inspect_neg(a)` are inspection points: legal in bodies and as fact
heads, nowhere else. Comments run from `%` to end of line.

Observations and queries are comma-separated ground literals over plain
atoms (`add(b), not cig(b)`). Context files assign abduced facts, one per
line: `lightning = true.`

Serialization is canonical: equal values give byte-equal output, in both
the human text format and the structured JSON format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Union

from .abduction import AbducibleFact, Explanation, Observation
from .classify import ClassificationReport
from .core import (
    Atom,
    Body,
    BodyLiteral,
    Clause,
    Inspect,
    IntegrityConstraint,
    Interpretation,
    Program,
    Subject,
    TruthValue,
    encode_negative_head,
    subject_key,
)
from .errors import ParseError

_RESERVED = frozenset({"not", "true", "false", "inspect", "inspect_neg"})
_PUNCT = {",": "comma", "(": "lparen", ")": "rparen", ".": "dot", "=": "equals"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    lines = text.splitlines()
    for line_no, line in enumerate(lines, start=1):
        col = 0
        while col < len(line):
            ch = line[col]
            if ch in " \t\r\f":
                col += 1
                continue
            if ch == "%":
                break
            if line.startswith(":-", col):
                tokens.append(Token("arrow", ":-", line_no, col + 1))
                col += 2
                continue
            if ch == "~":
                tokens.append(Token("not", "~", line_no, col + 1))
                col += 1
                continue
            if ch in _PUNCT:
                tokens.append(Token(_PUNCT[ch], ch, line_no, col + 1))
                col += 1
                continue
            if ch.isalpha():
                end = col + 1
                while end < len(line) and (line[end].isalnum() or line[end] == "_"):
                    end += 1
                word = line[col:end]
                kind = "not" if word == "not" else (
                    "variable" if word[0].isupper() else "ident"
                )
                tokens.append(Token(kind, word, line_no, col + 1))
                col = end
                continue
            raise ParseError(f"unexpected character {ch!r}", line_no, col + 1)
    tokens.append(Token("end", "", len(lines) + 1, 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "end":
            self.pos += 1
        return token

    def fail(self, message: str, token: Token | None = None) -> None:
        token = token or self.peek()
        raise ParseError(message, token.line, token.column)

    def expect(self, kind: str, what: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            found = "end of input" if token.kind == "end" else repr(token.text)
            self.fail(f"expected {what}, found {found}", token)
        return self.advance()


def _parse_subject(
    parser: _Parser, *, negated_head: bool = False, inside_wrapper: bool = False
) -> Subject:
    token = parser.peek()
    if token.kind == "variable":
        parser.fail("predicate names start with a lowercase letter", token)
    name_token = parser.expect("ident", "a predicate name")
    name = name_token.text
    if name in ("inspect", "inspect_neg"):
        if inside_wrapper:
            parser.fail("nested inspection is not allowed", name_token)
        if negated_head:
            parser.fail(
                "an inspection point cannot carry a negated conclusion", name_token
            )
        parser.expect("lparen", "'('")
        inner = _parse_subject(parser, inside_wrapper=True)
        parser.expect("rparen", "')'")
        return Inspect(inner, negated=(name == "inspect_neg"))
    if name in _RESERVED:
        parser.fail(f"{name!r} is a reserved word", name_token)
    args: list[str] = []
    if parser.peek().kind == "lparen":
        parser.advance()
        while True:
            term = parser.peek()
            if term.kind not in ("ident", "variable"):
                parser.fail("expected a constant or variable", term)
            if term.text in _RESERVED:
                parser.fail(f"{term.text!r} is a reserved word", term)
            args.append(parser.advance().text)
            separator = parser.peek()
            if separator.kind == "comma":
                parser.advance()
                continue
            parser.expect("rparen", "',' or ')'")
            break
    return Atom(name, tuple(args))


def _parse_literal(parser: _Parser) -> BodyLiteral:
    positive = True
    if parser.peek().kind == "not":
        parser.advance()
        positive = False
    return BodyLiteral(_parse_subject(parser), positive)


def _parse_body(parser: _Parser) -> Body:
    token = parser.peek()
    if token.kind == "ident" and token.text in ("true", "false"):
        parser.advance()
        return TruthValue.TRUE if token.text == "true" else TruthValue.FALSE
    literals = [_parse_literal(parser)]
    while parser.peek().kind == "comma":
        parser.advance()
        literals.append(_parse_literal(parser))
    return tuple(literals)


def parse_program(text: str) -> tuple[Program, tuple[IntegrityConstraint, ...]]:
    """Parse program text into clauses and integrity constraints."""
    parser = _Parser(text)
    clauses: list[Clause] = []
    constraints: list[IntegrityConstraint] = []
    primed: set[str] = set()
    while parser.peek().kind != "end":
        statement_start = parser.peek()
        if statement_start.kind == "arrow":
            parser.advance()
            body = _parse_body(parser)
            if isinstance(body, TruthValue):
                parser.fail("a constraint needs body literals", statement_start)
            parser.expect("dot", "'.'")
            constraints.append(IntegrityConstraint(body))
            continue
        negated_head = parser.peek().kind == "not"
        if negated_head:
            parser.advance()
        head_token = parser.peek()
        head = _parse_subject(parser, negated_head=negated_head)
        tail = parser.peek()
        if tail.kind == "dot":
            parser.advance()
            body: Body = TruthValue.TRUE
        elif tail.kind == "arrow":
            parser.advance()
            body = _parse_body(parser)
            parser.expect("dot", "'.'")
        else:
            found = "end of input" if tail.kind == "end" else repr(tail.text)
            parser.fail(f"expected '.' or ':-', found {found}", tail)
        if negated_head:
            try:
                encoding = encode_negative_head(
                    head.predicate, len(head.args), frozenset(primed)
                )
            except ValueError as exc:
                parser.fail(str(exc), head_token)
            primed.add(encoding.primed)
            clauses.append(Clause(Atom(encoding.primed, head.args), body))
            clauses.append(encoding.bridge)
            constraints.append(encoding.constraint)
            continue
        try:
            clauses.append(Clause(head, body))
        except ValueError as exc:
            parser.fail(str(exc), head_token)
    return Program(tuple(clauses)), tuple(
        sorted(set(constraints), key=IntegrityConstraint.key)
    )


def _parse_literal_list(text: str, what: str) -> list[BodyLiteral]:
    parser = _Parser(text)
    if parser.peek().kind == "end":
        parser.fail(f"{what} needs at least one literal")
    literals: list[BodyLiteral] = []
    while True:
        start = parser.peek()
        literal = _parse_literal(parser)
        if isinstance(literal.target, Inspect):
            parser.fail(f"inspection points cannot appear in {what}", start)
        if not literal.is_ground():
            parser.fail(f"{what} must be ground", start)
        literals.append(literal)
        token = parser.peek()
        if token.kind == "comma":
            parser.advance()
            continue
        if token.kind == "dot":
            parser.advance()
        if parser.peek().kind != "end":
            parser.fail("expected ',' or end of input")
        return literals


def parse_observation(text: str) -> Observation:
    return Observation(frozenset(_parse_literal_list(text, "an observation")))


def parse_query(text: str) -> tuple[BodyLiteral, ...]:
    literals = _parse_literal_list(text, "a query")
    return tuple(sorted(set(literals), key=BodyLiteral.key))


def parse_context(text: str) -> Explanation:
    """Parse `subject = true.` lines into an explanation usable as context."""
    parser = _Parser(text)
    chosen: dict[Subject, TruthValue] = {}
    facts: list[AbducibleFact] = []
    while parser.peek().kind != "end":
        start = parser.peek()
        subject = _parse_subject(parser)
        if not subject.is_ground():
            parser.fail("context facts must be ground", start)
        parser.expect("equals", "'='")
        value_token = parser.peek()
        if value_token.kind != "ident" or value_token.text not in ("true", "false"):
            parser.fail("expected 'true' or 'false'", value_token)
        parser.advance()
        parser.expect("dot", "'.'")
        value = TruthValue.TRUE if value_token.text == "true" else TruthValue.FALSE
        if chosen.setdefault(subject, value) != value:
            parser.fail(f"contradictory value for {subject.render()}", start)
        facts.append(AbducibleFact(subject, value))
    return Explanation(frozenset(facts))


# --- printing and serialization ----------------------------------------------


def render_clause(clause: Clause) -> str:
    head = clause.head.render()
    if clause.body is TruthValue.TRUE:
        return f"{head}."
    if clause.body is TruthValue.FALSE:
        return f"{head} :- false."
    return f"{head} :- {', '.join(lit.render() for lit in clause.body)}."


def render_constraint(constraint: IntegrityConstraint) -> str:
    return f":- {', '.join(lit.render() for lit in constraint.body)}."


def print_program(
    program: Program, constraints: Iterable[IntegrityConstraint] = ()
) -> str:
    """Canonical text for a program; parse_program round-trips it."""
    lines = [render_clause(clause) for clause in program.clauses]
    lines.extend(
        render_constraint(ic)
        for ic in sorted(set(constraints), key=IntegrityConstraint.key)
    )
    return "\n".join(lines) + ("\n" if lines else "")


def _model_sets(
    model: Interpretation, subjects: Iterable[Subject]
) -> tuple[list[str], list[str], list[str]]:
    ordered = sorted(set(subjects), key=subject_key)
    true = [s.render() for s in ordered if s in model.true_set]
    false = [s.render() for s in ordered if s in model.false_set]
    unknown = [
        s.render()
        for s in ordered
        if s not in model.true_set and s not in model.false_set
    ]
    return true, false, unknown


def serialize_model(
    model: Interpretation, subjects: Iterable[Subject], fmt: str = "text"
) -> str:
    true, false, unknown = _model_sets(model, subjects)
    if fmt == "structured":
        return json.dumps(
            {"true": true, "false": false, "unknown": unknown}, indent=2
        )
    sets = (", ".join(names) for names in (true, false, unknown))
    return "<{%s}, {%s}, {%s}>" % tuple(sets)


def serialize_explanations(
    explanations: Iterable[Explanation], fmt: str = "text"
) -> str:
    listed = list(explanations)
    if fmt == "structured":
        return json.dumps(
            {
                "explanations": [
                    {"facts": [f.render() for f in e.sorted_facts()]} for e in listed
                ]
            },
            indent=2,
        )
    return "\n".join(e.render() for e in listed)


def serialize_report(report: ClassificationReport, fmt: str = "text") -> str:
    if fmt == "structured":
        return json.dumps(
            {
                "relation": report.relation,
                "labels": [label.value for label in report.sorted_labels()],
                "witnesses": [
                    {
                        "label": w.label.value,
                        "primary": [f.render() for f in w.primary.sorted_facts()],
                        "secondary": [f.render() for f in w.secondary.sorted_facts()],
                    }
                    for w in report.witnesses
                ],
            },
            indent=2,
        )
    lines = ["labels: " + ", ".join(l.value for l in report.sorted_labels())]
    for witness in report.witnesses:
        lines.append(
            f"  {witness.label.value}: primary={witness.primary.render()} "
            f"secondary={witness.secondary.render()}"
        )
    return "\n".join(lines)


Serializable = Union[Interpretation, ClassificationReport, tuple, list]


def serialize_result(
    value: Serializable,
    fmt: str = "text",
    *,
    subjects: Iterable[Subject] | None = None,
) -> str:
    """Dispatch on the value kind; models need the subject universe."""
    if isinstance(value, Interpretation):
        if subjects is None:
            raise ValueError("serializing a model needs the subject universe")
        return serialize_model(value, subjects, fmt)
    if isinstance(value, ClassificationReport):
        return serialize_report(value, fmt)
    return serialize_explanations(value, fmt)
