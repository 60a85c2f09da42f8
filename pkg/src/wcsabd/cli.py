"""Command-line interface.

Subcommands: model, explain, entail, classify, fixtures. Exit codes are a
stable contract: 0 success, 1 usage or input error, 2 integrity-constraint
violation by a computed model, 3 no explanation or a NONE classification.
Set WCS_COLOR=0 to disable styling; output to a non-tty is always plain.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .abduction import Explanation, build_framework, entails, explain
from .classify import (
    classify_contested,
    classify_jointly_supported,
    classify_relevant_consequence,
    classify_side_effect,
)
from .core import ground_constraints, ground_program
from .errors import NoExplanationError, ParseError, WcsError
from .fixtures import run_fixtures
from .frontend import (
    parse_context,
    parse_observation,
    parse_program,
    parse_query,
    serialize_explanations,
    serialize_model,
    serialize_report,
)
from .semantics import least_model, satisfies_ics

_GREEN = "\033[32m"
_RED = "\033[31m"
_RESET = "\033[0m"


def _styled(text: str, color: str) -> str:
    if os.environ.get("WCS_COLOR") == "0" or not sys.stdout.isatty():
        return text
    return f"{color}{text}{_RESET}"


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_program(path: str):
    return parse_program(_read(path))


def _split_constants(text: str) -> tuple[str, ...]:
    return tuple(name.strip() for name in text.split(",") if name.strip())


def _cmd_model(args: argparse.Namespace) -> int:
    program, constraints = _load_program(args.program)
    constants = _split_constants(args.constants)
    ground = ground_program(program, constants)
    ground_ics = ground_constraints(constraints, ground.constant_pool() | set(constants))
    model = least_model(ground)
    print(serialize_model(model, ground.subjects(), args.format))
    if not satisfies_ics(model, ground_ics):
        print("integrity constraint violated", file=sys.stderr)
        return 2
    return 0


def _cmd_explain(args: argparse.Namespace) -> int:
    program, constraints = _load_program(args.program)
    observation = parse_observation(args.observe)
    context = parse_context(_read(args.context)) if args.context else Explanation()
    constants = set(observation.constants())
    for fact in context.facts:
        constants |= fact.subject.constants()
    framework = build_framework(program, constraints, extra_constants=constants)
    explanations = explain(
        framework,
        observation,
        context,
        criterion=args.criterion,
        strict_entailment_gate=args.strict_def1,
    )
    if not explanations:
        print("no explanation exists", file=sys.stderr)
        return 3
    if args.format == "structured":
        print(serialize_explanations(explanations, "structured"))
        return 0
    subjects = framework.program.subjects()
    for explanation in explanations:
        note = " (already entailed)" if not explanation.facts else ""
        print(f"{explanation.render()}{note}")
        model = framework.model_of(explanation)
        print(f"  model: {serialize_model(model, subjects)}")
    return 0


def _cmd_entail(args: argparse.Namespace) -> int:
    program, constraints = _load_program(args.program)
    observation = parse_observation(args.observe)
    query = parse_query(args.query)
    constants = set(observation.constants())
    for literal in query:
        constants |= literal.target.constants()
    framework = build_framework(program, constraints, extra_constants=constants)
    value = entails(framework, observation, query, args.mode)
    color = {"true": _GREEN, "false": _RED}.get(value.value, "")
    text = value.value.upper()
    print(_styled(text, color) if color else text)
    return 0


_RELATIONS = {
    "side-effect": classify_side_effect,
    "contested": classify_contested,
    "relevant": classify_relevant_consequence,
    "joint": classify_jointly_supported,
}


def _cmd_classify(args: argparse.Namespace) -> int:
    program, constraints = _load_program(args.program)
    first = parse_observation(args.o1)
    second = parse_observation(args.o2)
    constants = set(first.constants()) | set(second.constants())
    framework = build_framework(program, constraints, extra_constants=constants)
    classifier = _RELATIONS[args.relation]
    if args.relation == "side-effect":
        report = classifier(framework, first, second, strict_literal=args.strict_literal)
    else:
        report = classifier(framework, first, second)
    print(serialize_report(report, args.format))
    return 3 if report.is_none() else 0


def _cmd_fixtures(args: argparse.Namespace) -> int:
    results = run_fixtures()
    failed = [r for r in results if not r.passed]
    if args.format == "structured":
        import json

        print(
            json.dumps(
                {
                    "results": [
                        {
                            "name": r.name,
                            "status": "pass" if r.passed else "fail",
                            "detail": r.detail,
                        }
                        for r in results
                    ],
                    "passed": len(results) - len(failed),
                    "failed": len(failed),
                },
                indent=2,
            )
        )
        return 1 if failed else 0
    for result in results:
        status = (
            _styled("PASS", _GREEN) if result.passed else _styled("FAIL", _RED)
        )
        line = f"{status} {result.name}"
        if result.detail:
            line += f"  {result.detail}"
        print(line)
    print(f"{len(results) - len(failed)} passed, {len(failed)} failed")
    return 1 if failed else 0


class _ArgumentParser(argparse.ArgumentParser):
    # exit code 1 on usage errors; 2 is reserved for IC violations
    def error(self, message: str):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="wcsabd",
        description=(
            "Three-valued logic programs under weak completion: models, "
            "abductive explanations, entailment, and contextual classification."
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def add_format(sub):
        sub.add_argument(
            "--format", choices=("text", "structured"), default="text",
            help="output format (default: text)",
        )

    model = commands.add_parser("model", help="compute the least model")
    model.add_argument("program", help="program file (.lp)")
    model.add_argument(
        "--constants", default="",
        help="extra grounding constants, comma-separated",
    )
    add_format(model)
    model.set_defaults(handler=_cmd_model)

    explain_cmd = commands.add_parser("explain", help="explain an observation")
    explain_cmd.add_argument("program")
    explain_cmd.add_argument("--observe", required=True, help="observation literals")
    explain_cmd.add_argument("--context", help="context file (.ctx)")
    explain_cmd.add_argument(
        "--criterion", choices=("subset", "cardinality"), default="subset"
    )
    explain_cmd.add_argument(
        "--strict-def1", action="store_true", dest="strict_def1",
        help="report nothing when the observation is already entailed",
    )
    add_format(explain_cmd)
    explain_cmd.set_defaults(handler=_cmd_explain)

    entail_cmd = commands.add_parser("entail", help="test abductive entailment")
    entail_cmd.add_argument("program")
    entail_cmd.add_argument("--observe", required=True)
    entail_cmd.add_argument("--query", required=True)
    entail_cmd.add_argument(
        "--mode", choices=("skeptical", "credulous"), default="skeptical"
    )
    entail_cmd.set_defaults(handler=_cmd_entail)

    classify_cmd = commands.add_parser(
        "classify", help="classify an observation pair"
    )
    classify_cmd.add_argument("program")
    classify_cmd.add_argument(
        "--relation", choices=tuple(_RELATIONS), required=True
    )
    classify_cmd.add_argument("--o1", required=True, help="primary observation")
    classify_cmd.add_argument("--o2", required=True, help="secondary observation")
    classify_cmd.add_argument(
        "--strict-literal", action="store_true", dest="strict_literal",
        help="literal reading of the strict-possible side-effect clause",
    )
    add_format(classify_cmd)
    classify_cmd.set_defaults(handler=_cmd_classify)

    fixtures_cmd = commands.add_parser(
        "fixtures", help="reproduce the worked examples"
    )
    add_format(fixtures_cmd)
    fixtures_cmd.set_defaults(handler=_cmd_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NoExplanationError as exc:
        print(f"{exc}", file=sys.stderr)
        return 3
    except (WcsError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
