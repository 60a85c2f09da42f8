"""Three-valued logic programs under weak completion semantics.

Models are least fixed points of the one-step consequence operator;
undefined atoms stay unknown. On top of that: abductive explanation of
observations, skeptical and credulous entailment, inspection points with
producer/consumer discipline, and classification of observation pairs as
contextual side-effects, contested side-effects, relevant consequences, or
jointly supported consequences.
"""

from .abduction import (
    AbducibleFact,
    AbductiveFramework,
    Explanation,
    Observation,
    build_framework,
    check_explanation,
    entails,
    explain,
    oracle_explain,
    validate_inspection,
)
from .classify import (
    ClassificationReport,
    Label,
    Witness,
    classify_contested,
    classify_jointly_supported,
    classify_relevant_consequence,
    classify_side_effect,
)
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
    evaluate,
    ground_constraints,
    ground_program,
    undefined_subjects,
)
from .errors import (
    FixpointError,
    FrameworkError,
    GroundingError,
    NoExplanationError,
    OracleBoundError,
    ParseError,
    WcsError,
)
from .frontend import (
    parse_context,
    parse_observation,
    parse_program,
    parse_query,
    print_program,
    serialize_explanations,
    serialize_model,
    serialize_report,
    serialize_result,
)
from .semantics import (
    least_model,
    phi_step,
    satisfies_ics,
    weak_complete,
)

__version__ = "0.1.0"

__all__ = [
    "AbducibleFact",
    "AbductiveFramework",
    "Atom",
    "Body",
    "BodyLiteral",
    "ClassificationReport",
    "Clause",
    "Explanation",
    "FixpointError",
    "FrameworkError",
    "GroundingError",
    "Inspect",
    "IntegrityConstraint",
    "Interpretation",
    "Label",
    "NoExplanationError",
    "Observation",
    "OracleBoundError",
    "ParseError",
    "Program",
    "Subject",
    "TruthValue",
    "WcsError",
    "Witness",
    "build_framework",
    "check_explanation",
    "classify_contested",
    "classify_jointly_supported",
    "classify_relevant_consequence",
    "classify_side_effect",
    "encode_negative_head",
    "entails",
    "evaluate",
    "explain",
    "ground_constraints",
    "ground_program",
    "least_model",
    "oracle_explain",
    "parse_context",
    "parse_observation",
    "parse_program",
    "parse_query",
    "phi_step",
    "print_program",
    "satisfies_ics",
    "serialize_explanations",
    "serialize_model",
    "serialize_report",
    "serialize_result",
    "undefined_subjects",
    "validate_inspection",
    "weak_complete",
]
