"""Magic-set query answering for disjunctive programs with function symbols."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ArityClash,
    CapReached,
    FrMagicError,
    LimitExceeded,
    NoOrdering,
    NotFrSafe,
    NotStratified,
    ParseError,
    PreconditionViolation,
    ReservedPrefix,
    SpecInvalid,
    TooLarge,
    UnsafeRule,
)
from .parser import parse_program, parse_query  # noqa: E402
from .magic import dms_rewrite  # noqa: E402
from .grounder import GroundingLimits, intelligent_instantiation  # noqa: E402
from .solver import EntailmentMode, entails, stable_models  # noqa: E402
from .pipeline import PipelineConfig, answer, run_pipeline  # noqa: E402

__all__ = [
    "ArityClash", "CapReached", "FrMagicError", "LimitExceeded", "NoOrdering",
    "NotFrSafe", "NotStratified", "ParseError", "PreconditionViolation",
    "ReservedPrefix", "SpecInvalid", "TooLarge", "UnsafeRule",
    "parse_program", "parse_query", "dms_rewrite", "GroundingLimits",
    "intelligent_instantiation", "EntailmentMode", "entails", "stable_models",
    "PipelineConfig", "answer", "run_pipeline",
]
