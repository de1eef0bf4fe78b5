"""End-to-end query answering: check, seed, rewrite, order, ground, solve."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .analysis import (
    ComponentOrdering,
    FrSafety,
    check_fr_safety,
    component_ordering,
    is_stratified,
)
from .errors import NotFrSafe, NotStratified
from .grounder import GroundingLimits, GroundProgram, intelligent_instantiation
from .magic import RewrittenProgram, dms_rewrite, seed_query
from .solver import AnswerReport, EntailmentMode, Interpretation, entails_models, stable_models
from .syntax import Program, Query


class Stage(str, enum.Enum):
    PARSE = "parse"
    ANALYZE = "analyze"
    REWRITE = "rewrite"
    ORDER = "order"
    GROUND = "ground"
    SOLVE = "solve"
    ANSWER = "answer"

    @property
    def rank(self) -> int:
        return list(Stage).index(self)


class OutputFormat(str, enum.Enum):
    TEXT = "text"
    RECORD = "record"


@dataclass(frozen=True)
class PipelineConfig:
    mode: EntailmentMode = EntailmentMode.CAUTIOUS
    limits: GroundingLimits = field(default_factory=GroundingLimits)
    output_format: OutputFormat = OutputFormat.TEXT
    stop_after: Stage = Stage.ANSWER


@dataclass
class PipelineResult:
    program: Program
    query: Query
    stage: Stage = Stage.PARSE
    safety: Optional[FrSafety] = None
    seeded: Optional[Program] = None
    rewritten: Optional[RewrittenProgram] = None
    ordering: Optional[ComponentOrdering] = None
    ground: Optional[GroundProgram] = None
    models: Optional[List[Interpretation]] = None
    report: Optional[AnswerReport] = None


def ground_program(p: Program, limits: GroundingLimits = GroundingLimits()) -> Tuple[ComponentOrdering, GroundProgram]:
    ordering = component_ordering(p)
    return ordering, intelligent_instantiation(p, ordering, limits)


def run_pipeline(p: Program, q: Query, config: PipelineConfig = PipelineConfig()) -> PipelineResult:
    """Run the stages in order, stopping after ``config.stop_after``."""
    res = PipelineResult(p, q)
    stop = Stage(config.stop_after).rank

    def reached(stage: Stage) -> bool:
        res.stage = stage
        return stage.rank >= stop

    if reached(Stage.PARSE):
        return res

    strat = is_stratified(p)
    if not strat:
        raise NotStratified(strat.cycle)
    res.safety = check_fr_safety(p, q)
    if not res.safety:
        raise NotFrSafe(res.safety.violations)
    if reached(Stage.ANALYZE):
        return res

    res.seeded, _ = seed_query(p, q)
    res.rewritten = dms_rewrite(res.seeded, q)
    if reached(Stage.REWRITE):
        return res

    res.ordering = component_ordering(res.rewritten.program)
    if reached(Stage.ORDER):
        return res

    res.ground = intelligent_instantiation(res.rewritten.program, res.ordering, config.limits)
    if reached(Stage.GROUND):
        return res

    res.models = stable_models(res.ground)
    if reached(Stage.SOLVE):
        return res

    res.report = entails_models(res.models, q, config.mode)
    res.stage = Stage.ANSWER
    return res


def answer(p: Program, q: Query, mode: EntailmentMode = EntailmentMode.CAUTIOUS,
           limits: GroundingLimits = GroundingLimits()) -> AnswerReport:
    return run_pipeline(p, q, PipelineConfig(mode=mode, limits=limits)).report
