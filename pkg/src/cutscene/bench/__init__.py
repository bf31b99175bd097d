from .aggregate import ALL, DELTA, RunReport, Summary, aggregate_reports
from .l1 import L1Report, dependency_checks, dependency_compliance, eval_l1, replay
from .l2 import DEFAULT_DELTA, L2Report, camera_coverage, eval_l2, temporal_checks
from .l3 import DIMENSION_KEYS, L3Report, MissingDimensionError, ScoreRangeError, build_l3_prompt, parse_l3_response
from .scenario import (
    INSTANCE,
    PRECEDENCE,
    TIERS,
    Edge,
    EssentialOp,
    MalformedBundleError,
    MalformedTrajectoryError,
    ScenarioBundle,
    UnknownScenarioError,
    find_scenario,
    list_scenarios,
    load_bundle,
    parse_trajectory,
    scenarios_root,
    tier_of,
)

__all__ = [
    "ALL",
    "DEFAULT_DELTA",
    "DELTA",
    "DIMENSION_KEYS",
    "Edge",
    "EssentialOp",
    "INSTANCE",
    "L1Report",
    "L2Report",
    "L3Report",
    "MalformedBundleError",
    "MalformedTrajectoryError",
    "MissingDimensionError",
    "PRECEDENCE",
    "RunReport",
    "ScenarioBundle",
    "ScoreRangeError",
    "Summary",
    "TIERS",
    "UnknownScenarioError",
    "aggregate_reports",
    "build_l3_prompt",
    "camera_coverage",
    "dependency_checks",
    "dependency_compliance",
    "eval_l1",
    "eval_l2",
    "find_scenario",
    "list_scenarios",
    "load_bundle",
    "parse_l3_response",
    "parse_trajectory",
    "replay",
    "scenarios_root",
    "temporal_checks",
    "tier_of",
]
