"""Safe spacing, throughput and capacity analysis for autonomous-vehicle roads."""

from .capacity import (
    CapacityBoundReport,
    CapacityReport,
    RoadSpec,
    SweepGrid,
    capacity_report,
    check_capacity_bound,
    expected_safe_distance,
    expected_safe_distance_mixture,
    sdc,
    sdc_per_lane,
)
from .errors import (
    ConfigError,
    EvaluationError,
    FormulaError,
    InvalidDeviationError,
    InvalidInputError,
    InvalidParameterError,
    OracleError,
    SdcapError,
)
from .kinematics import (
    BrakingScenario,
    gap_at_time,
    max_speed_after_response,
    min_safe_gap_oracle,
    safe_longitudinal_distance,
    time_to_stop_front,
    time_to_stop_rear,
)
from .ltl import (
    And,
    Atom,
    BoundaryMode,
    Finally,
    Formula,
    Globally,
    Implies,
    Not,
    Or,
    Trace,
    VehicleState,
    evaluate,
    parse_formula,
    read_traces_csv,
    road_safe,
    sdt,
    vehicle_safe,
    write_traces_csv,
)
from .params import KMH_TO_MPS, VehicleParams
from .perception import (
    DeviationSet,
    MetricKind,
    ObservationSet,
    Regime,
    conservative_observation,
    corrected_params,
    inaccuracy,
)
from .protocol import (
    FrontInfoResolution,
    InfoSource,
    LATENCY_PRESETS,
    LatencyModel,
    corrected_safe_distance,
    effective_response_time,
    resolve_front_info,
    sample_latency,
)
from .simulator import (
    BrakeTrigger,
    ScenarioConfig,
    SpawnSpec,
    assign_responsibility,
    run_scenario,
    scenario_from_file,
    scenario_from_text,
    scenario_summary,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "Atom",
    "BoundaryMode",
    "BrakeTrigger",
    "BrakingScenario",
    "CapacityBoundReport",
    "CapacityReport",
    "ConfigError",
    "DeviationSet",
    "EvaluationError",
    "Finally",
    "Formula",
    "FormulaError",
    "FrontInfoResolution",
    "Globally",
    "Implies",
    "InfoSource",
    "InvalidDeviationError",
    "InvalidInputError",
    "InvalidParameterError",
    "KMH_TO_MPS",
    "LATENCY_PRESETS",
    "LatencyModel",
    "MetricKind",
    "Not",
    "ObservationSet",
    "Or",
    "OracleError",
    "Regime",
    "RoadSpec",
    "ScenarioConfig",
    "SdcapError",
    "SpawnSpec",
    "SweepGrid",
    "Trace",
    "VehicleParams",
    "VehicleState",
    "assign_responsibility",
    "capacity_report",
    "check_capacity_bound",
    "conservative_observation",
    "corrected_params",
    "corrected_safe_distance",
    "effective_response_time",
    "evaluate",
    "expected_safe_distance",
    "expected_safe_distance_mixture",
    "gap_at_time",
    "inaccuracy",
    "max_speed_after_response",
    "min_safe_gap_oracle",
    "parse_formula",
    "read_traces_csv",
    "resolve_front_info",
    "road_safe",
    "run_scenario",
    "safe_longitudinal_distance",
    "sample_latency",
    "scenario_from_file",
    "scenario_from_text",
    "scenario_summary",
    "sdc",
    "sdc_per_lane",
    "sdt",
    "time_to_stop_front",
    "time_to_stop_rear",
    "vehicle_safe",
    "write_traces_csv",
]
