"""Exact simulator for the overlapping-interferometer pair experiment with
parallel-lives world bookkeeping.

All state algebra is carried out in the number field Q(sqrt(2), i), so the
outcome tables, collapse histories, world weights, and the final paradox
verdict are bit-exact statements rather than floating-point approximations.
"""

from .amplitude import Amplitude, NoExactRootError, RootTwo, rational_sqrt
from .lives import (
    LiveSet,
    MergeConflictError,
    ParadoxReport,
    RelativeWorld,
    WorldGraph,
    merge_lives,
    perspective_compare,
    split_worlds,
    world_graph,
)
from .optics import (
    DeviceOp,
    UnexpectedModeError,
    annihilate,
    apply_bs1,
    apply_bs2,
    apply_mirror,
    detect,
    make_device,
    relabel_ports_to_paths,
)
from .scenario import (
    Event,
    FactVocabulary,
    Frame,
    FrameOrderError,
    History,
    PathFact,
    PostSelectError,
    Scenario,
    ZeroProbabilityError,
    SCENARIOS,
    extract_elements,
    find_support,
    linear_extensions,
    load_scenario,
    order_invariance_check,
    run_collapse,
    run_unitary,
    sample_outcome,
    scenario_from_json,
    scenario_to_json,
    stage_state,
    validate_frame,
)
from .state import (
    GAMMA,
    ImpossibleConditionError,
    Label,
    SlotMismatchError,
    Superposition,
)

__version__ = "0.1.0"

__all__ = [
    "Amplitude",
    "DeviceOp",
    "Event",
    "FactVocabulary",
    "Frame",
    "FrameOrderError",
    "GAMMA",
    "History",
    "ImpossibleConditionError",
    "Label",
    "LiveSet",
    "MergeConflictError",
    "NoExactRootError",
    "ParadoxReport",
    "PathFact",
    "PostSelectError",
    "RelativeWorld",
    "RootTwo",
    "SCENARIOS",
    "Scenario",
    "SlotMismatchError",
    "Superposition",
    "UnexpectedModeError",
    "WorldGraph",
    "ZeroProbabilityError",
    "annihilate",
    "apply_bs1",
    "apply_bs2",
    "apply_mirror",
    "detect",
    "extract_elements",
    "find_support",
    "linear_extensions",
    "load_scenario",
    "make_device",
    "merge_lives",
    "order_invariance_check",
    "perspective_compare",
    "rational_sqrt",
    "relabel_ports_to_paths",
    "run_collapse",
    "run_unitary",
    "sample_outcome",
    "scenario_from_json",
    "scenario_to_json",
    "split_worlds",
    "stage_state",
    "validate_frame",
    "world_graph",
]
