"""TD(lambda)-n-tuple learning: networks, training, and targets."""
from .network import (
    NTupleNetwork,
    generate_random_walk_ntuples,
    net_value,
    ntuple_index,
    tc_multiplier,
)
from .training import (
    CurvePoint,
    EligibilityTrace,
    NTupleAgent,
    TrainConfig,
    TrainingCurve,
    TrainingDiverged,
    afterstate_target,
    default_tuples,
    td_update,
    trace_horizon,
    train_selfplay,
    two_player_target,
)

__all__ = [
    "CurvePoint",
    "EligibilityTrace",
    "NTupleAgent",
    "NTupleNetwork",
    "TrainConfig",
    "TrainingCurve",
    "TrainingDiverged",
    "afterstate_target",
    "default_tuples",
    "generate_random_walk_ntuples",
    "net_value",
    "ntuple_index",
    "tc_multiplier",
    "td_update",
    "trace_horizon",
    "train_selfplay",
    "two_player_target",
]
