"""Destination-Swap VM migration on BCube datacenter topologies.

A library plus CLI for online VM-migration experiments: BCube host graphs,
tenant guest graphs with weighted request sampling, an arrangement of VMs
onto hosts, the Destination-Swap policy family, and a reproducible
experiment engine with CSV output.
"""

__version__ = "0.1.0"

from .algorithms import (
    POLICY_STRINGS,
    MigrationPlan,
    PolicyConfig,
    apply_request,
    best_neighbor_scores,
    best_switch_scores,
    choose_roles,
    dest_best_neighbor,
    dest_best_switch,
    dest_random,
    plan_direct,
    plan_indirect,
    plan_meet_middle,
)
from .engine import (
    ExperimentConfig,
    ExperimentResult,
    PhaseSpec,
    RunSeries,
    SweepResult,
    build_guest,
    run_phases,
    run_repetitions,
    run_single,
    sweep_guest_size,
)
from .guest import (
    OverallGuestGraph,
    TenantGraph,
    VmId,
    WeightModel,
    assemble_overall,
    assign_weights,
    make_clique,
    make_matching,
    make_star,
    make_subcube,
)
from .placement import (
    EMPTY,
    Arrangement,
    SwapRecord,
    clique_local_min_cost,
    packed_clique_average_distance,
)
from .stats import StatsStore
from .topology import BCube, SwitchGroup, hamming_distance

__all__ = [
    "__version__",
    "BCube",
    "SwitchGroup",
    "hamming_distance",
    "VmId",
    "WeightModel",
    "TenantGraph",
    "OverallGuestGraph",
    "make_clique",
    "make_star",
    "make_subcube",
    "make_matching",
    "assign_weights",
    "assemble_overall",
    "EMPTY",
    "Arrangement",
    "SwapRecord",
    "clique_local_min_cost",
    "packed_clique_average_distance",
    "StatsStore",
    "PolicyConfig",
    "MigrationPlan",
    "POLICY_STRINGS",
    "choose_roles",
    "dest_random",
    "dest_best_switch",
    "dest_best_neighbor",
    "best_switch_scores",
    "best_neighbor_scores",
    "plan_direct",
    "plan_indirect",
    "plan_meet_middle",
    "apply_request",
    "ExperimentConfig",
    "PhaseSpec",
    "RunSeries",
    "ExperimentResult",
    "SweepResult",
    "build_guest",
    "run_single",
    "run_repetitions",
    "sweep_guest_size",
    "run_phases",
]
