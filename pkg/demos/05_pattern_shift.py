"""Reaction to a communication-pattern shift.

Phase one embeds sub-cube tenants perfectly (cost exactly 1); phase two
switches to cliques that span three of the old clusters. The windowed cost
spikes at the boundary and heals within a few requests per edge.
Run: python demos/05_pattern_shift.py
"""

from dswap import ExperimentConfig, PhaseSpec, run_phases

config = ExperimentConfig(
    host=(3, 3),
    policy="bestneighbor-direct",
    repetitions=3,
    seed=2,
    sample_every=2000,
    initial="perfect",
    phases=(
        PhaseSpec("subcube", 9, 10_000),
        PhaseSpec("clique", 27, 40_000),
    ),
)
result = run_phases(config)
boundary = result.phase_boundaries[0]
print(f"phase boundary after request {boundary}\n")
print(f"{'t':>7s} {'windowed cost':>14s}")
for t, win in zip(result.t, result.cost_win_mean):
    marker = " <- shift" if t == boundary + 2000 else ""
    print(f"{int(t):7d} {win:14.4f}{marker}")
