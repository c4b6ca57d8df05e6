"""One Destination-Swap request, in slow motion.

The endpoint with the higher local amortized cost migrates next to the
other; the destination strategy scores the candidate hosts; the swapping
method decides how the mover travels.
Run: python demos/03_destination_swap_step_by_step.py
"""

import random

import numpy as np

from dswap import (
    Arrangement,
    BCube,
    PolicyConfig,
    StatsStore,
    apply_request,
    assemble_overall,
    best_neighbor_scores,
    choose_roles,
    make_clique,
)

cube = BCube(3, 2)
overall = assemble_overall(make_clique(9), cube.num_hosts)
arr = Arrangement.random_initial(overall, cube.num_hosts, np.random.default_rng(12))
stats = StatsStore(overall.num_vms)
rng = random.Random(5)

# Warm up with some history so the local costs differ.
warmup = overall.sample_edge_indices(np.random.default_rng(1), 200)
policy = PolicyConfig.from_string("bestneighbor-direct")
for i in warmup.tolist():
    apply_request(overall.edge_u[i], overall.edge_v[i], arr, cube, stats,
                  policy, rng)

u, v = 3, 7
d = arr.vm_distance(cube, u, v)
while d < 2:  # find a separated pair to showcase
    u = (u + 1) % 9
    d = arr.vm_distance(cube, u, v)
print(f"request ({u}, {v}), current distance {d}")
stats.record_request(u, v, d)

fixed, mover = choose_roles(u, v, stats)
print(f"Lcost({u}) = {stats.lcost(u):.3f}, Lcost({v}) = {stats.lcost(v):.3f}"
      f" -> VM {mover} migrates, VM {fixed} stays")

anchor = arr.host_of(fixed)
print(f"\nscoring the neighbors of host {anchor} (address {cube.address(anchor)}):")
for mu, delta in best_neighbor_scores(fixed, mover, arr, cube, stats):
    occupant = arr.occupant(mu)
    print(f"  host {mu:2d} occupant {occupant:2d}: score increase {delta}")

best = max(best_neighbor_scores(fixed, mover, arr, cube, stats),
           key=lambda pair: pair[1])
print(f"\nchosen destination: host {best[0]}")
arr.swap(arr.host_of(mover), best[0])
print(f"after the swap, distance({u}, {v}) = {arr.vm_distance(cube, u, v)}")
