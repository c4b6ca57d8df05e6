"""Guest graphs and weighted request sampling.

Tenants are cliques, stars, sub-cubes or matched pairs; requests are edges
drawn with probability proportional to weight. Under the product model each
vertex draws a frequency and an edge weighs the product of its endpoints.
Run: python demos/02_guest_graphs_and_sampling.py
"""

from collections import Counter

import numpy as np

from dswap import (
    OverallGuestGraph,
    WeightModel,
    assemble_overall,
    assign_weights,
    make_clique,
    make_matching,
    make_star,
    make_subcube,
)

for name, tenant in (
    ("clique K_27", make_clique(27)),
    ("star S_27", make_star(27)),
    ("sub-cube BCube(3,1)", make_subcube(3, 1)),
):
    print(f"{name}: {tenant.size} VMs, {tenant.num_edges} edges")

overall = assemble_overall(make_clique(27), host_count=81)
print(f"\nthree K_27 tenants tile 81 hosts: {overall.num_vms} VMs, "
      f"{overall.num_edges} edges")

pairs = OverallGuestGraph(make_matching(40), host_count=81)
print(f"40 matched pairs leave {pairs.host_count - pairs.num_vms} host empty")

# Product weights: hot vertices make hot edges.
rng = np.random.default_rng(3)
star = assign_weights(make_star(6), WeightModel("product_uniform", 10), rng)
print("\nweighted star, per-vertex frequencies:", star.vertex_freq)
for (u, v), w in zip(star.edges, star.weights):
    print(f"  edge ({u},{v}) weight {w:.0f}")

weighted = OverallGuestGraph([star], host_count=9)
draws = weighted.sample_edge_indices(rng, 50_000)
counts = Counter(draws.tolist())
print("\nsampling 50k requests, observed vs expected share:")
for e in range(weighted.num_edges):
    expected = weighted.edge_weight[e] / weighted.total_weight
    print(f"  edge {e}: {counts[e] / 50_000:.3f} vs {expected:.3f}")
