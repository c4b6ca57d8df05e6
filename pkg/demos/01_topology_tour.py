"""A tour of the BCube host topology.

Addresses are base-n digit vectors; two servers are adjacent exactly when
their addresses differ in one digit, so shortest-path length is Hamming
distance. Run: python demos/01_topology_tour.py
"""

import random
from fractions import Fraction

from dswap import BCube

cube = BCube(3, 3)
print(f"{cube}: {cube.num_hosts} hosts, diameter {cube.diameter}")

host = 57
print(f"\nhost {host} has address {cube.address(host)} (level-0 digit first)")
print(f"neighbors: {cube.neighbors(host)}")
for group in cube.switch_groups(host):
    print(f"  level-{group.level} switch connects {group.members}")

print("\nhosts at each distance from any fixed host:")
for i in range(cube.diameter + 1):
    print(f"  distance {i}: {cube.count_at_distance(i)}")
total = sum(cube.count_at_distance(i) for i in range(cube.diameter + 1))
print(f"  total {total} = 3^4")

# The closed form for the expected distance of two uniform hosts equals the
# exhaustive average.
closed = cube.expected_random_distance()
exhaustive = Fraction(
    sum(cube.hamming(a, b) for a in range(cube.num_hosts) for b in range(cube.num_hosts)),
    cube.num_hosts**2,
)
print(f"\nexpected random-pair distance: closed form {closed}, exhaustive {exhaustive}")

rng = random.Random(7)
a, b = 0, 80
print(f"\nthree random shortest paths from {cube.address(a)} to {cube.address(b)}:")
for _ in range(3):
    path = cube.shortest_path(a, b, rng=rng)
    print("  " + " -> ".join(str(cube.address(h)) for h in path))
