"""Tenant guest graphs (clique, star, sub-cube, matching), weights, request sampling.

A tenant graph is one connected communication pattern over locally-indexed
VMs; the overall guest graph is the disjoint union of all tenants. Requests
are edges drawn i.i.d. with probability proportional to edge weight, via a
cumulative-weight table and binary search.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

import numpy as np

from .topology import BCube


@dataclass(frozen=True)
class VmId:
    """Globally unique VM identifier: (tenant index, local index)."""

    tenant: int
    local: int


@dataclass(frozen=True)
class WeightModel:
    """Edge-weight scheme: all-ones, or per-vertex uniform draws multiplied."""

    kind: str = "unweighted"  # "unweighted" | "product_uniform"
    range_max: int = 100

    def __post_init__(self):
        if self.kind not in ("unweighted", "product_uniform"):
            raise ValueError(f"unknown weight model kind {self.kind!r}")
        if self.range_max < 1:
            raise ValueError(f"range_max must be >= 1, got {self.range_max}")


class TenantGraph:
    """One tenant component: `size` VMs plus weighted interaction edges.

    Edges are (u, v) local index pairs with u < v. `weights` is None for the
    unweighted case; under the product model `vertex_freq` keeps the
    per-vertex draws so every edge weight is re-derivable as the product of
    its endpoints' frequencies.
    """

    def __init__(
        self,
        kind: str,
        size: int,
        edges: list[tuple[int, int]],
        weights: list[float] | None = None,
        vertex_freq: list[int] | None = None,
        subcube: tuple[int, int] | None = None,
    ):
        for u, v in edges:
            if not (0 <= u < v < size):
                raise ValueError(f"bad edge ({u}, {v}) for tenant of size {size}")
        if weights is not None and len(weights) != len(edges):
            raise ValueError("one weight per edge required")
        self.kind = kind
        self.size = size
        self.edges = edges
        self.weights = weights
        self.vertex_freq = vertex_freq
        self.subcube = subcube

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_weight(self, i: int) -> float:
        return 1.0 if self.weights is None else self.weights[i]

    def degrees(self) -> list[int]:
        deg = [0] * self.size
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def make_clique(x: int) -> TenantGraph:
    """Complete graph K_x: all-to-all communication."""
    if x < 2:
        raise ValueError(f"clique needs at least 2 VMs, got {x}")
    edges = [(u, v) for u in range(x) for v in range(u + 1, x)]
    return TenantGraph("clique", x, edges)


def make_star(x: int) -> TenantGraph:
    """Star S_x: vertex 0 is the center, one-to-all communication."""
    if x < 2:
        raise ValueError(f"star needs at least 2 VMs, got {x}")
    return TenantGraph("star", x, [(0, leaf) for leaf in range(1, x)])


def make_subcube(n: int, kp: int) -> TenantGraph:
    """BCube(n, kp) as a guest graph: vertices are addresses, edges at distance 1."""
    cube = BCube(n, kp)
    edges = []
    for a in range(cube.num_hosts):
        edges.extend((a, b) for b in cube.neighbors(a) if b > a)
    edges.sort()
    return TenantGraph("subcube", cube.num_hosts, edges, subcube=(n, kp))


def make_matching(pairs: int) -> list[TenantGraph]:
    """`pairs` independent tenants of two VMs joined by a single edge."""
    if pairs < 1:
        raise ValueError(f"matching needs at least 1 pair, got {pairs}")
    return [TenantGraph("matching", 2, [(0, 1)]) for _ in range(pairs)]


def assign_weights(
    g: TenantGraph, model: WeightModel, rng: np.random.Generator
) -> TenantGraph:
    """Weighted copy of g under the model.

    product_uniform draws f(v) uniformly from [1, range_max] per vertex and
    sets w(u, v) = f(u) * f(v); unweighted pins every weight to 1.
    """
    if model.kind == "unweighted":
        return TenantGraph(g.kind, g.size, g.edges, None, None, g.subcube)
    freq = rng.integers(1, model.range_max, size=g.size, endpoint=True).tolist()
    weights = [float(freq[u] * freq[v]) for u, v in g.edges]
    return TenantGraph(g.kind, g.size, g.edges, weights, freq, g.subcube)


class OverallGuestGraph:
    """Disjoint union of tenant graphs with a weighted request sampler.

    Global VM index = tenant offset + local index. `host_count` caps the
    total VM population; hosts beyond the population stay empty.
    """

    def __init__(self, tenants: list[TenantGraph], host_count: int):
        if not tenants:
            raise ValueError("overall guest graph needs at least one tenant")
        self.tenants = tenants
        self.host_count = host_count
        self.offsets = []
        total = 0
        for t in tenants:
            self.offsets.append(total)
            total += t.size
        if total > host_count:
            raise ValueError(
                f"{total} VMs exceed {host_count} hosts (one VM per host)"
            )
        self.num_vms = total
        self.tenant_of = array("i")
        for ti, t in enumerate(tenants):
            self.tenant_of.extend([ti] * t.size)

        eu = array("i")
        ev = array("i")
        wts = []
        for ti, t in enumerate(tenants):
            off = self.offsets[ti]
            for i, (u, v) in enumerate(t.edges):
                eu.append(off + u)
                ev.append(off + v)
                wts.append(t.edge_weight(i))
        self.edge_u = eu
        self.edge_v = ev
        self.edge_weight = np.asarray(wts, dtype=np.float64)
        self.num_edges = len(wts)
        self._cum = np.cumsum(self.edge_weight)
        self.total_weight = float(self._cum[-1]) if self.num_edges else 0.0

    def vm_id(self, index: int) -> VmId:
        tenant = self.tenant_of[index]
        return VmId(tenant, index - self.offsets[tenant])

    def vm_index(self, vm: VmId) -> int:
        return self.offsets[vm.tenant] + vm.local

    def tenant_vms(self, tenant: int) -> range:
        off = self.offsets[tenant]
        return range(off, off + self.tenants[tenant].size)

    def edge_endpoints(self, i: int) -> tuple[int, int]:
        return self.edge_u[i], self.edge_v[i]

    def sample_edge_indices(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """`count` i.i.d. edge indices, each edge with probability w/total."""
        if self.num_edges == 0 or self.total_weight <= 0:
            raise ValueError("cannot sample from a graph without weighted edges")
        points = rng.random(count) * self._cum[-1]
        return np.searchsorted(self._cum, points, side="right")

    def sample_request(self, rng: np.random.Generator) -> tuple[int, int]:
        """One request (u, v), in stored edge order."""
        i = int(self.sample_edge_indices(rng, 1)[0])
        return self.edge_u[i], self.edge_v[i]


def assemble_overall(
    component: TenantGraph,
    host_count: int,
    count: int | None = None,
    cover: str = "strict",
    model: WeightModel | None = None,
    rng: np.random.Generator | None = None,
) -> OverallGuestGraph:
    """Replicate one component into an overall guest graph.

    Without an explicit `count`, strict cover requires the component size to
    divide host_count exactly; lenient cover floors the count and leaves the
    remaining hosts empty. Each replica gets independent weight draws when a
    product model is supplied.
    """
    if cover not in ("strict", "lenient"):
        raise ValueError(f"unknown cover mode {cover!r}")
    if count is None:
        if host_count % component.size != 0 and cover == "strict":
            raise ValueError(
                f"component size {component.size} does not divide "
                f"{host_count} hosts; use lenient cover or give a count"
            )
        count = host_count // component.size
    if count < 1:
        raise ValueError(f"component count must be >= 1, got {count}")
    if count * component.size > host_count:
        raise ValueError(
            f"{count} components of size {component.size} exceed {host_count} hosts"
        )
    if model is not None and model.kind != "unweighted":
        if rng is None:
            raise ValueError("weighted assembly needs an rng")
        tenants = [assign_weights(component, model, rng) for _ in range(count)]
    else:
        tenants = [component] * count
    return OverallGuestGraph(list(tenants), host_count)
