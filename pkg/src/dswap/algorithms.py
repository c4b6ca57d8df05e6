"""The Destination-Swap policy family.

On each request (u, v) at distance >= 2 the framework picks which endpoint
migrates (by comparing local amortized costs), where it goes (a destination
strategy: MeetMiddle, Random, BestSwitch or BestNeighbor; all place the
mover adjacent to the fixed endpoint), and how it travels (direct exchange
or an indirect hop-by-hop walk). Intra-tenant mode restricts every
destination and victim to the tenant's own hosts and skips the migration
when none is eligible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import AbstractSet

from .placement import EMPTY, Arrangement, SwapRecord
from .stats import StatsStore
from .topology import BCube

DESTINATIONS = ("meet_middle", "random", "best_switch", "best_neighbor")
SWAP_METHODS = ("direct", "indirect")
MODES = ("inter", "intra")

# CLI spelling -> (destination, swap_method)
_POLICY_NAMES = {
    "meetmiddle": ("meet_middle", "direct"),
    "random-direct": ("random", "direct"),
    "random-indirect": ("random", "indirect"),
    "bestswitch-direct": ("best_switch", "direct"),
    "bestswitch-indirect": ("best_switch", "indirect"),
    "bestneighbor-direct": ("best_neighbor", "direct"),
    "bestneighbor-indirect": ("best_neighbor", "indirect"),
}

POLICY_STRINGS = tuple(_POLICY_NAMES) + ("none",)


@dataclass(frozen=True)
class PolicyConfig:
    """A destination strategy plus a swapping method plus a tenancy mode."""

    destination: str
    swap_method: str = "direct"
    mode: str = "inter"

    def __post_init__(self):
        if self.destination not in DESTINATIONS:
            raise ValueError(f"unknown destination strategy {self.destination!r}")
        if self.swap_method not in SWAP_METHODS:
            raise ValueError(f"unknown swap method {self.swap_method!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.destination == "meet_middle" and self.mode == "intra":
            raise ValueError(
                "meet_middle walks arbitrary hosts and cannot honor intra-tenant "
                "closure; pick random/best_switch/best_neighbor for intra mode"
            )

    @property
    def effective_swap_method(self) -> str:
        """Intra mode degrades indirect to direct: walk hosts may belong to others."""
        return "direct" if self.mode == "intra" else self.swap_method

    @classmethod
    def from_string(cls, name: str, mode: str = "inter") -> "PolicyConfig | None":
        """Parse a CLI policy name; "none" means no migration at all."""
        if name == "none":
            return None
        try:
            destination, swap_method = _POLICY_NAMES[name]
        except KeyError:
            raise ValueError(
                f"unknown policy {name!r}; expected one of {', '.join(POLICY_STRINGS)}"
            ) from None
        return cls(destination, swap_method, mode)


@dataclass
class MigrationPlan:
    """Ordered host swaps to execute; rho is the migration cost (swap count)."""

    swaps: list[tuple[int, int]] = field(default_factory=list)

    @property
    def rho(self) -> int:
        return len(self.swaps)


def choose_roles(u: int, v: int, stats: StatsStore) -> tuple[int, int]:
    """Return (fixed, migrating): the endpoint with higher Lcost moves.

    On ties the endpoint with the smaller global index stays fixed.
    """
    lu, lv = stats.lcost(u), stats.lcost(v)
    if lu > lv:
        return v, u
    if lv > lu:
        return u, v
    return (u, v) if u < v else (v, u)


def dest_random(
    v_f: int,
    arr: Arrangement,
    topo: BCube,
    rng,
    tenant_hosts: AbstractSet[int] | None = None,
) -> int | None:
    """A uniformly random neighbor of the fixed endpoint's host."""
    candidates = topo.neighbors(arr.host_of(v_f))
    if tenant_hosts is not None:
        candidates = [h for h in candidates if h in tenant_hosts]
        if not candidates:
            return None
    return candidates[rng.randrange(len(candidates))]


def best_switch_scores(
    v_f: int,
    v_m: int,
    arr: Arrangement,
    topo: BCube,
    stats: StatsStore,
    tenant_hosts: AbstractSet[int] | None = None,
) -> list[tuple[int, int, int]]:
    """(level, victim host, score increase) per switch of the fixed host.

    The victim is the group member (never the fixed host or the mover's own
    host) whose occupant has the fewest recorded requests; empty hosts count
    zero and win, remaining ties go to the smaller host id. The increase is
    the group's Sc with the mover on the victim's host and the victim gone,
    minus the group's current Sc.
    """
    m = arr.host_of(v_f)
    vm_host = arr.vm_to_host[v_m]
    htv = arr.host_to_vm
    req_count = stats.req_count
    get = stats.pair_counts.get
    num = stats.num_vms
    scored = []
    for level in range(topo.k + 1):
        group = topo.switch_group(m, level)
        victim = -1
        victim_key = None
        for h in group:
            if h == m or h == vm_host:
                continue
            if tenant_hosts is not None and h not in tenant_hosts:
                continue
            occ = htv[h]
            key = (0, 0, h) if occ == EMPTY else (req_count[occ], 1, h)
            if victim_key is None or key < victim_key:
                victim, victim_key = h, key
        if victim < 0:
            continue
        displaced = htv[victim]
        delta = 0
        for h in group:
            if h == victim:
                continue
            occ = htv[h]
            if occ == EMPTY:
                continue
            k1 = v_m * num + occ if v_m < occ else occ * num + v_m
            delta += get(k1, 0)
            if displaced != EMPTY:
                k2 = displaced * num + occ if displaced < occ else occ * num + displaced
                delta -= get(k2, 0)
        scored.append((level, victim, delta))
    return scored


def dest_best_switch(
    v_f: int,
    v_m: int,
    arr: Arrangement,
    topo: BCube,
    stats: StatsStore,
    tenant_hosts: AbstractSet[int] | None = None,
) -> int | None:
    """Victim host on the switch whose score would increase the most.

    Ties between switches go to the lowest level. Returns None when no group
    offers an eligible victim (intra mode only).
    """
    best_host = None
    best_delta = 0
    for level, victim, delta in best_switch_scores(
        v_f, v_m, arr, topo, stats, tenant_hosts
    ):
        if best_host is None or delta > best_delta:
            best_host, best_delta = victim, delta
    return best_host


def best_neighbor_scores(
    v_f: int,
    v_m: int,
    arr: Arrangement,
    topo: BCube,
    stats: StatsStore,
    tenant_hosts: AbstractSet[int] | None = None,
) -> list[tuple[int, int]]:
    """(candidate host, score increase) for each neighbor of the fixed host.

    The increase for candidate mu is Sc(N(mu) + mu) with the mover placed on
    mu and mu's occupant dropped, minus the current Sc(N(mu) + mu). Computed
    incrementally: pairs not involving the mover, the displaced occupant or
    the mover's vacated host cancel.
    """
    m = arr.host_of(v_f)
    old = arr.vm_to_host[v_m]
    htv = arr.host_to_vm
    get = stats.pair_counts.get
    num = stats.num_vms
    scored = []
    for mu in topo.neighbors(m):
        if mu == old:
            continue
        if tenant_hosts is not None and mu not in tenant_hosts:
            continue
        displaced = htv[mu]
        gain = 0
        loss = 0
        sees_old = False
        for q in topo.neighbors(mu):
            if q == old:
                sees_old = True
                continue
            occ = htv[q]
            if occ == EMPTY:
                continue
            k1 = v_m * num + occ if v_m < occ else occ * num + v_m
            gain += get(k1, 0)
            if displaced != EMPTY:
                k2 = displaced * num + occ if displaced < occ else occ * num + displaced
                loss += get(k2, 0)
        if sees_old:
            # The mover stays inside the scored set (old host is adjacent to
            # mu): its pair terms cancel except the one with the displaced VM.
            delta = -loss
            if displaced != EMPTY:
                k3 = v_m * num + displaced if v_m < displaced else displaced * num + v_m
                delta -= get(k3, 0)
        else:
            delta = gain - loss
        scored.append((mu, delta))
    return scored


def dest_best_neighbor(
    v_f: int,
    v_m: int,
    arr: Arrangement,
    topo: BCube,
    stats: StatsStore,
    tenant_hosts: AbstractSet[int] | None = None,
) -> int | None:
    """Neighbor of the fixed host whose neighborhood score gains the most.

    Ties go to the smallest host id. Returns None when intra mode leaves no
    candidate.
    """
    best_host = None
    best_delta = 0
    for mu, delta in best_neighbor_scores(v_f, v_m, arr, topo, stats, tenant_hosts):
        if best_host is None or delta > best_delta:
            best_host, best_delta = mu, delta
    return best_host


def plan_direct(v_m: int, mu: int, arr: Arrangement) -> MigrationPlan:
    """One exchange between the mover's host and mu."""
    src = arr.host_of(v_m)
    if src == mu:
        return MigrationPlan()
    return MigrationPlan([(src, mu)])


def plan_indirect(
    v_m: int, v_f: int, mu: int, arr: Arrangement, topo: BCube, rng
) -> MigrationPlan:
    """Walk the mover toward the fixed host, then exchange with mu's occupant.

    The mover swaps along a seeded-random shortest path until it stands at
    distance two from the fixed host; every displaced VM moves exactly one
    hop. The final swap lands on mu. Total swaps: initial distance minus one.
    """
    m = arr.host_of(v_f)
    src = arr.host_of(v_m)
    d = topo.hamming(src, m)
    if d <= 1:
        return MigrationPlan()
    path = topo.shortest_path(src, m, rng=rng)
    swaps = [(path[i], path[i + 1]) for i in range(d - 2)]
    swaps.append((path[d - 2], mu))
    return MigrationPlan(swaps)


def plan_meet_middle(
    u: int, v: int, arr: Arrangement, topo: BCube, rng
) -> MigrationPlan:
    """Swap both endpoints alternately toward each other until adjacent.

    u moves first; each hop corrects one random differing digit against the
    partner's current host, so the path is re-aimed as the targets move.
    Total swaps: initial distance minus one.
    """
    pos_u = arr.host_of(u)
    pos_v = arr.host_of(v)
    powers = [topo.n**i for i in range(topo.k + 1)]
    swaps: list[tuple[int, int]] = []
    moving_u = True
    d = topo.hamming(pos_u, pos_v)
    while d > 1:
        src, dst = (pos_u, pos_v) if moving_u else (pos_v, pos_u)
        ds, dd = topo.address(src), topo.address(dst)
        differing = [i for i in range(topo.k + 1) if ds[i] != dd[i]]
        pos = differing[rng.randrange(len(differing))]
        nxt = src + (dd[pos] - ds[pos]) * powers[pos]
        swaps.append((src, nxt))
        if moving_u:
            pos_u = nxt
        else:
            pos_v = nxt
        moving_u = not moving_u
        d -= 1
    return MigrationPlan(swaps)


def apply_request(
    u: int,
    v: int,
    arr: Arrangement,
    topo: BCube,
    stats: StatsStore,
    policy: PolicyConfig | None,
    rng,
    tenant_hosts: AbstractSet[int] | None = None,
    journal: list[SwapRecord] | None = None,
) -> int:
    """Serve one communication request; returns the migration cost rho.

    Records the request at its pre-migration distance, then (unless the
    endpoints are already adjacent, the policy is None, or intra mode finds
    no destination) plans and executes the migration. In inter mode a
    non-empty plan always leaves u and v at distance 1. A `journal` list, if
    given, receives one SwapRecord per executed swap (audit trail).
    """
    hu = arr.vm_to_host[u]
    hv = arr.vm_to_host[v]
    if hu == EMPTY or hv == EMPTY:
        raise ValueError(f"request between unplaced VMs ({u}, {v})")
    d = topo.hamming(hu, hv)
    stats.record_request(u, v, d)
    if policy is None or d <= 1:
        return 0

    if policy.destination == "meet_middle":
        plan = plan_meet_middle(u, v, arr, topo, rng)
    else:
        if policy.mode == "intra":
            if tenant_hosts is None:
                raise ValueError("intra mode needs the requesting tenant's host set")
        else:
            tenant_hosts = None
        v_f, v_m = choose_roles(u, v, stats)
        if policy.destination == "random":
            mu = dest_random(v_f, arr, topo, rng, tenant_hosts)
        elif policy.destination == "best_switch":
            mu = dest_best_switch(v_f, v_m, arr, topo, stats, tenant_hosts)
        else:
            mu = dest_best_neighbor(v_f, v_m, arr, topo, stats, tenant_hosts)
        if mu is None:
            return 0
        if policy.effective_swap_method == "direct":
            plan = plan_direct(v_m, mu, arr)
        else:
            plan = plan_indirect(v_m, v_f, mu, arr, topo, rng)

    for a, b in plan.swaps:
        arr.swap(a, b)
        if journal is not None:
            journal.append(SwapRecord(stats.request_total, a, b))
    rho = len(plan.swaps)
    stats.record_swaps(rho)
    return rho
