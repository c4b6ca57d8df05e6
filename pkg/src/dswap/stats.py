"""Cost bookkeeping: per-VM local amortized cost, pair counts, global cost.

Every request is recorded before any migration, using the pre-migration
distance, so routing for request t is charged on the arrangement at time t
and both endpoints have a request count >= 1 when roles are selected.
"""

from __future__ import annotations

import math
from typing import Iterable

from .placement import EMPTY, Arrangement

_NO_VM = -2  # distinct from EMPTY; "remove nothing" sentinel


class StatsStore:
    """Counters for one simulation run.

    Per VM: request count |sigma_v| and summed request distance. Per pair:
    request counts in a dict keyed by min*V+max (only communicating pairs
    consume memory). Globals: request, distance and swap totals.
    """

    def __init__(self, num_vms: int):
        self.num_vms = num_vms
        self.req_count = [0] * num_vms
        self.dist_sum = [0] * num_vms
        self.pair_counts: dict[int, int] = {}
        self.request_total = 0
        self.distance_total = 0
        self.swap_total = 0

    def reset(self) -> None:
        """Zero every counter (pattern-shift phase boundary)."""
        self.req_count = [0] * self.num_vms
        self.dist_sum = [0] * self.num_vms
        self.pair_counts.clear()
        self.request_total = 0
        self.distance_total = 0
        self.swap_total = 0

    # -- recording ----------------------------------------------------------

    def record_request(self, u: int, v: int, d: int) -> None:
        """Charge one request between u and v at pre-migration distance d."""
        self.req_count[u] += 1
        self.req_count[v] += 1
        self.dist_sum[u] += d
        self.dist_sum[v] += d
        key = u * self.num_vms + v if u < v else v * self.num_vms + u
        counts = self.pair_counts
        counts[key] = counts.get(key, 0) + 1
        self.request_total += 1
        self.distance_total += d

    def record_swaps(self, count: int) -> None:
        self.swap_total += count

    # -- per-VM / per-pair views ---------------------------------------------

    def pair_count(self, u: int, v: int) -> int:
        key = u * self.num_vms + v if u < v else v * self.num_vms + u
        return self.pair_counts.get(key, 0)

    def lcost(self, v: int) -> float:
        """Local amortized cost: distance sum over count, discounted by log2(count).

        The log factor is clamped at 1 so the cost stays finite for counts of
        one and two; a VM that never communicated is infinitely movable.
        """
        count = self.req_count[v]
        if count == 0:
            return math.inf
        return self.dist_sum[v] / (count * max(1.0, math.log2(count)))

    # -- host-set scores ------------------------------------------------------

    def sc(self, hosts: Iterable[int], arr: Arrangement) -> int:
        """Total pair count among the VMs currently hosted by `hosts`."""
        htv = arr.host_to_vm
        vms = [htv[h] for h in hosts if htv[h] != EMPTY]
        return self._pair_sum(vms)

    def sc_hypothetical(
        self,
        hosts: Iterable[int],
        arr: Arrangement,
        place_vm: int,
        place_host: int,
        remove_vm: int | None = None,
    ) -> int:
        """Score of `hosts` as if place_vm sat on place_host.

        The displaced occupant (`remove_vm`) is treated as absent, and the
        host place_vm is leaving counts as empty, exactly as if the move had
        been carried out and the displaced VM dropped.
        """
        host_list = list(hosts)
        if place_host not in host_list:
            raise ValueError(f"placement host {place_host} not in the scored set")
        removed = _NO_VM if remove_vm is None else remove_vm
        htv = arr.host_to_vm
        vms = []
        for h in host_list:
            if h == place_host:
                vms.append(place_vm)
                continue
            occ = htv[h]
            if occ == EMPTY or occ == removed or occ == place_vm:
                continue
            vms.append(occ)
        return self._pair_sum(vms)

    def _pair_sum(self, vms: list[int]) -> int:
        total = 0
        get = self.pair_counts.get
        num = self.num_vms
        for i in range(len(vms)):
            vi = vms[i]
            for j in range(i + 1, len(vms)):
                vj = vms[j]
                key = vi * num + vj if vi < vj else vj * num + vi
                total += get(key, 0)
        return total

    # -- global metrics -------------------------------------------------------

    def amortized_cost(self) -> float:
        """Average per-request routing distance (migration cost normalized away)."""
        if self.request_total == 0:
            raise ValueError("no requests recorded")
        return self.distance_total / self.request_total

    def amortized_cost_with_migrations(self) -> float:
        """Average per-request routing distance plus swaps."""
        if self.request_total == 0:
            raise ValueError("no requests recorded")
        return (self.distance_total + self.swap_total) / self.request_total
