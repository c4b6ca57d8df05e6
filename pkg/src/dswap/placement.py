"""The arrangement (VM <-> host bijection), swaps, and reference placements."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO

import numpy as np

from .guest import OverallGuestGraph
from .topology import BCube

EMPTY = -1


@dataclass(frozen=True)
class SwapRecord:
    """Audit entry for one executed swap at request index `time`."""

    time: int
    host_a: int
    host_b: int


class Arrangement:
    """Dense two-way map between VM indices and host ids.

    `vm_to_host[v]` is v's host; `host_to_vm[h]` is the occupant or EMPTY.
    Both are plain lists for O(1) lookup and swap on the simulator hot path.
    """

    __slots__ = ("num_hosts", "vm_to_host", "host_to_vm")

    def __init__(self, num_vms: int, num_hosts: int):
        if num_vms > num_hosts:
            raise ValueError(f"{num_vms} VMs exceed {num_hosts} hosts")
        self.num_hosts = num_hosts
        self.vm_to_host = [EMPTY] * num_vms
        self.host_to_vm = [EMPTY] * num_hosts

    @classmethod
    def random_initial(
        cls, guest: OverallGuestGraph, num_hosts: int, rng: np.random.Generator
    ) -> "Arrangement":
        """Uniformly random bijection of all VMs onto a random host subset."""
        arr = cls(guest.num_vms, num_hosts)
        hosts = rng.permutation(num_hosts)[: guest.num_vms].tolist()
        for vm, host in enumerate(hosts):
            arr.vm_to_host[vm] = host
            arr.host_to_vm[host] = vm
        return arr

    @classmethod
    def local_random(
        cls, guest: OverallGuestGraph, num_hosts: int, rng: np.random.Generator
    ) -> "Arrangement":
        """Tenants on consecutive host blocks, VMs randomly permuted within.

        Block i spans hosts [offset_i, offset_i + size_i): each tenant is
        mapped locally but in a random, suboptimal order. When component
        sizes are powers of the host arity the blocks are aligned sub-cubes,
        so an intra-tenant optimizer has a perfect embedding within reach.
        """
        arr = cls(guest.num_vms, num_hosts)
        for ti, tenant in enumerate(guest.tenants):
            base = guest.offsets[ti]
            for local, slot in enumerate(rng.permutation(tenant.size).tolist()):
                arr.vm_to_host[base + local] = base + slot
                arr.host_to_vm[base + slot] = base + local
        return arr

    @classmethod
    def perfect_subcube(cls, guest: OverallGuestGraph, topo: BCube) -> "Arrangement":
        """Embed BCube(n, k') components onto aligned sub-cubes of BCube(n, k).

        Component c occupies hosts [c*size, (c+1)*size): low digits replay the
        component-local address, high digits encode c, so every guest edge
        lands at host distance exactly 1.
        """
        for t in guest.tenants:
            if t.subcube is None:
                raise ValueError(f"tenant kind {t.kind!r} is not a sub-cube")
            np_, kp = t.subcube
            if np_ != topo.n:
                raise ValueError(f"sub-cube arity {np_} != host arity {topo.n}")
            if kp >= topo.k:
                raise ValueError(f"sub-cube level {kp} must be below host level {topo.k}")
        arr = cls(guest.num_vms, topo.num_hosts)
        for ti, t in enumerate(guest.tenants):
            base = ti * t.size
            off = guest.offsets[ti]
            for local in range(t.size):
                arr.vm_to_host[off + local] = base + local
                arr.host_to_vm[base + local] = off + local
        return arr

    def place(self, vm: int, host: int) -> None:
        """Put an unplaced VM on an empty host (setup only)."""
        if self.vm_to_host[vm] != EMPTY:
            raise ValueError(f"VM {vm} already placed")
        if self.host_to_vm[host] != EMPTY:
            raise ValueError(f"host {host} already occupied")
        self.vm_to_host[vm] = host
        self.host_to_vm[host] = vm

    def host_of(self, vm: int) -> int:
        host = self.vm_to_host[vm]
        if host == EMPTY:
            raise ValueError(f"VM {vm} is not placed")
        return host

    def occupant(self, host: int) -> int:
        """VM at `host`, or EMPTY."""
        return self.host_to_vm[host]

    def swap(self, a: int, b: int) -> None:
        """Exchange the occupants of two distinct hosts (either may be empty)."""
        if a == b:
            raise ValueError(f"cannot swap host {a} with itself")
        htv = self.host_to_vm
        va, vb = htv[a], htv[b]
        htv[a], htv[b] = vb, va
        if va != EMPTY:
            self.vm_to_host[va] = b
        if vb != EMPTY:
            self.vm_to_host[vb] = a

    def vm_distance(self, topo: BCube, u: int, v: int) -> int:
        """Hamming distance between the hosts of two placed VMs."""
        return topo.hamming(self.host_of(u), self.host_of(v))

    def occupied_hosts(self) -> list[int]:
        return [h for h, vm in enumerate(self.host_to_vm) if vm != EMPTY]

    def copy(self) -> "Arrangement":
        dup = Arrangement.__new__(Arrangement)
        dup.num_hosts = self.num_hosts
        dup.vm_to_host = list(self.vm_to_host)
        dup.host_to_vm = list(self.host_to_vm)
        return dup

    def assert_consistent(self) -> None:
        """Check the two maps agree and no host holds more than one VM."""
        for vm, host in enumerate(self.vm_to_host):
            if host != EMPTY and self.host_to_vm[host] != vm:
                raise AssertionError(f"VM {vm} claims host {host} which holds "
                                     f"{self.host_to_vm[host]}")
        for host, vm in enumerate(self.host_to_vm):
            if vm != EMPTY and self.vm_to_host[vm] != host:
                raise AssertionError(f"host {host} claims VM {vm} which sits on "
                                     f"{self.vm_to_host[vm]}")

    def write_csv(self, out: IO[str], guest: OverallGuestGraph) -> None:
        """Snapshot of occupied hosts as host_index,tenant,vm_local_index rows."""
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["host_index", "tenant", "vm_local_index"])
        for host, vm in enumerate(self.host_to_vm):
            if vm == EMPTY:
                continue
            vid = guest.vm_id(vm)
            writer.writerow([host, vid.tenant, vid.local])


def clique_local_min_cost(n: int, x: int) -> Fraction:
    """Reference cost (x+1)(n-1)/n for K_x packed into its aligned sub-cube.

    This is the literature's printed local-minimum formula, exposed for plot
    reference lines. It grows linearly in x and exceeds the sub-cube diameter
    for larger cliques; packed_clique_average_distance() gives the brute-force
    average to report alongside.
    """
    levels = round(math.log(x, n))
    if levels < 1 or n**levels != x:
        raise ValueError(f"clique size {x} is not a positive power of {n}")
    return Fraction((x + 1) * (n - 1), n)


def packed_clique_average_distance(n: int, x: int) -> Fraction:
    """Exact average pairwise host distance of K_x packed into BCube(n, log_n(x)-1)."""
    levels = round(math.log(x, n))
    if levels < 1 or n**levels != x:
        raise ValueError(f"clique size {x} is not a positive power of {n}")
    cube = BCube(n, levels - 1)
    total = 0
    for a in range(x):
        for b in range(a + 1, x):
            total += cube.hamming(a, b)
    return Fraction(total, x * (x - 1) // 2)
