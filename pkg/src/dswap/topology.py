"""BCube(n, k) host topology: addresses, Hamming distances, switch groups, paths.

The BCube(n, k) substrate has n**(k+1) servers, each identified by a
(k+1)-digit base-n address. Switches never connect to other switches, so
they are modelled as crossbars: two servers are adjacent (distance 1) iff
their addresses differ in exactly one digit, and the server-to-server
distance is the Hamming distance between addresses. The network diameter
is therefore k+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

# Dense distance tables stop at this host count; BCube(3,7) (6561 hosts,
# ~43 MB of rows) stays cheap, anything larger falls back to digit loops.
_DENSE_DISTANCE_LIMIT = 16384


def hamming_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of digit positions where two equal-length addresses differ."""
    if len(a) != len(b):
        raise ValueError(f"address length mismatch: {len(a)} vs {len(b)}")
    return sum(x != y for x, y in zip(a, b))


@dataclass(frozen=True)
class SwitchGroup:
    """The n hosts sharing one switch: all addresses equal except digit `level`."""

    level: int
    members: tuple[int, ...]


class BCube:
    """The BCube(n, k) host graph over integer host ids 0..n**(k+1)-1.

    Host id and address are interchangeable: digit i of the address is the
    level-i coordinate and carries weight n**i in the host id, so
    ``host == sum(digits[i] * n**i)``.
    """

    def __init__(self, n: int, k: int):
        if n < 2:
            raise ValueError(f"BCube needs n >= 2 switch ports, got {n}")
        if k < 0:
            raise ValueError(f"BCube needs level index k >= 0, got {k}")
        self.n = n
        self.k = k
        self.num_hosts = n ** (k + 1)
        self.diameter = k + 1
        self._powers = [n**i for i in range(k + 1)]
        self._digits: list[tuple[int, ...]] = []
        for h in range(self.num_hosts):
            rem = h
            digs = []
            for _ in range(k + 1):
                digs.append(rem % n)
                rem //= n
            self._digits.append(tuple(digs))
        self._neighbors: list[tuple[int, ...] | None] = [None] * self.num_hosts
        self._dist_rows: list[bytes] | None = None

    def __repr__(self) -> str:
        return f"BCube(n={self.n}, k={self.k})"

    # -- addressing ---------------------------------------------------------

    def address(self, host: int) -> tuple[int, ...]:
        """Base-n digit vector (level 0 first) of a host id."""
        if not 0 <= host < self.num_hosts:
            raise ValueError(f"host {host} out of range for {self!r}")
        return self._digits[host]

    def host(self, address: Sequence[int]) -> int:
        """Host id for a digit vector; rejects wrong length or digit >= n."""
        if len(address) != self.k + 1:
            raise ValueError(
                f"address needs {self.k + 1} digits, got {len(address)}"
            )
        total = 0
        for digit, power in zip(address, self._powers):
            if not 0 <= digit < self.n:
                raise ValueError(f"digit {digit} out of range [0, {self.n})")
            total += digit * power
        return total

    # -- distances ----------------------------------------------------------

    def _build_distance_rows(self) -> list[bytes]:
        dig = np.array(self._digits, dtype=np.uint8)
        rows: list[bytes] = []
        chunk = max(1, (1 << 22) // self.num_hosts)
        for start in range(0, self.num_hosts, chunk):
            block = (dig[start : start + chunk, None, :] != dig[None, :, :]).sum(
                axis=2, dtype=np.uint8
            )
            rows.extend(row.tobytes() for row in block)
        return rows

    def distance_rows(self) -> list[bytes]:
        """Per-host byte rows of the full distance matrix (built lazily)."""
        if self._dist_rows is None:
            self._dist_rows = self._build_distance_rows()
        return self._dist_rows

    def hamming(self, a: int, b: int) -> int:
        """Hamming distance between two hosts; equals hop count in the graph."""
        if self.num_hosts <= _DENSE_DISTANCE_LIMIT:
            if self._dist_rows is None:
                self._dist_rows = self._build_distance_rows()
            return self._dist_rows[a][b]
        da, db = self._digits[a], self._digits[b]
        return sum(x != y for x, y in zip(da, db))

    def count_at_distance(self, i: int) -> int:
        """Number of hosts at distance exactly i from any fixed host."""
        if not 0 <= i <= self.k + 1:
            raise ValueError(f"distance {i} outside [0, {self.k + 1}]")
        return (self.n - 1) ** i * math.comb(self.k + 1, i)

    def expected_random_distance(self) -> Fraction:
        """Expected distance of two independently uniform hosts: (k+1)(n-1)/n."""
        return Fraction((self.k + 1) * (self.n - 1), self.n)

    # -- neighborhoods ------------------------------------------------------

    def neighbors(self, a: int) -> tuple[int, ...]:
        """All hosts at distance 1 from a, ascending; always (n-1)(k+1) of them."""
        cached = self._neighbors[a]
        if cached is not None:
            return cached
        da = self._digits[a]
        found = []
        for level in range(self.k + 1):
            p = self._powers[level]
            base = a - da[level] * p
            found.extend(base + j * p for j in range(self.n) if j != da[level])
        result = tuple(sorted(found))
        self._neighbors[a] = result
        return result

    def switch_group(self, a: int, level: int) -> tuple[int, ...]:
        """The n hosts (including a) on a's level-`level` switch, ascending."""
        if not 0 <= level <= self.k:
            raise ValueError(f"switch level {level} outside [0, {self.k}]")
        p = self._powers[level]
        base = a - self._digits[a][level] * p
        return tuple(base + j * p for j in range(self.n))

    def switch_groups(self, a: int) -> list[SwitchGroup]:
        """One SwitchGroup per level, low levels first."""
        return [
            SwitchGroup(level, self.switch_group(a, level))
            for level in range(self.k + 1)
        ]

    # -- routing ------------------------------------------------------------

    def shortest_path(
        self,
        a: int,
        b: int,
        *,
        rng=None,
        order: Iterable[int] | None = None,
    ) -> list[int]:
        """Hosts along a shortest path from a to b, endpoints included.

        Each hop corrects exactly one differing digit. `order` fixes the
        correction order (positions already equal are skipped); without it a
        uniformly random permutation is drawn from `rng`, which keeps runs
        reproducible. Returns [a] when a == b.
        """
        da, db = self._digits[a], self._digits[b]
        differing = [i for i in range(self.k + 1) if da[i] != db[i]]
        if not differing:
            return [a]
        if order is None:
            if rng is None:
                raise ValueError("shortest_path needs rng or an explicit order")
            positions = list(differing)
            rng.shuffle(positions)
        else:
            given = list(order)
            wanted = set(differing)
            positions = [p for p in given if p in wanted]
            if len(positions) != len(wanted) or set(positions) != wanted:
                raise ValueError(
                    f"order {given} does not cover differing positions {differing}"
                )
        path = [a]
        cur = a
        for pos in positions:
            cur += (db[pos] - self._digits[cur][pos]) * self._powers[pos]
            path.append(cur)
        return path
