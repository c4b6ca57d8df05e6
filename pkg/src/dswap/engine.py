"""Experiment runner: request loop, time series, repetitions, sweeps, phases.

A run is fully determined by (config, seed): the seed feeds separate
deterministic streams for guest weights, initial placement, request
sampling and algorithm decisions, so repetitions with seeds master+i are
independent and reproducible, and may execute in parallel processes.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .algorithms import PolicyConfig, apply_request
from .guest import (
    OverallGuestGraph,
    TenantGraph,
    WeightModel,
    assemble_overall,
    make_clique,
    make_star,
    make_subcube,
)
from .placement import Arrangement
from .stats import StatsStore
from .topology import BCube

GUEST_KINDS = ("clique", "star", "subcube", "matching")


@dataclass(frozen=True)
class PhaseSpec:
    """One stage of a pattern-shift run: a guest graph plus its request budget."""

    guest_kind: str
    guest_size: int | None
    requests: int
    weights: WeightModel = field(default_factory=WeightModel)
    tenants: int | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce an experiment bit for bit."""

    host: tuple[int, int]
    requests: int = 0
    guest_kind: str = "clique"
    guest_size: int | None = None
    weights: WeightModel = field(default_factory=WeightModel)
    policy: str = "none"
    mode: str = "inter"
    repetitions: int = 10
    seed: int = 0
    sample_every: int | None = None
    initial: str = "random"
    tenants: int | None = None
    cover: str = "strict"
    phases: tuple[PhaseSpec, ...] | None = None
    reset_stats_on_phase: bool = True

    def validate(self) -> None:
        n, k = self.host
        if n < 2 or k < 0:
            raise ValueError(f"invalid host parameters ({n}, {k})")
        if self.phases is None and self.requests < 1:
            raise ValueError("requests must be >= 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.sample_every is not None and self.sample_every < 1:
            raise ValueError("sample_every must be >= 1")
        if self.initial not in ("random", "perfect", "local"):
            raise ValueError(f"unknown initial placement {self.initial!r}")
        if self.cover not in ("strict", "lenient"):
            raise ValueError(f"unknown cover mode {self.cover!r}")
        PolicyConfig.from_string(self.policy, self.mode)  # raises on bad combos
        for phase in self._phase_list():
            if phase.guest_kind not in GUEST_KINDS:
                raise ValueError(f"unknown guest kind {phase.guest_kind!r}")
            if phase.requests < 1:
                raise ValueError("every phase needs requests >= 1")

    def _phase_list(self) -> list[PhaseSpec]:
        if self.phases is not None:
            return list(self.phases)
        return [
            PhaseSpec(
                self.guest_kind,
                self.guest_size,
                self.requests,
                self.weights,
                self.tenants,
            )
        ]

    @property
    def total_requests(self) -> int:
        return sum(p.requests for p in self._phase_list())


@dataclass
class RunSeries:
    """Sampled time series of one repetition."""

    seed: int
    t: np.ndarray
    requests_per_edge: np.ndarray
    cost_cum: np.ndarray
    cost_win: np.ndarray
    cost_mig: np.ndarray
    swaps: np.ndarray
    phase_boundaries: list[int]

    @property
    def final_cost(self) -> float:
        return float(self.cost_cum[-1])


@dataclass
class ExperimentResult:
    """Per-repetition series plus mean/stddev aggregates at each sample point."""

    config: ExperimentConfig
    runs: list[RunSeries]
    t: np.ndarray
    requests_per_edge: np.ndarray
    cost_cum_mean: np.ndarray
    cost_cum_std: np.ndarray
    cost_win_mean: np.ndarray
    cost_win_std: np.ndarray
    cost_mig_mean: np.ndarray
    swaps_mean: np.ndarray
    phase_boundaries: list[int]

    @property
    def final_cost(self) -> float:
        return float(self.cost_cum_mean[-1])

    @property
    def final_window_cost(self) -> float:
        return float(self.cost_win_mean[-1])


def _subcube_level(n: int, size: int) -> int:
    levels = round(math.log(size, n))
    if levels < 1 or n**levels != size:
        raise ValueError(f"sub-cube guest size {size} is not a positive power of {n}")
    return levels - 1


def build_guest(
    phase: PhaseSpec,
    topo: BCube,
    rng: np.random.Generator,
    cover: str = "strict",
) -> OverallGuestGraph:
    """Overall guest graph for one phase on the given host cube."""
    kind = phase.guest_kind
    if kind == "matching":
        if phase.guest_size not in (None, 2):
            raise ValueError("matching components always have size 2")
        component: TenantGraph = TenantGraph("matching", 2, [(0, 1)])
    else:
        size = phase.guest_size if phase.guest_size is not None else topo.num_hosts
        if kind == "clique":
            component = make_clique(size)
        elif kind == "star":
            component = make_star(size)
        elif kind == "subcube":
            component = make_subcube(topo.n, _subcube_level(topo.n, size))
        else:
            raise ValueError(f"unknown guest kind {kind!r}")
    return assemble_overall(
        component,
        topo.num_hosts,
        count=phase.tenants,
        cover=cover,
        model=phase.weights,
        rng=rng,
    )


def run_single(config: ExperimentConfig, seed: int) -> RunSeries:
    """One repetition: build everything, drive the request loop, sample series."""
    config.validate()
    topo = BCube(*config.host)
    phases = config._phase_list()
    s_guest, s_place, s_req, s_algo = np.random.SeedSequence(seed).spawn(4)
    guest_rng = np.random.default_rng(s_guest)
    place_rng = np.random.default_rng(s_place)
    request_rng = np.random.default_rng(s_req)
    algo_rng = random.Random(int(s_algo.generate_state(1)[0]))

    policy = PolicyConfig.from_string(config.policy, config.mode)
    guest = build_guest(phases[0], topo, guest_rng, config.cover)
    if config.initial == "perfect":
        arr = Arrangement.perfect_subcube(guest, topo)
    elif config.initial == "local":
        arr = Arrangement.local_random(guest, topo.num_hosts, place_rng)
    else:
        arr = Arrangement.random_initial(guest, topo.num_hosts, place_rng)
    stats = StatsStore(guest.num_vms)

    tenant_sets = None
    if config.mode == "intra":
        tenant_sets = [
            frozenset(arr.vm_to_host[vm] for vm in guest.tenant_vms(ti))
            for ti in range(len(guest.tenants))
        ]

    total = config.total_requests
    sample_every = config.sample_every or max(1, total // 500)

    ts: list[int] = []
    rpes: list[float] = []
    cums: list[float] = []
    wins: list[float] = []
    migs: list[float] = []
    swaps_series: list[int] = []
    boundaries: list[int] = []

    t = 0
    dist_base = 0  # carries pre-reset totals so windows stay global
    swap_base = 0
    last_sample_t = 0
    last_sample_dist = 0

    def emit() -> None:
        nonlocal last_sample_t, last_sample_dist
        global_dist = dist_base + stats.distance_total
        window = t - last_sample_t
        ts.append(t)
        rpes.append(t / guest.num_edges)
        cums.append(stats.distance_total / stats.request_total)
        wins.append((global_dist - last_sample_dist) / window)
        migs.append((stats.distance_total + stats.swap_total) / stats.request_total)
        swaps_series.append(swap_base + stats.swap_total)
        last_sample_t = t
        last_sample_dist = global_dist

    for pi, phase in enumerate(phases):
        if pi > 0:
            boundaries.append(t)
            guest = build_guest(phase, topo, guest_rng, config.cover)
            if guest.num_vms != stats.num_vms:
                raise ValueError("phases must keep the VM population constant")
            if config.reset_stats_on_phase:
                dist_base += stats.distance_total
                swap_base += stats.swap_total
                stats.reset()
        eu, ev = guest.edge_u, guest.edge_v
        tenant_of = guest.tenant_of
        next_sample = last_sample_t + sample_every
        remaining = phase.requests
        while remaining > 0:
            batch = min(8192, remaining)
            idx = guest.sample_edge_indices(request_rng, batch).tolist()
            if tenant_sets is None:
                for i in idx:
                    apply_request(
                        eu[i], ev[i], arr, topo, stats, policy, algo_rng, None
                    )
                    t += 1
                    if t == next_sample:
                        emit()
                        next_sample = t + sample_every
            else:
                for i in idx:
                    u = eu[i]
                    apply_request(
                        u, ev[i], arr, topo, stats, policy, algo_rng,
                        tenant_sets[tenant_of[u]],
                    )
                    t += 1
                    if t == next_sample:
                        emit()
                        next_sample = t + sample_every
            remaining -= batch
    if t != last_sample_t:
        emit()

    return RunSeries(
        seed=seed,
        t=np.asarray(ts, dtype=np.int64),
        requests_per_edge=np.asarray(rpes),
        cost_cum=np.asarray(cums),
        cost_win=np.asarray(wins),
        cost_mig=np.asarray(migs),
        swaps=np.asarray(swaps_series, dtype=np.int64),
        phase_boundaries=boundaries,
    )


def _run_single_args(args: tuple[ExperimentConfig, int]) -> RunSeries:
    return run_single(*args)


def run_repetitions(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """All repetitions (seeds master+i) aggregated into mean/stddev series."""
    config.validate()
    seeds = [config.seed + i for i in range(config.repetitions)]
    if workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run_single_args, [(config, s) for s in seeds]))
    else:
        runs = [run_single(config, s) for s in seeds]
    cum = np.stack([r.cost_cum for r in runs])
    win = np.stack([r.cost_win for r in runs])
    mig = np.stack([r.cost_mig for r in runs])
    swp = np.stack([r.swaps for r in runs])
    return ExperimentResult(
        config=config,
        runs=runs,
        t=runs[0].t,
        requests_per_edge=runs[0].requests_per_edge,
        cost_cum_mean=cum.mean(axis=0),
        cost_cum_std=cum.std(axis=0),
        cost_win_mean=win.mean(axis=0),
        cost_win_std=win.std(axis=0),
        cost_mig_mean=mig.mean(axis=0),
        swaps_mean=swp.mean(axis=0),
        phase_boundaries=runs[0].phase_boundaries,
    )


@dataclass
class SweepEntry:
    size: int
    policy: str
    result: ExperimentResult | None
    error: str | None = None


@dataclass
class SweepResult:
    entries: list[SweepEntry]

    def summary_rows(self) -> list[tuple[int, str, float]]:
        """(size, policy, final amortized cost) for every successful entry."""
        return [
            (e.size, e.policy, e.result.final_cost)
            for e in self.entries
            if e.result is not None
        ]


def sweep_guest_size(
    config: ExperimentConfig,
    sizes: list[int],
    policies: list[str] | None = None,
    workers: int = 1,
) -> SweepResult:
    """One experiment per (size, policy); bad sizes become per-entry errors."""
    entries = []
    for size in sizes:
        for policy in policies or [config.policy]:
            sub = replace(config, guest_size=size, policy=policy)
            try:
                entries.append(SweepEntry(size, policy, run_repetitions(sub, workers)))
            except (ValueError, OverflowError) as exc:
                entries.append(SweepEntry(size, policy, None, error=str(exc)))
    return SweepResult(entries)


def run_phases(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Pattern-shift experiment; requires at least two phases."""
    if config.phases is None or len(config.phases) < 2:
        raise ValueError("run_phases needs a config with >= 2 phases")
    return run_repetitions(config, workers)
