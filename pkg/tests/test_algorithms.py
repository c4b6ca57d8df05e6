import random
from collections import Counter

import numpy as np
import pytest
from scipy import stats as scipy_stats

from dswap import (
    Arrangement,
    BCube,
    PolicyConfig,
    StatsStore,
    apply_request,
    assemble_overall,
    best_neighbor_scores,
    best_switch_scores,
    choose_roles,
    dest_best_neighbor,
    dest_best_switch,
    dest_random,
    make_clique,
    make_star,
    make_subcube,
    plan_direct,
    plan_indirect,
    plan_meet_middle,
)
from dswap.placement import EMPTY


def place_vms(cube, assignments, num_vms=None):
    """Arrangement with vm -> host exactly as given."""
    vms = num_vms or len(assignments)
    arr = Arrangement(vms, cube.num_hosts)
    for vm, host in assignments.items():
        arr.place(vm, host)
    return arr


class TestPolicyConfig:
    def test_known_strings_round_trip(self):
        for name in ("meetmiddle", "random-direct", "bestneighbor-indirect"):
            policy = PolicyConfig.from_string(name)
            assert policy is not None

    def test_none_means_no_policy(self):
        assert PolicyConfig.from_string("none") is None

    def test_unknown_string_rejected(self):
        with pytest.raises(ValueError):
            PolicyConfig.from_string("bestguess-direct")

    def test_intra_meet_middle_rejected(self):
        with pytest.raises(ValueError):
            PolicyConfig.from_string("meetmiddle", mode="intra")

    def test_intra_forces_direct(self):
        policy = PolicyConfig.from_string("bestneighbor-indirect", mode="intra")
        assert policy.swap_method == "indirect"
        assert policy.effective_swap_method == "direct"


class TestChooseRoles:
    def test_higher_lcost_migrates(self):
        s = StatsStore(2)
        s.record_request(0, 1, 3)  # both get count 1
        s.record_request(0, 1, 3)
        s.dist_sum[0] = 12  # force lcost(0)=6 > lcost(1)=3
        v_f, v_m = choose_roles(0, 1, s)
        assert (v_f, v_m) == (1, 0)

    def test_tie_keeps_smaller_index_fixed(self):
        s = StatsStore(2)
        s.record_request(0, 1, 2)
        v_f, v_m = choose_roles(1, 0, s)
        assert (v_f, v_m) == (0, 1)

    def test_rescaled_distances_select_same_endpoint(self):
        rng = random.Random(31)
        for _ in range(100):
            a = StatsStore(6)
            b = StatsStore(6)
            for _ in range(rng.randrange(1, 30)):
                u = rng.randrange(6)
                v = rng.randrange(6)
                if u == v:
                    continue
                d = rng.randrange(0, 5)
                a.record_request(u, v, d)
                b.record_request(u, v, 3 * d)
            if a.req_count[0] and a.req_count[1]:
                assert choose_roles(0, 1, a) == choose_roles(0, 1, b)


class TestDestRandom:
    def test_uniform_over_neighbors(self):
        cube = BCube(3, 3)
        arr = place_vms(cube, {0: 40, 1: 0})
        rng = random.Random(8)
        counts = Counter(
            dest_random(0, arr, cube, rng) for _ in range(10_000)
        )
        assert set(counts) == set(cube.neighbors(40))
        _, p = scipy_stats.chisquare(list(counts.values()))
        assert p > 0.01

    def test_intra_without_adjacent_tenant_host_skips(self):
        cube = BCube(3, 3)
        arr = place_vms(cube, {0: 0, 1: 80})
        tenant_hosts = frozenset({0, 80})  # no neighbor of host 0 in the set
        assert dest_random(0, arr, cube, random.Random(0), tenant_hosts) is None

    def test_intra_restricts_candidates(self):
        cube = BCube(3, 3)
        arr = place_vms(cube, {0: 0, 1: 40, 2: 1})
        tenant_hosts = frozenset({0, 40, 1})
        for _ in range(50):
            assert dest_random(0, arr, cube, random.Random(_), tenant_hosts) == 1


class TestDestBestSwitch:
    def test_group_with_cheapest_victim_wins(self):
        # BCube(2,1): v_f on 0, v_m on 3; level-0 victim B has pair history
        # with v_f, the level-1 victim C has none, so level 1 wins.
        cube = BCube(2, 1)
        arr = place_vms(cube, {0: 0, 1: 1, 2: 2, 3: 3})
        s = StatsStore(4)
        for _ in range(5):
            s.record_request(3, 0, 2)
        for _ in range(2):
            s.record_request(1, 0, 1)
        scores = dict(
            (level, delta) for level, victim, delta in best_switch_scores(0, 3, arr, cube, s)
        )
        assert scores == {0: 5 - 2, 1: 5 - 0}
        assert dest_best_switch(0, 3, arr, cube, s) == 2

    def test_all_zero_counts_picks_lowest_level(self):
        cube = BCube(2, 1)
        arr = place_vms(cube, {0: 0, 1: 1, 2: 2, 3: 3})
        s = StatsStore(4)
        assert dest_best_switch(0, 3, arr, cube, s) == 1

    def test_empty_host_is_preferred_victim(self):
        cube = BCube(3, 1)
        # level-0 group of host 0 is (0,1,2); host 2 left empty
        arr = place_vms(cube, {0: 0, 1: 1, 2: 4}, num_vms=3)
        s = StatsStore(3)
        scored = best_switch_scores(0, 2, arr, cube, s)
        level0 = next(entry for entry in scored if entry[0] == 0)
        assert level0[1] == 2

    def test_destination_always_neighbor(self):
        cube = BCube(3, 2)
        overall = assemble_overall(make_clique(27), cube.num_hosts)
        rng = random.Random(4)
        for seed in range(50):
            arr = Arrangement.random_initial(
                overall, cube.num_hosts, np.random.default_rng(seed)
            )
            s = StatsStore(27)
            for _ in range(30):
                u, v = rng.randrange(27), rng.randrange(27)
                if u != v:
                    s.record_request(u, v, arr.vm_distance(cube, u, v))
            u, v = 0, 1
            if arr.vm_distance(cube, u, v) < 2:
                continue
            mu = dest_best_switch(u, v, arr, cube, s)
            assert cube.hamming(arr.host_of(u), mu) == 1

    def test_intra_no_victim_returns_none(self):
        cube = BCube(3, 3)
        arr = place_vms(cube, {0: 0, 1: 40})
        assert dest_best_switch(0, 1, arr, cube, StatsStore(2), frozenset({0, 40})) is None


class TestDestBestNeighbor:
    def test_neighborhood_with_two_partners_wins(self):
        cube = BCube(3, 2)
        # v_f on 0; v_m on 13 (distance 3); partners of v_m sit on 4 and 7,
        # both inside N(1), so candidate 1 gains twice as much as any other.
        arr = place_vms(cube, {0: 0, 1: 13, 2: 4, 3: 7})
        s = StatsStore(4)
        for _ in range(10):
            s.record_request(1, 2, 2)
            s.record_request(1, 3, 2)
        scores = dict(best_neighbor_scores(0, 1, arr, cube, s))
        assert scores[1] == 20
        assert max(scores.values()) == 20
        assert dest_best_neighbor(0, 1, arr, cube, s) == 1

    def test_all_zero_counts_picks_smallest_host(self):
        cube = BCube(3, 2)
        arr = place_vms(cube, {0: 0, 1: 13})
        assert dest_best_neighbor(0, 1, arr, cube, StatsStore(2)) == min(cube.neighbors(0))

    def test_scores_match_sc_hypothetical_oracle(self):
        cube = BCube(3, 2)
        overall = assemble_overall(make_clique(27), cube.num_hosts)
        rng = random.Random(2024)
        for trial in range(1000):
            arr = Arrangement.random_initial(
                overall, cube.num_hosts, np.random.default_rng(trial)
            )
            s = StatsStore(27)
            for _ in range(40):
                u, v = rng.randrange(27), rng.randrange(27)
                if u != v:
                    s.record_request(u, v, arr.vm_distance(cube, u, v))
            v_f, v_m = rng.randrange(27), rng.randrange(27)
            if v_f == v_m or arr.vm_distance(cube, v_f, v_m) < 2:
                continue
            old = arr.host_of(v_m)
            for mu, delta in best_neighbor_scores(v_f, v_m, arr, cube, s):
                hood = set(cube.neighbors(mu)) | {mu}
                displaced = arr.occupant(mu)
                expected = s.sc_hypothetical(
                    hood, arr, v_m, mu,
                    remove_vm=None if displaced == EMPTY else displaced,
                ) - s.sc(hood, arr)
                assert delta == expected, (trial, mu, old)

    def test_intra_no_candidate_returns_none(self):
        cube = BCube(3, 3)
        arr = place_vms(cube, {0: 0, 1: 40})
        assert (
            dest_best_neighbor(0, 1, arr, cube, StatsStore(2), frozenset({0, 40}))
            is None
        )


class TestPlans:
    def test_direct_exchanges_two_vms(self):
        cube = BCube(3, 2)
        arr = place_vms(cube, {0: 0, 1: 13, 2: 1})
        plan = plan_direct(1, 1, arr)
        assert plan.swaps == [(13, 1)] and plan.rho == 1
        before = dict(enumerate(arr.vm_to_host))
        for a, b in plan.swaps:
            arr.swap(a, b)
        assert arr.host_of(1) == 1
        assert arr.host_of(2) == 13  # displaced occupant lands on the old host
        assert arr.host_of(0) == before[0]
        assert arr.vm_distance(cube, 0, 1) == 1

    def test_direct_degenerate_when_mover_already_there(self):
        cube = BCube(3, 1)
        arr = place_vms(cube, {0: 0, 1: 1})
        assert plan_direct(1, 1, arr).rho == 0

    def test_indirect_distance_two_equals_direct(self):
        cube = BCube(3, 2)
        a, b = cube.host((1, 1, 0)), cube.host((0, 0, 0))
        arr = place_vms(cube, {0: b, 1: a})
        mu = cube.neighbors(b)[0]
        plan = plan_indirect(1, 0, mu, arr, cube, random.Random(0))
        assert plan.swaps == [(a, mu)]

    def test_indirect_distance_five_trace(self):
        cube = BCube(3, 4)
        m = cube.host((1, 1, 1, 1, 1))
        arr = place_vms(cube, {0: m, 1: 0})
        mu = cube.neighbors(m)[0]
        plan = plan_indirect(1, 0, mu, arr, cube, random.Random(7))
        assert plan.rho == 5 - 1
        # the walk itself moves one hop per swap
        for a, b in plan.swaps[:-1]:
            assert cube.hamming(a, b) == 1
        assert plan.swaps[-1][1] == mu
        for a, b in plan.swaps:
            arr.swap(a, b)
        assert arr.host_of(1) == mu
        assert arr.vm_distance(cube, 0, 1) == 1

    def test_meet_middle_distance_two(self):
        cube = BCube(3, 2)
        u_host = cube.host((1, 1, 0))
        arr = place_vms(cube, {0: u_host, 1: 0})
        plan = plan_meet_middle(0, 1, arr, cube, random.Random(3))
        assert plan.rho == 1
        assert plan.swaps[0][0] == u_host  # u moves first

    def test_meet_middle_distance_four_alternation(self):
        cube = BCube(3, 3)
        u_host = cube.host((1, 1, 1, 1))
        v_host = cube.host((0, 0, 0, 0))
        arr = place_vms(cube, {0: u_host, 1: v_host})
        plan = plan_meet_middle(0, 1, arr, cube, random.Random(5))
        assert plan.rho == 3
        assert plan.swaps[0][0] == u_host
        assert plan.swaps[1][0] == v_host
        assert plan.swaps[2][0] == plan.swaps[0][1]  # u continues from its hop
        for a, b in plan.swaps:
            assert cube.hamming(a, b) == 1
            arr.swap(a, b)
        assert arr.vm_distance(cube, 0, 1) == 1


def run_policy(cube, overall, policy_name, requests, seed, mode="inter"):
    """Tiny driver used by behavioral tests; returns (arr, stats, trace)."""
    arr = Arrangement.random_initial(overall, cube.num_hosts, np.random.default_rng(seed))
    stats = StatsStore(overall.num_vms)
    policy = PolicyConfig.from_string(policy_name, mode)
    rng = random.Random(seed + 1)
    sample_rng = np.random.default_rng(seed + 2)
    tenant_sets = None
    if mode == "intra":
        tenant_sets = [
            frozenset(arr.vm_to_host[vm] for vm in overall.tenant_vms(ti))
            for ti in range(len(overall.tenants))
        ]
    trace = []
    idx = overall.sample_edge_indices(sample_rng, requests)
    for i in idx.tolist():
        u, v = overall.edge_u[i], overall.edge_v[i]
        hosts = None if tenant_sets is None else tenant_sets[overall.tenant_of[u]]
        d = arr.vm_distance(cube, u, v)
        rho = apply_request(u, v, arr, cube, stats, policy, rng, hosts)
        trace.append((u, v, d, rho, arr.vm_distance(cube, u, v)))
    return arr, stats, trace


class TestApplyRequest:
    def test_adjacent_request_is_free(self):
        cube = BCube(3, 1)
        arr = place_vms(cube, {0: 0, 1: 1})
        s = StatsStore(2)
        policy = PolicyConfig.from_string("bestneighbor-direct")
        rho = apply_request(0, 1, arr, cube, s, policy, random.Random(0))
        assert rho == 0
        assert arr.host_of(0) == 0 and arr.host_of(1) == 1
        assert s.request_total == 1 and s.distance_total == 1

    def test_policy_none_only_records(self):
        cube = BCube(3, 2)
        arr = place_vms(cube, {0: 0, 1: 13})
        s = StatsStore(2)
        rho = apply_request(0, 1, arr, cube, s, None, random.Random(0))
        assert rho == 0 and s.distance_total == 3
        assert arr.host_of(1) == 13

    def test_post_distance_one_all_policies(self):
        cube = BCube(3, 3)
        overall = assemble_overall(make_clique(27), cube.num_hosts)
        for name in ("meetmiddle", "random-direct", "random-indirect",
                     "bestswitch-direct", "bestswitch-indirect",
                     "bestneighbor-direct", "bestneighbor-indirect"):
            arr, stats, trace = run_policy(cube, overall, name, 400, seed=13)
            for u, v, d, rho, post in trace:
                if d >= 2:
                    expected = d - 1 if ("indirect" in name or name == "meetmiddle") else 1
                    assert rho == expected, name
                    assert post == 1, name
            arr.assert_consistent()

    def test_rho_accounting(self):
        cube = BCube(3, 3)
        overall = assemble_overall(make_clique(27), cube.num_hosts)
        _, _, trace_direct = run_policy(cube, overall, "bestswitch-direct", 300, seed=3)
        for _, _, d, rho, _ in trace_direct:
            assert rho == (1 if d >= 2 else 0)
        _, _, trace_mm = run_policy(cube, overall, "meetmiddle", 300, seed=3)
        for _, _, d, rho, _ in trace_mm:
            assert rho == (d - 1 if d >= 2 else 0)

    def test_swap_total_tracks_rho(self):
        cube = BCube(3, 3)
        overall = assemble_overall(make_clique(27), cube.num_hosts)
        _, stats, trace = run_policy(cube, overall, "bestneighbor-indirect", 500, seed=5)
        assert stats.swap_total == sum(rho for _, _, _, rho, _ in trace)

    def test_determinism(self):
        cube = BCube(3, 3)
        overall = assemble_overall(make_clique(27), cube.num_hosts)
        arr1, s1, t1 = run_policy(cube, overall, "random-indirect", 400, seed=21)
        arr2, s2, t2 = run_policy(cube, overall, "random-indirect", 400, seed=21)
        assert t1 == t2
        assert arr1.vm_to_host == arr2.vm_to_host
        assert s1.pair_counts == s2.pair_counts

    def test_intra_tenant_closure(self):
        cube = BCube(3, 3)
        overall = assemble_overall(make_subcube(3, 1), cube.num_hosts)
        for name in ("random-direct", "bestswitch-direct", "bestneighbor-direct"):
            arr, _, _ = run_policy(cube, overall, name, 2000, seed=9, mode="intra")
            arr2 = Arrangement.random_initial(
                overall, cube.num_hosts, np.random.default_rng(9)
            )
            for ti in range(len(overall.tenants)):
                before = sorted(arr2.vm_to_host[vm] for vm in overall.tenant_vms(ti))
                after = sorted(arr.vm_to_host[vm] for vm in overall.tenant_vms(ti))
                assert before == after

    def test_intra_no_destination_leaves_arrangement_unchanged(self):
        cube = BCube(3, 3)
        arr = place_vms(cube, {0: 0, 1: 80})  # no tenant host adjacent to either
        s = StatsStore(2)
        policy = PolicyConfig.from_string("bestneighbor-direct", mode="intra")
        rho = apply_request(0, 1, arr, cube, s, policy, random.Random(0),
                            frozenset({0, 80}))
        assert rho == 0
        assert arr.host_of(0) == 0 and arr.host_of(1) == 80
        assert s.request_total == 1  # the request itself is still charged

    def test_intra_without_tenant_hosts_rejected(self):
        cube = BCube(3, 2)
        arr = place_vms(cube, {0: 0, 1: 13})
        s = StatsStore(2)
        policy = PolicyConfig.from_string("bestneighbor-direct", mode="intra")
        with pytest.raises(ValueError):
            apply_request(0, 1, arr, cube, s, policy, random.Random(0))

    def test_unplaced_vm_rejected(self):
        cube = BCube(3, 1)
        arr = Arrangement(2, cube.num_hosts)
        arr.place(0, 0)
        with pytest.raises(ValueError):
            apply_request(0, 1, arr, cube, StatsStore(2), None, random.Random(0))

    def test_journal_records_every_swap(self):
        from dswap import SwapRecord

        cube = BCube(3, 3)
        overall = assemble_overall(make_clique(27), cube.num_hosts)
        arr = Arrangement.random_initial(overall, cube.num_hosts, np.random.default_rng(4))
        stats = StatsStore(overall.num_vms)
        policy = PolicyConfig.from_string("meetmiddle")
        rng = random.Random(2)
        journal: list[SwapRecord] = []
        idx = overall.sample_edge_indices(np.random.default_rng(6), 200)
        for i in idx.tolist():
            apply_request(overall.edge_u[i], overall.edge_v[i], arr, cube,
                          stats, policy, rng, journal=journal)
        assert len(journal) == stats.swap_total
        assert all(rec.host_a != rec.host_b for rec in journal)
        times = [rec.time for rec in journal]
        assert times == sorted(times)


class TestStarBehavior:
    def test_leaves_migrate_toward_center(self):
        cube = BCube(3, 2)
        overall = assemble_overall(make_star(27), cube.num_hosts, count=1)
        arr = Arrangement.random_initial(overall, cube.num_hosts, np.random.default_rng(6))
        stats = StatsStore(overall.num_vms)
        policy = PolicyConfig.from_string("bestswitch-direct")
        rng = random.Random(7)
        sample_rng = np.random.default_rng(8)
        center_moves = 0
        total_moves = 0
        idx = overall.sample_edge_indices(sample_rng, 3000)
        for i in idx.tolist():
            u, v = overall.edge_u[i], overall.edge_v[i]
            if arr.vm_distance(cube, u, v) >= 2:
                stats_before = stats.lcost(0) if stats.req_count[0] else None
                d = arr.vm_distance(cube, u, v)
                stats.record_request(u, v, d)
                v_f, v_m = choose_roles(u, v, stats)
                total_moves += 1
                if v_m == 0:
                    center_moves += 1
                mu = dest_best_switch(v_f, v_m, arr, cube, stats)
                for a, b in plan_direct(v_m, mu, arr).swaps:
                    arr.swap(a, b)
            else:
                stats.record_request(u, v, arr.vm_distance(cube, u, v))
        assert total_moves > 100
        assert center_moves / total_moves < 0.10
