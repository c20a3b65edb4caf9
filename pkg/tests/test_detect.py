import random

import pytest

from tempoctrl.controllability import controllable_dimension
from tempoctrl.detect import (
    UncontrollableError,
    brute_force,
    check_bound,
    greedy_baseline,
    greedy_on,
    multi_solutions,
    otaha,
    otaha_on,
)
from tempoctrl.generate import GeneratorSpec, er_temporal
from tempoctrl.temporal_graph import from_edges


def er(n, t, p, seed, self_loops=True):
    return er_temporal(GeneratorSpec(model="er", n=n, snapshots=t, p=p, seed=seed,
                                     self_loops=self_loops))


class CoverageEvaluator:
    """Table-backed set function: f(D) = size of the union of per-node sets."""

    def __init__(self, cover_sets, universe):
        self.cover = [frozenset(s) for s in cover_sets]
        self.target = universe
        self.node_count = len(cover_sets)

    def empty_state(self):
        return frozenset()

    def add(self, covered, v):
        merged = covered | self.cover[v]
        return len(merged) - len(covered), merged

    def value(self, drivers):
        covered: frozenset = frozenset()
        for v in drivers:
            covered |= self.cover[v]
        return len(covered)


# Ten-node gain table driving the golden selection walkthrough: the first
# pick covers 5, the lazily refreshed second candidate drops 4 -> 3 but stays
# on top, and the third round refreshes one pretender (3 -> 1) before the
# winner (2) is confirmed.
GOLDEN_GAIN_TABLE = [
    {0, 1, 2, 3, 4},  # selected first, value 5
    {5, 8},           # pretender refreshed in round three
    {4, 5, 6, 7},     # second selection, marginal 3
    {8, 9},           # third selection, marginal 2
    {9},
    {8},
    {0},
    {3},
    set(),
    {7},
]


class TestGoldenGainTable:
    def test_lazy_selection_uses_13_evaluations(self):
        sel = otaha_on(CoverageEvaluator(GOLDEN_GAIN_TABLE, 10))
        assert sel.drivers == [0, 2, 3]
        assert sel.f_trace == [5, 8, 10]
        assert sel.gains == [5, 3, 2]
        assert sel.evaluations == 13

    def test_plain_greedy_uses_27_evaluations(self):
        sel = greedy_on(CoverageEvaluator(GOLDEN_GAIN_TABLE, 10))
        assert sel.drivers == [0, 2, 3]
        assert sel.f_trace == [5, 8, 10]
        assert sel.evaluations == 27

    def test_strict_mode_same_selection(self):
        sel = otaha_on(CoverageEvaluator(GOLDEN_GAIN_TABLE, 10), strict=True)
        assert sel.drivers == [0, 2, 3]
        assert sel.evaluations >= 13

    def test_repick_branch_flags_selection_and_matches_greedy(self):
        # after the first pick, nodes 1 and 2 tie at gain 3; node 1 is
        # refreshed, shelved, re-picked once node 2's refresh also lands on 3,
        # and must win by lowest id exactly like the plain scan
        table = [
            {0, 1, 2, 3, 4, 5},  # picked first, value 6
            {4, 5, 6, 7, 8},     # 5 -> 3 after the first pick
            {5, 7, 8, 9},        # 4 -> 3 after the first pick
        ]
        lazy = otaha_on(CoverageEvaluator(table, 10))
        plain = greedy_on(CoverageEvaluator(table, 10))
        assert lazy.drivers == plain.drivers == [0, 1, 2]
        assert lazy.stale_picks == [False, True, False]
        assert lazy.gains == [6, 3, 1]


class TestOtaha:
    def test_edgeless_selects_every_node(self):
        net = from_edges(4, [], dt=2, self_loops=True)
        sel = otaha(net)
        assert sorted(sel.drivers) == [0, 1, 2, 3]
        assert sel.gains == [1, 1, 1, 1]
        assert sel.f_trace == [1, 2, 3, 4]

    def test_matches_brute_force_on_fixed_instance(self):
        net = er(10, 5, 0.25, seed=7)
        sel = otaha(net)
        bf = brute_force(net)
        assert bf.minimum_size == 2
        assert bf.count == 6
        assert sel.size == bf.minimum_size

    def test_final_value_is_n(self):
        for seed in range(6):
            net = er(9, 4, 0.2, seed=seed)
            sel = otaha(net)
            assert sel.final_value == net.n
            assert controllable_dimension(net, sel.drivers) == net.n

    def test_trace_strictly_increasing(self):
        net = er(12, 6, 0.15, seed=3)
        sel = otaha(net)
        assert all(b > a for a, b in zip(sel.f_trace, sel.f_trace[1:]))

    def test_recorded_gains_are_true_marginals(self):
        net = er(10, 5, 0.2, seed=11)
        sel = otaha(net)
        running: list[int] = []
        for v, gain in zip(sel.drivers, sel.gains):
            before = controllable_dimension(net, running)
            after = controllable_dimension(net, running + [v])
            assert gain == after - before
            running.append(v)

    def test_seeded_run_contains_seed(self):
        net = er(10, 5, 0.2, seed=13)
        sel = otaha(net, seed=[7])
        assert sel.drivers[0] == 7
        assert sel.seed_size == 1
        assert sel.final_value == net.n

    def test_seed_achieving_target_returned_as_is(self):
        net = from_edges(2, [], dt=1, self_loops=True)
        sel = otaha(net, seed=[0, 1])
        assert sel.drivers == [0, 1]
        assert sel.evaluations == 2

    def test_uncontrollable_raises(self):
        # a never-active node cannot be controlled without retention
        net = from_edges(3, [(0, 1, 1)], dt=2, self_loops=False)
        # node 2 has no incident structure and no retention; only its own
        # final-layer copy is reachable, so full control still succeeds
        sel = otaha(net)
        assert sel.final_value == 3
        # withholding final-layer attachments is impossible through the public
        # interface, so exercise the guard through a crippled evaluator
        class Dead:
            target = 2
            node_count = 1

            def empty_state(self):
                return 0

            def add(self, state, v):
                return 0, state

        with pytest.raises(UncontrollableError):
            otaha_on(Dead())


class TestGreedyEquivalence:
    def test_sequences_identical_on_random_instances(self):
        for seed in range(50):
            net = er(9, 5, random.Random(seed).choice([0.1, 0.2, 0.3]), seed=500 + seed)
            a = otaha(net)
            b = greedy_baseline(net)
            assert a.drivers == b.drivers, f"seed {seed}"
            assert a.f_trace == b.f_trace

    def test_otaha_never_uses_more_evaluations(self):
        for seed in range(20):
            net = er(10, 5, 0.2, seed=900 + seed)
            a = otaha(net)
            b = greedy_baseline(net)
            assert a.evaluations <= b.evaluations


class TestBruteForce:
    def test_singleton_self_loop(self):
        net = from_edges(1, [], dt=1, self_loops=True)
        res = brute_force(net)
        assert res.minimum_size == 1
        assert res.sets == [(0,)]

    def test_guard(self):
        net = er(25, 2, 0.1, seed=0)
        with pytest.raises(ValueError, match="allow_large"):
            brute_force(net)

    def test_max_size_exhausted(self):
        net = from_edges(3, [], dt=1, self_loops=True)
        with pytest.raises(UncontrollableError):
            brute_force(net, max_size=2)

    def test_all_minimum_sets_verified(self):
        net = er(8, 4, 0.3, seed=42)
        res = brute_force(net)
        for s in res.sets:
            assert controllable_dimension(net, s) == net.n
            assert len(s) == res.minimum_size


class TestBound:
    def test_equal_sizes_always_pass(self):
        net = er(8, 4, 0.3, seed=2)
        sel = otaha(net)
        bf = brute_force(net)
        assert sel.size >= bf.minimum_size
        assert check_bound(sel, bf.minimum_size)

    def test_paired_runs_never_violate(self):
        for seed in range(25):
            net = er(8, 4, 0.25, seed=700 + seed)
            sel = otaha(net)
            bf = brute_force(net)
            assert check_bound(sel, bf.minimum_size), f"seed {seed}"


class TestMultiSolutions:
    def test_count_one_is_plain_run(self):
        net = er(10, 5, 0.25, seed=7)
        sols = multi_solutions(net, count=1)
        assert len(sols) == 1
        assert sols[0].drivers == otaha(net).drivers

    def test_edgeless_unique_solution(self):
        net = from_edges(3, [], dt=1, self_loops=True)
        sols = multi_solutions(net, count=5, rng_seed=3)
        assert len(sols) == 1
        assert sorted(sols[0].drivers) == [0, 1, 2]

    def test_all_solutions_fully_controllable(self):
        net = er(10, 5, 0.25, seed=19)
        for strategy in ("random", "degree"):
            sols = multi_solutions(net, count=10, strategy=strategy, rng_seed=5)
            keys = {frozenset(s.drivers) for s in sols}
            assert len(keys) == len(sols)
            for s in sols:
                assert controllable_dimension(net, s.drivers) == net.n
