"""Multi-input generate adder: frozen structure numbers and verification.

Expected sizes/depths below were derived independently before freezing:
the closed forms are
  * full generate gate:      r*2**r + (r+1)*2**(r-1)
  * window graph (unpruned): w*r*(k-1) + w*k*2**(r+1)   [dead repeat row kept]
  * output depth, full width n = 2**(r*k):  k*r + 2*r + k + 1  exactly
and the hand tallies for the small frozen circuits follow the same
pool/box/tap accounting as the implementation docstrings.
"""

import pytest

from addergen.circuit import (
    AND,
    BUF,
    OR,
    CircuitBuilder,
    fanout_table,
    metrics,
    validate,
)
from addergen.mig import (
    MigParams,
    Pool,
    build_augmented_and_prefix,
    build_generate_gate,
    build_mig_adder,
    choose_params,
)
from addergen.semantics import verify_adder


class TestChooseParams:
    @pytest.mark.parametrize(
        "n, want",
        [
            (1, (1, 1, 2)),
            (2, (1, 1, 2)),
            (3, (2, 2, 16)),
            (4, (2, 2, 16)),
            (16, (2, 2, 16)),
            (17, (3, 3, 512)),
            (32, (3, 3, 512)),
            (512, (3, 3, 512)),
            (513, (4, 4, 65536)),
            (4096, (4, 4, 65536)),
        ],
    )
    def test_balanced_choice(self, n, want):
        assert choose_params(n) == MigParams(*want)

    def test_covers_requested_width(self):
        for n in (1, 2, 4, 16, 17, 100, 512, 513, 4096):
            p = choose_params(n)
            if n > 2:  # the r=k=1 domain is only 2 wide
                assert p.full_width >= n

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            choose_params(0)


class TestPool:
    def test_serves_each_copy_bounded_times(self):
        p = Pool(["a", "b"], takes_per_item=2)
        assert [p.take() for _ in range(4)] == ["a", "a", "b", "b"]
        with pytest.raises(ValueError):
            p.take()

    def test_single_use_items(self):
        p = Pool(["a"], takes_per_item=1)
        assert p.take() == "a"
        assert p.remaining == 0
        with pytest.raises(ValueError):
            p.take()


class TestGenerateGate:
    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_full_gate_size_matches_formula(self, r):
        q = 1 << r
        b = CircuitBuilder()
        gens = [b.add_input() for _ in range(q)]
        props = [b.add_input() for _ in range(q)]
        build_generate_gate(b, r, gens, props)
        assert len(b) - 2 * q == r * (1 << r) + (r + 1) * (1 << (r - 1))

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_port_budgets(self, r):
        # every prop port is wired at most twice (the lowest exactly once),
        # every gen port exactly once
        q = 1 << r
        b = CircuitBuilder()
        gens = [b.add_input() for _ in range(q)]
        props = [b.add_input() for _ in range(q)]
        build_generate_gate(b, r, gens, props)
        assert b.fanout(props[0]) == 1
        for p in props[1:]:
            assert b.fanout(p) == 2
        for g in gens:
            assert b.fanout(g) == 1

    def test_copy_count_per_level_kind(self):
        for r, final, want in [(2, False, 2), (3, False, 4), (3, True, 1)]:
            q = 1 << r
            b = CircuitBuilder()
            gens = [b.add_input() for _ in range(q)]
            props = [b.add_input() for _ in range(q)]
            outs = build_generate_gate(b, r, gens, props, final_level=final)
            assert len(outs) == want

    def test_rejects_single_block(self):
        b = CircuitBuilder()
        with pytest.raises(ValueError):
            build_generate_gate(b, 2, [b.add_input()], [b.add_input()])


class TestWindowGraph:
    # (r, k, width) -> unpruned gate count with the dead final repeat row
    FROZEN = [(1, 2, 4, 36), (2, 2, 16, 288), (2, 3, 64, 1792)]

    @pytest.mark.parametrize("r, k, w, want", FROZEN)
    def test_frozen_sizes(self, r, k, w, want):
        b = CircuitBuilder()
        xs = [b.add_input() for _ in range(w)]
        build_augmented_and_prefix(b, xs, r, k, omit_last_block=False)
        assert len(b) - w == want
        assert want == w * r * (k - 1) + w * k * (1 << (r + 1))

    @pytest.mark.parametrize("r, k, w", [(1, 2, 4), (2, 2, 16), (3, 2, 64)])
    def test_tap_pools_and_leaf_depths(self, r, k, w):
        b = CircuitBuilder()
        xs = [b.add_input() for _ in range(w)]
        taps = build_augmented_and_prefix(b, xs, r, k)
        assert set(taps) == {(c, lam) for c in range(1, w + 1)
                             for lam in range(k)}
        # each pool holds 2**r single-use leaves; leaf depths are pinned
        # indirectly by the exact whole-adder depth tests below
        for pool in taps.values():
            assert pool.remaining == 1 << r

    def test_inputs_stay_within_fanout_two(self):
        b = CircuitBuilder()
        xs = [b.add_input() for _ in range(8)]
        build_augmented_and_prefix(b, xs, 2, 2)
        for x in xs:
            assert b.fanout(x) <= 2


# (n, r, k, pruned_size, unpruned_size, depth); depth is exact whenever
# n == 2**(r*k), an upper bound otherwise
FROZEN_ADDERS = [
    (2, 1, 1, 8, 13, 5),
    (4, 1, 2, 34, 56, 7),
    (8, 1, 3, 114, 178, 9),
    (8, 2, 2, 163, 260, 10),
    (8, 3, 1, 209, 301, 11),
    (16, 2, 2, 451, 604, 11),
    (64, 2, 3, 3099, 3920, 14),
]


class TestMigAdder:
    @pytest.mark.parametrize("n, r, k, psize, usize, depth", FROZEN_ADDERS)
    def test_frozen_structure(self, n, r, k, psize, usize, depth):
        pruned = build_mig_adder(n, r, k)
        raw = build_mig_adder(n, r, k, prune=False)
        m = metrics(pruned)
        assert not validate(pruned)
        assert (m.size, raw.num_gates) == (psize, usize)
        assert m.max_fanout == 2
        full = n == 1 << (r * k)
        if full:
            assert m.depth == depth == k * r + 2 * r + k + 1
        else:
            assert m.depth <= depth

    @pytest.mark.parametrize(
        "n, r, k",
        [(1, 1, 1), (2, 1, 1), (3, 1, 2), (4, 1, 2), (6, 1, 3), (8, 1, 3),
         (5, 2, 2), (7, 2, 2), (8, 2, 2), (9, 2, 2), (8, 3, 1)],
    )
    def test_exhaustive_correctness(self, n, r, k):
        c = build_mig_adder(n, r, k)
        report = verify_adder(c, n, mode="exhaustive")
        assert report.ok, report.summary()

    @pytest.mark.parametrize("n, r, k", [(16, 2, 2), (64, 2, 3), (27, 3, 2)])
    def test_random_correctness(self, n, r, k):
        c = build_mig_adder(n, r, k)
        report = verify_adder(c, n, mode="random", samples=20000, seed=7)
        assert report.ok, report.summary()

    def test_default_parameters_verify(self):
        c = build_mig_adder(10)
        assert verify_adder(c, 10, mode="exhaustive").ok

    @pytest.mark.parametrize("n", [5, 6, 7, 9, 10, 11, 13, 15])
    def test_truncated_widths_stay_within_depth_bound(self, n):
        c = build_mig_adder(n, 2, 2)
        assert metrics(c).depth <= 2 * 2 + 2 * 2 + 2 + 1

    def test_size_bound_formula_unpruned(self):
        for n, r, k in [(16, 2, 2), (64, 2, 3), (64, 3, 2), (8, 1, 3)]:
            raw = build_mig_adder(n, r, k, prune=False)
            bound = (3 * n * k * (r + 2) * (1 << (r - 1)) + n * (1 << r)
                     + n * r * k)
            assert raw.num_gates < bound

    def test_lowest_propagate_input_kept_alive(self):
        # x_1 is structurally redundant; the absorbing output form must
        # leave it exactly one consumer so the circuit validates
        c = build_mig_adder(16, 2, 2)
        assert fanout_table(c)[c.input_ids[0]] == 1

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            build_mig_adder(17, 2, 2)  # exceeds 2**(r*k)
        with pytest.raises(ValueError):
            build_mig_adder(4, 0, 2)
        with pytest.raises(ValueError):
            build_mig_adder(0, 1, 1)
        with pytest.raises(ValueError):
            build_mig_adder(8, 2, None)

    def test_outputs_in_position_order(self):
        # output i must be the carry out of positions 1..i+1
        n = 6
        c = build_mig_adder(n, 2, 2)
        from addergen.semantics import gp_prepare, int_to_bits, ripple_carries, simulate

        a, bval = 45, 27
        pairs = gp_prepare(int_to_bits(a, n), int_to_bits(bval, n))
        assign = {}
        for i, (x, y) in enumerate(pairs):
            assign[c.input_ids[2 * i]] = x
            assign[c.input_ids[2 * i + 1]] = y
        got = simulate(c, assign)
        assert [got[o] for o in c.output_ids] == ripple_carries(pairs)
