import math

import numpy as np
import pytest

from querybounds import adversary as adv
from querybounds import simulator as sim
from querybounds.algorithms import (
    BUILTIN_ALGORITHMS, grover4, idle, ordered_search_binary, parity2, random_algorithm)
from querybounds.functions import (
    make_ordered_search, make_or, make_parity, make_search_promise, truth_table_function)

PARITY2 = make_parity(2)
SEARCH4 = make_search_promise(4)


class TestOracles:
    def test_phase_basics(self):
        psi = sim.QuantumState.basis(2, 1, i=1)
        assert np.allclose(sim.apply_phase_oracle(psi, "10").amplitudes, -psi.amplitudes)
        rnd = sim.QuantumState.random(2, 2, np.random.default_rng(0))
        assert np.allclose(sim.apply_phase_oracle(rnd, "00").amplitudes, rnd.amplitudes)

    def test_flip_basics(self):
        # W = 2: z = 0 is b = 0, z = 1 is b = 1
        idle_slot = sim.QuantumState.basis(2, 2, i=0, z=0)
        assert np.allclose(sim.apply_flip_oracle(idle_slot, "11").amplitudes, idle_slot.amplitudes)
        out = sim.apply_flip_oracle(sim.QuantumState.basis(2, 2, i=2, z=0), "01")
        assert np.allclose(out.amplitudes, sim.QuantumState.basis(2, 2, i=2, z=1).amplitudes)

    def test_involution_and_equivalence(self):
        rng = np.random.default_rng(100)
        for _ in range(100):
            n = int(rng.integers(1, 5))
            x = "".join(rng.choice(["0", "1"], n))
            psi = sim.QuantumState.random(n, 4, rng)
            for oracle in sim.ORACLES.values():
                twice = oracle(oracle(psi, x), x)
                assert np.allclose(twice.amplitudes, psi.amplitudes, atol=1e-12)
            lifted = sim.with_target_one(psi)
            via_flip = sim.phase_via_flip(lifted, x)
            direct = sim.with_target_one(sim.apply_phase_oracle(psi, x))
            assert np.allclose(via_flip.amplitudes, direct.amplitudes, atol=1e-12)

    def test_errors(self):
        psi = sim.QuantumState.basis(2, 3)
        with pytest.raises(sim.SimulationError):
            sim.apply_flip_oracle(psi, "01")
        with pytest.raises(sim.SimulationError):
            sim.apply_phase_oracle(psi, "011")
        with pytest.raises(sim.SimulationError):
            sim.QuantumState(2, 2, np.ones(5))


class TestAlgorithms:
    @pytest.mark.parametrize("name", sorted(BUILTIN_ALGORITHMS))
    def test_builtins_are_unitary(self, name):
        alg = BUILTIN_ALGORITHMS[name]()
        assert all(sim.is_unitary(U) for U in alg.unitaries)

    @pytest.mark.parametrize("alg, F", [(parity2(), PARITY2), (grover4(), SEARCH4),
                                        (ordered_search_binary(4), make_ordered_search(4)),
                                        (ordered_search_binary(7), make_ordered_search(7))])
    def test_exact_success(self, alg, F):
        rep = sim.success_probability(alg, F)
        assert rep.minimum == pytest.approx(1.0, abs=1e-9)

    def test_binary_search_query_count(self):
        assert ordered_search_binary(8).T == 3
        assert ordered_search_binary(5).T == 3

    def test_rejects_bad_algorithms(self):
        with pytest.raises(sim.SimulationError, match="unitary"):
            sim.QueryAlgorithm(1, 1, [2 * np.eye(2)], "phase", [0, 0])
        with pytest.raises(sim.SimulationError, match="oracle"):
            sim.QueryAlgorithm(1, 1, [np.eye(2)], "magic", [0, 0])
        with pytest.raises(sim.SimulationError, match="shape"):
            sim.QueryAlgorithm(1, 1, [np.eye(3)], "phase", [0, 0, 0])

    def test_trivial_run(self):
        tr = sim.run(idle(2), "01")
        assert tr.beta.shape == (0, 3)
        assert tr.final.amplitudes[0] == 1

    def test_random_distribution_normalised(self):
        rng = np.random.default_rng(5)
        F = make_or(4)
        alg = random_algorithm(4, 1, rng)
        rep = sim.success_probability(alg, F)
        for dist in rep.distributions.values():
            assert sum(dist.values()) == pytest.approx(1.0)
            assert all(0 <= p <= 1 for p in dist.values())

    def test_zero_query_cannot_beat_half(self):
        rng = np.random.default_rng(6)
        for table in (1, 6, 0x7E, 0x96):
            F = truth_table_function(3, table)
            for alg in (idle(3, outcome_value=0), idle(3, outcome_value=1),
                        random_algorithm(3, 0, rng)):
                assert sim.success_probability(alg, F).minimum <= 0.5 + 1e-12


class TestInnerProducts:
    def test_parity2_orthogonal(self):
        ips = sim.inner_product_trace(parity2(), "00", "01")
        assert ips[0] == pytest.approx(1.0)
        assert abs(ips[-1]) < 1e-12

    @pytest.mark.parametrize("alg, F", [(parity2(), PARITY2), (grover4(), SEARCH4),
                                        (ordered_search_binary(8), make_ordered_search(8))])
    def test_overlap_bound_stepwise(self, alg, F):
        traces = sim.run_all(alg, F)
        for tr in traces:
            assert np.allclose((tr.beta ** 2).sum(axis=1), 1.0)
        for a in traces:
            for b in traces:
                for chk in sim.overlap_checks(a, b):
                    assert chk.margin >= -1e-9

    def test_random_algorithms(self):
        rng = np.random.default_rng(7)
        F = make_or(3)
        for oracle in ("phase", "flip"):
            alg = random_algorithm(3, 3, rng, oracle=oracle)
            traces = sim.run_all(alg, F)
            for a in traces[:4]:
                for b in traces[4:]:
                    sim.overlap_checks(a, b)


class TestProgress:
    @pytest.mark.parametrize("alg, F", [(parity2(), PARITY2), (grover4(), SEARCH4),
                                        (ordered_search_binary(8), make_ordered_search(8))])
    def test_drop_bound(self, alg, F):
        for G in (adv.uniform_gamma(F), adv.bs_gamma(F)):
            rep = sim.verify_drop_bound(G, alg, F)
            assert rep.initial_gap < 1e-6
            assert all(m >= -1e-6 for m in rep.margins)

    def test_grover_star_bound_is_two(self):
        rep = sim.verify_drop_bound(adv.bs_gamma(SEARCH4), grover4(), SEARCH4)
        assert rep.bound == pytest.approx(2.0)

    def test_idle_keeps_weight(self):
        F = make_or(2)
        G = adv.uniform_gamma(F)
        alg = sim.QueryAlgorithm(2, 1, [np.eye(3, dtype=complex)] * 3, "phase", [0, 0, 0])
        rep = sim.verify_drop_bound(G, alg, F)
        assert rep.drops == [0.0, 0.0]

    def test_parity2_final_weight_vanishes(self):
        G = adv.uniform_gamma(PARITY2)
        rep = sim.verify_drop_bound(G, parity2(), PARITY2)
        assert rep.weights[0] == pytest.approx(2.0)
        assert abs(rep.weights[-1]) < 1e-9

    def test_index_mismatch(self):
        G = adv.uniform_gamma(PARITY2)
        with pytest.raises(sim.SimulationError):
            sim.progress_measure(G, np.ones(4), [sim.QuantumState.basis(2, 1)])


class TestDistinguishability:
    def test_exact_algorithm(self):
        rep = sim.check_distinguishability(parity2(), PARITY2, 0.0)
        assert rep.threshold == 0.0
        assert len(rep.checked) == 4 and not rep.skipped
        assert max(ip for *_, ip in rep.checked) < 1e-9

    def test_threshold_formula(self):
        assert sim.epsilon_prime(1 / 3) == pytest.approx(2 * math.sqrt(2) / 3)

    def test_identical_states_are_skipped(self):
        rep = sim.check_distinguishability(idle(2), PARITY2, 0.25)
        assert not rep.checked and len(rep.skipped) == 4


def test_trace_dump_roundtrip():
    tr = sim.run(grover4(), "0100")
    steps = sim.load_trace(sim.dump_trace(tr))
    assert len(steps) == len(tr.states)
    for got, s in zip(steps, tr.states):
        assert np.allclose(got, s.amplitudes, atol=1e-11)
