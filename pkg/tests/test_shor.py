import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bits_of, brute_order
from qnet import network as net
from qnet.gates import apply
from qnet.measure import make_rng
from qnet.numtheory import gcd, is_prime
from qnet.shor import (
    FactorConfig,
    ancilla_labels,
    factor_attempt,
    factor_find,
    find_order,
    fourier_ancilla_state,
    fourier_cycle_state,
    kickback_network,
    measured_qft_network,
    mod_mul_operator,
    order_finding_attempt,
    order_finding_network,
    powered,
    quantum_order_find,
    run_factor_find,
    system_labels,
    _kicked_state,
)
from qnet.statevec import CapacityError, allclose, from_amplitudes, logical_state, tensor


def basis(x, n):
    return logical_state(zip(system_labels(n), [(x >> (n - 1 - j)) & 1 for j in range(n)]))


def coprime_pairs(max_n):
    return [(q, N) for N in range(3, max_n + 1) for q in range(2, N) if math.gcd(q, N) == 1]


class TestModMul:
    def test_walks_the_cycle(self):
        op = mod_mul_operator(8, 15)
        assert op(1) == 8 and op(8) == 4
        x = 1
        for _ in range(4):
            x = op(x)
        assert x == 1

    def test_padding_is_fixed(self):
        assert mod_mul_operator(8, 15)(15) == 15

    def test_gate_acts_on_basis_states(self):
        op = mod_mul_operator(8, 15)
        out = apply(basis(1, 4), op.gate(), system_labels(4))
        assert allclose(out, basis(8, 4))

    def test_rejects_shared_factor(self):
        with pytest.raises(ValueError):
            mod_mul_operator(6, 15)

    def test_is_a_permutation_whose_cycle_length_is_the_order(self):
        for q, N in coprime_pairs(40):
            perm = mod_mul_operator(q, N).permutation()
            assert sorted(perm) == list(range(len(perm)))
            x, steps = perm[1], 1
            while x != 1:
                x, steps = perm[x], steps + 1
            assert steps == brute_order(q, N)

    def test_powered(self):
        op = mod_mul_operator(8, 15)
        assert powered(op, 1) == op
        assert powered(op, 2).q == pow(8, 2, 15) == 4
        p4 = powered(op, 4)
        assert all(p4(x) == x for x in (1, 8, 4, 2))
        with pytest.raises(ValueError):
            powered(op, 3)

    def test_powered_matches_pow(self):
        for q, N in coprime_pairs(30):
            op = mod_mul_operator(q, N)
            for l in range(6):
                assert powered(op, 2**l).q == pow(q, 2**l, N)


class TestFourierStates:
    def test_opposite_phase_convention_is_the_same_set(self):
        # (|1> + i|8> - |4> - i|2>)/2 has eigenvalue -i under f, so it is psi_3 here
        alt = np.zeros(16, complex)
        alt[[1, 8, 4, 2]] = np.array([1, 1j, -1, -1j]) / 2
        assert np.allclose(fourier_cycle_state(8, 15, 3).amps, alt, atol=1e-15)
        out = apply(from_amplitudes(system_labels(4), alt), mod_mul_operator(8, 15).gate(), system_labels(4))
        assert np.allclose(out.amps, -1j * alt, atol=1e-15)

    def test_psi1_has_eigenvalue_i(self):
        psi = fourier_cycle_state(8, 15, 1)
        expected = np.zeros(16, complex)
        expected[[1, 8, 4, 2]] = np.array([1, -1j, -1, 1j]) / 2
        assert np.allclose(psi.amps, expected, atol=1e-15)
        out = apply(psi, mod_mul_operator(8, 15).gate(), psi.labels)
        assert np.allclose(out.amps, 1j * psi.amps, atol=1e-15)

    def test_psi2(self):
        expected = np.zeros(16, complex)
        expected[[1, 8, 4, 2]] = np.array([1, -1, 1, -1]) / 2
        assert np.allclose(fourier_cycle_state(8, 15, 2).amps, expected, atol=1e-15)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            fourier_cycle_state(8, 15, 4)

    def test_eigenvectors_for_small_moduli(self):
        for q, N in coprime_pairs(21):
            op = mod_mul_operator(q, N)
            k = brute_order(q, N)
            for m in range(k):
                psi = fourier_cycle_state(q, N, m)
                out = apply(psi, op.gate(), psi.labels)
                assert np.linalg.norm(out.amps - np.exp(2j * np.pi * m / k) * psi.amps) <= 1e-10

    def test_resolution_of_one(self):
        for q, N in coprime_pairs(21):
            k = brute_order(q, N)
            total = sum(fourier_cycle_state(q, N, m).amps for m in range(k)) / np.sqrt(k)
            assert np.max(np.abs(total - basis(1, op_n(N)).amps)) <= 1e-12


def op_n(N):
    return (N - 1).bit_length()


class TestKickback:
    @pytest.mark.parametrize("m", range(4))
    def test_one_ancilla(self, m):
        psi = fourier_cycle_state(8, 15, m)
        out = net.execute(kickback_network(mod_mul_operator(8, 15), 1), make_rng(0), initial=psi).final
        anc = from_amplitudes(["anc0"], np.array([1, 1j**m]) / np.sqrt(2))
        assert allclose(out, tensor(psi, anc), atol=1e-12)

    @pytest.mark.parametrize("m", range(4))
    def test_two_ancillas(self, m):
        psi = fourier_cycle_state(8, 15, m)
        out = net.execute(kickback_network(mod_mul_operator(8, 15), 2), make_rng(0), initial=psi).final
        u = from_amplitudes(ancilla_labels(2), [1j ** (b * m) / 2 for b in range(4)])
        assert allclose(out, tensor(psi, u), atol=1e-12)
        assert allclose(u, fourier_ancilla_state(m, 2), atol=1e-12)

    def test_correlated_output_from_one(self):
        out = _kicked_state(8, 15, 2)
        expected = sum(
            tensor(fourier_cycle_state(8, 15, m), fourier_ancilla_state(m, 2)).amps for m in range(4)
        ) / 2
        assert np.max(np.abs(out.amps - expected)) <= 1e-12

    def test_capacity(self):
        with pytest.raises(CapacityError):
            kickback_network(mod_mul_operator(2, 15), 21)


class TestMeasuredQFT:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_reads_fourier_inputs_exactly(self, m):
        prog = measured_qft_network(m)
        rng = make_rng(m)
        for a in range(2**m):
            u = fourier_ancilla_state(a, m)
            for _ in range(100):
                bits = net.execute(prog, rng, initial=u).classical_bits
                assert [bits[f"a{j}"] for j in range(m)] == bits_of(a, m)

    @pytest.mark.parametrize("a", range(4))
    def test_first_checkpoint_holds_low_bit(self, a):
        trace = net.execute(measured_qft_network(2, checkpoints=True), make_rng(0), initial=fourier_ancilla_state(a, 2))
        s = trace.checkpoints["h0"]
        top = s.labels.index("anc1")
        halves = np.moveaxis(s.amps.reshape(2, 2), top, 0)
        assert np.linalg.norm(halves[1 - (a & 1)]) <= 1e-12

    def test_uses_conditioned_phases(self):
        ins = measured_qft_network(3).instructions
        conds = [i.condition for i in ins if i.condition]
        assert conds == ["a0", "a0", "a1"]


def exact_a_distribution(q, N, m):
    """P(a) = sum_x |<u_a| ancillas given x>|^2 from the kicked state, via FFT."""
    s = _kicked_state(q, N, m)
    blocks = s.amps.reshape(2 ** op_n(N), 2**m)
    return (np.abs(np.fft.fft(blocks, axis=1)) ** 2).sum(axis=0) / 2**m


class TestOrderFinding:
    def test_network_is_valid(self):
        prog = order_finding_network(8, 15, 2)
        assert net.validate(prog) == []
        bits = net.execute(prog, make_rng(1)).classical_bits
        assert set(bits) == {"a0", "a1"}

    def test_uniform_outcomes_for_two_ancillas(self):
        assert np.allclose(exact_a_distribution(8, 15, 2), 0.25, atol=1e-12)

    @pytest.mark.parametrize("q,N,m", [(8, 15, 4), (2, 21, 5)])
    def test_sampling_paths_match_exact_distribution(self, q, N, m):
        p = exact_a_distribution(q, N, m)
        for full in (False, True):
            rng = make_rng(11)
            n = 3000
            counts = Counter(order_finding_attempt(q, N, rng, m, full_register=full).a for _ in range(n))
            freq = np.array([counts[a] / n for a in range(2**m)])
            assert 0.5 * np.abs(freq - p).sum() <= 0.06

    @pytest.mark.parametrize("q,N", [(8, 15), (2, 15), (2, 21), (11, 21), (4, 15)])
    def test_quantum_order(self, q, N):
        assert quantum_order_find(q, N, make_rng(5)) == brute_order(q, N)

    def test_classical_backend(self):
        res = find_order(2, 149573, make_rng(0), backend="classical")
        assert res.order == brute_order(2, 149573) and res.backend == "classical"

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            find_order(2, 15, make_rng(0), backend="analog")

    def test_attempt_record(self):
        att = order_finding_attempt(8, 15, make_rng(3), 2)
        assert att.a == sum(b << j for j, b in enumerate(att.measured_bits))
        if att.order is not None:
            assert att.order == 4

    def test_capacity(self):
        with pytest.raises(CapacityError):
            order_finding_attempt(2, 15, make_rng(0), 21)


class TestFactoring:
    def test_fifteen_with_q2(self):
        rec = factor_attempt(15, 2, make_rng(0))
        assert rec is not None and rec.order == 4 and rec.r == 4 and rec.factor in (3, 5)

    def test_twenty_one_with_q2(self):
        rec = factor_attempt(21, 2, make_rng(0))
        assert rec.order == 6 and rec.r == 8 and rec.factor == 7
        assert gcd(rec.r + 1, 21) == 3

    def test_gcd_shortcut(self):
        rec = factor_attempt(15, 6, make_rng(0))
        assert rec.backend == "gcd" and rec.factor == 3

    def test_even_and_prime_power(self):
        assert run_factor_find(22, make_rng(0)).factor == 2
        rec = run_factor_find(343, make_rng(0))
        assert rec.backend == "prime-power" and rec.factor == 7

    def test_prime_rejected(self):
        with pytest.raises(ValueError):
            factor_find(13, make_rng(0))

    def test_small_modulus_rejected(self):
        with pytest.raises(ValueError):
            factor_find(3, make_rng(0))

    def test_record_json_keys(self):
        rec = run_factor_find(15, make_rng(2))
        assert list(rec.to_json()) == ["N", "q", "backend", "m", "measured_bits", "a", "fraction", "order", "r", "factor", "attempts"]

    def test_classical_path_for_large_n(self):
        rec = run_factor_find(149573, make_rng(0))
        assert rec.backend in ("classical", "gcd") and rec.factor in (373, 401)

    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from([n for n in range(4, 34) if not is_prime(n)]), st.integers(0, 2**32 - 1))
    def test_factor_divides(self, N, seed):
        f = factor_find(N, make_rng(seed))
        assert 1 < f < N and N % f == 0

    def test_same_seed_same_record(self):
        a = run_factor_find(21, make_rng(9), FactorConfig(m=6)).to_json()
        b = run_factor_find(21, make_rng(9), FactorConfig(m=6)).to_json()
        assert a == b
