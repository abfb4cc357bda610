import itertools
import math

import numpy as np
import pytest

import oracles
from entdiag.chaos import (
    BudgetError,
    coefficient_entropy,
    light_cone,
    otoc_direct,
    otoc_profile,
    pauli_coefficients,
    pauli_reconstruct,
    pauli_string_matrix,
    sff,
    sff_pure_closed_form,
    spread_profile,
    thermal_spectrum,
    walk_model,
)
from entdiag.circuit import CircuitSpec
from entdiag.entanglement import ReducedState

LETTERS = "IXYZ"


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(1 << n, 1 << n)) + 1j * rng.normal(size=(1 << n, 1 << n))
    return (a + a.conj().T) / 2


def test_coefficients_match_per_string_trace():
    n = 3
    op = random_hermitian(n, 0)
    h = pauli_coefficients(op)
    for word in itertools.product(range(4), repeat=n):
        letters = {q: LETTERS[word[q]] for q in range(n)}
        idx = tuple(word[q] for q in range(n - 1, -1, -1))  # axis n-1-q holds qubit q
        assert abs(h[idx] - oracles.pauli_coefficient(op, letters, n)) < 1e-12


def test_reconstruction_and_norm():
    op = random_hermitian(4, 1)
    h = pauli_coefficients(op)
    assert np.linalg.norm(pauli_reconstruct(h) - op) < 1e-9
    assert abs(np.sum(np.abs(h) ** 2) - np.trace(op.conj().T @ op).real) < 1e-9


def test_single_and_identity_coefficients():
    h = pauli_coefficients(pauli_string_matrix({0: "z"}, 2))
    assert np.count_nonzero(np.abs(h) > 1e-12) == 1
    h = pauli_coefficients(np.eye(8))
    assert np.count_nonzero(np.abs(h) > 1e-12) == 1 and abs(h[0, 0, 0]) > 0


def test_budget():
    with pytest.raises(BudgetError):
        pauli_coefficients(np.eye(1 << 9))


@pytest.mark.parametrize("probe", ["x", "y", "z"])
def test_otoc_profile_equals_commutator(probe):
    n = 4
    op = random_hermitian(n, 2)
    prof = otoc_profile(pauli_coefficients(op), probe)
    for x in range(n):
        ref = oracles.otoc(op, x, probe, n)
        assert abs(prof[x] - ref) < 1e-10
        assert abs(otoc_direct(op, x, probe) - ref) < 1e-10


def test_spread_t0_locality():
    spec = CircuitSpec.random(6, 4, seed=0)
    op = pauli_string_matrix({0: "z"}, 6)
    prof = spread_profile(op, spec, [0], probe="z")
    assert np.all(np.abs(prof.C[0]) < 1e-14)
    prof = spread_profile(op, spec, [0], probe="x")
    assert prof.C[0, 0] > 0 and np.all(np.abs(prof.C[0, 1:]) < 1e-14)


def test_spread_norm_conserved_and_cone():
    n, L = 8, 6
    spec = CircuitSpec.random(n, L, seed=4)
    op = pauli_string_matrix({3: "z"}, n)
    prof = spread_profile(op, spec, range(L + 1), probe="x", support=[3])
    assert np.ptp(prof.norm2) < 1e-9
    assert np.all(prof.C >= -1e-15)
    for t, cone in zip(prof.times, prof.cones):
        outside = [x for x in range(n) if x not in cone]
        assert np.all(np.abs(prof.C[t, outside]) < 1e-12)
        assert len(cone) <= min(n, 1 + 2 * t)


def test_coefficient_entropy_simple():
    assert coefficient_entropy(pauli_coefficients(pauli_string_matrix({1: "x"}, 3))) == 0
    # X + Z: two equal weights
    op = pauli_string_matrix({0: "x"}, 2) + pauli_string_matrix({0: "z"}, 2)
    assert abs(coefficient_entropy(pauli_coefficients(op)) - 1) < 1e-12


def test_sff_pure_and_mixed():
    taus = np.linspace(0, 20, 81)
    for N in (2, 4, 16):
        eigs = np.zeros(N)
        eigs[0] = 1
        np.testing.assert_allclose(sff(eigs, taus).values, sff_pure_closed_form(N, taus), atol=1e-10)
        np.testing.assert_allclose(sff(ReducedState.maximally_mixed(int(math.log2(N))), taus).values, 1, atol=1e-12)


def test_sff_matches_expm():
    rho = ReducedState(oracles.reduced(np.random.default_rng(0).normal(size=64) / 8.0 + 0j, 3))
    rho = ReducedState(rho.rho / np.trace(rho.rho))
    res = sff(rho, [0.0, 0.7, 3.0, 11.0])
    for t, v in res.rows():
        assert abs(v - oracles.sff_direct(rho.rho, t)) < 1e-10
    assert res.values[0] == 1.0


def test_sff_labels():
    assert sff(np.full(8, 1 / 8), [0.0], label="qubits").n_label == 3
    assert sff(np.full(8, 1 / 8), [0.0]).n_label == 8


def test_thermal_spectrum_normalised():
    p = thermal_spectrum(np.linspace(-1, 1, 16), 2.0)
    assert abs(p.sum() - 1) < 1e-15 and np.all(np.diff(p) <= 0)


def test_light_cone_growth():
    spec = CircuitSpec.random(10, 5, seed=0)
    sizes = [len(light_cone(spec, [4], t)) for t in range(6)]
    assert sizes[0] == 1 and all(b >= a for a, b in zip(sizes, sizes[1:]))


def test_walk_model():
    # dyadic p and t keep every operation exact in binary floating point
    for p in (0.0, 0.125, 0.25, 0.5, 0.75, 1.0):
        for t in (0.0, 1.0, 8.0):
            w = walk_model(p, t)
            assert w.mu == (1 - 2 * p) * t
            if t:
                assert w.mu / t + 2 * p == 1
            assert w.var == 2 * p * (1 - p) * t and w.sigma == math.sqrt(w.var)
    for p in (0.2, 0.3, 0.9):
        w = walk_model(p, 7.0)
        assert abs(w.mu / 7.0 + 2 * p - 1) <= 2 * np.finfo(float).eps
        assert w.var == 2 * p * (1 - p) * 7.0
    assert walk_model(0.5, 3).mu == 0 and walk_model(0.5, 3).v_B == 0
    assert walk_model(0.2, 10).mu == pytest.approx(6.0)
    with pytest.raises(ValueError):
        walk_model(1.5, 1)
