from __future__ import annotations

import itertools
import math
from functools import reduce

import numpy as np
import pytest
from scipy.linalg import expm

from qaoactl.core.errors import BudgetError, InvalidInputError
from qaoactl.problems.compilers import build_mvc
from qaoactl.problems.graph import Graph
from qaoactl.problems.ising import IsingModel, SpinConfig, energy
from qaoactl.sim.params import ParamPoint
from qaoactl.sim.statevector import (
    QuantumState,
    ansatz,
    apply_mixer,
    apply_phase,
    basis_state,
    expectation,
    expectation_z,
    expectation_zz,
    prepare_plus,
    sample,
    solution_probability,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
IDENTITY = np.eye(2, dtype=np.complex128)


def _on_qubit(op: np.ndarray, q: int, n: int) -> np.ndarray:
    # qubit 0 is the least significant index bit, i.e. the rightmost kron factor
    factors = [op if n - 1 - k == q else IDENTITY for k in range(n)]
    return reduce(np.kron, factors)


def _mixer_matrix(n: int, beta: float) -> np.ndarray:
    total = sum(_on_qubit(PAULI_X, q, n) for q in range(n))
    return expm(-1j * beta * total)


def _phase_matrix(m: IsingModel, gamma: float) -> np.ndarray:
    diag = np.array([energy(m, SpinConfig.from_index(k, m.n)) for k in range(1 << m.n)])
    return expm(-1j * gamma * np.diag(diag))


def _random_model(rng: np.random.Generator, n: int) -> IsingModel:
    couplings = {(i, j): float(rng.normal()) for i, j in itertools.combinations(range(n), 2) if rng.random() < 0.5}
    return IsingModel.create(n, couplings, rng.normal(size=n).tolist(), float(rng.normal()))


def test_prepare_plus() -> None:
    one = prepare_plus(1)
    np.testing.assert_allclose(one.amplitudes, [1 / math.sqrt(2)] * 2)
    np.testing.assert_allclose(prepare_plus(2).amplitudes, [0.5] * 4)
    assert prepare_plus(10).norm() == pytest.approx(1.0, abs=1e-12)


def test_prepare_plus_respects_ceiling() -> None:
    with pytest.raises(BudgetError):
        prepare_plus(25)
    with pytest.raises(BudgetError):
        prepare_plus(0)


def test_mixer_quarter_turn_flips_qubit() -> None:
    flipped = apply_mixer(basis_state(SpinConfig((1,))), math.pi / 2)
    np.testing.assert_allclose(flipped.amplitudes, [0.0, -1j], atol=1e-15)


def test_mixer_matches_dense_exponential() -> None:
    rng = np.random.default_rng(1)
    raw = rng.normal(size=8) + 1j * rng.normal(size=8)
    state = QuantumState(3, raw / np.linalg.norm(raw))
    result = apply_mixer(state, 0.4)
    np.testing.assert_allclose(result.amplitudes, _mixer_matrix(3, 0.4) @ state.amplitudes, atol=1e-12)
    assert result.norm() == pytest.approx(1.0, abs=1e-12)


def test_phase_matches_dense_exponential_and_keeps_magnitudes() -> None:
    model = build_mvc(Graph.from_edges(2, [(0, 1)]), 2.0, 1.0)
    state = apply_mixer(prepare_plus(2), 0.3)
    phased = apply_phase(state, model, 0.3)
    np.testing.assert_allclose(phased.amplitudes, _phase_matrix(model, 0.3) @ state.amplitudes, atol=1e-12)
    np.testing.assert_allclose(np.abs(phased.amplitudes), np.abs(state.amplitudes), atol=1e-15)
    np.testing.assert_allclose(apply_phase(state, model, 0.0).amplitudes, state.amplitudes)


def test_phase_dimension_mismatch() -> None:
    with pytest.raises(InvalidInputError):
        apply_phase(prepare_plus(2), IsingModel.zero(3), 0.1)


def test_ansatz_matches_composed_dense_unitaries() -> None:
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        model = _random_model(rng, n)
        depth = int(rng.integers(1, 4))
        params = ParamPoint(tuple(rng.uniform(-3, 3, depth)), tuple(rng.uniform(-3, 3, depth)))
        dense = np.full(1 << n, 2 ** (-n / 2), dtype=np.complex128)
        for gamma, beta in zip(params.gammas, params.betas, strict=True):
            dense = _mixer_matrix(n, beta) @ (_phase_matrix(model, gamma) @ dense)
        result = ansatz(model, params)
        np.testing.assert_allclose(result.amplitudes, dense, atol=1e-10)
        assert result.norm() == pytest.approx(1.0, abs=1e-12)


def test_ansatz_at_zero_angles_is_plus_state() -> None:
    model = _random_model(np.random.default_rng(2), 4)
    np.testing.assert_allclose(ansatz(model, ParamPoint.zeros(1)).amplitudes, prepare_plus(4).amplitudes)
    with pytest.raises(InvalidInputError):
        ansatz(model, ParamPoint.zeros(0))


def test_expectation_on_plus_and_basis_states() -> None:
    model = _random_model(np.random.default_rng(4), 4)
    assert expectation(prepare_plus(4), model) == pytest.approx(model.constant, abs=1e-12)
    z = SpinConfig((1, -1, -1, 1))
    assert expectation(basis_state(z), model) == pytest.approx(energy(model, z), abs=1e-12)
    assert expectation_z(basis_state(z), 1) == -1.0
    assert expectation_zz(basis_state(z), 1, 2) == 1.0
    assert expectation_z(prepare_plus(3), 0) == pytest.approx(0.0, abs=1e-15)


def test_expectation_is_two_pi_periodic_for_integer_coefficients() -> None:
    model = IsingModel.create(3, {(0, 1): 1.0, (1, 2): -2.0}, [1.0, 0.0, -1.0], 0.37)
    rng = np.random.default_rng(9)
    for _ in range(5):
        gamma, beta = rng.uniform(-3, 3, 2)
        base = expectation(ansatz(model, ParamPoint.of(gamma, beta)), model)
        shifted = expectation(ansatz(model, ParamPoint.of(gamma + 2 * math.pi, beta)), model)
        assert shifted == pytest.approx(base, abs=1e-10)


def test_solution_probability() -> None:
    targets = [SpinConfig.from_index(k, 3) for k in (0, 5)]
    assert solution_probability(prepare_plus(3), targets) == pytest.approx(2 / 8)
    assert solution_probability(basis_state(targets[1]), targets) == pytest.approx(1.0)
    with pytest.raises(InvalidInputError):
        solution_probability(prepare_plus(3), [])


def test_sampling() -> None:
    z = SpinConfig((1, -1))
    assert sample(basis_state(z), 100, seed=0) == [z] * 100
    draws = sample(prepare_plus(1), 100_000, seed=3)
    ones = sum(1 for d in draws if d.spins == (-1,))
    assert abs(ones / len(draws) - 0.5) < 0.01
    assert sample(prepare_plus(3), 50, seed=11) == sample(prepare_plus(3), 50, seed=11)
    with pytest.raises(InvalidInputError):
        sample(prepare_plus(1), 0, seed=0)
