"""
Dense statevector simulation of the QAOA ansatz

    |gamma, beta> = prod_k exp(-i beta_k H_x) exp(-i gamma_k H) |+>^n,   H_x = sum_i X_i.

Amplitude index k holds qubit i in bit i; bit 0 is spin +1. The problem phase reuses the
model's cached diagonal, so repeated evaluations of one model never rebuild it.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from qaoactl.core.config import get_settings
from qaoactl.core.errors import BudgetError, InvalidInputError
from qaoactl.problems.ising import IsingModel, SpinConfig
from qaoactl.sim.params import ParamPoint

ComplexArray = npt.NDArray[np.complex128]


@dataclass(frozen=True, eq=False)
class QuantumState:
    n: int
    amplitudes: ComplexArray

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (1 << self.n,):
            raise InvalidInputError(f"Expected {1 << self.n} amplitudes for n={self.n}")

    def probabilities(self) -> npt.NDArray[np.float64]:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sqrt(self.probabilities().sum()))


def _check_size(n: int) -> None:
    limit = get_settings().statevector_limit
    if not 1 <= n <= limit:
        raise BudgetError(f"Statevector simulation supports 1 <= n <= {limit}, got {n}")


def _check_model(s: QuantumState, m: IsingModel) -> None:
    if s.n != m.n:
        raise InvalidInputError(f"State has {s.n} qubits, model has {m.n} spins")


def prepare_plus(n: int) -> QuantumState:
    _check_size(n)
    size = 1 << n
    return QuantumState(n, np.full(size, 1.0 / np.sqrt(size), dtype=np.complex128))


def basis_state(z: SpinConfig) -> QuantumState:
    _check_size(z.n)
    amplitudes = np.zeros(1 << z.n, dtype=np.complex128)
    amplitudes[z.to_index()] = 1.0
    return QuantumState(z.n, amplitudes)


def apply_phase(s: QuantumState, m: IsingModel, gamma: float) -> QuantumState:
    _check_model(s, m)
    return QuantumState(s.n, s.amplitudes * np.exp(-1j * gamma * m.diagonal))


def apply_mixer(s: QuantumState, beta: float) -> QuantumState:
    """exp(-i beta X_q) on every qubit: amp(k) -> cos(beta) amp(k) - i sin(beta) amp(k ^ 2^q)."""
    c, sn = np.cos(beta), np.sin(beta)
    state = s.amplitudes.copy()
    for q in range(s.n):
        view = state.reshape(-1, 2, 1 << q)
        low = view[:, 0, :].copy()
        high = view[:, 1, :]
        view[:, 0, :] = c * low - 1j * sn * high
        view[:, 1, :] = c * high - 1j * sn * low
    return QuantumState(s.n, state)


def ansatz(m: IsingModel, params: ParamPoint) -> QuantumState:
    if params.depth < 1:
        raise InvalidInputError("The ansatz needs depth p >= 1")
    state = prepare_plus(m.n)
    for gamma, beta in zip(params.gammas, params.betas, strict=True):
        state = apply_mixer(apply_phase(state, m, gamma), beta)
    return state


def expectation(s: QuantumState, m: IsingModel) -> float:
    _check_model(s, m)
    return float(np.dot(s.probabilities(), m.diagonal))


def _spin_column(n: int, u: int) -> npt.NDArray[np.float64]:
    if not 0 <= u < n:
        raise InvalidInputError(f"Qubit {u} out of range for n={n}")
    index = np.arange(1 << n, dtype=np.int64)
    return 1.0 - 2.0 * ((index >> u) & 1)


def expectation_z(s: QuantumState, u: int) -> float:
    return float(np.dot(s.probabilities(), _spin_column(s.n, u)))


def expectation_zz(s: QuantumState, u: int, v: int) -> float:
    return float(np.dot(s.probabilities(), _spin_column(s.n, u) * _spin_column(s.n, v)))


def solution_probability(s: QuantumState, targets: Sequence[SpinConfig]) -> float:
    if not targets:
        raise InvalidInputError("solution_probability needs at least one target configuration")
    indices = sorted({z.to_index() for z in targets})
    if any(z.n != s.n for z in targets):
        raise InvalidInputError("Target configurations must match the state's qubit count")
    return float(s.probabilities()[indices].sum())


def sample(s: QuantumState, shots: int, seed: int) -> list[SpinConfig]:
    if shots < 1:
        raise InvalidInputError(f"shots must be positive, got {shots}")
    probabilities = s.probabilities()
    rng = np.random.default_rng(seed)
    draws = rng.choice(probabilities.size, size=shots, p=probabilities / probabilities.sum())
    return [SpinConfig.from_index(int(k), s.n) for k in draws]
