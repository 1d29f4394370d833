"""
Brute-force spectral bookkeeping for a constraint/objective Hamiltonian pair.

For every distinct value w_i of H_b (ascending) the report keeps e_i, the smallest H_a value
inside that H_b eigenspace. o is the first level whose e_o reaches the H_a ground energy v0;
U and L bound w_o - w_i and e_i - v0 over the infeasible levels i < o, and a > b*U/L makes
the ground states of a*H_a + b*H_b exactly the constrained optima.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qaoactl.core.config import get_settings
from qaoactl.core.errors import BudgetError, InvalidInputError
from qaoactl.problems.ising import IsingModel, SpinConfig, combine, energies

LEVEL_TOL = 1e-9


@dataclass(frozen=True)
class SpectrumReport:
    levels: tuple[float, ...]
    e: tuple[float, ...]
    v0: float
    o: int
    U: float | None
    L: float | None

    @property
    def feasible_threshold(self) -> float | None:
        if self.U is None or self.L is None:
            return None
        return self.U / self.L

    def to_dict(self) -> dict[str, object]:
        return {
            "levels": list(self.levels),
            "e": list(self.e),
            "v0": self.v0,
            "o": self.o,
            "U": self.U,
            "L": self.L,
            "feasible_threshold": self.feasible_threshold,
        }


@dataclass(frozen=True)
class Theorem1Certificate:
    holds: bool
    a: float
    b: float
    combined_minimum: float
    ground_states: tuple[SpinConfig, ...]
    optimal_feasible: tuple[SpinConfig, ...]
    violations: tuple[SpinConfig, ...]

    def to_dict(self) -> dict[str, object]:
        return {
            "holds": self.holds,
            "a": self.a,
            "b": self.b,
            "combined_minimum": self.combined_minimum,
            "ground_states": [z.bitstring() for z in self.ground_states],
            "optimal_feasible": [z.bitstring() for z in self.optimal_feasible],
            "violations": [z.bitstring() for z in self.violations],
        }


def _tables(h_a: IsingModel, h_b: IsingModel) -> tuple[np.ndarray, np.ndarray]:
    if h_a.n != h_b.n:
        raise InvalidInputError(f"Dimension mismatch: {h_a.n} vs {h_b.n} spins")
    limit = get_settings().spectrum_limit
    if h_a.n > limit:
        raise BudgetError(f"Spectrum bucketing is capped at n <= {limit}, got {h_a.n}")
    return energies(h_a), energies(h_b)


def spectrum_analysis(h_a: IsingModel, h_b: IsingModel, tol: float = LEVEL_TOL) -> SpectrumReport:
    table_a, table_b = _tables(h_a, h_b)
    v0 = float(table_a.min())
    if v0 < -tol:
        raise InvalidInputError(f"H_a is not positive semidefinite (v0={v0}); apply shift_psd first")

    order = np.argsort(table_b, kind="stable")
    sorted_b = table_b[order]
    starts = np.concatenate(([True], np.diff(sorted_b) > tol))
    level_sorted = np.cumsum(starts) - 1
    level_of = np.empty_like(level_sorted)
    level_of[order] = level_sorted
    levels = sorted_b[starts]

    e = np.full(levels.size, np.inf)
    np.minimum.at(e, level_of, table_a)

    o = int(np.flatnonzero(np.abs(e - v0) <= tol)[0])
    if o == 0:
        return SpectrumReport(tuple(levels.tolist()), tuple(e.tolist()), v0, 0, None, None)
    upper = float(levels[o] - levels[:o].min())
    lower = float((e[:o] - v0).min())
    return SpectrumReport(tuple(levels.tolist()), tuple(e.tolist()), v0, o, upper, lower)


def verify_theorem1(
    h_a: IsingModel, h_b: IsingModel, a: float, b: float, tol: float = LEVEL_TOL
) -> Theorem1Certificate:
    """Check that the ground states of a*H_a + b*H_b are exactly the constrained optima."""
    table_a, table_b = _tables(h_a, h_b)
    combined = energies(combine(h_a, h_b, a, b))
    minimum = float(combined.min())
    scale = max(1.0, abs(minimum))
    ground = combined <= minimum + tol * scale

    feasible = table_a <= table_a.min() + tol
    best_objective = table_b[feasible].min()
    optimal = feasible & (table_b <= best_objective + tol)

    n = h_a.n

    def configs(mask: np.ndarray) -> tuple[SpinConfig, ...]:
        return tuple(SpinConfig.from_index(int(k), n) for k in np.flatnonzero(mask))

    violations = configs(ground ^ optimal)
    return Theorem1Certificate(
        holds=not violations,
        a=a,
        b=b,
        combined_minimum=minimum,
        ground_states=configs(ground),
        optimal_feasible=configs(optimal),
        violations=violations,
    )
