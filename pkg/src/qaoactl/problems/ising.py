"""
Diagonal Ising Hamiltonians in the longitudinal-field convention

    H(z) = -sum_{i<j} J_ij z_i z_j - sum_i h_i z_i + c,   z in {-1, +1}^n.

Every compiler and evaluator in the package stores and reads coefficients in this sign
convention. Basis index k encodes qubit i in bit i (little-endian); bit 0 is spin +1, bit 1
is spin -1, and spin -1 marks membership in the decoded vertex set.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path

import numpy as np
import numpy.typing as npt

from qaoactl.core.config import get_settings
from qaoactl.core.errors import BudgetError, InvalidInputError, ReportIOError
from qaoactl.core.paths import ensure_parent

CONVENTION = "eq19-minus"

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class SpinConfig:
    spins: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(s not in (-1, 1) for s in self.spins):
            raise InvalidInputError(f"Spins must be -1 or +1, got {self.spins}")

    @property
    def n(self) -> int:
        return len(self.spins)

    @classmethod
    def from_index(cls, index: int, n: int) -> SpinConfig:
        return cls(tuple(-1 if (index >> i) & 1 else 1 for i in range(n)))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> SpinConfig:
        return cls(tuple(1 - 2 * int(b) for b in bits))

    @classmethod
    def from_vertex_set(cls, n: int, members: Iterable[int]) -> SpinConfig:
        chosen = set(members)
        return cls(tuple(-1 if i in chosen else 1 for i in range(n)))

    def to_index(self) -> int:
        return sum(1 << i for i, s in enumerate(self.spins) if s == -1)

    def bits(self) -> tuple[int, ...]:
        return tuple((1 - s) // 2 for s in self.spins)

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits())

    def vertex_set(self) -> frozenset[int]:
        return frozenset(i for i, s in enumerate(self.spins) if s == -1)


@dataclass(frozen=True)
class IsingModel:
    n: int
    couplings: tuple[tuple[int, int, float], ...] = ()
    fields: tuple[float, ...] = ()
    constant: float = 0.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidInputError(f"IsingModel needs at least one spin, got n={self.n}")
        merged: dict[tuple[int, int], float] = {}
        for i, j, value in self.couplings:
            if i == j:
                raise InvalidInputError(f"Self-coupling on spin {i} is not allowed")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidInputError(f"Coupling ({i}, {j}) out of range for n={self.n}")
            key = (min(i, j), max(i, j))
            merged[key] = merged.get(key, 0.0) + float(value)
        object.__setattr__(
            self,
            "couplings",
            tuple((i, j, value) for (i, j), value in sorted(merged.items()) if value != 0.0),
        )
        fields = tuple(float(h) for h in self.fields) if self.fields else (0.0,) * self.n
        if len(fields) != self.n:
            raise InvalidInputError(f"Expected {self.n} fields, got {len(fields)}")
        object.__setattr__(self, "fields", fields)
        object.__setattr__(self, "constant", float(self.constant))

    @classmethod
    def create(
        cls,
        n: int,
        couplings: Mapping[tuple[int, int], float] | None = None,
        fields: Iterable[float] | None = None,
        constant: float = 0.0,
    ) -> IsingModel:
        pairs = tuple((i, j, value) for (i, j), value in (couplings or {}).items())
        return cls(n=n, couplings=pairs, fields=tuple(fields) if fields is not None else (), constant=constant)

    @classmethod
    def zero(cls, n: int) -> IsingModel:
        return cls(n=n)

    @cached_property
    def coupling_map(self) -> dict[tuple[int, int], float]:
        return {(i, j): value for i, j, value in self.couplings}

    def coupling(self, i: int, j: int) -> float:
        return self.coupling_map.get((min(i, j), max(i, j)), 0.0)

    def is_uniform_coupling(self) -> bool:
        values = {value for _, _, value in self.couplings}
        return len(values) <= 1

    def uniform_coupling(self) -> float:
        """The shared J (0.0 for a coupling-free model); callers check is_uniform_coupling first."""
        return self.couplings[0][2] if self.couplings else 0.0

    @cached_property
    def diagonal(self) -> FloatArray:
        """Energy of every basis index, computed once per model and shared by the simulator."""
        return _energy_table(self)


def energy(m: IsingModel, z: SpinConfig) -> float:
    if z.n != m.n:
        raise InvalidInputError(f"Spin configuration has {z.n} spins, model has {m.n}")
    spins = z.spins
    total = m.constant
    for i, j, value in m.couplings:
        total -= value * spins[i] * spins[j]
    for i, h in enumerate(m.fields):
        total -= h * spins[i]
    return total


def energies(m: IsingModel, limit: int | None = None) -> FloatArray:
    ceiling = limit if limit is not None else get_settings().brute_force_limit
    if m.n > ceiling:
        raise BudgetError(f"Enumerating 2^{m.n} configurations exceeds the n <= {ceiling} ceiling")
    return m.diagonal


def _energy_table(m: IsingModel) -> FloatArray:
    index = np.arange(1 << m.n, dtype=np.int64)
    table = np.full(index.size, m.constant, dtype=np.float64)
    for i, j, value in m.couplings:
        # z_i z_j = +1 when bits agree, -1 otherwise
        parity = ((index >> i) ^ (index >> j)) & 1
        table -= value * (1.0 - 2.0 * parity)
    for i, h in enumerate(m.fields):
        if h != 0.0:
            table -= h * (1.0 - 2.0 * ((index >> i) & 1))
    return table


def shift_psd(m: IsingModel, v0: float | None = None) -> IsingModel:
    """Shift the constant so a negative minimum eigenvalue becomes exactly 0."""
    if v0 is None:
        limit = get_settings().brute_force_limit
        if m.n > limit:
            raise BudgetError(f"Cannot brute-force v0 for n={m.n} > {limit}; pass a known v0")
        v0 = float(np.min(energies(m)))
    if v0 >= 0.0:
        return m
    return replace(m, constant=m.constant - v0)


def combine(h_a: IsingModel, h_b: IsingModel, a: float, b: float) -> IsingModel:
    """a*H_a + b*H_b, coefficient by coefficient."""
    if h_a.n != h_b.n:
        raise InvalidInputError(f"Dimension mismatch: {h_a.n} vs {h_b.n} spins")
    if a <= 0 or b <= 0:
        raise InvalidInputError(f"Combination weights must be positive, got a={a}, b={b}")
    couplings: dict[tuple[int, int], float] = {}
    for i, j, value in h_a.couplings:
        couplings[(i, j)] = couplings.get((i, j), 0.0) + a * value
    for i, j, value in h_b.couplings:
        couplings[(i, j)] = couplings.get((i, j), 0.0) + b * value
    fields = [a * ha + b * hb for ha, hb in zip(h_a.fields, h_b.fields, strict=True)]
    return IsingModel.create(h_a.n, couplings, fields, a * h_a.constant + b * h_b.constant)


def brute_force(m: IsingModel) -> tuple[float, list[SpinConfig]]:
    """Exhaustive minimum and every minimizer (exact ties only)."""
    table = energies(m)
    minimum = float(table.min())
    indices = np.flatnonzero(table == minimum)
    return minimum, [SpinConfig.from_index(int(k), m.n) for k in indices]


def model_to_dict(m: IsingModel) -> dict[str, object]:
    return {
        "n": m.n,
        "convention": CONVENTION,
        "couplings": [[i, j, value] for i, j, value in m.couplings],
        "fields": list(m.fields),
        "constant": m.constant,
    }


def model_from_dict(data: Mapping[str, object]) -> IsingModel:
    convention = data.get("convention", CONVENTION)
    if convention != CONVENTION:
        raise InvalidInputError(f"Unsupported sign convention: {convention}")
    try:
        n = int(data["n"])  # type: ignore[call-overload]
        raw_couplings = data.get("couplings", [])
        couplings = tuple((int(i), int(j), float(v)) for i, j, v in raw_couplings)  # type: ignore[attr-defined]
        fields = tuple(float(h) for h in data.get("fields", []))  # type: ignore[attr-defined]
        constant = float(data.get("constant", 0.0))  # type: ignore[arg-type]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"Malformed model document: {exc}") from exc
    return IsingModel(n=n, couplings=couplings, fields=fields, constant=constant)


def save_model(m: IsingModel, path: Path) -> None:
    try:
        ensure_parent(path)
        path.write_text(json.dumps(model_to_dict(m), indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"Cannot write model to {path}: {exc}") from exc


def load_model(path: Path) -> IsingModel:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ReportIOError(f"Cannot read model from {path}: {exc}") from exc
    return model_from_dict(data)
