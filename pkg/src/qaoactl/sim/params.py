from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from qaoactl.core.errors import InvalidInputError


@dataclass(frozen=True)
class ParamPoint:
    """QAOA angles of depth p: gammas drive the problem phase, betas the transverse mixer."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self) -> None:
        gammas = tuple(float(x) for x in self.gammas)
        betas = tuple(float(x) for x in self.betas)
        if len(gammas) != len(betas):
            raise InvalidInputError(f"Depth mismatch: {len(gammas)} gammas vs {len(betas)} betas")
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "betas", betas)

    @property
    def depth(self) -> int:
        return len(self.gammas)

    @classmethod
    def of(cls, gamma: float, beta: float) -> ParamPoint:
        return cls((gamma,), (beta,))

    @classmethod
    def zeros(cls, depth: int) -> ParamPoint:
        return cls((0.0,) * depth, (0.0,) * depth)

    @classmethod
    def from_vector(cls, vector: Sequence[float] | npt.NDArray[np.float64]) -> ParamPoint:
        values = [float(x) for x in vector]
        if len(values) % 2:
            raise InvalidInputError(f"Parameter vector needs an even length, got {len(values)}")
        depth = len(values) // 2
        return cls(tuple(values[:depth]), tuple(values[depth:]))

    def as_vector(self) -> npt.NDArray[np.float64]:
        return np.array(self.gammas + self.betas, dtype=np.float64)

    def extended(self) -> ParamPoint:
        """Same state with one extra identity layer (gamma = beta = 0) appended."""
        return ParamPoint(self.gammas + (0.0,), self.betas + (0.0,))

    def wrapped(self) -> ParamPoint:
        """Display form with gammas in [0, 2pi) and betas in [0, pi)."""
        return ParamPoint(
            tuple(g % (2 * math.pi) for g in self.gammas),
            tuple(b % math.pi for b in self.betas),
        )


def sample_point(rng: np.random.Generator, depth: int, box: tuple[float, float, float, float]) -> ParamPoint:
    gamma_low, gamma_high, beta_low, beta_high = box
    gammas = rng.uniform(gamma_low, gamma_high, size=depth)
    betas = rng.uniform(beta_low, beta_high, size=depth)
    return ParamPoint(tuple(gammas.tolist()), tuple(betas.tolist()))
