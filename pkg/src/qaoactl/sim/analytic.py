"""
Closed-form depth-1 QAOA loss for Ising models with one shared coupling J.

With c = cos(2J gamma) and the degrees d_u and common-neighbour counts f_uv taken on the
coupling graph (edges = nonzero J_ij):

    <Z_u>     = sin(2 beta) sin(-2 h_u gamma) c^{d_u}
    <Z_u Z_v> = 1/2 [ sin(4 beta) sin(-2J gamma) (cos(2 h_u gamma) c^{d_u-1} + cos(2 h_v gamma) c^{d_v-1})
                      + sin^2(2 beta) c^{d_u+d_v-2f-2} ( sin(2 h_u gamma) sin(2 h_v gamma) (1 + cos^f(4J gamma))
                                                       + cos(2 h_u gamma) cos(2 h_v gamma) (1 - cos^f(4J gamma)) ) ]
    F_1       = -J sum_edges <Z_u Z_v> - sum_u h_u <Z_u> + c0

Every evaluation is O(n + m); nothing here touches a statevector. Powers use x^0 = 1,
including x = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt
from scipy import optimize, sparse

from qaoactl.core.errors import InvalidInputError, ScopeError
from qaoactl.problems.ising import IsingModel

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]
ArrayLike = float | FloatArray


@dataclass(frozen=True, eq=False)
class AnalyticContext:
    model: IsingModel
    coupling: float
    fields: FloatArray
    degrees: IntArray
    edge_u: IntArray
    edge_v: IntArray
    common: IntArray

    @classmethod
    def from_model(cls, m: IsingModel) -> AnalyticContext:
        if not m.is_uniform_coupling():
            raise ScopeError("The closed-form F_1 needs a single shared coupling J on every edge")
        edge_u = np.array([i for i, _, _ in m.couplings], dtype=np.int64)
        edge_v = np.array([j for _, j, _ in m.couplings], dtype=np.int64)
        degrees = np.bincount(np.concatenate([edge_u, edge_v]), minlength=m.n).astype(np.int64)
        return cls(
            model=m,
            coupling=m.uniform_coupling(),
            fields=np.array(m.fields, dtype=np.float64),
            degrees=degrees,
            edge_u=edge_u,
            edge_v=edge_v,
            common=_common_neighbours(m.n, edge_u, edge_v),
        )

    @property
    def n(self) -> int:
        return self.model.n

    @property
    def constant(self) -> float:
        return self.model.constant

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(int(u), int(v)): k for k, (u, v) in enumerate(zip(self.edge_u, self.edge_v, strict=True))}


def _common_neighbours(n: int, edge_u: IntArray, edge_v: IntArray) -> IntArray:
    if edge_u.size == 0:
        return np.zeros(0, dtype=np.int64)
    rows = np.concatenate([edge_u, edge_v])
    cols = np.concatenate([edge_v, edge_u])
    adjacency = sparse.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
    paths = adjacency @ adjacency
    return np.asarray(paths[edge_u, edge_v]).ravel().astype(np.int64)


@dataclass(frozen=True)
class GridMinimum:
    gamma: float
    beta: float
    value: float


def _dpow(base: FloatArray, exponent: IntArray, dbase: FloatArray) -> FloatArray:
    """d/dx base(x)^k = k base^(k-1) base'(x), with the k = 0 term identically zero."""
    return exponent * np.power(base, np.maximum(exponent - 1, 0)) * dbase


def _vertex_terms(
    ctx: AnalyticContext, gamma: FloatArray, beta: FloatArray, vertices: IntArray, grad: bool
) -> tuple[FloatArray, FloatArray | None, FloatArray | None]:
    J = ctx.coupling
    h = ctx.fields[vertices]
    d = ctx.degrees[vertices]
    c = np.cos(2 * J * gamma)
    sin_h = np.sin(2 * h * gamma)
    power = np.power(c, d)
    value = np.sin(2 * beta) * (-sin_h) * power
    if not grad:
        return value, None, None
    dc = -2 * J * np.sin(2 * J * gamma)
    dgamma = np.sin(2 * beta) * (-2 * h * np.cos(2 * h * gamma) * power - sin_h * _dpow(c, d, dc))
    dbeta = 2 * np.cos(2 * beta) * (-sin_h) * power
    return value, dgamma, dbeta


def _edge_terms(
    ctx: AnalyticContext, gamma: FloatArray, beta: FloatArray, edges: IntArray, grad: bool
) -> tuple[FloatArray, FloatArray | None, FloatArray | None]:
    J = ctx.coupling
    u, v = ctx.edge_u[edges], ctx.edge_v[edges]
    hu, hv = ctx.fields[u], ctx.fields[v]
    du, dv = ctx.degrees[u] - 1, ctx.degrees[v] - 1
    f = ctx.common[edges]
    k = du + dv - 2 * f

    c = np.cos(2 * J * gamma)
    s = np.sin(2 * J * gamma)
    c4 = np.cos(4 * J * gamma)
    su, cu = np.sin(2 * hu * gamma), np.cos(2 * hu * gamma)
    sv, cv = np.sin(2 * hv * gamma), np.cos(2 * hv * gamma)
    pu, pv, pk, q = np.power(c, du), np.power(c, dv), np.power(c, k), np.power(c4, f)

    linear = cu * pu + cv * pv
    mixed = su * sv * (1 + q) + cu * cv * (1 - q)
    s2b, s4b = np.sin(2 * beta), np.sin(4 * beta)
    value = 0.5 * (s4b * (-s) * linear + s2b**2 * pk * mixed)
    if not grad:
        return value, None, None

    dc = -2 * J * s
    dq = _dpow(c4, f, -4 * J * np.sin(4 * J * gamma))
    dlinear = -2 * hu * su * pu + cu * _dpow(c, du, dc) - 2 * hv * sv * pv + cv * _dpow(c, dv, dc)
    dmixed = (
        (2 * hu * cu * sv + 2 * hv * su * cv) * (1 + q)
        + su * sv * dq
        - (2 * hu * su * cv + 2 * hv * cu * sv) * (1 - q)
        - cu * cv * dq
    )
    dgamma = 0.5 * (
        s4b * (-2 * J * c * linear - s * dlinear) + s2b**2 * (_dpow(c, k, dc) * mixed + pk * dmixed)
    )
    dbeta = 0.5 * (4 * np.cos(4 * beta) * (-s) * linear + 2 * s4b * pk * mixed)
    return value, dgamma, dbeta


def _landscape(
    ctx: AnalyticContext, gamma: ArrayLike, beta: ArrayLike, grad: bool
) -> tuple[FloatArray, FloatArray, FloatArray]:
    g = np.asarray(gamma, dtype=np.float64)[..., None]
    b = np.asarray(beta, dtype=np.float64)[..., None]
    vertices = np.arange(ctx.n, dtype=np.int64)
    edges = np.arange(ctx.edge_u.size, dtype=np.int64)
    h = ctx.fields
    J = ctx.coupling

    z, dz_g, dz_b = _vertex_terms(ctx, g, b, vertices, grad)
    zz, dzz_g, dzz_b = _edge_terms(ctx, g, b, edges, grad)
    value = -J * zz.sum(axis=-1) - (h * z).sum(axis=-1) + ctx.constant
    if not grad:
        return value, np.zeros_like(value), np.zeros_like(value)
    assert dz_g is not None and dz_b is not None and dzz_g is not None and dzz_b is not None
    dgamma = -J * dzz_g.sum(axis=-1) - (h * dz_g).sum(axis=-1)
    dbeta = -J * dzz_b.sum(axis=-1) - (h * dz_b).sum(axis=-1)
    return value, dgamma, dbeta


def exp_z(ctx: AnalyticContext, u: int, gamma: float, beta: float) -> float:
    if not 0 <= u < ctx.n:
        raise InvalidInputError(f"Vertex {u} out of range for n={ctx.n}")
    value, _, _ = _vertex_terms(ctx, np.float64(gamma), np.float64(beta), np.array([u]), grad=False)
    return float(value[0])


def exp_zz(ctx: AnalyticContext, u: int, v: int, gamma: float, beta: float) -> float:
    key = (min(u, v), max(u, v))
    if key not in ctx.edge_index:
        raise InvalidInputError(f"({u}, {v}) is not a coupling edge")
    edges = np.array([ctx.edge_index[key]])
    value, _, _ = _edge_terms(ctx, np.float64(gamma), np.float64(beta), edges, grad=False)
    return float(value[0])


def f1(ctx: AnalyticContext, gamma: float, beta: float) -> float:
    value, _, _ = _landscape(ctx, gamma, beta, grad=False)
    return float(value)


def grad_f1(ctx: AnalyticContext, gamma: float, beta: float) -> tuple[float, float]:
    _, dgamma, dbeta = _landscape(ctx, gamma, beta, grad=True)
    return float(dgamma), float(dbeta)


def f1_and_grad(ctx: AnalyticContext, gamma: float, beta: float) -> tuple[float, float, float]:
    value, dgamma, dbeta = _landscape(ctx, gamma, beta, grad=True)
    return float(value), float(dgamma), float(dbeta)


def f1_grid(ctx: AnalyticContext, gammas: FloatArray, betas: FloatArray) -> FloatArray:
    """F_1 on the outer product gammas x betas; row i holds gammas[i]."""
    gammas = np.asarray(gammas, dtype=np.float64)
    betas = np.asarray(betas, dtype=np.float64)
    out = np.empty((gammas.size, betas.size), dtype=np.float64)
    # one gamma row at a time keeps memory at O(len(betas) * m)
    for i, gamma in enumerate(gammas):
        out[i], _, _ = _landscape(ctx, np.full(betas.size, gamma), betas, grad=False)
    return out


def grid_axes(n_gamma: int = 200, n_beta: int = 100) -> tuple[FloatArray, FloatArray]:
    if n_gamma < 1 or n_beta < 1:
        raise InvalidInputError("Grid dimensions must be positive")
    gammas = np.linspace(0.0, 2 * math.pi, n_gamma, endpoint=False)
    betas = np.linspace(0.0, math.pi, n_beta, endpoint=False)
    return gammas, betas


def grid_minimum(ctx: AnalyticContext, n_gamma: int = 200, n_beta: int = 100, polish: bool = False) -> GridMinimum:
    """
    Global minimum of F_1 over a regular grid on [0, 2pi) x [0, pi).

    With polish=True the best grid point is refined by L-BFGS-B on the analytic gradient,
    which removes the grid-spacing error from the reference value.
    """
    gammas, betas = grid_axes(n_gamma, n_beta)
    values = f1_grid(ctx, gammas, betas)
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    best = GridMinimum(float(gammas[i]), float(betas[j]), float(values[i, j]))
    if not polish:
        return best

    def objective(x: FloatArray) -> tuple[float, FloatArray]:
        value, dgamma, dbeta = f1_and_grad(ctx, float(x[0]), float(x[1]))
        return value, np.array([dgamma, dbeta])

    result = optimize.minimize(objective, np.array([best.gamma, best.beta]), jac=True, method="L-BFGS-B")
    if float(result.fun) < best.value:
        return GridMinimum(float(result.x[0]), float(result.x[1]), float(result.fun))
    return best
