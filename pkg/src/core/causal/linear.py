"""Linear-Gaussian structural equations and Mahalanobis scores.

``X = A X + N`` with ``A`` strictly lower triangular in topological order and
independent ``N_i ~ N(0, σ_i²)``.  ``N = (I − A) X`` turns the Mahalanobis
distance of ``x`` into a sum of per-mechanism noise ``z²`` scores.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigvalsh, solve_triangular

from ..errors import ContractViolation, ModelValidationError, NumericalDomainError
from .model import CausalModel, LinearGaussian

__all__ = [
    "LinearSCM",
    "covariance",
    "linear_scm",
    "mahalanobis_sq",
    "marginal_mahalanobis_sq",
    "min_eigenvalue",
    "noise_score_decomposition",
    "random_covariance",
    "random_linear_scm",
    "sample_matrix",
    "schur_correction",
]

PD_JITTER = 1e-6


def _frozen(array: NDArray[np.float64]) -> NDArray[np.float64]:
    array.setflags(write=False)
    return array


@dataclass(slots=True, frozen=True)
class LinearSCM:
    """Coefficient matrix ``A`` and noise variances ``σ²`` in node order."""

    coefficients: NDArray[np.float64]
    noise_variances: NDArray[np.float64]
    nodes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        a = np.array(self.coefficients, dtype=float)
        variances = np.array(self.noise_variances, dtype=float).reshape(-1)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ContractViolation("coefficient matrix must be square")
        if a.shape[0] != variances.size:
            raise ContractViolation("one noise variance per node is required")
        if not np.all(np.isfinite(a)) or np.any(np.triu(a) != 0.0):
            raise ContractViolation(
                "coefficient matrix must be finite and strictly lower triangular"
            )
        if not np.all(np.isfinite(variances)) or np.any(variances <= 0.0):
            raise ContractViolation("noise variances must be positive")
        nodes = tuple(self.nodes) or tuple(f"X{index + 1}" for index in range(variances.size))
        if len(nodes) != variances.size:
            raise ContractViolation("one node id per variable is required")
        object.__setattr__(self, "coefficients", _frozen(a))
        object.__setattr__(self, "noise_variances", _frozen(variances))
        object.__setattr__(self, "nodes", nodes)

    @property
    def dim(self) -> int:
        return int(self.noise_variances.size)


def linear_scm(model: CausalModel) -> LinearSCM:
    """Collect the coefficients of an all-linear-Gaussian model in topological order."""

    position = {node: index for index, node in enumerate(model.order)}
    size = len(model.order)
    a = np.zeros((size, size))
    variances = np.empty(size)
    for node in model.order:
        mechanism = model.mechanisms[node]
        if not isinstance(mechanism, LinearGaussian):
            raise ModelValidationError(
                f"node {node!r} is {mechanism.kind}, not linear_gaussian", field="mechanism"
            )
        row = position[node]
        for parent, coefficient in zip(model.parents[node], mechanism.coefficients, strict=True):
            a[row, position[parent]] = coefficient
        variances[row] = mechanism.noise_sd**2
    return LinearSCM(coefficients=a, noise_variances=variances, nodes=model.order)


def _mixing(scm: LinearSCM) -> NDArray[np.float64]:
    eye = np.eye(scm.dim)
    return solve_triangular(eye - scm.coefficients, eye, lower=True, unit_diagonal=True)


def covariance(scm: LinearSCM) -> NDArray[np.float64]:
    """``Σ_X = (I − A)⁻¹ diag(σ²) (I − A)⁻ᵀ``."""

    mixing = _mixing(scm)
    sigma = (mixing * scm.noise_variances) @ mixing.T
    return (sigma + sigma.T) / 2.0


def _vector(x: ArrayLike, size: int) -> NDArray[np.float64]:
    vector = np.asarray(x, dtype=float).reshape(-1)
    if vector.size != size:
        raise ContractViolation(f"expected a vector of length {size}, got {vector.size}")
    if not np.all(np.isfinite(vector)):
        raise ContractViolation("vector entries must be finite")
    return vector


def _factor(sigma: NDArray[np.float64]) -> tuple[NDArray[np.float64], bool]:
    try:
        return cho_factor(sigma, lower=True)
    except LinAlgError as exc:
        raise NumericalDomainError(f"covariance is not positive definite: {exc}") from exc


def _square(sigma: ArrayLike) -> NDArray[np.float64]:
    matrix = np.atleast_2d(np.asarray(sigma, dtype=float))
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ContractViolation("covariance must be a square matrix")
    if not np.all(np.isfinite(matrix)):
        raise NumericalDomainError("covariance has non-finite entries")
    if not np.allclose(matrix, matrix.T, rtol=1e-10, atol=1e-12):
        raise ContractViolation("covariance must be symmetric")
    return matrix


def mahalanobis_sq(x: ArrayLike, sigma: ArrayLike) -> float:
    """``xᵀ Σ⁻¹ x`` through a Cholesky solve."""

    matrix = _square(sigma)
    vector = _vector(x, matrix.shape[0])
    solved = cho_solve(_factor(matrix), vector)
    return max(float(vector @ solved), 0.0)


def noise_score_decomposition(x: ArrayLike, scm: LinearSCM) -> NDArray[np.float64]:
    """Per-mechanism ``n_i² / σ_i²`` with ``n = (I − A) x``."""

    vector = _vector(x, scm.dim)
    noise = vector - scm.coefficients @ vector
    return noise * noise / scm.noise_variances


def _subset(subset: Sequence[int], size: int) -> list[int]:
    indices = [int(index) for index in subset]
    if not indices:
        raise ContractViolation("subset must not be empty")
    if len(set(indices)) != len(indices) or any(not 0 <= index < size for index in indices):
        raise ContractViolation(f"subset {indices} is not a set of indices below {size}")
    return indices


def marginal_mahalanobis_sq(x: ArrayLike, sigma: ArrayLike, subset: Sequence[int]) -> float:
    """Mahalanobis distance of ``x[subset]`` under the matching principal submatrix."""

    matrix = _square(sigma)
    vector = _vector(x, matrix.shape[0])
    indices = _subset(subset, matrix.shape[0])
    return mahalanobis_sq(vector[indices], matrix[np.ix_(indices, indices)])


def schur_correction(sigma: ArrayLike, subset: Sequence[int]) -> NDArray[np.float64]:
    """Matrix ``C`` with ``xᵀ Σ⁻¹ x − x_Sᵀ Σ_SS⁻¹ x_S = xᵀ C x``.

    ``C = Wᵀ S⁻¹ W`` with ``W = [−Σ_RS Σ_SS⁻¹, I]`` and the Schur complement
    ``S = Σ_RR − Σ_RS Σ_SS⁻¹ Σ_SR``; it is positive semi-definite.
    """

    matrix = _square(sigma)
    size = matrix.shape[0]
    kept = _subset(subset, size)
    rest = [index for index in range(size) if index not in set(kept)]
    correction = np.zeros_like(matrix)
    if not rest:
        return correction

    s_ss = matrix[np.ix_(kept, kept)]
    s_sr = matrix[np.ix_(kept, rest)]
    s_rr = matrix[np.ix_(rest, rest)]
    regression = cho_solve(_factor(s_ss), s_sr).T
    schur = s_rr - regression @ s_sr
    schur_inverse = cho_solve(_factor((schur + schur.T) / 2.0), np.eye(len(rest)))
    w = np.hstack([-regression, np.eye(len(rest))])
    block = w.T @ schur_inverse @ w
    order = kept + rest
    correction[np.ix_(order, order)] = (block + block.T) / 2.0
    return correction


def min_eigenvalue(matrix: ArrayLike) -> float:
    """Smallest eigenvalue of a symmetric matrix."""

    return float(eigvalsh(np.asarray(matrix, dtype=float))[0])


def random_covariance(rng: np.random.Generator, dim: int) -> NDArray[np.float64]:
    """Random positive-definite matrix ``G Gᵀ + 10⁻⁶ I``."""

    g = rng.standard_normal((dim, dim + 2))
    return g @ g.T + PD_JITTER * np.eye(dim)


def random_linear_scm(rng: np.random.Generator, dim: int) -> LinearSCM:
    """Random strictly lower-triangular SCM with variances in ``[0.5, 2)``."""

    a = np.tril(rng.normal(0.0, 0.5, size=(dim, dim)), k=-1)
    return LinearSCM(coefficients=a, noise_variances=rng.uniform(0.5, 2.0, size=dim))


def sample_matrix(scm: LinearSCM, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
    """Vectorized ancestral sampling; one row per draw."""

    if count < 1:
        raise ContractViolation("count must be a positive integer")
    noise = rng.standard_normal((count, scm.dim)) * np.sqrt(scm.noise_variances)
    return noise @ _mixing(scm).T
