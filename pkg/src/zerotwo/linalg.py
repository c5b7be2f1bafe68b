"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  :func:`as_matrix`
is the single validation gate; the remaining functions assume its output.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, InvalidInputError, SingularMatrixError

SVD_MAX_DIM = 64
POWER_TOL = 1e-13
POWER_RESIDUAL_TOL = 1e-12
POWER_MAX_ITER = 10_000
PIVOT_RTOL = 1e-14


def as_matrix(m, *, copy=False) -> np.ndarray:
    """Validate ``m`` as a finite square complex matrix and return it as complex128."""
    arr = np.array(m, dtype=np.complex128) if copy else np.asarray(m, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise InvalidInputError("matrix dimension must be at least 1")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("matrix has non-finite entries")
    return arr


def frozen(m) -> np.ndarray:
    """Validated read-only copy of ``m``."""
    arr = as_matrix(m, copy=True)
    arr.flags.writeable = False
    return arr


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def _power_norm(m: np.ndarray) -> float | None:
    """Power iteration on ``m^H m``; None if it has not settled after ``POWER_MAX_ITER`` steps."""
    gram = m.conj().T @ m
    # deterministic start vector with no special alignment
    v = np.linspace(1.0, 2.0, m.shape[0]) + 0.5j * np.cos(np.arange(m.shape[0]))
    v = v / np.linalg.norm(v)
    rho = 0.0
    delta_prev = np.inf
    for _ in range(POWER_MAX_ITER):
        w = gram @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        rho_new = float(np.real(np.vdot(v, w)))
        # small quotient changes alone are fooled by clustered singular values;
        # the eigen-residual is not
        residual = float(np.linalg.norm(w - rho_new * v))
        v = w / nw
        delta = abs(rho_new - rho)
        rho = rho_new
        # linear convergence with ratio q leaves about delta*q/(1-q) still to go
        q = delta / delta_prev if delta_prev > 0 else 0.0
        if (delta <= POWER_TOL * rho and q < 1.0 and delta * q / (1.0 - q) <= POWER_TOL * rho
                and residual <= POWER_RESIDUAL_TOL * rho):
            return float(np.sqrt(max(rho, 0.0)))
        delta_prev = delta
    return None


def op_norm(m) -> float:
    """Spectral norm (largest singular value).

    Full SVD up to ``SVD_MAX_DIM``; power iteration on ``m^H m`` above, falling
    back to the SVD when clustered singular values stall the iteration.
    """
    m = as_matrix(m)
    if m.shape[0] > SVD_MAX_DIM:
        norm = _power_norm(m)
        if norm is not None:
            return norm
    return float(np.linalg.svd(m, compute_uv=False)[0])


def min_singular_value(m) -> float:
    m = as_matrix(m)
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def solve(m, rhs) -> np.ndarray:
    """Solve ``m @ x = rhs`` by pivoted LU.

    Raises
    ------
    SingularMatrixError
        If a pivot of the LU factorization falls below ``1e-14 * ||m||``.
    """
    m = as_matrix(m)
    rhs = np.asarray(rhs, dtype=np.complex128)
    if rhs.shape[0] != m.shape[0]:
        raise InvalidInputError(f"rhs has {rhs.shape[0]} rows, matrix has dim {m.shape[0]}")
    scale = op_norm(m)
    with warnings.catch_warnings():
        # singularity is reported below with our own threshold
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if scale == 0.0 or smallest < PIVOT_RTOL * scale:
        raise SingularMatrixError(
            f"matrix is numerically singular (pivot {smallest:.3e}, norm {scale:.3e})"
        )
    return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)


def inverse(m) -> np.ndarray:
    m = as_matrix(m)
    return solve(m, identity(m.shape[0]))


def eigenvalues(m) -> np.ndarray:
    """All eigenvalues with multiplicity, via LAPACK ``geev``."""
    m = as_matrix(m)
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        # geev does not report its sweep count; 30*n is its documented cap
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}", 30 * m.shape[0]) from exc


def spectral_radius(m) -> float:
    return float(np.max(np.abs(eigenvalues(m))))


# -- JSON matrix format ---------------------------------------------------


def matrix_to_dict(m) -> dict:
    m = as_matrix(m)
    return {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_dict(doc: dict) -> np.ndarray:
    try:
        dim = int(doc["dim"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed matrix document: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise InvalidInputError(
            f"matrix document declares dim {dim} but has re {re.shape}, im {im.shape}"
        )
    return as_matrix(re + 1j * im)


def load_matrix(path) -> np.ndarray:
    with open(Path(path)) as fh:
        return matrix_from_dict(json.load(fh))


def save_matrix(m, path) -> None:
    with open(Path(path), "w") as fh:
        json.dump(matrix_to_dict(m), fh)
