"""Dense linear-algebra kernels.

Matrices are plain ``numpy.ndarray`` objects (row-major, C order). The
routines wrap LAPACK through :mod:`numpy.linalg` and add the conventions the
rest of the package relies on: descending singular values, conjugate pairs
returned adjacently, and a relative tolerance for numerical rank.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DataError, NumericalError

DEFAULT_RANK_TOL = 1e-10


class SvdResult(NamedTuple):
    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray  # right singular vectors as columns, not V^H


def _as_finite(m, name="matrix"):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DataError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DataError(f"{name} contains non-finite entries")
    return m


def svd(m) -> SvdResult:
    """Economy-size singular value decomposition ``m = u @ diag(s) @ v.T``.

    Raises :class:`NumericalError` if the LAPACK driver fails to converge.
    """
    m = _as_finite(m)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge for a {m.shape[0]}x{m.shape[1]} matrix: {exc}") from exc
    return SvdResult(u, s, vh.conj().T)


def numerical_rank(s, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Count singular values strictly greater than ``rel_tol * s[0]``."""
    s = np.asarray(s, dtype=float)
    if not 0.0 < rel_tol < 1.0:
        raise DataError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def pair_conjugates(values, vectors=None):
    """Reorder eigenvalues so conjugate pairs sit next to each other.

    Pairs are emitted with the positive imaginary part first; real values
    keep their place relative to the pairs. ``vectors`` columns follow the
    same permutation.
    """
    values = np.asarray(values, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    tol = 1e-12 * scale
    used = np.zeros(values.size, dtype=bool)
    order = []
    for i in range(values.size):
        if used[i]:
            continue
        used[i] = True
        if abs(values[i].imag) <= tol:
            order.append(i)
            continue
        target = np.conj(values[i])
        candidates = [j for j in range(values.size) if not used[j]]
        if not candidates:
            order.append(i)
            continue
        j = min(candidates, key=lambda c: abs(values[c] - target))
        if abs(values[j] - target) > 1e-8 * scale:
            order.append(i)
            continue
        used[j] = True
        first, second = (i, j) if values[i].imag > 0 else (j, i)
        order.extend([first, second])
    order = np.array(order, dtype=int)
    if vectors is None:
        return values[order]
    return values[order], np.asarray(vectors)[:, order]


def eig(m):
    """Eigenvalues and right eigenvectors of a square matrix.

    Returns ``(values, vectors)`` with unit-norm eigenvector columns and
    conjugate pairs adjacent (positive imaginary part first).
    """
    m = _as_finite(m)
    if m.shape[0] != m.shape[1]:
        raise DataError(f"eig needs a square matrix, got shape {m.shape}")
    # entries below eps*max|m| are inside LAPACK's own backward error; dropping
    # them avoids underflow in products of tiny entries
    big = np.max(np.abs(m)) if m.size else 0.0
    m = np.where(np.abs(m) < np.finfo(float).eps * big, 0.0, m)
    try:
        values, vectors = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition did not converge: {exc}") from exc
    values = values.astype(complex)
    vectors = vectors.astype(complex)
    return pair_conjugates(values, vectors)


def pseudoinverse(m, rel_tol: float = DEFAULT_RANK_TOL):
    """Moore-Penrose inverse via SVD; singular values below ``rel_tol * s[0]`` count as zero."""
    m = _as_finite(m)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge in pseudoinverse: {exc}") from exc
    r = numerical_rank(s, rel_tol)
    if r == 0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=m.dtype)
    return (vh[:r].conj().T / s[:r]) @ u[:, :r].conj().T
