"""Shared dense linear-algebra helpers.

Everything in here works on plain complex numpy arrays; the algebra layer
wraps the results back into block elements. Rank and nullspace decisions
use a relative tolerance against the largest singular value, defaulting to
DEFAULT_TOL (suited to double precision at matrix sizes up to ~64).
"""
from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-10


def nullspace(m: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of ker(m), returned as rows.

    Uses the SVD; singular values below tol * max(1, s_max) count as zero.
    """
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return np.eye(m.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    cutoff = tol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return np.conj(vh[rank:])


def orthonormalize_rows(vectors: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (rows) of the row span of ``vectors``.

    Rank-revealing via SVD so nearly dependent rows collapse.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if vectors.shape[0] == 0:
        return vectors.reshape(0, vectors.shape[1])
    _, s, vh = np.linalg.svd(vectors, full_matrices=False)
    cutoff = tol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return vh[:rank]


def project_onto_rows(basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Orthogonal projection of v onto the span of the orthonormal rows."""
    coeff = np.conj(basis) @ v
    return basis.T @ coeff


def in_row_span(basis: np.ndarray, v: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    scale = max(1.0, float(np.linalg.norm(v)))
    return float(np.linalg.norm(v - project_onto_rows(basis, v))) <= tol * scale


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + np.conj(m.T))


def hermitian_function(h: np.ndarray, fn) -> np.ndarray:
    """fn applied to a Hermitian matrix through its eigendecomposition."""
    vals, vecs = np.linalg.eigh(h)
    return (vecs * fn(vals)) @ np.conj(vecs.T)


def psd_power(rho: np.ndarray, exponent: float) -> np.ndarray:
    """rho**exponent for positive semidefinite rho; tiny negative
    eigenvalues from rounding are clipped to zero."""
    vals, vecs = np.linalg.eigh(rho)
    vals = np.clip(vals, 0.0, None)
    with np.errstate(divide="ignore"):
        powered = np.where(vals > 0.0, vals ** exponent, 0.0)
    return (vecs * powered) @ np.conj(vecs.T)


def cluster_indices(values: np.ndarray, gap: float) -> list[np.ndarray]:
    """Group (real) values into clusters separated by more than ``gap``.

    ``gap`` is absolute. Returns index arrays ordered by ascending value.
    """
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    clusters: list[list[int]] = []
    for idx in order:
        if clusters and values[idx] - values[clusters[-1][-1]] <= gap:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])
    return [np.array(c, dtype=int) for c in clusters]


def intertwiner_space(
    images1: list[np.ndarray], images2: list[np.ndarray], tol: float = DEFAULT_TOL
) -> np.ndarray:
    """Solutions T of T a_k = b_k T for all k, as stacked row vectors.

    a_k act on a d1-dim space, b_k on d2; each row of the result is a
    flattened (d2, d1) matrix. Row-major vec identities:
    vec(T a) = (I kron a^T) vec(T), vec(b T) = (b kron I) vec(T).
    """
    d1 = images1[0].shape[0]
    d2 = images2[0].shape[0]
    eye1 = np.eye(d1)
    eye2 = np.eye(d2)
    rows = []
    for a, b in zip(images1, images2):
        rows.append(np.kron(eye2, a.T) - np.kron(b, eye1))
    return nullspace(np.vstack(rows), tol)
