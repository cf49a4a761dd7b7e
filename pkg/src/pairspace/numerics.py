"""Small fixed-size complex linear algebra shared by every other module.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
Nothing here allocates anything larger than the 2**8 dimensional spaces
that composite systems need.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import NotFinite, NotHermitian, ShapeMismatch

DEFAULT_TOL = 1e-10
TOL_ENV_VAR = "PAIRSPACE_TOL"

SQRT2 = np.sqrt(2.0)
INV_SQRT2 = 1.0 / SQRT2

I2 = np.eye(2, dtype=complex)
Z2 = np.zeros((2, 2), dtype=complex)
I4 = np.eye(4, dtype=complex)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

for _m in (I2, Z2, I4, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write=False)


def default_tol() -> float:
    """Tolerance used when a caller passes ``tol=None``.

    The ``PAIRSPACE_TOL`` environment variable overrides the built-in 1e-10.
    """
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    return float(raw)


def _tol(tol):
    return default_tol() if tol is None else tol


def as_matrix(m, n: int | None = None) -> np.ndarray:
    """Coerce ``m`` to a read-only square complex matrix, rejecting NaN/Inf."""
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ShapeMismatch(f"expected a {n}x{n} matrix, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NotFinite("matrix has non-finite entries")
    arr.setflags(write=False)
    return arr


def as_vector(v, n: int | None = None) -> np.ndarray:
    arr = np.array(v, dtype=complex)
    if arr.ndim != 1:
        raise ShapeMismatch(f"expected a vector, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ShapeMismatch(f"expected length {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise NotFinite("vector has non-finite entries")
    arr.setflags(write=False)
    return arr


def dagger(m) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def kron(*ms) -> np.ndarray:
    """Kronecker product of any number of factors, left to right."""
    if not ms:
        raise ShapeMismatch("kron needs at least one factor")
    out = np.asarray(ms[0])
    for m in ms[1:]:
        out = np.kron(out, np.asarray(m))
    return out


def det(m) -> complex:
    return complex(np.linalg.det(np.asarray(m, dtype=complex)))


def trace(m) -> complex:
    return complex(np.trace(np.asarray(m, dtype=complex)))


def max_abs_diff(a, b) -> float:
    """Largest entrywise absolute difference (the infinity norm on entries)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shape mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def approx_eq(a, b, tol: float | None = None) -> bool:
    return max_abs_diff(a, b) <= _tol(tol)


def hermitian_residual(m) -> float:
    return max_abs_diff(m, dagger(m))


def unitary_residual(m) -> float:
    m = np.asarray(m)
    return max_abs_diff(m @ dagger(m), np.eye(m.shape[0]))


def is_hermitian(m, tol: float | None = None) -> bool:
    return hermitian_residual(m) <= _tol(tol)


def is_unitary(m, tol: float | None = None) -> bool:
    return unitary_residual(m) <= _tol(tol)


def block_diag(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=complex)
    out[: a.shape[0], : a.shape[0]] = a
    out[a.shape[0]:, a.shape[0]:] = b
    return out


def _phase_normalize(vec: np.ndarray, tol: float) -> np.ndarray:
    for x in vec:
        if abs(x) > tol:
            return vec * (abs(x) / x)
    return vec


def eig_hermitian(m, tol: float | None = None):
    """Eigen-decomposition of a Hermitian matrix with deterministic output.

    Returns
    -------
    eigenvalues : ndarray of float, descending
    eigenvectors : ndarray, columns are orthonormal eigenvectors

    Each eigenvector has its first non-negligible component rotated onto the
    positive real axis.  Inside a degenerate cluster the basis is rebuilt by
    Gram-Schmidt on the cluster projector's columns, so a multiple of the
    identity always returns the canonical basis.
    """
    tol = _tol(tol)
    m = np.asarray(m, dtype=complex)
    if hermitian_residual(m) > tol:
        raise NotHermitian(f"matrix is not Hermitian (residual {hermitian_residual(m):.3e})")
    herm = 0.5 * (m + dagger(m))
    vals, vecs = np.linalg.eigh(herm)
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]

    n = len(vals)
    out = np.zeros_like(vecs)
    scale = max(1.0, float(np.max(np.abs(vals))) if n else 1.0)
    i = 0
    while i < n:
        j = i + 1
        while j < n and abs(vals[j] - vals[i]) <= 1e3 * np.finfo(float).eps * scale * n:
            j += 1
        if j - i == 1:
            out[:, i] = _phase_normalize(vecs[:, i], 1e-12)
        else:
            block = vecs[:, i:j]
            proj = block @ dagger(block)
            basis = []
            for col in proj.T:
                v = col.copy()
                for b in basis:
                    v = v - (np.vdot(b, v)) * b
                norm = np.linalg.norm(v)
                if norm > 1e-8:
                    basis.append(v / norm)
                if len(basis) == j - i:
                    break
            for k, b in enumerate(basis):
                out[:, i + k] = _phase_normalize(b, 1e-12)
        i = j
    return vals.astype(float), out


# -- random generators used by tests and by the verification sweeps ---------


def random_complex_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def random_unit_vector(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    v = random_complex_vector(rng, n)
    return v / np.linalg.norm(v)


def random_complex_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = random_complex_matrix(rng, n)
    return 0.5 * (a + dagger(a))


def random_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    # QR of a Ginibre matrix; the diagonal phase fix makes it Haar distributed
    q, r = np.linalg.qr(random_complex_matrix(rng, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_su2(rng: np.random.Generator) -> np.ndarray:
    u = random_unitary(rng, 2)
    return u / np.sqrt(np.linalg.det(u))


def random_sl2c(rng: np.random.Generator) -> np.ndarray:
    while True:
        a = random_complex_matrix(rng, 2)
        d = np.linalg.det(a)
        if abs(d) > 1e-3:
            a = a / np.sqrt(d)
            if np.linalg.cond(a) < 1e4:
                return a
