"""Dense complex matrix kernel: norms, partial traces, Hermitian
eigendecompositions and von Neumann entropy.

Everything operates on plain ``numpy`` arrays (``complex128``) and is a pure
function; matrices here never exceed 16x16.  The numerical contract shared by
the whole toolkit (Hermiticity tolerance, PSD floor, eigenvalue cutoffs) lives
in :class:`Tolerances`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "HermitianEigenResult",
    "kron",
    "partial_trace",
    "singular_values",
    "trace_norm",
    "operator_norm",
    "max_norm",
    "eig_hermitian",
    "von_neumann_entropy",
    "hermitian_part",
    "is_hermitian",
]


@dataclass(frozen=True)
class Tolerances:
    """Shared numerical tolerances.

    hermiticity: entrywise bound for ``H == H^dag`` checks.
    psd_floor: eigenvalues above ``-psd_floor`` count as nonnegative.
    zero_eigenvalue: eigenvalues at or below this are treated as exact zeros.
    unit_trace: bound for trace-one checks on states.
    rank_rel: relative eigenvalue threshold for rank decisions.
    """

    hermiticity: float = 1e-9
    psd_floor: float = 1e-9
    zero_eigenvalue: float = 1e-12
    unit_trace: float = 1e-9
    rank_rel: float = 1e-9


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class HermitianEigenResult:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and nondecreasing; the columns of ``eigenvectors``
    are the matching orthonormal eigenvectors.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {a.shape}")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def partial_trace(m, dims: tuple[int, int], keep: str = "first") -> np.ndarray:
    """Trace out one tensor factor of a square matrix on ``dims[0] * dims[1]``.

    ``keep="first"`` returns the ``dims[0]``-dimensional reduction, tracing the
    second factor; ``keep="second"`` the other way around.
    """
    a = _as_matrix(m)
    d1, d2 = int(dims[0]), int(dims[1])
    if a.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"matrix of shape {a.shape} does not factor as {d1}x{d2}")
    t = a.reshape(d1, d2, d1, d2)
    if keep == "first":
        return np.einsum("ijkj->ik", t)
    if keep == "second":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def singular_values(m) -> np.ndarray:
    """Singular values in nonincreasing order, via the spectrum of ``M^dag M``.

    Eigenvalues of ``M^dag M`` below zero (numerical noise) are clamped to 0.
    """
    a = _as_matrix(m)
    w = np.linalg.eigvalsh(a.conj().T @ a)
    return np.sqrt(np.clip(w, 0.0, None))[::-1]


def trace_norm(m) -> float:
    """Schatten 1-norm: the sum of singular values."""
    return float(np.sum(singular_values(m)))


def operator_norm(m) -> float:
    """Spectral norm: the largest singular value."""
    return float(singular_values(m)[0])


def max_norm(m) -> float:
    """Largest entry modulus in the fixed computational basis."""
    return float(np.max(np.abs(_as_matrix(m))))


def hermitian_part(m) -> np.ndarray:
    """``(M + M^dag)/2``."""
    a = _as_matrix(m)
    return (a + a.conj().T) / 2


def is_hermitian(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = _as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a - a.conj().T))) <= tol.hermiticity


def eig_hermitian(h, tol: Tolerances = DEFAULT_TOL) -> HermitianEigenResult:
    """Eigendecomposition of a Hermitian matrix.

    Raises ``ValueError`` if the input deviates from Hermiticity by more than
    the tolerance.  The returned factors satisfy ``U diag(w) U^dag == H`` and
    ``U^dag U == I`` to 1e-10.
    """
    a = _as_matrix(h)
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, u = np.linalg.eigh(hermitian_part(a))
    return HermitianEigenResult(eigenvalues=w, eigenvectors=u)


def von_neumann_entropy(rho, tol: Tolerances = DEFAULT_TOL) -> float:
    """Base-2 von Neumann entropy ``-tr(rho log2 rho)`` of a density matrix.

    The input must be Hermitian, PSD and unit-trace within tolerance.
    Eigenvalues at or below ``tol.zero_eigenvalue`` contribute zero
    (the ``0 log 0 = 0`` convention).
    """
    a = _as_matrix(rho)
    if not is_hermitian(a, tol):
        raise ValueError("state is not Hermitian within tolerance")
    w = np.linalg.eigvalsh(hermitian_part(a))
    if w[0] < -tol.psd_floor:
        raise ValueError(f"state has negative eigenvalue {w[0]:.3e}")
    tr = float(np.sum(w))
    if abs(tr - 1.0) > tol.unit_trace:
        raise ValueError(f"state trace {tr!r} is not 1 within tolerance")
    w = w[w > tol.zero_eigenvalue]
    return float(-np.sum(w * np.log2(w)))
