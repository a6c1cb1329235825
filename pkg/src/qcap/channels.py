"""Quantum channels as Kraus-operator collections, with Choi/Stinespring
conversions, complementary channels, and the Pauli channel families.

Conventions fixed once for the whole toolkit:

* Choi operators use the unnormalized maximally entangled vector
  ``|gamma> = sum_i |i>|i>``, so ``tr_out J(N) = I_in`` for a channel.
* The canonical isometric extension stacks Kraus operators in list order,
  ``V = sum_k K_k (x) |k>_E``; Pauli channels list their Kraus operators in
  the order (I, X, Y, Z).  With this convention the complementary channel of
  a Pauli channel is reproduced entrywise by
  :func:`pauli_complement_action`.
* Kraus operators extracted from a Choi matrix carry a fixed phase: the first
  nonzero entry (row-major) is real and positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    is_hermitian,
    kron,
    partial_trace,
)

__all__ = [
    "SimplexError",
    "Channel",
    "ChoiMatrix",
    "IsometricExtension",
    "PauliFamily",
    "HermitianPreservingMap",
    "PAULI_I",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "identity_channel",
    "pauli",
    "depolarizing",
    "xz_channel",
    "epolarizing",
    "generalized_pauli",
    "pauli_complement_action",
    "choi_of",
    "channel_of_choi",
    "apply",
    "compose",
    "stinespring",
    "complementary",
    "choi_rank",
    "channel_difference",
    "depolarizing_family",
    "xz_family",
]

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


class SimplexError(ValueError):
    """A weight vector is not a probability distribution."""


def _check_distribution(weights, tol: float = 1e-12) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1:
        raise SimplexError(f"expected a weight vector, got shape {w.shape}")
    if np.any(w < -tol):
        raise SimplexError(f"negative weight {float(w.min()):.3e}")
    if abs(float(w.sum()) - 1.0) > max(tol, 1e-12 * w.size):
        raise SimplexError(f"weights sum to {float(w.sum())!r}, not 1")
    return np.clip(w, 0.0, None)


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Channel:
    """Completely positive trace-preserving map stored as Kraus operators.

    Each Kraus operator has shape ``(dim_out, dim_in)``; trace preservation
    ``sum_k K_k^dag K_k = I`` is checked entrywise on construction (complete
    positivity is automatic from the Kraus form).
    """

    kraus: tuple[np.ndarray, ...]
    dim_in: int
    dim_out: int

    def __post_init__(self):
        if not self.kraus:
            raise ValueError("a channel needs at least one Kraus operator")
        ks = tuple(_frozen(k) for k in self.kraus)
        for k in ks:
            if k.shape != (self.dim_out, self.dim_in):
                raise ValueError(
                    f"Kraus operator of shape {k.shape}, expected "
                    f"({self.dim_out}, {self.dim_in})"
                )
        gram = sum(k.conj().T @ k for k in ks)
        if np.max(np.abs(gram - np.eye(self.dim_in))) > DEFAULT_TOL.hermiticity:
            raise ValueError("Kraus operators do not satisfy sum K^dag K = I")
        object.__setattr__(self, "kraus", ks)


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi operator of a map from ``dim_in`` to ``dim_out`` dimensions.

    The matrix lives on the ``dim_in * dim_out`` dimensional input (x) output
    space, input factor first.
    """

    matrix: np.ndarray
    dim_in: int
    dim_out: int

    def __post_init__(self):
        m = _frozen(self.matrix)
        side = self.dim_in * self.dim_out
        if m.shape != (side, side):
            raise ValueError(f"Choi matrix of shape {m.shape}, expected side {side}")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class HermitianPreservingMap:
    """A Hermiticity-preserving (not necessarily CP) map, held as its Choi."""

    choi: ChoiMatrix

    def __post_init__(self):
        if not is_hermitian(self.choi.matrix):
            raise ValueError("Choi operator is not Hermitian within tolerance")


@dataclass(frozen=True)
class IsometricExtension:
    """Isometry ``V`` with ``N(rho) = tr_env(V rho V^dag)``.

    The row index of ``v`` factors as (output, environment), output major, so
    ``v`` has shape ``(dim_out * dim_env, dim_in)``.
    """

    v: np.ndarray
    dim_in: int
    dim_out: int
    dim_env: int

    def __post_init__(self):
        v = _frozen(self.v)
        if v.shape != (self.dim_out * self.dim_env, self.dim_in):
            raise ValueError(f"isometry of shape {v.shape} inconsistent with dims")
        object.__setattr__(self, "v", v)


@dataclass(frozen=True)
class PauliFamily:
    """Pauli error weights given as polynomials in a noise parameter ``p``.

    ``coeffs[i]`` holds the coefficients of ``p_i(p)`` for the X, Y, Z error
    weights, starting at the linear term (the constant term is identically
    zero by construction).  The identity weight is ``1 - p_1 - p_2 - p_3``.
    ``p_max`` declares the validity interval ``[0, p_max]``: each weight must
    stay in [0, 1] and the three must sum to at most 1 there.
    """

    coeffs: tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]
    p_max: float = 0.25

    def __post_init__(self):
        cs = tuple(tuple(float(c) for c in poly) for poly in self.coeffs)
        if len(cs) != 3 or any(len(poly) == 0 for poly in cs):
            raise ValueError("need three nonempty coefficient sequences")
        object.__setattr__(self, "coeffs", cs)
        grid = np.linspace(0.0, self.p_max, 201)
        vals = np.array([self._eval(i, grid) for i in range(3)])
        if np.any(vals < -1e-12) or np.any(vals > 1.0 + 1e-12):
            raise SimplexError("a weight polynomial leaves [0, 1] on the validity interval")
        if np.any(vals.sum(axis=0) > 1.0 + 1e-12):
            raise SimplexError("weight polynomials sum past 1 on the validity interval")

    def _eval(self, i: int, p):
        # Horner with the linear term first: p_i(p) = p (c + d p + ...)
        out = np.zeros_like(np.asarray(p, dtype=float))
        for c in reversed(self.coeffs[i]):
            out = out * p + c
        return out * p

    def linear_coeffs(self) -> np.ndarray:
        """Coefficients of ``p`` in the three error-weight polynomials."""
        return np.array([poly[0] for poly in self.coeffs], dtype=float)

    def weights(self, p: float) -> np.ndarray:
        """The probability vector ``(p_0, p_1, p_2, p_3)`` at noise ``p``."""
        errs = np.array([float(self._eval(i, p)) for i in range(3)])
        w = np.concatenate([[1.0 - errs.sum()], errs])
        return _check_distribution(w, tol=1e-10)

    def tuned_weights(self, p: float, shifts) -> np.ndarray:
        """Weights with each error polynomial evaluated at ``p + a_i p^2``."""
        a = np.asarray(shifts, dtype=float)
        errs = np.array([float(self._eval(i, p + a[i] * p * p)) for i in range(3)])
        w = np.concatenate([[1.0 - errs.sum()], errs])
        return _check_distribution(w, tol=1e-10)


def depolarizing_family() -> PauliFamily:
    """Equal X/Y/Z error weights ``p/3``."""
    return PauliFamily(((1 / 3,), (1 / 3,), (1 / 3,)), p_max=0.75)


def xz_family() -> PauliFamily:
    """Independent X and Z errors with equal probability ``p``."""
    return PauliFamily(((1.0, -1.0), (0.0, 1.0), (1.0, -1.0)), p_max=0.5)


def identity_channel(d: int) -> Channel:
    return Channel(kraus=(np.eye(d, dtype=complex),), dim_in=d, dim_out=d)


def pauli(p0: float, p1: float, p2: float, p3: float) -> Channel:
    """Mixed Pauli channel ``rho -> p0 rho + p1 X rho X + p2 Y rho Y + p3 Z rho Z``.

    All four Kraus operators are kept (in the order I, X, Y, Z) even when some
    weights vanish, so the environment basis is the same across the family.
    """
    w = _check_distribution([p0, p1, p2, p3])
    ks = tuple(np.sqrt(w[i]) * _PAULIS[i] for i in range(4))
    return Channel(kraus=ks, dim_in=2, dim_out=2)


def depolarizing(p: float) -> Channel:
    """``rho -> (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z)``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p!r} outside [0, 1]")
    return pauli(1.0 - p, p / 3, p / 3, p / 3)


def xz_channel(p: float, q: float) -> Channel:
    """Independent X error with probability ``p`` and Z error with ``q``."""
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError(f"(p, q)=({p!r}, {q!r}) outside [0, 1]^2")
    return pauli((1 - p) * (1 - q), p * (1 - q), p * q, (1 - p) * q)


def epolarizing(p: float) -> Channel:
    """Complementary channel of the depolarizing channel (qubit in, 4-dim out).

    Acting on ``rho``, the output matrix has diagonal
    ``((1-p) tr rho, (p/3) tr rho, ...)`` and off-diagonal entries built from
    the Pauli overlaps of ``rho``; see :func:`pauli_complement_action`.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p!r} outside [0, 1]")
    return complementary(depolarizing(p))


def generalized_pauli(d: int, probs) -> Channel:
    """Weyl-operator mixture in dimension ``d``.

    ``probs`` maps index pairs ``(k, l)`` to probabilities; the Kraus operator
    for ``(k, l)`` is ``sqrt(p_kl) X^k Z^l`` with ``X|i> = |i+1 mod d>`` and
    ``Z|i> = w^i |i>`` for ``w = exp(2 pi i / d)``.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    table = np.zeros((d, d))
    for (k, l), w in dict(probs).items():
        if not (0 <= int(k) < d and 0 <= int(l) < d):
            raise ValueError(f"index pair {(k, l)!r} out of range for d={d}")
        table[int(k), int(l)] = float(w)
    _check_distribution(table.reshape(-1))
    shift = np.zeros((d, d), dtype=complex)
    for i in range(d):
        shift[(i + 1) % d, i] = 1.0
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    ks = []
    for k in range(d):
        for l in range(d):
            ks.append(
                np.sqrt(table[k, l])
                * np.linalg.matrix_power(shift, k)
                @ np.linalg.matrix_power(clock, l)
            )
    return Channel(kraus=tuple(ks), dim_in=d, dim_out=d)


def pauli_complement_action(weights, rho) -> np.ndarray:
    """Closed-form action of the canonical Pauli-channel complement.

    With environment basis ordered (I, X, Y, Z), the output entry ``(k, l)``
    equals ``tr(K_l^dag K_k rho)`` for the Pauli Kraus operators, which works
    out to ``sqrt(p_k p_l)`` times a Pauli overlap of ``rho``:

        [[p0 t,   r01 x,  r02 y,  r03 z ],
         [r01 x,  p1 t,  -i r12 z, i r13 y],
         [r02 y,  i r12 z, p2 t,  -i r23 x],
         [r03 z, -i r13 y, i r23 x, p3 t ]]

    where ``t = tr(rho)``, ``x/y/z`` are the Hilbert-Schmidt overlaps
    ``<P, rho> = tr(P rho)`` and ``r_kl = sqrt(p_k p_l)``.
    """
    p = _check_distribution(weights)
    r = np.asarray(rho, dtype=complex)
    if r.shape != (2, 2):
        raise ValueError("rho must be a 2x2 matrix")
    t = np.trace(r)
    x = np.trace(PAULI_X @ r)
    y = np.trace(PAULI_Y @ r)
    z = np.trace(PAULI_Z @ r)
    s = np.sqrt(np.outer(p, p))
    return np.array(
        [
            [p[0] * t, s[0, 1] * x, s[0, 2] * y, s[0, 3] * z],
            [s[0, 1] * x, p[1] * t, -1j * s[1, 2] * z, 1j * s[1, 3] * y],
            [s[0, 2] * y, 1j * s[1, 2] * z, p[2] * t, -1j * s[2, 3] * x],
            [s[0, 3] * z, -1j * s[1, 3] * y, 1j * s[2, 3] * x, p[3] * t],
        ]
    )


def _gamma_vec(k: np.ndarray) -> np.ndarray:
    # |gamma_K> = sum_i |i> (x) K|i>, components (i, b) -> K[b, i]
    return k.T.reshape(-1)


def choi_of(n: Channel) -> ChoiMatrix:
    """Choi operator ``(id (x) N)(gamma)`` with unnormalized ``gamma``."""
    side = n.dim_in * n.dim_out
    j = np.zeros((side, side), dtype=complex)
    for k in n.kraus:
        v = _gamma_vec(k)
        j += np.outer(v, v.conj())
    return ChoiMatrix(matrix=j, dim_in=n.dim_in, dim_out=n.dim_out)


def _fix_phase(k: np.ndarray, cutoff: float) -> np.ndarray:
    flat = k.reshape(-1)
    idx = np.flatnonzero(np.abs(flat) > cutoff)
    if idx.size == 0:
        return k
    lead = flat[idx[0]]
    return k * (np.conj(lead) / abs(lead))


def channel_of_choi(t: ChoiMatrix, tol: Tolerances = DEFAULT_TOL) -> Channel:
    """Recover a channel from its Choi operator.

    Kraus operators come from the eigendecomposition of the Choi matrix, with
    eigenvalues below ``tol.zero_eigenvalue`` (relative to the largest)
    discarded and phases fixed so round trips are reproducible.
    """
    j = t.matrix
    if not is_hermitian(j, tol):
        raise ValueError("Choi matrix is not Hermitian within tolerance")
    w, u = np.linalg.eigh((j + j.conj().T) / 2)
    scale = max(float(w[-1]), 0.0)
    if w[0] < -tol.psd_floor * max(1.0, scale):
        raise ValueError(f"Choi matrix has negative eigenvalue {w[0]:.3e}")
    red = partial_trace(j, (t.dim_in, t.dim_out), keep="first")
    if np.max(np.abs(red - np.eye(t.dim_in))) > 1e-8:
        raise ValueError("partial trace of the Choi matrix is not the identity")
    cutoff = tol.zero_eigenvalue * max(scale, 1.0)
    ks = []
    for i in range(w.size - 1, -1, -1):
        if w[i] <= cutoff:
            break
        k = np.sqrt(w[i]) * u[:, i].reshape(t.dim_in, t.dim_out).T
        ks.append(_fix_phase(k, np.sqrt(cutoff)))
    if not ks:
        raise ValueError("Choi matrix is numerically zero")
    return Channel(kraus=tuple(ks), dim_in=t.dim_in, dim_out=t.dim_out)


def apply(n: Channel, rho) -> np.ndarray:
    """Kraus-sum action ``sum_k K rho K^dag``."""
    r = np.asarray(rho, dtype=complex)
    if r.shape != (n.dim_in, n.dim_in):
        raise ValueError(f"state of shape {r.shape}, channel input is {n.dim_in}")
    ks = np.stack(n.kraus)
    return np.einsum("kij,jl,kml->im", ks, r, ks.conj())


def compose(m: Channel, n: Channel) -> Channel:
    """The channel ``m after n``; Kraus set is all products ``M_j K_i``.

    The product index orders ``m``'s index as the major one, so the canonical
    environment of the composition factors as (env of m) (x) (env of n).
    """
    if n.dim_out != m.dim_in:
        raise ValueError(
            f"cannot compose: inner dims {n.dim_out} (out) vs {m.dim_in} (in)"
        )
    ks = tuple(mj @ ki for mj in m.kraus for ki in n.kraus)
    return Channel(kraus=ks, dim_in=n.dim_in, dim_out=m.dim_out)


def stinespring(n: Channel) -> IsometricExtension:
    """Canonical isometric extension ``V = sum_k K_k (x) |k>_E``."""
    de = len(n.kraus)
    v = np.zeros((n.dim_out * de, n.dim_in), dtype=complex)
    view = v.reshape(n.dim_out, de, n.dim_in)
    for e, k in enumerate(n.kraus):
        view[:, e, :] = k
    if np.max(np.abs(v.conj().T @ v - np.eye(n.dim_in))) > DEFAULT_TOL.hermiticity:
        raise ValueError("stacked Kraus operators do not form an isometry")
    return IsometricExtension(v=v, dim_in=n.dim_in, dim_out=n.dim_out, dim_env=de)


def complementary(n: Channel) -> Channel:
    """Complementary channel ``rho -> tr_out(V rho V^dag)`` for canonical ``V``.

    The output dimension equals the number of Kraus operators of ``n``.
    """
    ks = np.stack(n.kraus)  # (env, dim_out, dim_in)
    comp = tuple(np.array(ks[:, b, :]) for b in range(n.dim_out))
    return Channel(kraus=comp, dim_in=n.dim_in, dim_out=len(n.kraus))


def choi_rank(n: Channel, tol: Tolerances = DEFAULT_TOL) -> int:
    """Rank of the Choi matrix: the minimal environment dimension.

    Counts eigenvalues exceeding ``tol.rank_rel`` times the largest one.
    """
    w = np.linalg.eigvalsh(hermitianize_choi(n))
    top = float(w[-1])
    return int(np.count_nonzero(w > tol.rank_rel * top))


def hermitianize_choi(n: Channel) -> np.ndarray:
    j = choi_of(n).matrix
    return (j + j.conj().T) / 2


def channel_difference(a: Channel, b: Channel) -> HermitianPreservingMap:
    """The Hermiticity-preserving map ``a - b`` as a Choi-matrix difference."""
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise ValueError("dimension mismatch between the two maps")
    d = choi_of(a).matrix - choi_of(b).matrix
    return HermitianPreservingMap(
        choi=ChoiMatrix(matrix=d, dim_in=a.dim_in, dim_out=a.dim_out)
    )


def apply_choi(t: ChoiMatrix, rho) -> np.ndarray:
    """Action of a map given by its Choi: ``tr_in(J (rho^T (x) I))``."""
    r = np.asarray(rho, dtype=complex)
    if r.shape != (t.dim_in, t.dim_in):
        raise ValueError("state dimension does not match the Choi input")
    return partial_trace(
        t.matrix @ kron(r.T, np.eye(t.dim_out)), (t.dim_in, t.dim_out), keep="second"
    )
