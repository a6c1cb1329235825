"""Diamond-norm distances: the exact semidefinite program and cheaper bounds.

The workhorse program computes ``||N1 - N2||_diamond`` as

    minimize   2 mu
    subject to tr_out Z <= mu I_in,   Z >= J(N1) - J(N2),   Z >= 0,

stated on complex Choi matrices and lowered through the real embedding in
:mod:`qcap.sdp`.  The same program evaluates any trace-annihilating
Hermiticity-preserving map (differences of channels and their scalar
multiples), which covers every use in this package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sdp
from .channels import (
    Channel,
    ChoiMatrix,
    HermitianPreservingMap,
    channel_difference,
    choi_of,
    stinespring,
)
from .linalg import DEFAULT_TOL, Tolerances, max_norm, operator_norm, partial_trace, trace_norm
from .sdp import SdpProblem, SdpSolution, SolveOptions, ensure_optimal

__all__ = [
    "DiamondResult",
    "diamond_norm_diff",
    "diamond_norm_hp",
    "max_norm_diamond_bound",
    "covariant_diamond",
    "stinespring_distance_bounds",
]


@dataclass(frozen=True)
class DiamondResult:
    value: float
    method: str  # sdp | covariant_closed_form | max_norm_bound
    certificate: SdpSolution | None = None


def _diamond_sdp(delta: np.ndarray, dim_in: int, dim_out: int, opts: SolveOptions) -> SdpSolution:
    prob = SdpProblem()
    z = prob.add_block(dim_in * dim_out)
    mu = prob.add_scalar()
    prob.psd(prob.var(z) - sdp.MatrixExpr.of_const(delta))
    ptr = sdp.hvec_operator(
        lambda h: partial_trace(h, (dim_in, dim_out), keep="first"),
        dim_in * dim_out,
        dim_in,
    )
    prob.psd(prob.scalar_times(mu, np.eye(dim_in)) - prob.var(z).transform(ptr, dim_in))
    prob.minimize(2.0 * prob.scalar(mu))
    return ensure_optimal(sdp.solve(prob, opts))


def diamond_norm_diff(
    n1: Channel, n2: Channel, opts: SolveOptions = SolveOptions()
) -> DiamondResult:
    """``||N1 - N2||_diamond`` of two channels with equal dimensions."""
    if (n1.dim_in, n1.dim_out) != (n2.dim_in, n2.dim_out):
        raise ValueError("channels must share input and output dimensions")
    delta = choi_of(n1).matrix - choi_of(n2).matrix
    sol = _diamond_sdp(delta, n1.dim_in, n1.dim_out, opts)
    return DiamondResult(value=sol.primal_objective, method="sdp", certificate=sol)


def diamond_norm_hp(
    phi: HermitianPreservingMap, opts: SolveOptions = SolveOptions()
) -> DiamondResult:
    """Diamond norm of a Hermiticity-preserving map given by its Choi matrix.

    Exact whenever the Choi difference has vanishing output partial trace
    (channel differences and scalar multiples thereof).
    """
    choi = phi.choi
    sol = _diamond_sdp(choi.matrix, choi.dim_in, choi.dim_out, opts)
    return DiamondResult(value=sol.primal_objective, method="sdp", certificate=sol)


def max_norm_diamond_bound(theta: ChoiMatrix, tol: Tolerances = DEFAULT_TOL) -> float:
    """Upper bound ``|in| |out|^2 max_ij |J_ij|`` on the diamond norm of a CP map.

    The input Choi matrix must be PSD (the bound holds for completely positive
    maps only).
    """
    j = theta.matrix
    w = np.linalg.eigvalsh((j + j.conj().T) / 2)
    if w[0] < -tol.psd_floor * max(1.0, float(w[-1])):
        raise ValueError("Choi matrix is not PSD: the bound applies to CP maps")
    return theta.dim_in * theta.dim_out**2 * max_norm(j)


def covariant_diamond(phi: HermitianPreservingMap, assume_covariant: bool = True) -> float:
    """``(1/2) ||J(Phi)||_1`` for maps whose diamond norm peaks at the
    maximally entangled input.

    That identity holds when the two maps forming ``phi`` are jointly
    covariant under a unitary 1-design; the caller asserts this, it is not
    checked here (the test suite cross-checks against the SDP).
    """
    if not assume_covariant:
        raise ValueError("caller must assert joint covariance")
    return 0.5 * trace_norm(phi.choi.matrix)


def _procrustes_unitary(c: np.ndarray) -> np.ndarray:
    # maximizer of Re tr(W C) over unitaries W
    u, _, vh = np.linalg.svd(c)
    return (u @ vh).conj().T


def stinespring_distance_bounds(
    n1: Channel,
    n2: Channel,
    restarts: int = 100,
    iters: int = 25,
    seed: int = 0,
) -> tuple[float, float]:
    """Bracket ``||N1 - N2||_diamond`` via the isometric-extension distance.

    Searches heuristically over environment unitaries ``W`` for a small
    ``d = ||V1 - (I (x) W) V2||_inf`` using alternating polar-decomposition
    updates on a reweighted Frobenius surrogate, restarted from random
    unitaries.  Any ``W`` gives ``d`` at least the true infimum, so only the
    upper inequality ``||N1 - N2||_diamond <= 2 d`` is a certified bound; the
    returned pair is ``(d^2, 2 d)``.
    """
    if (n1.dim_in, n1.dim_out) != (n2.dim_in, n2.dim_out):
        raise ValueError("channels must share input and output dimensions")
    v1 = stinespring(n1)
    v2 = stinespring(n2)
    de = max(v1.dim_env, v2.dim_env)

    def padded(ext):
        if ext.dim_env == de:
            return ext.v
        v = np.zeros((ext.dim_out * de, ext.dim_in), dtype=complex)
        view = v.reshape(ext.dim_out, de, ext.dim_in)
        view[:, : ext.dim_env, :] = ext.v.reshape(ext.dim_out, ext.dim_env, ext.dim_in)
        return v

    m1 = padded(v1)
    m2 = padded(v2)
    db = n1.dim_out

    def env_overlap(weight: np.ndarray) -> np.ndarray:
        # tr_out(V2 Omega V1^dag) as a matrix on the environment
        prod = m2 @ weight @ m1.conj().T
        return partial_trace(prod, (db, de), keep="second")

    def dist(w: np.ndarray) -> float:
        return operator_norm(m1 - np.kron(np.eye(db), w) @ m2)

    rng = np.random.default_rng(seed)
    best_w = _procrustes_unitary(env_overlap(np.eye(n1.dim_in)))
    best = dist(best_w)
    for _ in range(restarts - 1):
        g = rng.standard_normal((de, de)) + 1j * rng.standard_normal((de, de))
        w, _ = np.linalg.qr(g)
        for _ in range(iters):
            resid = m1 - np.kron(np.eye(db), w) @ m2
            u, sv, vh = np.linalg.svd(resid, full_matrices=False)
            # weight toward the dominant singular directions of the residual
            omega = (vh.conj().T * (sv / max(sv[0], 1e-300)) ** 4) @ vh
            w = _procrustes_unitary(env_overlap(omega + 1e-3 * np.eye(n1.dim_in)))
        d = dist(w)
        if d < best:
            best, best_w = d, w
    d = min(best, 2.0)
    return d * d, 2.0 * d
