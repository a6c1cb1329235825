"""Degradability parameters: the exact semidefinite program, and constructed
degrading maps with their analytic guarantees.

A channel ``N`` with complement ``N^c`` is eta-degradable when some channel
``M`` brings ``||N^c - M o N||_diamond`` down to eta.  The optimal eta solves

    minimize   2 mu
    subject to tr_env Z <= mu I_in
               tr_env Y  = I_out
               Z >= J(N^c) - J(J^inv(Y) o N),   Z >= 0,  Y >= 0,

where ``Y`` is the Choi matrix of the degrading map.  For Pauli channel
families, degrading with the complement of a slightly noisier family member
(error weights evaluated at ``p + a_i p^2``) achieves eta = O(p^2); the
tuned shifts ``a_i = 4 sum_{j != i} c_j`` cancel the p^(3/2) coefficient of
the residual map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sdp
from .channels import (
    Channel,
    ChoiMatrix,
    PauliFamily,
    SimplexError,
    _check_distribution,
    channel_difference,
    channel_of_choi,
    choi_of,
    complementary,
    compose,
    depolarizing,
    identity_channel,
    pauli,
    xz_channel,
)
from .diamond import covariant_diamond, diamond_norm_diff, diamond_norm_hp
from .linalg import kron, partial_trace
from .sdp import SdpProblem, SolveOptions, ensure_optimal

__all__ = [
    "DegradabilityReport",
    "ResidualCoefficients",
    "degradability_sdp",
    "complementary_degrading_eta",
    "tuned_pauli_eta",
    "depol_tuned_eta",
    "xz_tuned_eta",
    "residual_coefficients",
    "recovery_degrading_eta",
    "tuned_shifts",
    "depol_offdiagonal_coefficient",
    "depol_residual_blocks",
    "DEPOL_SHIFT",
    "XZ_SHIFT",
]

# quadratic shift of the noise argument that cancels the residual's p^(3/2)
# coefficient for the equal-weight and XZ families
DEPOL_SHIFT = 8.0 / 3.0
XZ_SHIFT = 4.0


@dataclass(frozen=True)
class DegradabilityReport:
    """Degradability parameter of a channel, with its witnessing map.

    ``eta_sdp`` is the optimum over all degrading maps (present when the SDP
    ran); ``eta_constructed`` is the value achieved by an explicitly
    constructed map, with ``analytic_bound`` its closed-form guarantee.
    """

    degrading_map: Channel
    eta_sdp: float | None = None
    eta_constructed: float | None = None
    constructed_map_descriptor: tuple | None = None
    analytic_bound: float | None = None


@dataclass(frozen=True)
class ResidualCoefficients:
    """Closed-form entries of the residual map ``N_p^c - N_q^c o N_p``.

    ``diag`` holds the four diagonal coefficients ``p_i - q_i`` (they multiply
    ``tr rho``).  ``id_cross[i-1]`` multiplies the Pauli-i overlap in the
    entries coupling environment row 0 to row i; ``pauli_cross[i-1]``
    multiplies it in the entries coupling the remaining two rows j, k.
    """

    diag: np.ndarray
    id_cross: np.ndarray
    pauli_cross: np.ndarray


def _degraded_choi_operator(jn: np.ndarray, da: int, db: int, de: int) -> np.ndarray:
    """hvec matrix of the linear map ``Y_BE -> J(J^inv(Y) o N)``."""
    jn4 = jn.reshape(da, db, da, db)

    def fn(y):
        y4 = y.reshape(db, de, db, de)
        return np.einsum("ikjl,kalb->iajb", jn4, y4).reshape(da * de, da * de)

    return sdp.hvec_operator(fn, db * de, da * de)


def _project_to_choi(y: np.ndarray, db: int, de: int) -> np.ndarray:
    # PSD projection, then exact partial-trace correction; the solver returns
    # iterates feasible only to tolerance and downstream needs a real channel
    w, u = np.linalg.eigh((y + y.conj().T) / 2)
    psd = (u * np.clip(w, 0.0, None)) @ u.conj().T
    gap = np.eye(db) - partial_trace(psd, (db, de), keep="first")
    return psd + kron(gap, np.eye(de) / de)


def degradability_sdp(n: Channel, opts: SolveOptions = SolveOptions()) -> DegradabilityReport:
    """Optimal degradability parameter and the optimizing degrading map.

    The extracted map is projected to an exact channel and checked: the
    recomputed ``||N^c - M o N||_diamond`` must agree with the SDP optimum to
    1e-6, else a ``RuntimeError`` is raised.
    """
    nc = complementary(n)
    da, db, de = n.dim_in, n.dim_out, nc.dim_out
    jnc = choi_of(nc).matrix
    jn = choi_of(n).matrix

    prob = SdpProblem()
    y = prob.add_block(db * de)
    z = prob.add_block(da * de)
    mu = prob.add_scalar()
    ptr_y = sdp.hvec_operator(
        lambda h: partial_trace(h, (db, de), keep="first"), db * de, db
    )
    prob.equality(prob.var(y).transform(ptr_y, db) - sdp.MatrixExpr.of_const(np.eye(db)))
    lifted = _degraded_choi_operator(jn, da, db, de)
    prob.psd(
        prob.var(z)
        + prob.var(y).transform(lifted, da * de)
        - sdp.MatrixExpr.of_const(jnc)
    )
    ptr_z = sdp.hvec_operator(
        lambda h: partial_trace(h, (da, de), keep="first"), da * de, da
    )
    prob.psd(prob.scalar_times(mu, np.eye(da)) - prob.var(z).transform(ptr_z, da))
    prob.minimize(2.0 * prob.scalar(mu))

    sol = ensure_optimal(sdp.solve(prob, opts))
    eta = sol.primal_objective
    y_choi = _project_to_choi(sol.variables[y], db, de)
    degrading = channel_of_choi(ChoiMatrix(matrix=y_choi, dim_in=db, dim_out=de))
    recomputed = diamond_norm_diff(nc, compose(degrading, n), opts).value
    if abs(recomputed - eta) > 1e-6:
        raise RuntimeError(
            f"extracted degrading map reproduces eta={recomputed:.3e}, "
            f"SDP optimum was {eta:.3e}"
        )
    return DegradabilityReport(degrading_map=degrading, eta_sdp=eta)


def complementary_degrading_eta(n: Channel, opts: SolveOptions = SolveOptions()) -> float:
    """``||N^c - N^c o N||_diamond``: the complement itself as degrading map.

    For a channel within ``eps`` of the identity in diamond norm this is at
    most ``2 eps^(3/2)``.
    """
    if n.dim_in != n.dim_out:
        raise ValueError("channel must have equal input and output dimensions")
    nc = complementary(n)
    return diamond_norm_diff(nc, compose(nc, n), opts).value


def tuned_shifts(linear_coeffs) -> np.ndarray:
    """The shifts ``a_i = 4 sum_{j != i} c_j`` (0 where ``c_i`` vanishes)."""
    c = np.asarray(linear_coeffs, dtype=float)
    total = c.sum()
    return np.where(c != 0.0, 4.0 * (total - c), 0.0)


def _cross_coefficient(c: np.ndarray) -> float:
    return float(abs(c[0] * c[1] + c[0] * c[2] + c[1] * c[2]))


def tuned_pauli_eta(
    family: PauliFamily, p: float, opts: SolveOptions = SolveOptions()
) -> DegradabilityReport:
    """Degradability of a polynomial Pauli family via the tuned complement.

    Degrades ``N_p`` with the complement of the family member whose error
    polynomials are evaluated at ``p + a_i p^2``.  Weights that leave the
    probability simplex raise :class:`SimplexError` rather than being
    clamped.  The achieved eta is computed by the diamond-norm SDP and comes
    with the analytic bound ``64 |c1 c2 + c1 c3 + c2 c3| p^2``.
    """
    c = family.linear_coeffs()
    shifts = tuned_shifts(c)
    p_weights = family.weights(p)
    q_weights = family.tuned_weights(p, shifts)
    channel = pauli(*p_weights)
    degrading = complementary(pauli(*q_weights))
    phi = channel_difference(complementary(channel), compose(degrading, channel))
    eta = diamond_norm_hp(phi, opts).value
    return DegradabilityReport(
        degrading_map=degrading,
        eta_constructed=eta,
        constructed_map_descriptor=("pauli-poly", tuple(shifts), tuple(q_weights)),
        analytic_bound=64.0 * _cross_coefficient(c) * p * p,
    )


def depol_offdiagonal_coefficient(p: float, shift: float = DEPOL_SHIFT) -> float:
    """The residual coefficient coupling the identity and Pauli environment
    rows for the equal-weight family:

        sqrt(p(1-p)/3) - (1 - 4p/3) sqrt(s(1-s)/3),   s = p + shift p^2.

    Its p^(3/2) Taylor coefficient vanishes exactly at shift = 8/3.
    """
    s = p + shift * p * p
    return float(
        np.sqrt(p * (1 - p) / 3.0) - (1 - 4.0 * p / 3.0) * np.sqrt(s * (1 - s) / 3.0)
    )


def depol_residual_blocks(p: float, shift: float = DEPOL_SHIFT) -> list[np.ndarray]:
    """The four 4x4 blocks of half the residual Choi matrix for the
    equal-weight family at noise ``p``, ordered row-major over the input
    qubit indices."""
    s = p + shift * p * p
    phi = channel_difference(
        complementary(depolarizing(p)),
        compose(complementary(depolarizing(s)), depolarizing(p)),
    )
    half = phi.choi.matrix / 2.0
    return [half[4 * i : 4 * i + 4, 4 * j : 4 * j + 4] for i in range(2) for j in range(2)]


def depol_tuned_eta(p: float, opts: SolveOptions = SolveOptions()) -> DegradabilityReport:
    """Tuned-complement degradability of the equal-weight (depolarizing)
    family, evaluated by the covariant closed form ``(1/2)||J||_1``.

    The degrading map is the complement at ``s = p + (8/3) p^2``; the
    analytic bound is ``(8/9)(6 + sqrt 2) p^2``.
    """
    s = p + DEPOL_SHIFT * p * p
    if not 0.0 <= s <= 0.75:
        raise SimplexError(f"shifted noise s={s!r} outside [0, 3/4]")
    channel = depolarizing(p)
    degrading = complementary(depolarizing(s))
    phi = channel_difference(complementary(channel), compose(degrading, channel))
    eta = covariant_diamond(phi)
    return DegradabilityReport(
        degrading_map=degrading,
        eta_constructed=eta,
        constructed_map_descriptor=("depol", DEPOL_SHIFT, s),
        analytic_bound=(8.0 / 9.0) * (6.0 + np.sqrt(2.0)) * p * p,
    )


def xz_tuned_eta(p: float, opts: SolveOptions = SolveOptions()) -> DegradabilityReport:
    """Tuned-complement degradability of the equal X/Z-error family,
    evaluated by the covariant closed form.

    Degrades with the complement of the family member at ``s = p + 4 p^2``
    (weights ``((1-s)^2, s - s^2, s^2, s - s^2)``); the analytic bound is
    ``16 p^2 + 32 p^(5/2)``.
    """
    s = p + XZ_SHIFT * p * p
    if not 0.0 <= s <= 1.0:
        raise SimplexError(f"shifted noise s={s!r} outside [0, 1]")
    channel = xz_channel(p, p)
    degrading = complementary(pauli((1 - s) ** 2, s - s * s, s * s, s - s * s))
    phi = channel_difference(complementary(channel), compose(degrading, channel))
    eta = covariant_diamond(phi)
    return DegradabilityReport(
        degrading_map=degrading,
        eta_constructed=eta,
        constructed_map_descriptor=("xz", XZ_SHIFT, s),
        analytic_bound=16.0 * p * p + 32.0 * p**2.5,
    )


def residual_coefficients(p_weights, q_weights) -> ResidualCoefficients:
    """Closed-form coefficients of the residual map ``N_p^c - N_q^c o N_p``.

    With ``r_i = p_0 + p_i - p_j - p_k`` (the Pauli-i transfer eigenvalue of
    ``N_p``), the coefficients are

        id_cross[i-1]    = sqrt(p_0 p_i) - sqrt(q_0 q_i) r_i,
        pauli_cross[i-1] = sqrt(p_j p_k) - sqrt(q_j q_k) r_i,
        diag             = p - q  (componentwise),

    and together with :class:`ResidualCoefficients`'s placement rules they
    reproduce the Choi matrix of :func:`qcap.channels.channel_difference`
    entrywise.
    """
    pw = _check_distribution(p_weights)
    qw = _check_distribution(q_weights)
    transfer = np.array(
        [
            pw[0] + pw[1] - pw[2] - pw[3],
            pw[0] - pw[1] + pw[2] - pw[3],
            pw[0] - pw[1] - pw[2] + pw[3],
        ]
    )
    id_cross = np.array(
        [np.sqrt(pw[0] * pw[i]) - np.sqrt(qw[0] * qw[i]) * transfer[i - 1] for i in (1, 2, 3)]
    )
    others = {1: (2, 3), 2: (1, 3), 3: (1, 2)}
    pauli_cross = np.array(
        [
            np.sqrt(pw[j] * pw[k]) - np.sqrt(qw[j] * qw[k]) * transfer[i - 1]
            for i, (j, k) in others.items()
        ]
    )
    return ResidualCoefficients(diag=pw - qw, id_cross=id_cross, pauli_cross=pauli_cross)


def _trace_out_first(d_first: int, d_second: int) -> Channel:
    ks = []
    for k in range(d_first):
        op = np.zeros((d_second, d_first * d_second), dtype=complex)
        op[:, k * d_second : (k + 1) * d_second] = np.eye(d_second)
        ks.append(op)
    return Channel(kraus=tuple(ks), dim_in=d_first * d_second, dim_out=d_second)


def recovery_degrading_eta(
    n: Channel, m: Channel, opts: SolveOptions = SolveOptions()
) -> tuple[Channel, float]:
    """Degrading map for a channel made low-noise by a recovery channel.

    Given ``m`` with ``eps = ||m o n - id||_diamond`` small, the map
    ``D = tr_env(m) ( (m o n)^c o m )`` degrades ``n`` with
    ``eta = ||n^c - D o n||_diamond <= 2 eps^(3/2)``; that inequality is
    asserted (to 1e-6) before returning ``(D, eta)``.
    """
    mn = compose(m, n)
    if mn.dim_in != mn.dim_out:
        raise ValueError("m o n must be an endomorphism")
    eps = diamond_norm_diff(mn, identity_channel(mn.dim_in), opts).value
    # canonical env of m o n factors as (env of m) (x) (env of n), m major
    comp = complementary(mn)
    e_m, e_n = len(m.kraus), len(n.kraus)
    degrading = compose(_trace_out_first(e_m, e_n), compose(comp, m))
    eta = diamond_norm_diff(complementary(n), compose(degrading, n), opts).value
    if eta > 2.0 * eps**1.5 + 1e-6:
        raise RuntimeError(
            f"constructed map achieves eta={eta:.3e} above the 2 eps^1.5 "
            f"guarantee {2.0 * eps**1.5:.3e}"
        )
    return degrading, eta
