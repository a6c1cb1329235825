"""Coherent information, capacity-gap continuity bounds, and assembled
two-sided intervals for the quantum capacity Q and private capacity P.

For an eta-degradable channel with Choi rank ``|E|``, Q and P exceed the
one-shot coherent information by at most :func:`quantum_gap` and
:func:`private_gap` respectively; both gaps vanish like ``-eta log eta``.
The coherent information itself is maximized numerically, so the reported
value is a certified lower bound on the true maximum (and the interval upper
edges are exact only if the search found it; every report repeats this
caveat).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channels import Channel, apply, choi_rank, complementary
from .degradability import degradability_sdp
from .linalg import DEFAULT_TOL, Tolerances, von_neumann_entropy
from .sdp import SolveOptions, hvec, unhvec

__all__ = [
    "CapacityReport",
    "ROW_HEADER",
    "binary_entropy",
    "quantum_gap",
    "private_gap",
    "coherent_information_state",
    "coherent_information",
    "capacity_interval",
    "leading_order_gap",
    "dominant_gap_curves",
    "ETA_FLOOR",
]

_LN2_INV = 1.0 / np.log(2.0)

# below this eta both gap offsets are reported as exactly zero
ETA_FLOOR = 1e-9


def binary_entropy(x: float) -> float:
    """``h(x) = -x log2 x - (1-x) log2(1-x)``; exact 0 within 1e-15 of {0, 1}."""
    if not -1e-12 <= x <= 1.0 + 1e-12:
        raise ValueError(f"binary entropy argument {x!r} outside [0, 1]")
    if abs(x) <= 1e-15 or abs(1.0 - x) <= 1e-15:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def _rank_term(eta: float, env_dim: int, weight: float) -> float:
    # weight * eta * log2(|E| - 1), defined as 0 at |E| = 1
    if env_dim == 1:
        if eta > 0.0:
            warnings.warn(
                "gap bound with a rank-one environment: the log(|E|-1) term "
                "is taken as 0 by convention",
                stacklevel=3,
            )
        return 0.0
    return weight * eta * float(np.log2(env_dim - 1))


def _check_gap_args(eta: float, env_dim: int) -> None:
    if not -1e-12 <= eta <= 2.0 + 1e-9:
        raise ValueError(f"eta={eta!r} outside [0, 2]")
    if env_dim < 1:
        raise ValueError("environment dimension must be at least 1")


def quantum_gap(eta: float, env_dim: int) -> float:
    """Upper bound on ``Q - I_c`` for an eta-degradable channel of Choi rank
    ``env_dim``:

        (eta/2) log(|E|-1) + eta log|E| + h(eta/2)
        + (1 + eta/2) h(eta / (2 + eta)).
    """
    _check_gap_args(eta, env_dim)
    if eta <= 0.0:
        return 0.0
    return (
        _rank_term(eta, env_dim, 0.5)
        + eta * float(np.log2(env_dim))
        + binary_entropy(eta / 2.0)
        + (1.0 + eta / 2.0) * binary_entropy(eta / (2.0 + eta))
    )


def private_gap(eta: float, env_dim: int) -> float:
    """Upper bound on ``P - I_c``:

        eta log(|E|-1) + 4 eta log|E| + 2 h(eta/2)
        + 4 (1 + eta/2) h(eta / (2 + eta)).
    """
    _check_gap_args(eta, env_dim)
    if eta <= 0.0:
        return 0.0
    return (
        _rank_term(eta, env_dim, 1.0)
        + 4.0 * eta * float(np.log2(env_dim))
        + 2.0 * binary_entropy(eta / 2.0)
        + 4.0 * (1.0 + eta / 2.0) * binary_entropy(eta / (2.0 + eta))
    )


def coherent_information_state(rho, n: Channel, tol: Tolerances = DEFAULT_TOL) -> float:
    """``S(N(rho)) - S(N^c(rho))`` in qubits per use.

    Independent of the complementary-channel choice (environment unitaries
    cancel between the two entropies).
    """
    r = np.asarray(rho, dtype=complex)
    von_neumann_entropy(r, tol)  # validates Hermitian / PSD / unit trace
    nc = complementary(n)
    return _entropy_bits(apply(n, r)) - _entropy_bits(apply(nc, r))


def _entropy_bits(m: np.ndarray) -> float:
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    w = w[w > DEFAULT_TOL.zero_eigenvalue]
    return float(-np.sum(w * np.log2(w)))


def _project_simplex(v: np.ndarray) -> np.ndarray:
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    idx = np.nonzero(u + (1.0 - css) / (np.arange(u.size) + 1.0) > 0.0)[0][-1]
    shift = (1.0 - css[idx]) / (idx + 1.0)
    return np.clip(v + shift, 0.0, None)


def _project_density(h: np.ndarray) -> np.ndarray:
    sym = (h + h.conj().T) / 2
    w, u = np.linalg.eigh(sym)
    return (u * _project_simplex(w)) @ u.conj().T


def _bloch_states(n_radial: int, n_dirs: int) -> np.ndarray:
    # radius x direction product grid over the Bloch ball, r = 0 included
    golden = np.pi * (3.0 - np.sqrt(5.0))
    k = np.arange(n_dirs)
    z = 1.0 - 2.0 * (k + 0.5) / n_dirs
    az = golden * k
    rad = np.sqrt(1.0 - z * z)
    dirs = np.stack([rad * np.cos(az), rad * np.sin(az), z], axis=1)
    states = [np.eye(2, dtype=complex) / 2.0]
    paulis = np.array(
        [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
    )
    for r in np.linspace(0.0, 1.0, n_radial)[1:]:
        for d in dirs:
            states.append((np.eye(2) + r * np.einsum("i,ijk->jk", d, paulis)) / 2.0)
    return np.array(states)


def coherent_information(
    n: Channel,
    restarts: int = 20,
    fd_step: float = 1e-5,
    improve_tol: float = 1e-10,
    max_iter: int = 200,
    seed: int = 7,
) -> tuple[float, np.ndarray]:
    """Maximize the coherent information over input states.

    Projected gradient ascent on the density-matrix simplex with
    finite-difference gradients, restarted from random states; qubit inputs
    additionally seed the search with a radius-times-direction grid over the
    Bloch ball.  The maximum is approached from below, so the returned value
    is a lower bound on the true one-shot coherent information.
    """
    nc = complementary(n)
    d = n.dim_in

    def value(rho: np.ndarray) -> float:
        return _entropy_bits(apply(n, rho)) - _entropy_bits(apply(nc, rho))

    def ascend(rho0: np.ndarray) -> tuple[float, np.ndarray]:
        rho = _project_density(rho0)
        best = value(rho)
        step = 0.1
        for _ in range(max_iter):
            prev = best
            coords = hvec(rho)
            grad = np.empty(d * d)
            for i in range(d * d):
                bumped = coords.copy()
                bumped[i] += fd_step
                grad[i] = (value(_project_density(unhvec(bumped, d))) - prev) / fd_step
            while step > 1e-12:
                cand = _project_density(unhvec(coords + step * grad, d))
                val = value(cand)
                if val > best:
                    rho, best = cand, val
                    step *= 1.5
                    break
                step *= 0.5
            if best - prev < improve_tol:
                break
        return best, rho

    starts = [np.eye(d, dtype=complex) / d]
    if d == 2:
        grid = _bloch_states(n_radial=10, n_dirs=111)
        vals = [value(s) for s in grid]
        starts.append(grid[int(np.argmax(vals))])
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        rho = g @ g.conj().T
        starts.append(rho / np.trace(rho).real)

    best_val, best_rho = -np.inf, None
    for s0 in starts:
        val, rho = ascend(np.asarray(s0, dtype=complex))
        if val > best_val:
            best_val, best_rho = val, rho
    return float(best_val), best_rho


ROW_HEADER = "channel ic eta eta_source choi_rank q_lower q_upper p_lower p_upper"


@dataclass(frozen=True)
class CapacityReport:
    """Coherent information and the resulting Q/P intervals for one channel."""

    channel: str
    ic: float
    maximizer: np.ndarray
    eta: float
    eta_source: str  # "sdp" | "constructed"
    choi_rank: int
    rank_threshold: float
    q_interval: tuple[float, float]
    p_interval: tuple[float, float]

    def to_text(self) -> str:
        lines = [
            f"channel: {self.channel}",
            f"coherent information (best found): {self.ic:.9f} qubits/use",
            f"degradability parameter eta ({self.eta_source}): {self.eta:.6e}",
            f"Choi rank |E|: {self.choi_rank} (relative threshold {self.rank_threshold:g})",
            f"quantum capacity Q in [{self.q_interval[0]:.9f}, {self.q_interval[1]:.9f}]",
            f"private capacity P in [{self.p_interval[0]:.9f}, {self.p_interval[1]:.9f}]",
            "note: the lower edges use the best coherent-information value found",
            "by a local search; the upper edges are exact only if that search",
            "reached the true maximum.",
        ]
        return "\n".join(lines)

    def to_row(self) -> str:
        return (
            f"{self.channel} {self.ic:.12g} {self.eta:.12g} {self.eta_source} "
            f"{self.choi_rank} {self.q_interval[0]:.12g} {self.q_interval[1]:.12g} "
            f"{self.p_interval[0]:.12g} {self.p_interval[1]:.12g}"
        )


def capacity_interval(
    n: Channel,
    label: str = "channel",
    eta: float | None = None,
    opts: SolveOptions = SolveOptions(),
    tol: Tolerances = DEFAULT_TOL,
    **search_opts,
) -> CapacityReport:
    """Assemble the two-sided Q and P intervals for a channel.

    ``eta`` defaults to the SDP-optimal degradability parameter; passing a
    caller-computed value (e.g. from a constructed degrading map) records the
    source as "constructed".  Below ``ETA_FLOOR`` the gap offsets are zero.
    """
    if eta is None:
        eta_val = degradability_sdp(n, opts).eta_sdp
        source = "sdp"
    else:
        eta_val, source = float(eta), "constructed"
    rank = choi_rank(n, tol)
    ic, maximizer = coherent_information(n, **search_opts)
    if eta_val < ETA_FLOOR:
        q_off = p_off = 0.0
    else:
        q_off = quantum_gap(eta_val, rank)
        p_off = private_gap(eta_val, rank)
    return CapacityReport(
        channel=label,
        ic=ic,
        maximizer=maximizer,
        eta=eta_val,
        eta_source=source,
        choi_rank=rank,
        rank_threshold=tol.rank_rel,
        q_interval=(ic, ic + q_off),
        p_interval=(ic, ic + p_off),
    )


def leading_order_gap(c: float, r: float, p: float, env_dim: int, which: str = "Q") -> float:
    """Leading-order capacity gap when ``eta <= c p^r`` with ``r > 1``.

    For Q:  ``c r p^(r-1) (-p log p) + c p^r (-log c + 1 + 1/ln2
    + log|E| + (1/2) log(|E|-1))``; for P the first term triples and the
    linear coefficient becomes ``-3 log c + 3 + 3/ln2 + log(|E|-1) + 4 log|E|``.
    """
    if r <= 1.0:
        raise ValueError("the tangency argument needs r > 1")
    if c <= 0.0:
        raise ValueError("c must be positive")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if env_dim < 1:
        raise ValueError("environment dimension must be at least 1")
    log_em1 = 0.0 if env_dim == 1 else float(np.log2(env_dim - 1))
    log_e = float(np.log2(env_dim))
    lead = c * r * p ** (r - 1.0) * (-p * np.log2(p))
    if which == "Q":
        lin = -np.log2(c) + 1.0 + _LN2_INV + log_e + 0.5 * log_em1
        return float(lead + c * p**r * lin)
    if which == "P":
        lin = -3.0 * np.log2(c) + 3.0 + 3.0 * _LN2_INV + log_em1 + 4.0 * log_e
        return float(3.0 * lead + c * p**r * lin)
    raise ValueError(f"which must be 'Q' or 'P', got {which!r}")


def dominant_gap_curves(c: float, rs, p_grid) -> tuple[list[str], np.ndarray]:
    """Tabulate ``g(c p^r) = -c p^r log2(c p^r)`` and its p-derivative.

    Returns column names and an array with one row per grid point: first the
    grid value ``p``, then per exponent the pair ``(g, dg/dp)`` evaluated with
    the closed-form derivative ``(-log2(c p^r) - 1/ln2) c r p^(r-1)``.
    """
    rs = [float(r) for r in rs]
    if not rs:
        raise ValueError("need at least one exponent r")
    if c <= 0.0:
        raise ValueError("c must be positive")
    if min(rs) < 1.0:
        raise ValueError("exponents must satisfy r >= 1")
    p = np.asarray(p_grid, dtype=float)
    cols = ["p"]
    data = [p]
    for r in rs:
        eta = c * p**r
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(eta > 0.0, -eta * np.log2(eta), 0.0)
            dg = np.where(
                p > 0.0,
                (-np.log2(eta) - _LN2_INV) * c * r * p ** (r - 1.0),
                np.inf if r == 1.0 else 0.0,
            )
        cols += [f"g_r{r:g}", f"dgdp_r{r:g}"]
        data += [g, dg]
    return cols, np.column_stack(data)
