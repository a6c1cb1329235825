"""Dense interior-point solver for small semidefinite programs with complex
Hermitian matrix variables.

Problems are stated over complex Hermitian PSD matrix blocks and nonnegative
scalars, with affine matrix equalities and affine PSD inequalities (the
latter lowered to equalities through slack blocks).  Complex blocks are
lowered to real symmetric ones through the doubling embedding
``H -> [[Re H, -Im H], [Im H, Re H]]`` (:func:`hermitian_to_real`); pairings
against embedded matrices are halved so every reported number refers to the
complex program.

The core solves the homogeneous self-dual embedding of the standard-form pair

    min <c, x>  s.t.  A x = b,  x in K          (K = PSD blocks x nonneg)

by a Mehrotra predictor-corrector path-following method with Nesterov-Todd
scaling, fraction-to-boundary 0.98, and a dense Cholesky factorization of the
Schur complement.  No feasibility phase is needed: iterations start from the
cone identity, and infeasible problems terminate with a certificate (status
``infeasible``) instead of an exception.  The solver is deterministic:
identical inputs produce bit-identical iterates and iteration counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .linalg import DEFAULT_TOL, Tolerances, is_hermitian

__all__ = [
    "SolveOptions",
    "SdpSolution",
    "SdpProblem",
    "MatrixExpr",
    "ScalarExpr",
    "SolverError",
    "hermitian_to_real",
    "hvec",
    "unhvec",
    "hvec_operator",
    "solve",
    "ensure_optimal",
]


# ---------------------------------------------------------------------------
# real symmetric svec and complex Hermitian hvec coordinates


_TRIU_CACHE: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _triu(n: int):
    if n not in _TRIU_CACHE:
        iu, ju = np.triu_indices(n)
        w = np.where(iu == ju, 1.0, np.sqrt(2.0))
        _TRIU_CACHE[n] = (iu, ju, w)
    return _TRIU_CACHE[n]


def _svec(m: np.ndarray) -> np.ndarray:
    iu, ju, w = _triu(m.shape[-1])
    return m[..., iu, ju] * w


def _smat(v: np.ndarray, n: int) -> np.ndarray:
    iu, ju, w = _triu(n)
    out = np.zeros((n, n))
    vals = v / w
    out[iu, ju] = vals
    out[ju, iu] = vals
    return out


_STRICT_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _strict_triu(n: int):
    if n not in _STRICT_CACHE:
        _STRICT_CACHE[n] = np.triu_indices(n, k=1)
    return _STRICT_CACHE[n]


def hvec(h: np.ndarray) -> np.ndarray:
    """Real coordinates of a complex Hermitian matrix.

    Ordered as (diagonal, sqrt(2) Re upper, sqrt(2) Im upper); the map is an
    isometry: ``<A, B>_HS = hvec(A) . hvec(B)``.
    """
    a = np.asarray(h, dtype=complex)
    n = a.shape[0]
    iu, ju = _strict_triu(n)
    return np.concatenate(
        [a.diagonal().real, np.sqrt(2.0) * a[iu, ju].real, np.sqrt(2.0) * a[iu, ju].imag]
    )


def unhvec(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`hvec`."""
    iu, ju = _strict_triu(n)
    k = iu.size
    out = np.zeros((n, n), dtype=complex)
    out[np.arange(n), np.arange(n)] = v[:n]
    upper = (v[n : n + k] + 1j * v[n + k :]) / np.sqrt(2.0)
    out[iu, ju] = upper
    out[ju, iu] = upper.conj()
    return out


def hvec_operator(fn, side_in: int, side_out: int) -> np.ndarray:
    """Matrix of a linear map between Hermitian spaces, in hvec coordinates.

    ``fn`` must map Hermitian ``side_in`` matrices linearly to Hermitian
    ``side_out`` matrices.
    """
    k = np.zeros((side_out * side_out, side_in * side_in))
    basis = np.eye(side_in * side_in)
    for col in range(side_in * side_in):
        k[:, col] = hvec(fn(unhvec(basis[col], side_in)))
    return k


def hermitian_to_real(h, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Doubling embedding ``H -> [[Re H, -Im H], [Im H, Re H]]``.

    The embedding is symmetric and PSD exactly when ``H`` is, with every
    eigenvalue doubled in multiplicity.  Frobenius pairings double as well,
    which is why the lowering in :func:`solve` halves embedded coefficients.
    """
    a = np.asarray(h, dtype=complex)
    if not is_hermitian(a, tol):
        raise ValueError("block is not Hermitian within tolerance")
    re, im = a.real, a.imag
    return np.block([[re, -im], [im, re]])


def _embedded_to_complex(m: np.ndarray) -> np.ndarray:
    # Recover the Hermitian matrix represented by a (possibly unstructured)
    # real symmetric 2n x 2n block: average over the embedding symmetry.
    n = m.shape[0] // 2
    p, s, t = m[:n, :n], m[n:, n:], m[:n, n:]
    return (p + s) / 2 + 1j * (t.T - t) / 2


# ---------------------------------------------------------------------------
# affine expressions over matrix blocks and scalar variables


@dataclass
class MatrixExpr:
    """Affine Hermitian-matrix-valued expression, coefficients in hvec form."""

    side: int
    mats: dict[int, np.ndarray] = field(default_factory=dict)
    scalars: dict[int, np.ndarray] = field(default_factory=dict)
    const: np.ndarray | None = None

    def __post_init__(self):
        if self.const is None:
            self.const = np.zeros(self.side * self.side)

    def _combined(self, other: "MatrixExpr", sign: float) -> "MatrixExpr":
        if other.side != self.side:
            raise ValueError("matrix expressions of different sides")
        mats = {k: v.copy() for k, v in self.mats.items()}
        for k, v in other.mats.items():
            mats[k] = mats.get(k, 0.0) + sign * v
        scalars = {k: v.copy() for k, v in self.scalars.items()}
        for k, v in other.scalars.items():
            scalars[k] = scalars.get(k, 0.0) + sign * v
        return MatrixExpr(self.side, mats, scalars, self.const + sign * other.const)

    def __add__(self, other: "MatrixExpr") -> "MatrixExpr":
        return self._combined(other, 1.0)

    def __sub__(self, other: "MatrixExpr") -> "MatrixExpr":
        return self._combined(other, -1.0)

    def __rmul__(self, a: float) -> "MatrixExpr":
        a = float(a)
        return MatrixExpr(
            self.side,
            {k: a * v for k, v in self.mats.items()},
            {k: a * v for k, v in self.scalars.items()},
            a * self.const,
        )

    def transform(self, k: np.ndarray, side_out: int) -> "MatrixExpr":
        """Push the expression through a linear map given in hvec coordinates."""
        return MatrixExpr(
            side_out,
            {vid: k @ coef for vid, coef in self.mats.items()},
            {vid: k @ coef for vid, coef in self.scalars.items()},
            k @ self.const,
        )

    @staticmethod
    def of_const(h) -> "MatrixExpr":
        h = np.asarray(h, dtype=complex)
        return MatrixExpr(h.shape[0], const=hvec(h))


@dataclass
class ScalarExpr:
    """Affine real-valued expression over the problem variables."""

    mats: dict[int, np.ndarray] = field(default_factory=dict)
    scalars: dict[int, float] = field(default_factory=dict)
    const: float = 0.0

    def _combined(self, other: "ScalarExpr", sign: float) -> "ScalarExpr":
        mats = {k: v.copy() for k, v in self.mats.items()}
        for k, v in other.mats.items():
            mats[k] = mats.get(k, 0.0) + sign * v
        scalars = dict(self.scalars)
        for k, v in other.scalars.items():
            scalars[k] = scalars.get(k, 0.0) + sign * v
        return ScalarExpr(mats, scalars, self.const + sign * other.const)

    def __add__(self, other: "ScalarExpr") -> "ScalarExpr":
        return self._combined(other, 1.0)

    def __sub__(self, other: "ScalarExpr") -> "ScalarExpr":
        return self._combined(other, -1.0)

    def __rmul__(self, a: float) -> "ScalarExpr":
        a = float(a)
        return ScalarExpr(
            {k: a * v for k, v in self.mats.items()},
            {k: a * v for k, v in self.scalars.items()},
            a * self.const,
        )


class SdpProblem:
    """Builder for a semidefinite program.

    Variables are complex Hermitian PSD blocks (:meth:`add_block`) and
    nonnegative scalars (:meth:`add_scalar`).  Constraints are affine matrix
    equalities (:meth:`equality`), affine PSD inequalities (:meth:`psd`,
    lowered internally via a slack block) and their scalar counterparts.  The
    objective is an affine scalar expression, minimized.
    """

    def __init__(self):
        self.blocks: list[int] = []
        self.block_is_slack: list[bool] = []
        self.n_scalars: int = 0
        self.equalities: list[MatrixExpr] = []
        self.scalar_equalities: list[ScalarExpr] = []
        self.inequalities: list[MatrixExpr] = []
        self.objective: ScalarExpr = ScalarExpr()

    # -- variables ---------------------------------------------------------

    def add_block(self, side: int, *, slack: bool = False) -> int:
        if side < 1:
            raise ValueError("block side must be positive")
        self.blocks.append(int(side))
        self.block_is_slack.append(slack)
        return len(self.blocks) - 1

    def add_scalar(self) -> int:
        self.n_scalars += 1
        return self.n_scalars - 1

    # -- expressions -------------------------------------------------------

    def var(self, bid: int) -> MatrixExpr:
        side = self.blocks[bid]
        return MatrixExpr(side, mats={bid: np.eye(side * side)})

    def scalar_times(self, sid: int, h) -> MatrixExpr:
        """The matrix expression ``t_sid * H`` for a constant Hermitian H."""
        h = np.asarray(h, dtype=complex)
        return MatrixExpr(h.shape[0], scalars={sid: hvec(h)})

    def block_pairing(self, bid: int, h) -> ScalarExpr:
        """The scalar expression ``<H, X_bid>``."""
        return ScalarExpr(mats={bid: hvec(np.asarray(h, dtype=complex))})

    def scalar(self, sid: int, coeff: float = 1.0) -> ScalarExpr:
        return ScalarExpr(scalars={sid: float(coeff)})

    # -- constraints -------------------------------------------------------

    def equality(self, expr: MatrixExpr) -> None:
        """Constrain ``expr == 0``."""
        self.equalities.append(expr)

    def psd(self, expr: MatrixExpr) -> int:
        """Constrain ``expr >= 0`` (PSD); returns the slack block id."""
        self.inequalities.append(expr)
        sid = self.add_block(expr.side, slack=True)
        self.equality(expr - self.var(sid))
        return sid

    def scalar_equality(self, expr: ScalarExpr) -> None:
        self.scalar_equalities.append(expr)

    def scalar_nonneg(self, expr: ScalarExpr) -> int:
        slack = self.add_scalar()
        self.scalar_equality(expr - self.scalar(slack))
        return slack

    def minimize(self, expr: ScalarExpr) -> None:
        self.objective = expr


@dataclass(frozen=True)
class SolveOptions:
    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iter: int = 200
    step_scale: float = 0.98  # fraction-to-boundary
    recorder: list | None = None


@dataclass
class SdpSolution:
    status: str  # optimal | infeasible | max_iterations | numerical_failure
    primal_objective: float
    dual_objective: float
    variables: dict[int, np.ndarray]
    scalars: dict[int, float]
    iterations: int


class SolverError(RuntimeError):
    """A semidefinite program did not reach an optimal certificate."""

    def __init__(self, solution: SdpSolution):
        super().__init__(f"SDP terminated with status {solution.status!r}")
        self.solution = solution


def ensure_optimal(sol: SdpSolution) -> SdpSolution:
    if sol.status != "optimal":
        raise SolverError(sol)
    return sol


# ---------------------------------------------------------------------------
# lowering to real standard form


def _lower(problem: SdpProblem):
    sides = [2 * s for s in problem.blocks]
    svdims = [r * (r + 1) // 2 for r in sides]
    offsets = np.concatenate([[0], np.cumsum(svdims)]).astype(int)
    sc_off = int(offsets[-1])
    ntot = sc_off + problem.n_scalars

    def place_block_row(row: np.ndarray, bid: int, coeff_hvec: np.ndarray) -> None:
        side = problem.blocks[bid]
        a = unhvec(coeff_hvec, side)
        row[offsets[bid] : offsets[bid + 1]] += _svec(hermitian_to_real(a) / 2.0)

    rows: list[np.ndarray] = []
    rhs: list[float] = []
    for ex in problem.equalities:
        t2 = ex.side * ex.side
        for m in range(t2):
            row = np.zeros(ntot)
            for bid, k in ex.mats.items():
                place_block_row(row, bid, k[m])
            for sid, coeffs in ex.scalars.items():
                row[sc_off + sid] += coeffs[m]
            rows.append(row)
            rhs.append(-ex.const[m])
    for ex in problem.scalar_equalities:
        row = np.zeros(ntot)
        for bid, coeff in ex.mats.items():
            place_block_row(row, bid, coeff)
        for sid, w in ex.scalars.items():
            row[sc_off + sid] += w
        rows.append(row)
        rhs.append(-ex.const)

    a_mat = np.array(rows) if rows else np.zeros((0, ntot))
    b = np.array(rhs)

    c = np.zeros(ntot)
    obj = problem.objective
    for bid, coeff in obj.mats.items():
        place_block_row(c, bid, coeff)
    for sid, w in obj.scalars.items():
        c[sc_off + sid] += w

    return a_mat, b, c, sides, offsets, sc_off, ntot


# ---------------------------------------------------------------------------
# homogeneous self-dual interior-point core


class _ScalingError(Exception):
    pass


class _Scaling:
    """Nesterov-Todd scaling point for the current (x, s) iterate."""

    def __init__(self, x, s, sides, offsets, sc_off):
        self.sides = sides
        self.offsets = offsets
        self.sc_off = sc_off
        self.W = []
        self.Wh = []
        self.Whi = []
        self.lam = []
        self.lam_w = []
        self.lam_q = []
        for j, r in enumerate(sides):
            xb = _smat(x[offsets[j] : offsets[j + 1]], r)
            sb = _smat(s[offsets[j] : offsets[j + 1]], r)
            wx, qx = np.linalg.eigh(xb)
            ws, _ = np.linalg.eigh(sb)
            if wx[0] <= 0.0 or ws[0] <= 0.0:
                raise _ScalingError("iterate left the cone interior")
            xh = (qx * np.sqrt(wx)) @ qx.T
            mid = xh @ sb @ xh
            wm, qm = np.linalg.eigh((mid + mid.T) / 2)
            if wm[0] <= 0.0:
                raise _ScalingError("indefinite scaling midpoint")
            mih = (qm * wm**-0.5) @ qm.T
            w = xh @ mih @ xh  # W S W = X
            w = (w + w.T) / 2
            ww, qw = np.linalg.eigh(w)
            if ww[0] <= 0.0:
                raise _ScalingError("indefinite scaling point")
            wh = (qw * np.sqrt(ww)) @ qw.T
            whi = (qw * ww**-0.5) @ qw.T
            lam = whi @ xb @ whi
            lam = (lam + lam.T) / 2
            lw, lq = np.linalg.eigh(lam)
            if lw[0] <= 0.0:
                raise _ScalingError("scaled point left the cone interior")
            self.W.append(w)
            self.Wh.append(wh)
            self.Whi.append(whi)
            self.lam.append(lam)
            self.lam_w.append(lw)
            self.lam_q.append(lq)
        x_nn = x[sc_off:]
        s_nn = s[sc_off:]
        if x_nn.size and (x_nn.min() <= 0.0 or s_nn.min() <= 0.0):
            raise _ScalingError("nonnegative iterate hit zero")
        self.w_nn = np.sqrt(x_nn / s_nn) if x_nn.size else x_nn
        self.lam_nn = np.sqrt(x_nn * s_nn) if x_nn.size else x_nn

    def apply_w2(self, v: np.ndarray) -> np.ndarray:
        """Congruence by the scaling point: the inverse of the NT operator T."""
        out = np.empty_like(v)
        for j, r in enumerate(self.sides):
            sl = slice(self.offsets[j], self.offsets[j + 1])
            out[sl] = _svec(self.W[j] @ _smat(v[sl], r) @ self.W[j])
        out[self.sc_off :] = v[self.sc_off :] * self.w_nn**2
        return out


@dataclass
class _Direction:
    dx: np.ndarray
    dy: np.ndarray
    ds: np.ndarray
    dtau: float
    dkap: float
    dxt: list[np.ndarray]
    dst: list[np.ndarray]


def _max_step(x, s, tau, kap, scal: _Scaling, d: _Direction) -> float:
    alpha = np.inf
    for j, lw in enumerate(scal.lam_w):
        lq = scal.lam_q[j]
        scale = np.sqrt(np.outer(lw, lw))
        for dmat in (d.dxt[j], d.dst[j]):
            bmat = (lq.T @ dmat @ lq) / scale
            low = float(np.linalg.eigvalsh((bmat + bmat.T) / 2)[0])
            if low < 0.0:
                alpha = min(alpha, -1.0 / low)
    for val, dval in ((x[scal.sc_off :], d.dx[scal.sc_off :]), (s[scal.sc_off :], d.ds[scal.sc_off :])):
        neg = dval < 0.0
        if np.any(neg):
            alpha = min(alpha, float(np.min(-val[neg] / dval[neg])))
    if d.dtau < 0.0:
        alpha = min(alpha, -tau / d.dtau)
    if d.dkap < 0.0:
        alpha = min(alpha, -kap / d.dkap)
    return alpha


def _identity_vec(sides, offsets, sc_off, ntot) -> np.ndarray:
    e = np.zeros(ntot)
    for j, r in enumerate(sides):
        e[offsets[j] : offsets[j + 1]] = _svec(np.eye(r))
    e[sc_off:] = 1.0
    return e


def _ipm(c, a_mat, b, sides, offsets, sc_off, ntot, opts: SolveOptions):
    m = a_mat.shape[0]
    nu = float(sum(sides) + (ntot - sc_off))
    e = _identity_vec(sides, offsets, sc_off, ntot)
    x = e.copy()
    s = e.copy()
    y = np.zeros(m)
    tau, kap = 1.0, 1.0
    mu0 = (x @ s + tau * kap) / (nu + 1.0)
    bnorm = 1.0 + float(np.linalg.norm(b))
    cnorm = 1.0 + float(np.linalg.norm(c))

    # stacked per-block constraint matrices, used to build the Schur complement
    amats = []
    for j, r in enumerate(sides):
        sl = slice(offsets[j], offsets[j + 1])
        amats.append(np.stack([_smat(a_mat[i, sl], r) for i in range(m)]))
    a_sc = a_mat[:, sc_off:]

    def finish(status, it):
        scale = tau if tau > 1e-300 else 1.0
        return status, x / scale, y / scale, s / scale, it

    for it in range(opts.max_iter):
        rp = a_mat @ x - b * tau
        rd = -(a_mat.T @ y) + c * tau - s
        rg = -(c @ x) + b @ y - kap
        mu = (x @ s + tau * kap) / (nu + 1.0)

        xhat = x / tau
        pobj = float(c @ xhat)
        dobj = float(b @ y / tau)
        pres = float(np.linalg.norm(a_mat @ xhat - b)) / bnorm
        dres = float(np.linalg.norm(a_mat.T @ (y / tau) + s / tau - c)) / cnorm
        gap_ok = abs(pobj - dobj) <= opts.gap_tol * (1.0 + abs(pobj))
        if pres <= opts.feas_tol and dres <= opts.feas_tol and gap_ok:
            return finish("optimal", it)

        if tau <= 1e-12 * max(1.0, kap):
            if b @ y > 1e-10:
                return finish("infeasible", it)
            if -(c @ x) > 1e-10:
                return finish("infeasible", it)  # dual infeasible / unbounded
            return finish("numerical_failure", it)
        if mu <= 1e-16 * mu0:
            return finish("numerical_failure", it)

        try:
            scal = _Scaling(x, s, sides, offsets, sc_off)
        except _ScalingError:
            return finish("numerical_failure", it)

        # Schur complement M = A T^{-1} A' and its Cholesky factor
        mmat = np.zeros((m, m))
        for j, r in enumerate(sides):
            g = _svec(scal.Wh[j] @ amats[j] @ scal.Wh[j])
            mmat += g @ g.T
        if a_sc.shape[1]:
            mmat += (a_sc * scal.w_nn**2) @ a_sc.T
        factor = None
        jitter = 0.0
        for attempt in range(3):
            try:
                factor = cho_factor(
                    mmat + jitter * np.eye(m), lower=True, check_finite=False
                )
                break
            except np.linalg.LinAlgError:
                jitter = max(jitter * 100.0, 1e-14 * (np.trace(mmat) / m + 1.0))
        if factor is None:
            return finish("numerical_failure", it)

        def schur_solve(rhs):
            # one round of iterative refinement; the Schur complement gets
            # ill-conditioned near the solution
            sol0 = cho_solve(factor, rhs, check_finite=False)
            return sol0 + cho_solve(factor, rhs - mmat @ sol0, check_finite=False)

        tinv_c = scal.apply_w2(c)
        pvec = schur_solve(a_mat @ tinv_c + b)
        x1 = scal.apply_w2(a_mat.T @ pvec - c)
        denom = -(c @ x1) + b @ pvec + kap / tau
        if not np.isfinite(denom) or abs(denom) < 1e-300:
            return finish("numerical_failure", it)

        x_nn = x[sc_off:]
        s_nn = s[sc_off:]

        def direction(sigma, corr_psd, corr_nn, corr_tk) -> _Direction:
            g = np.empty(ntot)
            for j, r in enumerate(sides):
                lw, lq = scal.lam_w[j], scal.lam_q[j]
                rmat = sigma * mu * np.eye(r) - scal.lam[j] @ scal.lam[j]
                if corr_psd is not None:
                    rmat = rmat - corr_psd[j]
                rp_ = lq.T @ rmat @ lq
                gp = 2.0 * rp_ / (lw[:, None] + lw[None, :])
                gt = lq @ gp @ lq.T
                g[offsets[j] : offsets[j + 1]] = _svec(
                    scal.Whi[j] @ gt @ scal.Whi[j]
                )
            if x_nn.size:
                r_nn = sigma * mu - scal.lam_nn**2
                if corr_nn is not None:
                    r_nn = r_nn - corr_nn
                g[sc_off:] = r_nn / x_nn
            r_tk = sigma * mu - tau * kap - corr_tk
            rhs_d = (sigma - 1.0) * rd + g
            u = scal.apply_w2(rhs_d)
            q = schur_solve((sigma - 1.0) * rp - a_mat @ u)
            x0 = u + scal.apply_w2(a_mat.T @ q)
            dtau = ((sigma - 1.0) * rg + c @ x0 - b @ q + r_tk / tau) / denom
            dy = q + pvec * dtau
            dx = x0 + x1 * dtau
            # recover ds and dkap from the dual and gap equations so those
            # residuals shrink geometrically; the complementarity equation
            # absorbs the scaling round-trip error instead
            ds = -(a_mat.T @ dy) + c * dtau - (sigma - 1.0) * rd
            dkap = -(c @ dx) + b @ dy - (sigma - 1.0) * rg
            dxts, dsts = [], []
            for j, r in enumerate(sides):
                sl = slice(offsets[j], offsets[j + 1])
                dxt = scal.Whi[j] @ _smat(dx[sl], r) @ scal.Whi[j]
                dst = scal.Wh[j] @ _smat(ds[sl], r) @ scal.Wh[j]
                dxts.append((dxt + dxt.T) / 2)
                dsts.append((dst + dst.T) / 2)
            return _Direction(dx, dy, ds, float(dtau), float(dkap), dxts, dsts)

        aff = direction(0.0, None, None, 0.0)
        alpha_aff = min(1.0, _max_step(x, s, tau, kap, scal, aff))
        mu_aff = (
            (x + alpha_aff * aff.dx) @ (s + alpha_aff * aff.ds)
            + (tau + alpha_aff * aff.dtau) * (kap + alpha_aff * aff.dkap)
        ) / (nu + 1.0)
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3))

        corr_psd = [
            (aff.dxt[j] @ aff.dst[j] + aff.dst[j] @ aff.dxt[j]) / 2.0
            for j in range(len(sides))
        ]
        corr_nn = aff.dx[sc_off:] * aff.ds[sc_off:] if x_nn.size else None
        comb = direction(sigma, corr_psd, corr_nn, aff.dtau * aff.dkap)

        alpha = min(1.0, opts.step_scale * _max_step(x, s, tau, kap, scal, comb))
        if alpha <= 1e-10:
            return finish("numerical_failure", it)

        x = x + alpha * comb.dx
        y = y + alpha * comb.dy
        s = s + alpha * comb.ds
        tau = tau + alpha * comb.dtau
        kap = kap + alpha * comb.dkap

    return finish("max_iterations", opts.max_iter)


def solve(problem: SdpProblem, opts: SolveOptions = SolveOptions()) -> SdpSolution:
    """Solve the program; statuses are reported, never raised.

    On ``optimal`` the returned objectives satisfy
    ``|primal - dual| <= gap_tol (1 + |primal|)`` and the scaled primal and
    dual residual norms are at most ``feas_tol``.  The homogeneous embedding
    removes the need for a feasible starting point, and infeasibility is
    returned as a certificate status.
    """
    a_mat, b, c, sides, offsets, sc_off, ntot = _lower(problem)
    if a_mat.shape[0] == 0:
        raise ValueError("the program has no constraints")
    status, x, y, s, iters = _ipm(c, a_mat, b, sides, offsets, sc_off, ntot, opts)

    variables: dict[int, np.ndarray] = {}
    for j in range(len(problem.blocks)):
        block = _smat(x[offsets[j] : offsets[j + 1]], sides[j])
        variables[j] = _embedded_to_complex(block)
    scalars = {sid: float(x[sc_off + sid]) for sid in range(problem.n_scalars)}

    obj_const = problem.objective.const
    sol = SdpSolution(
        status=status,
        primal_objective=float(c @ x + obj_const),
        dual_objective=float(b @ y + obj_const),
        variables=variables,
        scalars=scalars,
        iterations=iters,
    )
    if opts.recorder is not None:
        opts.recorder.append(sol)
    return sol
