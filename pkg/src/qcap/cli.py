"""Command-line front end: degradability sweeps, gap-term curves, and
capacity reports.

Exit codes: 0 on success, 1 on usage or parse errors, 2 on numerical
failure.  Data files are whitespace-separated text with a header line;
identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import ast
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .capacity import capacity_interval, dominant_gap_curves
from .channels import (
    Channel,
    PauliFamily,
    SimplexError,
    depolarizing,
    generalized_pauli,
    pauli,
    xz_channel,
)
from .degradability import (
    degradability_sdp,
    depol_tuned_eta,
    tuned_pauli_eta,
    xz_tuned_eta,
)
from .sdp import SolveOptions, SolverError

__all__ = ["SweepConfig", "SpecParseError", "cmd_sweep", "cmd_curves", "cmd_report", "main"]

_FAMILIES = ("depol", "xz", "pauli-poly", "generalized-pauli")
_METHODS = ("sdp", "tuned", "analytic")


@dataclass(frozen=True)
class SweepConfig:
    family: str
    p_min: float
    p_max: float
    steps: int
    methods: tuple[str, ...]
    out: str
    coeffs: tuple[tuple[float, ...], ...] | None = None
    dim: int = 3

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not 0.0 <= self.p_min < self.p_max:
            raise ValueError("need 0 <= pmin < pmax")
        if self.steps < 2:
            raise ValueError("need at least 2 sweep steps")
        bad = [m for m in self.methods if m not in _METHODS]
        if bad or not self.methods:
            raise ValueError(f"methods must be a nonempty subset of {_METHODS}")
        if self.family == "generalized-pauli" and set(self.methods) != {"sdp"}:
            raise ValueError(
                "the generalized-pauli family supports only the sdp method "
                "(no tuned map or analytic bound in dimension > 2)"
            )
        if self.family == "pauli-poly" and self.coeffs is None:
            raise ValueError("the pauli-poly family needs --coeffs")


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _sweep_point(config: SweepConfig, family: PauliFamily | None, p: float, opts: SolveOptions):
    """Values (d, s, bound) at one grid point; None for unrequested methods."""
    if config.family == "depol":
        channel = depolarizing(p)
        tuned = lambda: depol_tuned_eta(p, opts)  # noqa: E731
    elif config.family == "xz":
        channel = xz_channel(p, p)
        tuned = lambda: xz_tuned_eta(p, opts)  # noqa: E731
    elif config.family == "pauli-poly":
        channel = pauli(*family.weights(p))
        tuned = lambda: tuned_pauli_eta(family, p, opts)  # noqa: E731
    else:  # generalized-pauli: uniform noise p spread over the d^2-1 errors
        d = config.dim
        probs = {(k, l): p / (d * d - 1) for k in range(d) for l in range(d)}
        probs[(0, 0)] = 1.0 - p
        channel = generalized_pauli(d, probs)
        tuned = None

    d_val = s_val = bound = None
    if "sdp" in config.methods:
        d_val = degradability_sdp(channel, opts).eta_sdp
    if "tuned" in config.methods or "analytic" in config.methods:
        report = tuned()
        if "tuned" in config.methods:
            s_val = report.eta_constructed
        if "analytic" in config.methods:
            bound = report.analytic_bound
    return d_val, s_val, bound


def cmd_sweep(config: SweepConfig, opts: SolveOptions = SolveOptions()) -> str:
    """Write the sweep table; returns the output path.

    Columns are ``p`` plus ``d`` (SDP-optimal eta), ``s`` (constructed-map
    eta) and ``bound`` (analytic bound), as requested via ``methods``.  Grid
    points where the tuned weights leave the probability simplex produce NaN
    entries and a warning on stderr, not an abort.
    """
    family = None
    if config.family == "pauli-poly":
        family = PauliFamily(config.coeffs, p_max=config.p_max)
    header = ["p"]
    if "sdp" in config.methods:
        header.append("d")
    if "tuned" in config.methods:
        header.append("s")
    if "analytic" in config.methods:
        header.append("bound")
    lines = [" ".join(header)]
    for p in np.linspace(config.p_min, config.p_max, config.steps):
        try:
            d_val, s_val, bound = _sweep_point(config, family, float(p), opts)
        except SimplexError as exc:
            print(f"warning: p={p:g}: {exc}", file=sys.stderr)
            d_val = s_val = bound = float("nan")
        row = [_fmt(float(p))]
        for name, v in (("sdp", d_val), ("tuned", s_val), ("analytic", bound)):
            if name in config.methods:
                row.append(_fmt(float(v)))
        lines.append(" ".join(row))
    Path(config.out).write_text("\n".join(lines) + "\n")
    return config.out


def cmd_curves(c: float, rs, p_min: float, p_max: float, steps: int, out: str) -> str:
    """Write the dominant-gap-term table ``g(c p^r)`` and its derivative."""
    if steps < 2:
        raise ValueError("need at least 2 grid points")
    cols, data = dominant_gap_curves(c, rs, np.linspace(p_min, p_max, steps))
    lines = [" ".join(cols)]
    for row in data:
        lines.append(" ".join(_fmt(float(v)) for v in row))
    Path(out).write_text("\n".join(lines) + "\n")
    return out


class SpecParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


def _parse_channel_spec(text: str) -> tuple[Channel, str]:
    """Parse a ``key: value`` channel description into a channel and label.

    Recognized kinds: pauli, depolarizing, xz, generalized_pauli, kraus.
    Values use Python literals (complex entries like ``0.5+0.5j`` allowed).
    """
    entries: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise SpecParseError(f"expected 'key: value', got {line!r}", lineno)
        key, _, value = line.partition(":")
        entries.append((lineno, key.strip(), value.strip()))

    def literal(lineno: int, value: str):
        try:
            return ast.literal_eval(value)
        except (ValueError, SyntaxError):
            raise SpecParseError(f"cannot parse value {value!r}", lineno) from None

    fields: dict[str, tuple[int, object]] = {}
    kraus_entries: list[tuple[int, object]] = []
    for lineno, key, value in entries:
        if key == "kraus":
            kraus_entries.append((lineno, literal(lineno, value)))
        elif key in fields:
            raise SpecParseError(f"duplicate key {key!r}", lineno)
        else:
            fields[key] = (lineno, literal(lineno, value) if key != "kind" else value)

    if "kind" not in fields:
        raise SpecParseError("missing required key 'kind'")
    kind_line, kind = fields.pop("kind")

    def take(key: str):
        if key not in fields:
            raise SpecParseError(f"kind {kind!r} needs key {key!r}", kind_line)
        return fields.pop(key)

    def reject_leftovers():
        for key, (lineno, _) in fields.items():
            raise SpecParseError(f"unexpected key {key!r} for kind {kind!r}", lineno)

    if kind == "depolarizing":
        lineno, p = take("p")
        reject_leftovers()
        try:
            return depolarizing(float(p)), f"depolarizing(p={p})"
        except (TypeError, ValueError) as exc:
            raise SpecParseError(str(exc), lineno) from None
    if kind == "pauli":
        lineno, p = take("p")
        reject_leftovers()
        try:
            weights = [float(v) for v in p]
            if len(weights) != 4:
                raise ValueError("pauli needs four weights")
            return pauli(*weights), f"pauli{tuple(weights)}"
        except (TypeError, ValueError) as exc:
            raise SpecParseError(str(exc), lineno) from None
    if kind == "xz":
        lp, p = take("p")
        lq, q = take("q")
        reject_leftovers()
        try:
            return xz_channel(float(p), float(q)), f"xz(p={p}, q={q})"
        except (TypeError, ValueError) as exc:
            raise SpecParseError(str(exc), min(lp, lq)) from None
    if kind == "generalized_pauli":
        ld, d = take("dimension")
        lp, probs = take("probs")
        reject_leftovers()
        try:
            d = int(d)
            weights = [float(v) for v in probs]
            if len(weights) != d * d:
                raise ValueError(f"need {d * d} probabilities for dimension {d}")
            table = {(k, l): weights[k * d + l] for k in range(d) for l in range(d)}
            return generalized_pauli(d, table), f"generalized_pauli(d={d})"
        except (TypeError, ValueError) as exc:
            raise SpecParseError(str(exc), lp) from None
    if kind == "kraus":
        li, din = take("dim_in")
        lo, dout = take("dim_out")
        reject_leftovers()
        if not kraus_entries:
            raise SpecParseError("kind 'kraus' needs at least one kraus: line", kind_line)
        try:
            din, dout = int(din), int(dout)
            ops = []
            for lineno, flat in kraus_entries:
                entries_ = [complex(v) for v in flat]
                if len(entries_) != din * dout:
                    raise SpecParseError(
                        f"kraus operator needs {din * dout} row-major entries", lineno
                    )
                ops.append(np.array(entries_, dtype=complex).reshape(dout, din))
            return Channel(kraus=tuple(ops), dim_in=din, dim_out=dout), "kraus"
        except SpecParseError:
            raise
        except (TypeError, ValueError) as exc:
            raise SpecParseError(str(exc), min(li, lo)) from None
    raise SpecParseError(f"unknown kind {kind!r}", kind_line)


def cmd_report(spec_path: str, opts: SolveOptions = SolveOptions()) -> str:
    """Produce the capacity report text for a channel-spec file."""
    try:
        text = Path(spec_path).read_text()
    except OSError as exc:
        raise SpecParseError(str(exc)) from None
    channel, label = _parse_channel_spec(text)
    report = capacity_interval(channel, label=label, opts=opts)
    return report.to_text()


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcap",
        description="Degradability sweeps and capacity intervals for low-noise channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="tabulate eta over a noise grid")
    sweep.add_argument("--family", required=True, choices=_FAMILIES)
    sweep.add_argument("--pmin", type=float, default=0.0)
    sweep.add_argument("--pmax", type=float, required=True)
    sweep.add_argument("--steps", type=int, required=True)
    sweep.add_argument(
        "--methods",
        default="sdp,tuned,analytic",
        help="comma-separated subset of sdp,tuned,analytic",
    )
    sweep.add_argument("--out", required=True)
    sweep.add_argument(
        "--coeffs",
        help="pauli-poly only: per-error polynomial coefficients from the "
        "linear term, e.g. '0.33,0;0.33,0;0.33,0' (semicolons separate X/Y/Z)",
    )
    sweep.add_argument("--dim", type=int, default=3, help="generalized-pauli dimension")
    sweep.add_argument("--gap-tol", type=float, default=1e-8)
    sweep.add_argument("--feas-tol", type=float, default=1e-8)

    curves = sub.add_parser("curves", help="tabulate the dominant gap term")
    curves.add_argument("--c", type=float, default=1.0)
    curves.add_argument("--r", required=True, help="comma-separated exponents")
    curves.add_argument("--pmin", type=float, default=1e-5)
    curves.add_argument("--pmax", type=float, default=0.1)
    curves.add_argument("--steps", type=int, default=200)
    curves.add_argument("--out", required=True)

    report = sub.add_parser("report", help="capacity intervals for one channel")
    report.add_argument("spec", help="channel-spec file")
    report.add_argument("--gap-tol", type=float, default=1e-8)
    report.add_argument("--feas-tol", type=float, default=1e-8)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code or 0
        return 1 if code not in (0,) else 0

    try:
        if args.command == "sweep":
            coeffs = None
            if args.coeffs is not None:
                coeffs = tuple(
                    tuple(float(v) for v in part.split(","))
                    for part in args.coeffs.split(";")
                )
            config = SweepConfig(
                family=args.family,
                p_min=args.pmin,
                p_max=args.pmax,
                steps=args.steps,
                methods=tuple(m.strip() for m in args.methods.split(",") if m.strip()),
                out=args.out,
                coeffs=coeffs,
            )
            opts = SolveOptions(gap_tol=args.gap_tol, feas_tol=args.feas_tol)
            cmd_sweep(config, opts)
            return 0
        if args.command == "curves":
            rs = [float(v) for v in args.r.split(",") if v.strip()]
            cmd_curves(args.c, rs, args.pmin, args.pmax, args.steps, args.out)
            return 0
        if args.command == "report":
            opts = SolveOptions(gap_tol=args.gap_tol, feas_tol=args.feas_tol)
            print(cmd_report(args.spec, opts))
            return 0
        return 1
    except (SpecParseError, SimplexError, ValueError) as exc:
        print(f"qcap: error: {exc}", file=sys.stderr)
        return 1
    except (SolverError, RuntimeError) as exc:
        print(f"qcap: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
