"""Command-line front end.

Exit codes: 0 success, 1 domain or configuration error, 2 verification
failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from corrcopies import fidelity as fid
from corrcopies import optimal_states as opt
from corrcopies.errors import DomainError, ResourceError
from corrcopies.spin_algebra import Z_AXIS, reduce_full, sector_reduced_density

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFY = 2
EXIT_IO = 3

ORDER_TOL = 1e-10
SWEEP_FIELDS = ("r", "f_sym", "f_prod", "f_unknown", "f_known")


class VerificationFailure(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    r_min: float = 0.0
    r_max: float = 1.0
    steps: int = 101
    fmt: str = "csv"
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"--n must be positive, got {self.n}")
        if not (0.0 <= self.r_min < self.r_max <= 1.0):
            raise DomainError(f"need 0 <= r_min < r_max <= 1, got {self.r_min}, {self.r_max}")
        if self.steps < 2:
            raise DomainError(f"--steps must be at least 2, got {self.steps}")
        if self.fmt not in ("csv", "json"):
            raise DomainError(f"unknown format {self.fmt!r}")


@dataclass(frozen=True)
class SweepRow:
    r: float
    f_sym: float
    f_prod: float
    f_unknown: float
    f_known: float

    def problems(self) -> list[str]:
        out = []
        values = (self.f_sym, self.f_prod, self.f_unknown, self.f_known)
        if any(v < 0.5 - ORDER_TOL or v > 1.0 + ORDER_TOL for v in values):
            out.append(f"fidelity outside [1/2, 1] at r={self.r}")
        if not (
            self.f_known >= self.f_unknown - ORDER_TOL
            and self.f_unknown >= self.f_prod - ORDER_TOL
            and self.f_prod >= self.f_sym - ORDER_TOL
        ):
            out.append(f"ordering f_known >= f_unknown >= f_prod >= f_sym violated at r={self.r}")
        return out


def sweep_row(n: int, r: float) -> SweepRow:
    # the axis is passed explicitly so that r = 0 rows evaluate the limiting states
    known = fid.f_known(opt.known_opt_state(n, r), direction=Z_AXIS)
    unknown = fid.f_unknown(opt.unknown_opt_state(n, r), direction=Z_AXIS)
    return SweepRow(r, fid.f_sym(n, r), fid.f_prod(n, r), unknown, known)


def compute_sweep(config: RunConfig) -> list[SweepRow]:
    if config.n < 2:
        raise DomainError("sweep needs n >= 2: the optimal correlated families require two sectors")
    grid = np.linspace(config.r_min, config.r_max, config.steps)
    rows = [sweep_row(config.n, float(r)) for r in grid]
    problems = [p for row in rows for p in row.problems()]
    if problems:
        raise VerificationFailure("; ".join(problems))
    return rows


def _num(x: float) -> str:
    return f"{x:.12g}"


def render_sweep(rows: list[SweepRow], fmt: str) -> str:
    if fmt == "json":
        payload = [{k: float(_num(v)) for k, v in asdict(row).items()} for row in rows]
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_FIELDS)
    for row in rows:
        writer.writerow([_num(getattr(row, k)) for k in SWEEP_FIELDS])
    return buf.getvalue()


def describe_optimal_state(n: int, r: float, structure: fid.Structure) -> dict:
    if structure is fid.Structure.KNOWN:
        state = opt.known_opt_state(n, r)
        value = fid.f_known(state, direction=Z_AXIS)
    else:
        state = opt.unknown_opt_state(n, r)
        value = fid.f_unknown(state, direction=Z_AXIS)
    sectors = []
    for p, s in state.entries:
        red = sector_reduced_density(s)
        if s.two_j == 0:
            orientation = "none"
        else:
            orientation = "parallel" if red.bloch.z >= 0 else "antiparallel"
        sectors.append(
            {
                "two_j": s.two_j,
                "j": s.two_j / 2,
                "weight": p,
                "orientation": orientation,
                "sector_bloch_length": red.length,
            }
        )
    report = opt.check_constraints(state, (0.0, 0.0, r))
    return {
        "n": n,
        "r": r,
        "structure": structure.value,
        "sectors": sectors,
        "fidelity": value,
        "local_bloch": list(reduce_full(state)),
        "residuals": {
            "weight_sum": report.weight_sum_residual,
            "local_bloch": report.bloch_residual,
            "max_sector_length": report.max_sector_length,
        },
    }


def render_optimal_state(desc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(desc, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# n={desc['n']} r={_num(desc['r'])} structure={desc['structure']}\n")
    buf.write(f"# fidelity={_num(desc['fidelity'])}\n")
    for key, val in desc["residuals"].items():
        buf.write(f"# residual_{key}={val:.3e}\n")
    writer = csv.writer(buf, lineterminator="\n")
    fields = ("two_j", "j", "weight", "orientation", "sector_bloch_length")
    writer.writerow(fields)
    for sec in desc["sectors"]:
        writer.writerow([sec[k] if isinstance(sec[k], (int, str)) else _num(sec[k]) for k in fields])
    return buf.getvalue()


def _short(x: float) -> str:
    text = f"{x:.6f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


def render_shrink(n_in: int, m_out: float) -> str:
    factor = fid.shrink_cloning(n_in, m_out)
    lines = [f"shrink={_short(factor)}"]
    if math.isinf(m_out):
        lines.append(f"fidelity={_short((factor + 1) / 2)}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    Path(out).write_text(text, encoding="utf-8", newline="\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def _clone_count(text: str) -> float:
    if text.lower() in ("inf", "infinity", "∞"):
        return math.inf
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="corrcopies", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def io_flags(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("sweep", help="fidelity curves of the four state families versus r")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--seed", type=int, default=0)
    io_flags(p)

    p = sub.add_parser("optimal-state", help="weights and orientations of an optimal state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--structure", choices=("known", "unknown"), default="unknown")
    io_flags(p)

    p = sub.add_parser("verify", help="cross-check closed forms against the dense oracle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--quadrature-order", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("shrink", help="Bloch shrink factor of optimal N -> M cloning")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=_clone_count, required=True, help="clone count, or 'inf'")
    p.add_argument("--out", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            config = RunConfig(args.n, args.r_min, args.r_max, args.steps, args.format, args.seed)
            text = render_sweep(compute_sweep(config), config.fmt)
        elif args.command == "optimal-state":
            desc = describe_optimal_state(args.n, args.r, fid.Structure(args.structure))
            text = render_optimal_state(desc, args.format)
        elif args.command == "verify":
            from corrcopies.oracle.verify import format_report, run_verification

            results = run_verification(args.n, args.quadrature_order, args.seed)
            lines: list[str] = []
            format_report(args.n, results, lines.append)
            _emit("\n".join(lines) + "\n", args.out)
            return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY
        else:
            text = render_shrink(args.n, args.m)
        _emit(text, args.out)
    except (DomainError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
