#!/usr/bin/env python3

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from proper_subspaces import schatten, spectra, studies, suites
from proper_subspaces.core import Operator, euclidean_space, make_space
from proper_subspaces.errors import (
    BadExponent,
    DimMismatch,
    IoFailure,
    MatrixFormatError,
    ProperSubspacesError,
)
from proper_subspaces.formats import parse_matrix_literal
from proper_subspaces.sampling import (
    generator,
    random_biorthogonal_system,
    random_complex,
    random_space,
)
from proper_subspaces.subspaces import (
    complement_L,
    finite_rank_proper_projection,
    kernel,
    max_angle,
)
from proper_subspaces.utils.formatter import ReportFormatter, rows_to_csv

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

TOL_DEMO = 1e-8
TOL_STUDY_ZERO = 1e-12
TOL_CONTROL = 1e-10
MAX_SEED = 2**64


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    dim: int = 10
    trials: int = 100
    tol: float = 1e-9
    format: str = "json"
    out: Optional[str] = None
    verbose: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        if not 0 <= args.seed < MAX_SEED:
            raise ValueError(f"Seed must be a 64-bit unsigned integer, got {args.seed}")
        return cls(
            seed=args.seed,
            dim=args.dim,
            trials=args.trials,
            tol=args.tol,
            format=args.format,
            out=args.out,
            verbose=args.verbose,
        )


def write_output(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"

    if cfg.out is None:
        sys.stdout.write(text)
        return

    try:
        with open(cfg.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as error:
        raise IoFailure(f"Cannot write {cfg.out!r}: {error}") from error


def render_report(cfg: RunConfig, report: Any) -> str:
    formatter = ReportFormatter(report)
    return formatter.to_csv() if cfg.format == "csv" else formatter.to_json()


def cmd_check(cfg: RunConfig, suite: str) -> int:
    summary = suites.run_suite(suite, cfg.trials, cfg.dim, cfg.seed, cfg.tol)
    data = summary.to_dict()

    if cfg.format == "csv":
        write_output(cfg, rows_to_csv(list(data), [list(data.values())]))
    else:
        write_output(cfg, ReportFormatter(data).to_json())

    return EXIT_OK if summary.passed else EXIT_FAILURE


def _riesz(t: np.ndarray, lam: complex, eps: float, m: int, weight: Optional[np.ndarray]):
    n = t.shape[0]
    ws = euclidean_space(n) if weight is None else make_space(n, weight)
    result = spectra.riesz_projection(Operator(t, ws), lam, eps, m)

    report = {
        "q": result.proj.p,
        "idempotency_res": result.idempotency_res,
        "plus_res": result.plus_res,
        "range_dim": result.range_dim,
    }
    ok = result.idempotency_res <= TOL_DEMO and result.plus_res <= TOL_DEMO
    return report, ok


def demo_riesz(cfg: RunConfig, args: argparse.Namespace) -> Tuple[Any, bool]:
    t = parse_matrix_literal(args.t, args.k)
    weight = None if args.weight is None else parse_matrix_literal(args.weight, t.shape[0])
    return _riesz(t, complex(args.lam), args.eps, args.m, weight)


def demo_finite_rank(cfg: RunConfig, args: argparse.Namespace) -> Tuple[Any, bool]:
    rng = generator(cfg.seed)
    if args.identity_weight:
        ws = euclidean_space(cfg.dim)
    else:
        ws = random_space(cfg.dim, rng)

    m = args.rank if args.rank is not None else max(1, cfg.dim // 3)
    f, h = random_biorthogonal_system(ws, m, rng)
    pair = finite_rank_proper_projection(ws, list(f.T), list(h.T))

    q = pair.p.matrix
    scale = ws.condition * max(1.0, np.linalg.norm(q, 2))
    report = {
        "rank": m,
        "idempotency_res": float(np.linalg.norm(q @ q - q, 2)),
        "cross_residual": pair.cross_residual,
        "nullspace_angle": max_angle(complement_L(pair.range_sub), kernel(pair.p_plus)),
    }
    ok = (
        report["idempotency_res"] <= TOL_DEMO * scale
        and report["cross_residual"] <= TOL_DEMO * scale
        and report["nullspace_angle"] <= TOL_DEMO * ws.condition
    )
    return report, ok


def demo_cq(cfg: RunConfig, args: argparse.Namespace) -> Tuple[Any, bool]:
    z = parse_matrix_literal(args.z, args.k)
    report = schatten.cq_compat_demo(schatten.make_model(2 * z.shape[0]), z)
    return report, report.margin_default > 0 and report.derived_matches


def demo_two_companions(cfg: RunConfig, args: argparse.Namespace) -> Tuple[Any, bool]:
    z = parse_matrix_literal(args.z, args.k)
    t = parse_matrix_literal(args.t, z.shape[0])
    report = schatten.two_companions_demo(schatten.make_model(2 * z.shape[0]), z, t)
    return report, report.ok


def demo_sylvester(cfg: RunConfig, args: argparse.Namespace) -> Tuple[Any, bool]:
    c = parse_matrix_literal(args.c, args.k)
    d = parse_matrix_literal(args.d, c.shape[0])
    if args.w is None:
        w = random_complex(c.shape, generator(cfg.seed))
    else:
        w = parse_matrix_literal(args.w, c.shape[0])

    result = schatten.sylvester(c, d, w)
    if not result.solvable:
        return result, True

    scale = np.linalg.norm(c, 2) + np.linalg.norm(d, 2)
    scale *= max(1.0, np.linalg.norm(result.x, 2))
    return result, result.residual <= TOL_DEMO * max(1.0, scale)


def demo_lq(cfg: RunConfig, args: argparse.Namespace) -> Tuple[Any, bool]:
    z = parse_matrix_literal(args.z, args.k)
    q = schatten.block_q(z)
    report = schatten.lq_compat_demo(schatten.make_model(q.shape[0]), q)
    return report, report.margin_c >= 1 - TOL_DEMO and report.min_c_squared >= 1 - TOL_DEMO


DEMOS: Dict[str, Callable[[RunConfig, argparse.Namespace], Tuple[Any, bool]]] = {
    "finite_rank": demo_finite_rank,
    "riesz": demo_riesz,
    "cq": demo_cq,
    "two_companions": demo_two_companions,
    "sylvester": demo_sylvester,
    "lq": demo_lq,
}


def cmd_demo(cfg: RunConfig, name: str, args: argparse.Namespace) -> int:
    report, ok = DEMOS[name](cfg, args)
    write_output(cfg, render_report(cfg, report))
    if not ok:
        log.error("demo %s: postcondition failed", name)
    return EXIT_OK if ok else EXIT_FAILURE


def _study_violations(
    kind: str,
    rows: List[studies.StudyRow],
    args: argparse.Namespace,
) -> List[str]:
    violations = []

    if kind == "diverge" and args.control:
        q_norms = [row.q_norm for row in rows]
        if max(q_norms) - min(q_norms) > TOL_CONTROL:
            violations.append("q_norm varies for the control vector")

    elif kind == "diverge":
        if not studies.is_monotone([row.g_enorm for row in rows], strict=True):
            violations.append("g_enorm is not strictly increasing")
        if not studies.is_monotone([row.q_norm for row in rows]):
            violations.append("q_norm decreases")

    elif args.shift == 0.0:
        for row in rows:
            margins = (row.aux["pair_margin"], row.aux["op_margin"])
            if max(margins) > TOL_STUDY_ZERO:
                violations.append(f"criterion margin does not vanish at k={row.n}")

    return violations


def cmd_study(cfg: RunConfig, kind: str, args: argparse.Namespace) -> int:
    if kind == "diverge":
        rows = studies.diverging_vector_study(args.dims, args.beta, control=args.control)
    else:
        rows = studies.symmetry_truncation_study(args.ks, shift=args.shift)

    write_output(cfg, studies.render(rows, cfg.format))

    violations = _study_violations(kind, rows, args)
    for violation in violations:
        log.error("study %s: %s", kind, violation)
    return EXIT_FAILURE if violations else EXIT_OK


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma separated integers, got {text!r}")


def _add_common_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--seed", type=int, default=default(0), help="random seed")
    parser.add_argument("--dim", type=int, default=default(10), help="ambient dimension")
    parser.add_argument("--trials", type=int, default=default(100), help="suite trials")
    parser.add_argument("--tol", type=float, default=default(1e-9), help="suite tolerance")
    parser.add_argument(
        "--format", choices=("json", "csv"), default=default("json"), help="output format"
    )
    parser.add_argument("--out", default=default(None), help="output path (stdout if omitted)")
    parser.add_argument(
        "-v", "--verbose", action="store_true", default=default(False), help="debug logging"
    )


def _add_riesz_flags(parser: argparse.ArgumentParser, matrix_default: Optional[str]) -> None:
    parser.add_argument("--t", default=matrix_default, help="matrix literal")
    parser.add_argument("--k", type=int, default=None, help="size for scalar literals")
    parser.add_argument("--weight", default=None, help="weight literal (identity if omitted)")
    parser.add_argument("--lambda", dest="lam", default="1", help="contour center")
    parser.add_argument("--eps", type=float, default=0.4, help="contour radius")
    parser.add_argument(
        "--m", type=int, default=spectra.DEFAULT_NODES, help="quadrature nodes"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proper-subspaces",
        description="Proper and compatible subspaces in finite two-norm models",
        allow_abbrev=False,
    )
    _add_common_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    _add_common_flags(common, suppress=True)

    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser(
        "check",
        parents=[common],
        allow_abbrev=False,
        help="run a randomized suite",
    )
    check.add_argument("suite", choices=sorted(suites.SUITES))

    demo = commands.add_parser(
        "demo",
        parents=[common],
        allow_abbrev=False,
        help="run a worked example",
    )
    demo.add_argument("name", choices=sorted(DEMOS))
    _add_riesz_flags(demo, None)
    demo.add_argument("--z", default=None, help="block parameter literal")
    demo.add_argument("--c", default="diag:1,2", help="Sylvester left matrix")
    demo.add_argument("--d", default="diag:3,4", help="Sylvester right matrix")
    demo.add_argument("--w", default=None, help="Sylvester right-hand side")
    demo.add_argument("--rank", type=int, default=None, help="finite-rank projection rank")
    demo.add_argument(
        "--identity-weight", action="store_true", help="finite_rank demo with weight I"
    )

    study = commands.add_parser(
        "study",
        parents=[common],
        allow_abbrev=False,
        help="run a truncation study",
    )
    study.add_argument("kind", choices=("diverge", "symmetry"))
    study.add_argument("--beta", type=float, default=0.5, help="decay exponent of g")
    study.add_argument("--dims", type=_int_list, default=[8, 16, 32, 64])
    study.add_argument("--control", action="store_true", help="use g = e1")
    study.add_argument("--ks", type=_int_list, default=[2, 4, 8])
    study.add_argument("--shift", type=float, default=0.0, help="shift of z_k")

    riesz = commands.add_parser(
        "riesz",
        parents=[common],
        allow_abbrev=False,
        help="Riesz projection of a matrix",
    )
    _add_riesz_flags(riesz, "diag:1,2")

    return parser


# --t is the Riesz matrix for demo riesz and the symmetry t for two_companions
DEMO_DEFAULTS = {
    "riesz": {"t": "diag:1,2"},
    "cq": {"z": "scalar:0.5"},
    "two_companions": {"z": "scalar:0.5", "t": "diag:1,-1"},
    "lq": {"z": "scalar:1"},
}
DEMO_SCALAR_SIZES = {"cq": 2, "two_companions": 2, "lq": 1}


def _resolve_demo_defaults(args: argparse.Namespace) -> None:
    for key, value in DEMO_DEFAULTS.get(args.name, {}).items():
        if getattr(args, key) is None:
            setattr(args, key, value)

    if args.k is None and args.name in DEMO_SCALAR_SIZES:
        literal = args.z if args.z is not None else ""
        if literal.startswith("scalar:"):
            args.k = DEMO_SCALAR_SIZES[args.name]


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        cfg = RunConfig.from_args(args)

        if args.command == "check":
            return cmd_check(cfg, args.suite)

        if args.command == "demo":
            _resolve_demo_defaults(args)
            return cmd_demo(cfg, args.name, args)

        if args.command == "study":
            return cmd_study(cfg, args.kind, args)

        report, ok = demo_riesz(cfg, args)
        write_output(cfg, render_report(cfg, report))
        return EXIT_OK if ok else EXIT_FAILURE

    except (BadExponent, MatrixFormatError, DimMismatch, ValueError) as error:
        log.error("%s", error)
        return EXIT_USAGE

    except ProperSubspacesError as error:
        log.error("%s", error)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
