"""Command-line front end.

Exit codes: 0 success, 1 verification failure or rejected input matrix,
2 usage/configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import holonomy as hol
from . import verification
from ._random import make_rng
from .errors import DependentBasisError, DimensionObstructionError, NotScalarError, NotUmnError, TrivialMatrixError
from .lie import (
    HopfDisk,
    flat_pair_generate,
    make_flat_pair,
    make_hopf_disk,
    pair_mu,
    random_umn,
    skew_pair_generate,
    span_closure_check,
    surface_to_json,
    validate_umn,
)
from .matcore import DEFAULT_TOL, matrix_from_json, matrix_to_json
from .serialize import csv_text, dumps

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_MATRIX_ERRORS = {
    NotUmnError: "NotUmn",
    TrivialMatrixError: "Trivial",
    NotScalarError: "NotScalar",
    DependentBasisError: "DependentBasis",
    DimensionObstructionError: "DimensionObstruction",
}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    m: int = 2
    n: int = 1
    seed: int = 0
    steps: int = 512
    tol: float | None = None
    case: str = "hopf"
    loop: str | None = None
    out: str | None = None
    param: str | None = None
    range: str | None = None
    matrix_file: str | None = None
    matrix_file2: str | None = None
    mu: float = 0.5
    mu_imag: float = 0.5
    eta: float = 1.0
    lam: float = 1.0

    def validate(self):
        if self.steps < 16:
            raise ConfigError(f"--steps must be at least 16, got {self.steps}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError(f"--tol must be positive, got {self.tol}")
        if self.n < 1 or self.m < 1:
            raise ConfigError("--n and --m must be positive")
        if self.command in ("holonomy", "generate", "sweep") and self.matrix_file is None and self.n > self.m:
            raise ConfigError(f"need n <= m, got n={self.n}, m={self.m}")
        return self


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _error_json(exc) -> str:
    kind = next((name for cls, name in _MATRIX_ERRORS.items() if isinstance(exc, cls)), type(exc).__name__)
    return dumps({"error": kind, "message": str(exc)}) + "\n"


def _read_matrix(path):
    try:
        return matrix_from_json(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read matrix file {path}: {exc}") from None


def _parse_points(text):
    pts = []
    for chunk in text.split(";"):
        if chunk.strip():
            a, b = chunk.split(",")
            pts.append((float(a), float(b)))
    return pts


def parse_loop(spec: str | None, case: str):
    """``rect:p,a,q,b``, ``poly:a0,b0;a1,b1;...`` or a JSON file of [a, b] points.

    For the flat case a rect is the coefficient rectangle ``[p, p+a] x [q, q+b]``.
    """
    if spec is None:
        raise ConfigError("--loop is required")
    try:
        if spec.startswith("rect:"):
            p, a, q, b = (float(v) for v in spec[5:].split(","))
            if case == "hopf":
                return hol.Rect(p, a, q, b)
            return hol.SampledUV([(p, q), (p + a, q), (p + a, q + b), (p, q + b), (p, q)])
        if spec.startswith("poly:"):
            pts = _parse_points(spec[5:])
        else:
            path = spec[5:] if spec.startswith("file:") else spec
            pts = json.loads(Path(path).read_text())
        return hol.SampledXY(pts) if case == "hopf" else hol.SampledUV(pts)
    except (ValueError, OSError, TypeError) as exc:
        raise ConfigError(f"invalid loop spec {spec!r}: {exc}") from None


def parse_range(spec: str | None):
    """``16,32,64``, ``lo:hi:xF`` (geometric) or ``lo:hi:step`` (arithmetic)."""
    if spec is None:
        raise ConfigError("--range is required")
    try:
        if ":" in spec:
            lo, hi, step = spec.split(":")
            lo, hi = int(lo), int(hi)
            values = []
            v = lo
            if step.startswith("x"):
                factor = int(step[1:])
                if factor < 2:
                    raise ValueError("factor must be at least 2")
                while v <= hi:
                    values.append(v)
                    v *= factor
            else:
                inc = int(step)
                if inc < 1:
                    raise ValueError("step must be positive")
                values = list(range(lo, hi + 1, inc))
        else:
            values = [int(v) for v in spec.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"invalid range {spec!r}: {exc}") from None
    if not values:
        raise ConfigError(f"range {spec!r} is empty")
    return values


def build_surface(cfg: RunConfig):
    if cfg.case == "hopf":
        if cfg.matrix_file:
            return make_hopf_disk(_read_matrix(cfg.matrix_file))
        return HopfDisk(random_umn(cfg.m, cfg.n, cfg.lam, seed=make_rng(cfg.seed)))
    if cfg.case == "flat":
        if cfg.matrix_file:
            if not cfg.matrix_file2:
                raise ConfigError("--case flat with --matrix-file also needs --matrix-file2")
            return make_flat_pair(_read_matrix(cfg.matrix_file), _read_matrix(cfg.matrix_file2))
        return flat_pair_generate(cfg.m, cfg.n, cfg.mu, cfg.eta, seed=make_rng(cfg.seed), lam=cfg.lam)
    raise ConfigError(f"unknown case {cfg.case!r}")


# -- commands ---------------------------------------------------------------------

def cmd_verify_all(cfg: RunConfig) -> int:
    results = verification.run_all(cfg.seed, cfg.tol)
    lines = [r.line() for r in results]
    ok = all(r.passed for r in results)
    lines.append(f"{'ALL PASS' if ok else 'FAILED'}: {sum(r.passed for r in results)}/{len(results)} suites")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if cfg.out:
        table = [{"suite": r.name, "passed": r.passed, "worst": r.worst, "threshold": r.threshold,
                  "relation": r.relation, "detail": r.detail} for r in results]
        Path(cfg.out).write_text(dumps(table) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_holonomy(cfg: RunConfig) -> int:
    loop = parse_loop(cfg.loop, cfg.case)
    surface = build_surface(cfg)
    report = hol.holonomy_report(surface, loop, cfg.steps)
    payload = report.to_json()
    payload["surface"] = surface_to_json(surface)
    _emit(dumps(payload) + "\n", cfg.out)
    return EXIT_OK


def cmd_check_geodesic(cfg: RunConfig) -> int:
    if not cfg.matrix_file:
        raise ConfigError("check-geodesic needs --matrix-file")
    tol = cfg.tol if cfg.tol is not None else DEFAULT_TOL
    X = validate_umn(_read_matrix(cfg.matrix_file), tol)
    verdict = {"lambda": X.lam, "m": X.m, "n": X.n}
    if cfg.matrix_file2 is None:
        basis = [X.X, 1j * X.X]
        verdict["type"] = "hopf"
    else:
        Yraw = _read_matrix(cfg.matrix_file2)
        mu = pair_mu(X, Yraw, tol)
        Y = validate_umn(Yraw, tol)
        verdict.update({"type": "pair", "mu": {"re": mu.real, "im": mu.imag}, "eta": Y.lam})
        basis = [X.X, Y.X]
    result = span_closure_check(basis, tol)
    verdict.update({"is_geodesic": result.is_geodesic, "residual": result.residual})
    _emit(dumps(verdict) + "\n", cfg.out)
    return EXIT_OK


def cmd_generate(cfg: RunConfig) -> int:
    rng = make_rng(cfg.seed)
    if cfg.case == "hopf":
        X = random_umn(cfg.m, cfg.n, cfg.lam, seed=rng)
        payload, Y = surface_to_json(HopfDisk(X)), None
        X = X.X
    elif cfg.case == "flat":
        surface = flat_pair_generate(cfg.m, cfg.n, cfg.mu, cfg.eta, seed=rng, lam=cfg.lam)
        payload, X, Y = surface_to_json(surface), surface.X.X, surface.Y.X
    elif cfg.case == "skew":
        Xe, Y = skew_pair_generate(cfg.m, cfg.n, complex(cfg.mu, cfg.mu_imag), cfg.eta, seed=rng, lam=cfg.lam)
        X = Xe.X
        payload = {"type": "pair", "X": matrix_to_json(X), "Y": matrix_to_json(Y)}
    else:
        raise ConfigError(f"unknown case {cfg.case!r}")
    if cfg.matrix_file:
        Path(cfg.matrix_file).write_text(dumps(matrix_to_json(X)) + "\n")
    if cfg.matrix_file2 and Y is not None:
        Path(cfg.matrix_file2).write_text(dumps(matrix_to_json(Y)) + "\n")
    _emit(dumps(payload) + "\n", cfg.out)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.param not in ("steps", "mesh"):
        raise ConfigError(f"--param must be 'steps' or 'mesh', got {cfg.param!r}")
    values = parse_range(cfg.range)
    if cfg.param == "steps":
        if min(values) < 16:
            raise ConfigError("step counts must be at least 16")
        surface = build_surface(cfg)
        if cfg.loop is None:
            if cfg.case != "hopf":
                raise ConfigError("--loop is required for a flat sweep")
            loop = verification.convergence_loop(make_rng(cfg.seed, 99))
        else:
            loop = parse_loop(cfg.loop, cfg.case)
        rows = hol.convergence_sweep(surface, loop, values)
        text = csv_text(["steps", "deviation"], rows)
    else:
        if cfg.case != "hopf":
            raise ConfigError("mesh sweeps need --case hopf")
        if min(values) < 8:
            raise ConfigError("mesh sizes must be at least 8")
        surface = build_surface(cfg)
        loop = parse_loop(cfg.loop or "rect:0.2,0.9,0.5,2.0", "hopf")
        if not isinstance(loop, hol.Rect):
            raise ConfigError("mesh sweeps need a rect: loop")
        n, m = surface.X.n, surface.X.m
        expected = hol.area_surface_S(loop, n, m)
        rows = []
        for mesh in values:
            a = hol.area_numeric(surface, loop, mesh)
            rows.append((mesh, a, expected, abs(a - expected)))
        text = csv_text(["mesh", "area_numeric", "area_expected", "deviation"], rows)
    _emit(text, cfg.out)
    return EXIT_OK


COMMANDS = {
    "verify-all": cmd_verify_all,
    "holonomy": cmd_holonomy,
    "check-geodesic": cmd_check_geodesic,
    "generate": cmd_generate,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holonomy-lab", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=2)
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--steps", type=int, default=512)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--out", default=None)
    common.add_argument("--lam", type=float, default=1.0, help="lambda for generated X")
    common.add_argument("--mu", type=float, default=0.5, help="real part of mu for generated pairs")
    common.add_argument("--mu-imag", type=float, default=0.5, help="imaginary part of mu (skew pairs)")
    common.add_argument("--eta", type=float, default=1.0)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify-all", parents=[common], help="run every verification suite")

    p = sub.add_parser("holonomy", parents=[common], help="transport vs closed form on one loop")
    p.add_argument("--case", choices=["hopf", "flat"], required=True)
    p.add_argument("--loop", required=True)
    p.add_argument("--matrix-file")
    p.add_argument("--matrix-file2")

    p = sub.add_parser("check-geodesic", parents=[common], help="bracket-closure verdict for X or (X, Y)")
    p.add_argument("--matrix-file", required=True)
    p.add_argument("--matrix-file2")

    p = sub.add_parser("generate", parents=[common], help="emit a seeded surface descriptor")
    p.add_argument("--case", choices=["hopf", "flat", "skew"], required=True)
    p.add_argument("--matrix-file", help="also write X here")
    p.add_argument("--matrix-file2", help="also write Y here")

    p = sub.add_parser("sweep", parents=[common], help="convergence data as CSV")
    p.add_argument("--param", required=True)
    p.add_argument("--range", required=True)
    p.add_argument("--case", choices=["hopf", "flat"], default="hopf")
    p.add_argument("--loop")
    p.add_argument("--matrix-file")
    p.add_argument("--matrix-file2")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    try:
        cfg = RunConfig(**fields).validate()
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"holonomy-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except tuple(_MATRIX_ERRORS) as exc:
        sys.stdout.write(_error_json(exc))
        return EXIT_FAIL
    except ValueError as exc:
        print(f"holonomy-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
