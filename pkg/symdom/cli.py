"""
Command-line front end for symdom

Exit codes: 0 success, 1 usage or configuration error, 2 numeric tolerance
breach, 3 internal failure.
"""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from symdom import __version__
from symdom.approx import builtin_function, convergence_study, localization_profile, make_space, project
from symdom.base import EvenSpace
from symdom.config import get_settings
from symdom.curved2d import (
    check_domain,
    curved_diffop_apply,
    curved_kernel_eval,
    curved_kernel_sum,
    lambda_sample,
    psi,
    psi_inv,
    q_basis_eval,
)
from symdom.disk import disk_kernel_eval
from symdom.errors import ConfigurationError, SymdomError, ToleranceBreach
from symdom.reports import Report, render_csv, render_json, write_atomic
from symdom.revolution import (
    rev_basis_eval,
    rev_diffop_apply,
    rev_kernel_eval,
    rev_kernel_pullback,
    rev_kernel_sum,
    rev_psi,
    rev_psi_inv,
    rev_sample,
)
from symdom.types import BallWeightParams, CurvedWeightParams, DomainParams
from symdom.utils import make_rng

logger = logging.getLogger(__name__)

COMMANDS = ("gram", "eigen", "kernel", "project", "converge", "localize", "mapcheck")

GRAM_TOL = {2: 1e-9, 3: 1e-8}
EIGEN_TOL = {2: 1e-8, 3: 1e-7}
KERNEL_TOL = 1e-8
MAP_TOL = 1e-13
CONVERGE_FLOOR = 1e-12
OPERATOR_MIN = 0.05


class RunConfig(BaseModel):
    """Fully resolved parameters of one command"""

    command: str
    domain: DomainParams = Field(default_factory=lambda: DomainParams(a=0.0, b=1.0, c=1.0))
    dim: int = Field(2, description="2 for planar domains, 3 for solids of revolution")
    beta: float = 0.0
    gamma: float = 0.0
    nmax: int = 8
    quad_degree: Optional[int] = None
    seed: int = 0
    samples: Optional[int] = None
    out: Optional[str] = None
    format: str = "csv"
    f: str = "builtin:expcos"
    center: Optional[Tuple[float, float, float]] = None

    def space(self) -> EvenSpace:
        return make_space("curved2d" if self.dim == 2 else "revolution", self.domain, self.beta, self.gamma)

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class SymdomArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1"""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _floats(text: str, count: int, name: str) -> Tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise ConfigurationError(f"{name} needs {count} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigurationError(f"{name} needs numbers, got {text!r}")


def parse_domain(text: str) -> DomainParams:
    a, b, c = _floats(text, 3, "--domain")
    domain = DomainParams(a=a, b=b, c=c)
    check_domain(domain)
    return domain


def parse_weight(text: str) -> Tuple[float, float]:
    """Parse 'beta=..,gamma=..' or 'k1=..,k2=..,k3=..' into (beta, gamma)"""
    values: Dict[str, float] = {}
    for part in text.split(","):
        if "=" not in part:
            raise ConfigurationError(f"--weight entries must be key=value, got {part!r}")
        key, raw = part.split("=", 1)
        try:
            values[key.strip().lower()] = float(raw)
        except ValueError:
            raise ConfigurationError(f"--weight value for {key.strip()!r} is not a number: {raw!r}")
    if set(values) <= {"beta", "gamma"}:
        return values.get("beta", 0.0), values.get("gamma", 0.0)
    if set(values) <= {"k1", "k2", "k3"}:
        if values.get("k1", 0.0) != 0.0:
            raise ConfigurationError("spectral commands need k1 = 0")
        return values.get("k2", 0.0), values.get("k3", 0.0)
    raise ConfigurationError(f"--weight keys must be beta,gamma or k1,k2,k3, got {sorted(values)}")


def read_config_file(path: str) -> Dict[str, str]:
    """Plain key=value lines; '#' starts a comment"""
    values: Dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e}")
    for number, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{number}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def build_parser() -> SymdomArgumentParser:
    parser = SymdomArgumentParser(
        prog="symdom",
        description="Orthogonal polynomials, kernels and spectral operators on curved domains",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Orthogonality of the cone basis up to degree 8
  symdom gram --domain 0,1,1 --weight beta=0,gamma=0 --nmax 8

  # Eigenvalue residuals on the disk
  symdom eigen --domain 0,1,0 --weight beta=0,gamma=0 --nmax 6

  # Round trips of the quadratic map
  symdom mapcheck --domain 0.25,1,2 --samples 1000 --seed 7
        """,
    )
    parser.add_argument("command", choices=COMMANDS, help="Experiment to run")
    parser.add_argument("--domain", help="Shape parameters a,b,c (default 0,1,1)")
    parser.add_argument("--dim", type=int, choices=(2, 3), help="2 for planar domains, 3 for solids of revolution")
    parser.add_argument("--weight", help="beta=..,gamma=.. or k1=..,k2=..,k3=..")
    parser.add_argument("--nmax", type=int, help="Highest degree (default 8)")
    parser.add_argument("--quad-degree", type=int, dest="quad_degree", help="Quadrature exactness")
    parser.add_argument("--seed", type=int, help="Seed for random points (default SYMDOM_SEED)")
    parser.add_argument("--samples", type=int, help="Number of random points")
    parser.add_argument("--out", help="Output path (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), help="Output format (default csv)")
    parser.add_argument("--config", help="File of key=value defaults")
    parser.add_argument("--f", dest="f", help="Function to expand, e.g. builtin:expcos")
    parser.add_argument("--center", help="Localization center x1,x2,t")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, the config file and command-line flags, in that order"""
    merged: Dict[str, Any] = {}
    if args.config:
        merged.update(read_config_file(args.config))
    for key in ("domain", "dim", "weight", "nmax", "quad_degree", "seed", "samples", "out", "format", "f", "center"):
        value = getattr(args, key)
        if value is not None:
            merged[key] = value

    def as_int(key: str) -> Optional[int]:
        if key not in merged:
            return None
        try:
            return int(merged[key])
        except (TypeError, ValueError):
            raise ConfigurationError(f"{key} must be an integer, got {merged[key]!r}")

    fields: Dict[str, Any] = {"command": args.command}
    if "domain" in merged:
        fields["domain"] = parse_domain(str(merged["domain"]))
    if "weight" in merged:
        fields["beta"], fields["gamma"] = parse_weight(str(merged["weight"]))
    for key in ("dim", "nmax", "quad_degree", "samples"):
        value = as_int(key)
        if value is not None:
            fields[key] = value
    seed = as_int("seed")
    fields["seed"] = seed if seed is not None else get_settings().seed
    for key in ("out", "format", "f"):
        if key in merged:
            fields[key] = str(merged[key])
    if "center" in merged:
        fields["center"] = _floats(str(merged["center"]), 3, "--center")

    config = RunConfig(**fields)
    if config.dim not in (2, 3):
        raise ConfigurationError(f"dim must be 2 or 3, got {config.dim}")
    if config.nmax < 0:
        raise ConfigurationError(f"nmax must be nonnegative, got {config.nmax}")
    if config.format not in ("csv", "json"):
        raise ConfigurationError(f"format must be csv or json, got {config.format!r}")
    if config.samples is not None and config.samples < 1:
        raise ConfigurationError(f"samples must be positive, got {config.samples}")
    config.space()
    return config


def _coords(pts: np.ndarray) -> Tuple[np.ndarray, ...]:
    return tuple(pts[:, i] for i in range(pts.shape[1]))


def cmd_gram(config: RunConfig) -> Report:
    """Deviation of the orthonormalized Gram matrix from the identity per degree"""
    space = config.space()
    indices = space.all_indices(config.nmax)
    rule = space.rule(config.quad_degree or 2 * config.nmax)
    nodes = rule.coords()
    table = np.stack([np.asarray(space.evaluate(idx, nodes), dtype=float) for idx in indices], axis=-1)
    w = rule.weights / rule.mass
    gram = table.T @ (w[:, None] * table)
    degrees = np.array([idx[0] for idx in indices])
    dev = np.abs(gram - np.eye(len(indices)))
    off = dev.copy()
    np.fill_diagonal(off, 0.0)
    rows = []
    worst = 0.0
    for n in range(config.nmax + 1):
        sel = degrees == n
        diag = float(np.max(np.diag(dev)[sel]))
        offdiag = float(np.max(off[sel]))
        worst = max(worst, diag, offdiag)
        rows.append([n, int(np.sum(sel)), diag, offdiag])
    return Report(
        command="gram",
        columns=["degree", "count", "max_diag_deviation", "max_offdiag"],
        rows=rows,
        tolerance=GRAM_TOL[config.dim],
        worst=worst,
    )


def _operator_points(config: RunConfig, space: EvenSpace) -> np.ndarray:
    rng = make_rng(config.seed)
    count = config.samples or 25
    pts = space.sample(4 * count + 64, rng)
    pts = pts[pts[:, -1] >= OPERATOR_MIN + 1e-3]
    return pts[:count]


def cmd_eigen(config: RunConfig) -> Report:
    """Relative residuals of the eigenvalue equation for every basis member"""
    space = config.space()
    pts = _operator_points(config, space)
    coords = _coords(pts)
    rows = []
    worst = 0.0
    for n in range(config.nmax + 1):
        lam = space.eigenvalue(n)
        residual = 0.0
        for idx in space.indices(n):
            if config.dim == 2:
                params = CurvedWeightParams.spectral(config.beta, config.gamma)
                j = idx[1]

                def f(u, v, j=j):
                    return q_basis_eval(config.domain, params, j, n, (u, v))

                applied = np.asarray(curved_diffop_apply(config.domain, params, f, coords))
                values = np.asarray(f(*coords))
            else:
                bw = BallWeightParams(beta=config.beta, gamma=config.gamma)

                def f(x1, x2, t, idx=idx):
                    return rev_basis_eval(config.domain, bw, idx, (x1, x2, t))

                applied = np.asarray(rev_diffop_apply(config.domain, bw, f, coords))
                values = np.asarray(f(*coords))
            scale = max(1.0, abs(lam)) * max(1.0, float(np.max(np.abs(values))))
            residual = max(residual, float(np.max(np.abs(applied - lam * values))) / scale)
        worst = max(worst, residual)
        rows.append([n, lam, residual])
    return Report(
        command="eigen",
        columns=["degree", "eigenvalue", "max_rel_residual"],
        rows=rows,
        meta={"points": int(len(pts))},
        tolerance=EIGEN_TOL[config.dim],
        worst=worst,
    )


def _disk_pullback_kernel(dp: DomainParams, params: CurvedWeightParams, n: int, c1, c2):
    """Full disk kernel at the psi images, averaged over the reflection of the second point"""
    disk = params.disk()
    s1 = psi(dp, c1)
    u2, t2 = psi(dp, c2)
    full = np.asarray(disk_kernel_eval(disk, n, s1, (u2, t2)))
    mirrored = np.asarray(disk_kernel_eval(disk, n, s1, (u2, -np.asarray(t2))))
    return 0.5 * (full + mirrored)


def cmd_kernel(config: RunConfig) -> Report:
    """Closed-form kernels against sum-of-basis and the parity-averaged pullback of the full kernel"""
    space = config.space()
    rng = make_rng(config.seed)
    count = config.samples or 20
    p1 = space.sample(count, rng)
    p2 = space.sample(count, rng)
    c1, c2 = _coords(p1), _coords(p2)
    rows = []
    worst = 0.0
    for n in range(config.nmax + 1):
        if config.dim == 2:
            params = CurvedWeightParams.spectral(config.beta, config.gamma)
            closed = np.asarray(curved_kernel_eval(config.domain, params, n, c1, c2))
            summed = np.asarray(curved_kernel_sum(config.domain, params, n, c1, c2))
            pulled = np.asarray(_disk_pullback_kernel(config.domain, params, n, c1, c2))
        else:
            if config.beta != 0.0:
                raise ConfigurationError("the single-integral kernel needs beta = 0")
            bw = BallWeightParams(beta=0.0, gamma=config.gamma)
            closed = np.asarray(rev_kernel_eval(config.domain, config.gamma, n, c1, c2))
            pulled = np.asarray(rev_kernel_pullback(config.domain, config.gamma, n, c1, c2))
            summed = np.asarray(rev_kernel_sum(config.domain, bw, n, c1, c2))
        scale = max(1.0, float(np.max(np.abs(summed))))
        dev = max(float(np.max(np.abs(closed - summed))), float(np.max(np.abs(pulled - summed)))) / scale
        worst = max(worst, dev)
        rows.append([n, dev])
    return Report(
        command="kernel",
        columns=["degree", "max_rel_deviation"],
        rows=rows,
        meta={"pairs": count},
        tolerance=KERNEL_TOL,
        worst=worst,
    )


def cmd_project(config: RunConfig) -> Report:
    """Expansion coefficients of a built-in function"""
    space = config.space()
    f = builtin_function(config.f, config.dim)
    expansion = project(space, f, config.nmax, config.quad_degree)
    rows: List[List[Any]] = [
        [term.degree, ";".join(str(i) for i in term.index), term.value] for term in expansion.terms
    ]
    return Report(
        command="project",
        columns=["degree", "index", "coefficient"],
        rows=rows,
        meta={"function": config.f, "quad_degree": expansion.quad_degree},
    )


def cmd_converge(config: RunConfig) -> Report:
    """
    L2 and sampled sup errors of partial sums

    Fails when the L2 error stops decreasing while still above CONVERGE_FLOOR.
    """
    space = config.space()
    f = builtin_function(config.f, config.dim)
    report = convergence_study(
        space,
        f,
        range(config.nmax + 1),
        quad_degree=config.quad_degree,
        samples=config.samples or 2000,
        seed=config.seed,
        label=config.f,
    )
    l2 = report.l2_errors
    rows = [[n, e, s] for n, e, s in zip(report.degrees, l2, report.sup_errors)]
    stalled = [n for n, prev, cur in zip(report.degrees[1:], l2, l2[1:]) if cur >= prev and prev > CONVERGE_FLOOR]
    if stalled:
        logger.warning("L2 error of %s does not decrease at degrees %s", config.f, stalled)
    return Report(
        command="converge",
        columns=["degree", "l2_error", "sup_error_sampled"],
        rows=rows,
        meta={
            "decay_order": report.decay_order,
            "strictly_decreasing": all(b < a for a, b in zip(l2, l2[1:])),
            "stalled_degrees": stalled,
            "function": config.f,
        },
        tolerance=0.0,
        worst=float(len(stalled)),
    )


def cmd_localize(config: RunConfig) -> Report:
    """Binned profile of the localized kernel around a center"""
    if config.dim != 3:
        raise ConfigurationError("localize works on solids of revolution; pass --dim 3")
    if config.beta != 0.0:
        raise ConfigurationError("the localized kernel needs beta = 0")
    profile = localization_profile(
        config.domain,
        config.gamma,
        config.nmax,
        center=config.center,
        samples=config.samples or 3000,
        seed=config.seed,
    )
    rows = [
        [lo, hi, count, value, env]
        for lo, hi, count, value, env in zip(
            profile.bin_edges[:-1], profile.bin_edges[1:], profile.counts, profile.profile, profile.envelope
        )
    ]
    return Report(
        command="localize",
        columns=["bin_lo", "bin_hi", "count", "normalized_max", "envelope"],
        rows=rows,
        meta={"center": list(profile.center), "degree": profile.degree},
    )


def cmd_mapcheck(config: RunConfig) -> Report:
    """
    Round trips of psi and its inverse on seeded samples

    The ball-side check compares the last coordinate through its square.
    Near the lower boundary t -> sqrt(.) has condition number v / ((b - a) t),
    so a float64 rounding of v alone moves t by eps v / ((b - a) t).
    """
    rng = make_rng(config.seed)
    count = config.samples or 1000
    dp = config.domain
    if config.dim == 2:
        pts = lambda_sample(dp, count, rng)
        back = np.stack(psi_inv(dp, psi(dp, _coords(pts))), axis=-1)
        disk = _half_ball_sample(count, 2, rng)
        fwd = np.stack(psi(dp, psi_inv(dp, _coords(disk))), axis=-1)
    else:
        pts = rev_sample(dp, count, rng)
        back = np.stack(rev_psi_inv(dp, rev_psi(dp, _coords(pts))), axis=-1)
        disk = _half_ball_sample(count, 3, rng)
        fwd = np.stack(rev_psi(dp, rev_psi_inv(dp, _coords(disk))), axis=-1)
    e1 = float(np.max(np.abs(back - pts)))
    e2 = max(
        float(np.max(np.abs(fwd[:, :-1] - disk[:, :-1]))),
        float(np.max(np.abs(fwd[:, -1] ** 2 - disk[:, -1] ** 2))),
    )
    return Report(
        command="mapcheck",
        columns=["check", "max_error"],
        rows=[["domain_to_ball", e1], ["ball_to_domain", e2]],
        meta={"samples": count},
        tolerance=MAP_TOL,
        worst=max(e1, e2),
    )


def _half_ball_sample(count: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    out: List[np.ndarray] = []
    have = 0
    while have < count:
        cand = rng.uniform(-1.0, 1.0, (2 * count, dim))
        cand[:, -1] = np.abs(cand[:, -1])
        keep = cand[np.sum(cand * cand, axis=1) <= 1.0]
        out.append(keep)
        have += len(keep)
    return np.concatenate(out)[:count]


DRIVERS: Dict[str, Callable[[RunConfig], Report]] = {
    "gram": cmd_gram,
    "eigen": cmd_eigen,
    "kernel": cmd_kernel,
    "project": cmd_project,
    "converge": cmd_converge,
    "localize": cmd_localize,
    "mapcheck": cmd_mapcheck,
}


def emit(report: Report, config: RunConfig) -> None:
    if config.format == "json":
        text = render_json(report, __version__, config.echo())
    else:
        text = render_csv(report, __version__)
    if config.out:
        write_atomic(config.out, text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        level = get_settings().log_level
    except ConfigurationError as e:
        print(f"symdom: error: {e}", file=sys.stderr)
        return 1
    logging.basicConfig(level=getattr(logging, level), format="%(levelname)s %(name)s: %(message)s")

    try:
        config = resolve_config(args)
        report = DRIVERS[config.command](config)
        emit(report, config)
        report.ensure_passed()
    except ToleranceBreach as e:
        logger.error("%s", e)
        return 2
    except (SymdomError, ValueError) as e:
        logger.error("%s", e)
        print(f"symdom: error: {e}", file=sys.stderr)
        return 1
    except Exception:
        logger.exception("Internal failure")
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
