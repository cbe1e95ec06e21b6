"""Command-line front end.

Every command is deterministic: the RNG seed comes from --seed, else the
QENT_SEED environment variable, else a fixed default (0x5EED).  Machine
entropy is only used when --nondeterministic is passed without --seed.
Exit codes: 0 ok, 2 parse error, 3 validation error, 4 inequality
violation certificate emitted, 5 degenerate spectrum.
"""

import argparse
import contextlib
import math
import os
import secrets
import sys

import numpy as np

from . import experiments, io
from .entropy import (
    absolute_entropy,
    density_p,
    entropy_report_for_density,
    perturb_spectrum,
)
from .errors import DegenerateSpectrumError, QentropyError
from .montecarlo import mc_entropy_estimate
from .rng import DEFAULT_SEED, RngStream
from .states import Spectrum, eig_hermitian, spectrum_from_values

EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_VIOLATION = 4
EXIT_DEGENERATE = 5


class _CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QENT_SEED")
    if env is not None:
        try:
            return int(env, 0)
        except ValueError as exc:
            raise _CliError(f"QENT_SEED is not an integer: {env!r}", EXIT_PARSE) from exc
    if getattr(args, "nondeterministic", False):
        return secrets.randbits(63)
    return DEFAULT_SEED


def _load_spectrum_and_dim(args) -> tuple[Spectrum, int]:
    """Input state as a spectrum: from a matrix file or a spectrum file."""
    if args.input and args.spectrum:
        raise _CliError("give either --input or --spectrum, not both", EXIT_PARSE)
    if args.input:
        rho = io.load_density(args.input)
        spec, _ = eig_hermitian(rho)
        return spec, rho.dim
    if args.spectrum:
        spec = io.load_spectrum(args.spectrum)
        dim = getattr(args, "dim", None) or spec.dim
        if dim < spec.dim:
            raise _CliError(f"--dim {dim} smaller than spectrum length {spec.dim}",
                            EXIT_VALIDATION)
        if dim > spec.dim:
            padded = np.concatenate([spec.values, np.zeros(dim - spec.dim)])
            spec = spectrum_from_values(padded)
        return spec, dim
    raise _CliError("an input state is required (--input or --spectrum)", EXIT_PARSE)


def _fmt(args, value: float) -> str:
    if getattr(args, "bits", False):
        value = value / math.log(2)
    return f"{value:.{args.precision}g}"


def _out_stream(args):
    if getattr(args, "output", None):
        return open(args.output, "w", encoding="utf-8", newline="\n")
    return contextlib.nullcontext(sys.stdout)


def cmd_entropy(args) -> int:
    spec, dim = _load_spectrum_and_dim(args)
    report = absolute_entropy(spec, dim)
    unit = "bits" if args.bits else "nats"
    if args.format == "csv":
        print("dim,s_h,s0,s_f,s_total,unit")
        print(f"{dim},{_fmt(args, report.s_h)},{_fmt(args, report.s0)},"
              f"{_fmt(args, report.s_f)},{_fmt(args, report.s_total)},{unit}")
    else:
        print(f"dim      = {dim}")
        print(f"S_H      = {_fmt(args, report.s_h)} {unit}   (von Neumann)")
        print(f"S_0(N)   = {_fmt(args, report.s0)} {unit}   (minimum uncertainty)")
        print(f"S_F      = {_fmt(args, report.s_f)} {unit}   (excess statistical)")
        print(f"S        = {_fmt(args, report.s_total)} {unit}   (absolute)")
    return 0


def cmd_mc(args) -> int:
    spec, dim = _load_spectrum_and_dim(args)
    seed = _resolve_seed(args)
    rho = _diag_density(spec)
    est = mc_entropy_estimate(rho, args.samples, RngStream(seed), mode=args.mode,
                              workers=args.workers)
    closed = absolute_entropy(spec, dim).s_total
    z = (est.mean - closed) / est.stderr if est.stderr > 0 else 0.0
    unit = "bits" if args.bits else "nats"
    print(f"mean     = {_fmt(args, est.mean)} {unit}")
    print(f"stderr   = {_fmt(args, est.stderr)}")
    print(f"samples  = {est.samples}")
    print(f"seed     = {est.seed}")
    print(f"closed   = {_fmt(args, closed)} {unit}")
    print(f"z        = {z:.4f}")
    return 0


def _diag_density(spec: Spectrum):
    from .states import validate_density

    return validate_density(np.diag(spec.values.astype(complex)))


def cmd_pdensity(args) -> int:
    spec, dim = _load_spectrum_and_dim(args)
    if args.perturb:
        spec = perturb_spectrum(spec, args.perturb)
    grid = np.linspace(0.0, 1.0, args.grid)
    with _out_stream(args) as out:
        out.write("s,p\n")
        for s in grid:
            out.write(f"{s:.12g},{density_p(spec, dim, float(s)):.12g}\n")
    return 0


def cmd_fig1(args) -> int:
    seed = _resolve_seed(args)
    curve = experiments.fig1_uniform_curve(args.max_n)
    dots = experiments.fig1_random_mixtures(args.dim, args.count, RngStream(seed))
    with _out_stream(args) as out:
        out.write("label,n,dim,s_h,s_f\n")
        for row in curve + dots:
            out.write(f"{row.label},{row.n},{row.dim},{row.s_h:.12g},{row.s_f:.12g}\n")
    return 0


def cmd_inset(args) -> int:
    with _out_stream(args) as out:
        out.write("dim,s0_exact,s0_asymptotic\n")
        for n, exact, asym in experiments.fig1_inset(args.max_dim):
            out.write(f"{n},{exact:.12g},{asym:.12g}\n")
    return 0


def cmd_check(args) -> int:
    seed = _resolve_seed(args)
    try:
        dims = [tuple(int(x) for x in d.split("x")) for d in args.dims.split(",")]
    except ValueError as exc:
        raise _CliError(f"bad --dims value {args.dims!r}: {exc}", EXIT_PARSE) from exc
    known = {"ei1", "ei2", "ei3", "ei3a", "measurement_monotonicity"}
    wanted = set(args.ids) if args.ids else known
    if wanted - known:
        raise _CliError(f"unknown check ids: {sorted(wanted - known)}", EXIT_PARSE)
    reports = []
    if wanted & {"ei1", "ei2", "ei3", "ei3a"}:
        reports.extend(r for r in experiments.inequality_suite(
            args.trials, dims, RngStream(seed)) if r.inequality_id in wanted)
    if "measurement_monotonicity" in wanted:
        reports.append(experiments.measurement_conjecture_scan(
            args.trials, args.dim, RngStream(seed)))
    with _out_stream(args) as out:
        out.write("inequality,trials,violations,worst_margin\n")
        for r in reports:
            out.write(f"{r.inequality_id},{r.trials},{r.violations},{r.worst_margin:.12g}\n")
    violated = False
    for r in reports:
        if r.violations:
            violated = True
            for c in r.certificates:
                print(f"VIOLATION {c.inequality_id} tag={c.tag} trial={c.trial} "
                      f"seed={c.seed} stream={c.stream_id} dims={c.dims} "
                      f"lhs={c.lhs:.12g} rhs={c.rhs:.12g} margin={c.margin:.12g}",
                      file=sys.stderr)
    return EXIT_VIOLATION if violated else 0


def cmd_random_state(args) -> int:
    seed = _resolve_seed(args)
    gen = RngStream(seed).generator()
    rho = experiments.random_density_hs(args.dim, gen)
    text = io.density_to_text(rho)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_perturb(args) -> int:
    spec, _ = _load_spectrum_and_dim(args)
    new = perturb_spectrum(spec, args.epsilon)
    line = " ".join(f"{v:.17g}" for v in new.values)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(line + "\n")
    else:
        print(line)
    return 0


def _add_state_args(p):
    p.add_argument("--input", help="density-matrix JSON file")
    p.add_argument("--spectrum", help="whitespace-separated spectrum file")
    p.add_argument("--dim", type=int, default=None,
                   help="pad a spectrum with zeros up to this dimension")


def _add_common(p):
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    p.add_argument("--nondeterministic", action="store_true",
                   help="allow machine entropy when --seed is absent")
    p.add_argument("--precision", type=int, default=12,
                   help="significant digits in printed values")
    p.add_argument("--bits", action="store_true", help="report entropies in bits")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qentropy",
                                 description="Basis-averaged information entropy "
                                             "of quantum states")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="closed-form entropy report")
    _add_state_args(p)
    _add_common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("mc", help="Monte-Carlo estimate of the absolute entropy")
    _add_state_args(p)
    _add_common(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--mode", choices=("sphere", "basis"), default="sphere")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("pdensity", help="outcome-weight density P(s) as CSV")
    _add_state_args(p)
    _add_common(p)
    p.add_argument("--grid", type=int, default=1001)
    p.add_argument("--perturb", type=float, default=None,
                   help="spread degenerate clusters by this epsilon first")
    p.add_argument("--output")
    p.set_defaults(func=cmd_pdensity)

    p = sub.add_parser("fig1", help="uniform curve and random-mixture scatter")
    _add_common(p)
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--max-n", type=int, default=64)
    p.add_argument("--output")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("inset", help="minimum uncertainty entropy vs dimension")
    _add_common(p)
    p.add_argument("--max-dim", type=int, default=50)
    p.add_argument("--output")
    p.set_defaults(func=cmd_inset)

    p = sub.add_parser("check", help="inequality suites and conjecture scans")
    _add_common(p)
    p.add_argument("ids", nargs="*",
                   help="subset of {ei1, ei2, ei3, ei3a, measurement_monotonicity} "
                        "(default: all)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dims", default="2x2,2x3,3x3",
                   help="comma-separated NxM subsystem dimensions")
    p.add_argument("--dim", type=int, default=3,
                   help="dimension for the measurement scan")
    p.add_argument("--output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("random-state", help="sample a Hilbert-Schmidt random state")
    _add_common(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_random_state)

    p = sub.add_parser("perturb", help="spread degenerate spectrum clusters")
    _add_state_args(p)
    _add_common(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_perturb)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateSpectrumError as exc:
        print(f"degenerate spectrum: {exc}\n"
              f"hint: rerun with --perturb EPSILON or use the Monte-Carlo path (mc)",
              file=sys.stderr)
        return EXIT_DEGENERATE
    except QentropyError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
