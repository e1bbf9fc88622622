"""Command-line interface.

Exit codes: 0 success, 1 invalid fan, 2 usage error, 3 the fan does not meet
a command's hypothesis (for example ``brauer`` on a singular fan).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, fixtures
from .bound import exhaustive_bound, kappa0_upper_bound
from .brauer import BrauerError, FieldDescriptor, NotSmoothError, brauer_nu, brauer_real, h1_mu, invariant_factors
from .cech import invariant_report, kappa, build_cech
from .fan import Fan, FanError
from .io import emit_report, fan_json, parse_fan_file
from .strata import NeighborhoodSpec, genericity_report, sample_strata

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_HYPOTHESIS = 3


class UsageError(Exception):
    pass


def _radius(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"radius must be a rational P/Q, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("radius must be nonnegative")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def load_fan(source: str, normalize: bool = False) -> Fan:
    """Read a fan from a path, or from a built-in fixture name if no such file exists."""
    path = Path(source)
    if path.is_file():
        return parse_fan_file(path.read_bytes(), normalize=normalize)
    try:
        return fixtures.load(source)
    except KeyError:
        raise UsageError(f"no such file or fixture: {source}") from None


def _field(spec: str, nu: int) -> FieldDescriptor:
    if spec.startswith("custom="):
        path = Path(spec[len("custom="):])
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise UsageError(f"cannot read field descriptor: {exc}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"field descriptor is not JSON: {exc.msg}") from None
        if not isinstance(data, dict):
            raise UsageError("field descriptor must be a JSON object")
        try:
            return FieldDescriptor.from_json(data)
        except (BrauerError, ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None
    try:
        return FieldDescriptor.preset(spec, nu)
    except BrauerError as exc:
        raise UsageError(str(exc)) from None


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def cmd_validate(args, out) -> int:
    f = load_fan(args.file, args.normalize)
    out.write(f"valid: r={f.ambient_rank} rays={f.n_rays} maximal_cones={len(f.maximal_cones)}\n")
    return EXIT_OK


def cmd_invariants(args, out) -> int:
    f = load_fan(args.file, args.normalize)
    out.write(emit_report(invariant_report(f), "json" if args.json else "human", fan=f).decode())
    return EXIT_OK


def cmd_brauer(args, out) -> int:
    if args.nu < 2:
        raise UsageError("nu must be at least 2")
    f = load_fan(args.file, args.normalize)
    k = _field(args.field, args.nu)
    try:
        a = invariant_factors(f).a
        h1 = h1_mu(f, args.nu, k)
        br = brauer_nu(f, args.nu, k)
        real = brauer_real(f) if k.kind == "real" and args.nu == 2 else None
    except BrauerError as exc:
        if isinstance(exc, NotSmoothError):
            raise
        raise UsageError(str(exc)) from None
    if args.json:
        data = {"invariant_factors": list(a), "nu": args.nu, "h1": h1.to_json(), "brauer_nu": br.to_json()}
        if real is not None:
            data["brauer_real"] = real.to_json()
        out.write(_dump(data))
        return EXIT_OK
    rows = [("invariant factors", tuple(a)), (f"H^1(X, Z/{args.nu})", h1), (f"{args.nu}-torsion Br(X)", br)]
    if real is not None:
        rows.append(("Br(X) over R", real))
    width = max(len(label) for label, _ in rows)
    for label, value in rows:
        out.write(f"{label.ljust(width)}  {value}\n")
    return EXIT_OK


def cmd_bound(args, out) -> int:
    f = load_fan(args.file, args.normalize)
    trace = exhaustive_bound(f) if args.exhaustive else kappa0_upper_bound(f)
    k = kappa(build_cech(f))
    k0 = k[0] if k else 0
    if args.json:
        out.write(_dump({
            "bound": trace.bound,
            "kappa0": k0,
            "g": list(trace.g_set),
            "r": list(trace.r_set),
            "start": trace.start,
            "steps": [[s.label, s.cone, list(s.to_g), list(s.to_r)] for s in trace.steps],
        }))
        return EXIT_OK
    out.write(f"bound   {trace.bound}\n")
    out.write(f"kappa0  {k0}\n")
    out.write(f"G       {list(trace.g_set)}\n")
    out.write(f"R       {list(trace.r_set)}\n")
    for s in trace.steps:
        out.write(f"  step {s.label} cone {s.cone}: G += {list(s.to_g)}, R += {list(s.to_r)}\n")
    return EXIT_OK


def cmd_strata(args, out) -> int:
    f = load_fan(args.file, args.normalize)
    spec = NeighborhoodSpec(args.den, args.radius)
    if args.generic_check:
        rep = genericity_report(f, spec, args.samples, args.seed, args.workers)
        if args.json:
            out.write(_dump(rep.to_json()))
        elif not rep.applicable:
            out.write("applicable  no\n")
        else:
            frac = rep.fraction_kappa0_eq_3
            out.write("applicable  yes\n")
            out.write(f"kappa0 = 3  {'n/a' if frac is None else f'{frac.numerator}/{frac.denominator}'}\n")
            for k0, count in rep.histogram.items():
                out.write(f"  kappa0 {k0}: {count}\n")
        return EXIT_OK
    sample = sample_strata(f, spec, args.samples, args.seed, args.workers)
    if args.json:
        out.write(_dump(sample.to_json()))
        return EXIT_OK
    out.write(f"requested  {sample.samples_requested}\n")
    out.write(f"accepted   {sample.samples_accepted}\n")
    out.write(f"rejected   {sample.rejected_combinatorics}\n")
    for k0, count in sample.histogram.items():
        out.write(f"  kappa0 {k0}: {count}  witness {list(map(list, sample.witnesses[k0]))}\n")
    for reason, count in sample.rejection_reasons.items():
        out.write(f"  rejected ({reason}): {count}\n")
    return EXIT_OK


def cmd_fixtures(args, out) -> int:
    if args.action == "list":
        for name in fixtures.names():
            out.write(name + "\n")
        return EXIT_OK
    if not args.name:
        raise UsageError("fixtures emit needs a name")
    try:
        f = fixtures.load(args.name)
    except KeyError:
        raise UsageError(f"unknown fixture {args.name!r}") from None
    out.write(fan_json(f).decode())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fanlab", description="Exact invariants of rational fans.")
    p.add_argument("--version", action="version", version=f"fanlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def fan_command(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", help="fan JSON file or built-in fixture name")
        sp.add_argument("--normalize", action="store_true", help="divide non-primitive rays by their content")
        return sp

    fan_command("validate", "check that a file describes a fan").set_defaults(func=cmd_validate)

    sp = fan_command("invariants", "cohomological invariants of the fan")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_invariants)

    sp = fan_command("brauer", "torsion H^1 and Brauer groups of a smooth fan")
    sp.add_argument("--nu", type=int, required=True)
    sp.add_argument("--field", default="acl", help="acl, real or custom=<descriptor.json>")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_brauer)

    sp = fan_command("bound", "greedy upper bound for kappa0")
    sp.add_argument("--exhaustive", action="store_true", help="minimum over all starting cones")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_bound)

    sp = fan_command("strata", "sample nearby fans and histogram kappa0")
    sp.add_argument("--samples", type=_positive, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--den", type=_positive, default=100, help="denominator bound D")
    sp.add_argument("--radius", type=_radius, default=Fraction(1, 10), help="relative radius P/Q")
    sp.add_argument("--workers", type=_positive, default=None, help="default: FANLAB_THREADS or 1")
    sp.add_argument("--generic-check", action="store_true",
                    help="report the fraction with kappa0 = 3 for complete nonsimplicial fans in rank 3")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_strata)

    sp = sub.add_parser("fixtures", help="list or print built-in fans")
    sp.add_argument("action", choices=["list", "emit"])
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_fixtures)
    return p


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except NotSmoothError as exc:
        err.write(f"{exc}\n")
        return EXIT_HYPOTHESIS
    except FanError as exc:
        for line in exc.errors:
            err.write(f"{line}\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run_cli())
