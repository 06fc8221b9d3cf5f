"""Command-line interface: eval, verify, fuzz, and plot.

Exit codes: 0 success (no falsification), 1 at least one identity
falsified, 2 usage or schema error, 3 instance generation error.
Report streams are JSONL, one object per line, and are byte-identical
across reruns of the same invocation.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .errors import (
    EmptySetError,
    GenerationError,
    InvalidParameterError,
    SchemaError,
    SupcalcError,
)
from .generator import DOMAIN_KINDS, GeneratorParams, generate
from .identities import CATALOG, check_identity, identity_ids
from .polyhedron import Polyhedron, interior_point
from .rationals import Vec, parse_rational
from .reports import CheckReport, CheckStatus
from .serialize import Instance, loads_instance, report_to_json
from .plotting import plot_function, plot_subdiff

MAX_FUZZ_COUNT = 1000


def _parse_point(text: str) -> Vec:
    return tuple(parse_rational(part.strip()) for part in text.split(","))


def _parse_grid(text: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(part.strip()) for part in text.split(","))


def _load_instance(path: str) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read instance file: {exc}") from exc
    return loads_instance(text)


def _identity_list(spec: str) -> tuple[str, ...]:
    if spec.strip().upper() == "ALL":
        return identity_ids()
    ids = tuple(part.strip() for part in spec.split(",") if part.strip())
    for ident in ids:
        if ident not in CATALOG:
            raise InvalidParameterError(
                f"unknown identity {ident!r}; valid ids: {', '.join(identity_ids())}"
            )
    if not ids:
        raise InvalidParameterError("no identity given")
    return ids


def _payload(ident: str, instance: Instance) -> Any:
    """Instance data for one identity, with derived fallbacks."""
    kind = CATALOG[ident].kind
    family = instance.family
    if kind == "family":
        return family
    if kind == "sets":
        if instance.sets:
            return [p for _, p in instance.sets]
        return [f.domain for _, f in family.members]
    if instance.robust_b is not None:
        return (family, instance.robust_b)
    dom = family.sup.domain
    center = interior_point(dom)
    if center is None:
        if dom.is_empty:
            raise InvalidParameterError(
                "cannot derive a robust constraint set: empty domain"
            )
        center = dom.vertices[0]
    box = Polyhedron.box(
        tuple(c - 1 for c in center), tuple(c + 1 for c in center)
    )
    return (family, box)


def _check_params(args: argparse.Namespace) -> dict[str, Any]:
    params: dict[str, Any] = {}
    if getattr(args, "point", None):
        params["x"] = _parse_point(args.point)
    if getattr(args, "eps", None):
        params["eps"] = parse_rational(args.eps)
    if getattr(args, "gamma_grid", None):
        params["gamma_grid"] = _parse_grid(args.gamma_grid)
    return params


def _emit_reports(lines: list[str], out: str | None) -> None:
    for line in lines:
        print(line)
    if out:
        Path(out).write_text("".join(line + "\n" for line in lines),
                             encoding="utf-8")


def _report_line(report: CheckReport, extra: dict[str, Any] | None = None) -> str:
    record = report_to_json(report)
    if extra:
        record = {**extra, **record}
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------

def cmd_eval(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    family = instance.family
    x = _parse_point(args.point)
    if len(x) != family.dim:
        raise InvalidParameterError(
            f"point has {len(x)} coordinates, instance dimension is {family.dim}"
        )
    eps = parse_rational(args.eps) if args.eps else Fraction(0)
    f = family.sup
    fx = f.eval(x)
    print(f"f({args.point}) = {_fmt_value(fx)}")
    if fx.is_finite:
        active = [
            t for t, f_t in family.members
            if f_t.eval(x).is_finite
            and f_t.eval(x).finite_value() >= fx.finite_value() - eps
        ]
    else:
        active = []
    print(f"active[eps={eps}] = {','.join(active) if active else '(none)'}")
    fstar = f.conjugate()
    samples = list(fstar.domain.vertices[:4])
    c = interior_point(fstar.domain)
    if c is not None and c not in samples:
        samples.append(c)
    for p in samples:
        label = ",".join(str(v) for v in p)
        print(f"f*({label}) = {_fmt_value(f.conjugate_eval(p))}")
    return 0


def _fmt_value(v) -> str:
    if v.is_finite:
        return str(v.finite_value())
    return "+inf" if v > type(v).finite(0) else "-inf"


def cmd_verify(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    idents = _identity_list(args.identity)
    params = _check_params(args)
    lines: list[str] = []
    failed = False
    for ident in idents:
        report = check_identity(ident, _payload(ident, instance), params)
        failed = failed or report.status is CheckStatus.FAIL
        lines.append(_report_line(report))
    _emit_reports(lines, args.out)
    return 1 if failed else 0


def _fuzz_params(base_seed: int, index: int, dim_max: int) -> GeneratorParams:
    s = base_seed + index
    return GeneratorParams(
        dim=1 + s % dim_max,
        member_count=2 + s % 3,
        pieces_per_member=1 + (s // 3) % 3,
        domain_kind=DOMAIN_KINDS[s % len(DOMAIN_KINDS)],
        seed=s,
    )


def cmd_fuzz(args: argparse.Namespace) -> int:
    if args.count > MAX_FUZZ_COUNT:
        raise InvalidParameterError(
            f"count {args.count} exceeds the cap {MAX_FUZZ_COUNT}"
        )
    dim_max = args.dim_max
    if not 1 <= dim_max <= 4:
        raise InvalidParameterError("dim-max must be between 1 and 4")
    idents = _identity_list(args.identity)
    params = _check_params(args)
    lines: list[str] = []
    tally: dict[str, dict[str, int]] = {
        ident: {s.value: 0 for s in CheckStatus} for ident in idents
    }
    failed = False
    for i in range(args.count):
        gen = _fuzz_params(args.seed, i, dim_max)
        family = generate(gen)
        instance = Instance(family)
        for ident in idents:
            report = check_identity(ident, _payload(ident, instance), params)
            tally[ident][report.status.value] += 1
            failed = failed or report.status is CheckStatus.FAIL
            lines.append(_report_line(report, {"seed": gen.seed}))
    _emit_reports(lines, args.out)
    head = f"{'identity':<10}{'pass':>6}{'fail':>6}{'hnm':>6}{'trivial':>8}"
    print(head, file=sys.stderr)
    for ident in idents:
        t = tally[ident]
        print(
            f"{ident:<10}{t['pass']:>6}{t['fail']:>6}"
            f"{t['hypotheses-not-met']:>6}{t['trivial-pass']:>8}",
            file=sys.stderr,
        )
    return 1 if failed else 0


def cmd_plot(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    family = instance.family
    if family.dim > 2:
        raise InvalidParameterError("plots cover dimensions 1 and 2 only")
    f = family.sup
    if args.what == "function":
        svg = plot_function(f)
    elif args.what == "conjugate":
        svg = plot_function(f, conjugate=True)
    else:
        x = _parse_point(args.point) if args.point else (Fraction(0),) * family.dim
        eps = parse_rational(args.eps) if args.eps else Fraction(0)
        svg = plot_subdiff(f, x, eps)
    Path(args.out).write_text(svg, encoding="utf-8")
    return 0


# ---------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supcalc",
        description="Exact convex-analysis checks for polyhedral sup families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate f, active labels, and f*")
    p_eval.add_argument("--instance", required=True)
    p_eval.add_argument("--point", required=True)
    p_eval.add_argument("--eps")
    p_eval.set_defaults(func=cmd_eval)

    p_verify = sub.add_parser("verify", help="run identity checks on an instance")
    p_verify.add_argument("--instance", required=True)
    p_verify.add_argument("--identity", required=True,
                          help="comma-separated ids or ALL")
    p_verify.add_argument("--point")
    p_verify.add_argument("--eps")
    p_verify.add_argument("--gamma-grid", dest="gamma_grid")
    p_verify.add_argument("--out")
    p_verify.set_defaults(func=cmd_verify)

    p_fuzz = sub.add_parser("fuzz", help="generate seeded instances and check")
    p_fuzz.add_argument("--seed", type=int, default=0)
    p_fuzz.add_argument("--count", type=int, default=20)
    p_fuzz.add_argument("--identity", default="ALL")
    p_fuzz.add_argument("--dim-max", dest="dim_max", type=int, default=2)
    p_fuzz.add_argument("--eps")
    p_fuzz.add_argument("--gamma-grid", dest="gamma_grid")
    p_fuzz.add_argument("--out")
    p_fuzz.set_defaults(func=cmd_fuzz)

    p_plot = sub.add_parser("plot", help="render an SVG of a 1-D or 2-D instance")
    p_plot.add_argument("what", choices=("function", "conjugate", "subdiff"))
    p_plot.add_argument("--instance", required=True)
    p_plot.add_argument("--out", required=True)
    p_plot.add_argument("--point")
    p_plot.add_argument("--eps")
    p_plot.set_defaults(func=cmd_plot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GenerationError as exc:
        print(json.dumps({"error": str(exc), "kind": "generation"}),
              file=sys.stderr)
        return 3
    except (SchemaError, InvalidParameterError, EmptySetError) as exc:
        print(json.dumps({"error": str(exc), "kind": "usage"}), file=sys.stderr)
        return 2
    except SupcalcError as exc:
        print(json.dumps({"error": str(exc), "kind": "engine"}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
