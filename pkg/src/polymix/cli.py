"""
Command-line interface.

Distributions are given as ``name:p1,p2,...`` for catalog entries or
``raw:d=<d>,beta=<beta>,theta=<t0>;<t1>;...`` for arbitrary coefficients.
Exit codes: 0 success, 1 failed verification (``check``), 2 usage or domain
error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import math
import re
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from polymix.catalog import CATALOG, build_named, list_catalog
from polymix.entropy import tsallis
from polymix.errors import CatalogError, ConvergenceError, DomainError, ParseError
from polymix.family import Family, FamilyParams, make_family
from polymix.oracle import check_family
from polymix.specfun import SeriesControl
from polymix.stress_strength import reliability

__all__ = ["DistSpec", "parse_dist_spec", "parse_grid", "main"]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3

QUANTITIES = ("pdf", "cdf", "survival", "hazard")


@dataclass(frozen=True)
class DistSpec:
    """Either a catalog reference (``name`` and ``params``) or raw ``FamilyParams``."""

    name: str | None = None
    params: tuple[float, ...] = ()
    raw: FamilyParams | None = None

    def __post_init__(self):
        if (self.name is None) == (self.raw is None):
            raise DomainError("DistSpec needs exactly one of a catalog name or raw parameters")

    def build(self) -> Family:
        if self.raw is not None:
            return make_family(self.raw)
        return build_named(self.name, self.params)


def _number(token: str, pos: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"expected a decimal number, got {token!r}", pos) from None
    if not math.isfinite(value):
        raise ParseError(f"expected a finite number, got {token!r}", pos)
    return value


def _split(text: str, sep: str, offset: int):
    pos = offset
    for part in text.split(sep):
        yield part, pos
        pos += len(part) + 1


def parse_dist_spec(text: str) -> DistSpec:
    """Parse ``name:p1,...`` or ``raw:d=..,beta=..,theta=a;b;c``; whitespace is ignored."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ParseError("empty distribution spec", 0)
    name, colon, rest = s.partition(":")
    if not name:
        raise ParseError("missing distribution name", 0)
    if not colon:
        raise ParseError(f"expected ':' after {name!r}", len(name))
    offset = len(name) + 1
    if name == "raw":
        fields: dict[str, tuple[str, int]] = {}
        for item, pos in _split(rest, ",", offset):
            key, eq, value = item.partition("=")
            if not eq:
                raise ParseError(f"expected key=value, got {item!r}", pos)
            if key not in ("d", "beta", "theta"):
                raise ParseError(f"unknown raw field {key!r}", pos)
            if key in fields:
                raise ParseError(f"duplicate raw field {key!r}", pos)
            fields[key] = (value, pos + len(key) + 1)
        for key in ("d", "beta", "theta"):
            if key not in fields:
                raise ParseError(f"raw spec is missing {key}=", len(s))
        theta_text, theta_pos = fields["theta"]
        theta = tuple(_number(t, p) for t, p in _split(theta_text, ";", theta_pos))
        params = FamilyParams(theta, _number(*fields["beta"]), _number(*fields["d"]))
        return DistSpec(raw=params)
    if name not in CATALOG:
        raise CatalogError(f"unknown distribution {name!r}; run 'polymix list'")
    values = tuple(_number(t, p) for t, p in _split(rest, ",", offset)) if rest else ()
    arity = CATALOG[name].arity
    if len(values) != arity:
        raise CatalogError(f"{name} takes {arity} parameter(s), got {len(values)}")
    return DistSpec(name=name, params=values)


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` with ``count >= 2`` and ``0 <= start <= stop``."""
    s = re.sub(r"\s+", "", text)
    parts = s.split(":")
    if len(parts) != 3:
        raise ParseError("grid must look like start:stop:count", 0)
    (a, pa), (b, pb), (n, pn) = list(_split(s, ":", 0))
    start, stop = _number(a, pa), _number(b, pb)
    try:
        count = int(n)
    except ValueError:
        raise ParseError(f"grid count must be an integer, got {n!r}", pn) from None
    if count < 2:
        raise DomainError(f"grid count must be >= 2, got {count}")
    if start < 0 or stop < start:
        raise DomainError("grid needs 0 <= start <= stop")
    return np.linspace(start, stop, count)


def _g(v: float) -> str:
    return format(float(v), ".17g")


def _writer(out: TextIO):
    return csv.writer(out, lineterminator="\n")


def cmd_eval(f: Family, xs: np.ndarray, quantities: Sequence[str], out: TextIO) -> int:
    w = _writer(out)
    w.writerow(["x", *quantities])
    cols = [np.atleast_1d(getattr(f, q)(xs)) for q in quantities]
    for k, x in enumerate(xs):
        w.writerow([_g(x), *(_g(col[k]) for col in cols)])
    return EXIT_OK


def cmd_moments(f: Family, max_r: int, out: TextIO) -> int:
    w = _writer(out)
    w.writerow(["quantity", "value"])
    for r in range(1, max_r + 1):
        w.writerow([f"moment_{r}", _g(f.raw_moment(r))])
    for name, value in f.summary_stats()._asdict().items():
        w.writerow([name, _g(value)])
    return EXIT_OK


def cmd_mp(f: Family, out: TextIO) -> int:
    view = f.mixture_view()
    for comp, weight in zip(view.components, view.weights):
        out.write(f"{comp.index}: {comp.describe()} weight {weight!r}\n")
    return EXIT_OK


def cmd_sample(f: Family, n: int, seed: int, out: TextIO) -> int:
    out.write("".join(_g(v) + "\n" for v in f.sample(n, seed)))
    return EXIT_OK


def cmd_stress(strength: Family, stress: Family, method: str, tol: float, ctl: SeriesControl,
               out: TextIO, err: TextIO) -> int:
    res = reliability(strength, stress, method=method, tol=tol, ctl=ctl)
    w = _writer(out)
    w.writerow(["quantity", "value"])
    if method != "quadrature":
        w.writerow(["r_series", _g(res.r_series) if res.r_series is not None else "diverged"])
        w.writerow(["terms_used", res.terms_used])
    if method != "series":
        w.writerow(["r_quadrature", _g(res.r_quadrature)])
    if method == "both":
        if res.discrepancy is None:
            err.write(f"warning: series unavailable: {res.series_error}\n")
        else:
            w.writerow(["discrepancy", _g(res.discrepancy)])
            if res.discrepancy > 1e-6:
                err.write(f"warning: series and quadrature differ by {res.discrepancy:.3g}\n")
    return EXIT_OK


def cmd_entropy(f: Family, alpha: float, method: str, tol: float, out: TextIO) -> int:
    value, used = tsallis(f, alpha, mode=method, tol=tol)
    w = _writer(out)
    w.writerow(["alpha", "method", "tsallis_entropy"])
    w.writerow([_g(alpha), used, _g(value)])
    return EXIT_OK


def cmd_check(f: Family, out: TextIO) -> int:
    reports = check_family(f)
    w = _writer(out)
    w.writerow(["quantity", "closed_form", "oracle", "abs_diff", "tolerance", "passed"])
    for r in reports:
        w.writerow([r.quantity, _g(r.closed_form), _g(r.oracle_value), _g(r.abs_diff), _g(r.tolerance),
                    "yes" if r.passed else "no"])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def cmd_list(out: TextIO) -> int:
    w = _writer(out)
    w.writerow(["name", "arity", "parameters", "reference"])
    for name, arity, ref in list_catalog():
        w.writerow([name, arity, ";".join(CATALOG[name].param_names), ref])
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polymix", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_dist(p, count=1):
        p.add_argument("--dist", action="append", required=True, metavar="SPEC",
                       help="name:p1,p2,... or raw:d=..,beta=..,theta=t0;t1;..." +
                       (" (give twice: strength, then stress)" if count == 2 else ""))
        return p

    p = with_dist(sub.add_parser("eval", help="evaluate pdf/cdf/survival/hazard on a grid (CSV)"))
    p.add_argument("--grid", required=True, metavar="START:STOP:COUNT")
    p.add_argument("--quantities", default=",".join(QUANTITIES))

    p = with_dist(sub.add_parser("moments", help="raw moments and summary statistics"))
    p.add_argument("--max-r", type=int, default=4)

    with_dist(sub.add_parser("mp", help="mixing proportions and components"))

    p = with_dist(sub.add_parser("sample", help="draw samples, one per line"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = with_dist(sub.add_parser("stress", help="stress-strength reliability P(stress < strength)"), 2)
    p.add_argument("--method", choices=("series", "quadrature", "both"), default="both")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-terms", type=int, default=10_000)

    p = with_dist(sub.add_parser("entropy", help="Tsallis entropy"))
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--method", choices=("auto", "integer", "quadrature"), default="auto")
    p.add_argument("--tol", type=float, default=1e-10)

    with_dist(sub.add_parser("check", help="verify closed forms against quadrature"))
    sub.add_parser("list", help="list catalog entries")
    return parser


def _run(args, out: TextIO, err: TextIO) -> int:
    if args.command == "list":
        return cmd_list(out)
    specs = [parse_dist_spec(s) for s in args.dist]
    wanted = 2 if args.command == "stress" else 1
    if len(specs) != wanted:
        raise DomainError(f"{args.command} needs exactly {wanted} --dist argument(s), got {len(specs)}")
    fams = [s.build() for s in specs]
    f = fams[0]
    if args.command == "eval":
        quantities = [q for q in re.sub(r"\s+", "", args.quantities).split(",") if q]
        bad = [q for q in quantities if q not in QUANTITIES]
        if bad or not quantities:
            raise DomainError(f"quantities must be drawn from {', '.join(QUANTITIES)}")
        return cmd_eval(f, parse_grid(args.grid), quantities, out)
    if args.command == "moments":
        if args.max_r < 1:
            raise DomainError("--max-r must be >= 1")
        return cmd_moments(f, args.max_r, out)
    if args.command == "mp":
        return cmd_mp(f, out)
    if args.command == "sample":
        return cmd_sample(f, args.n, args.seed, out)
    if args.command == "stress":
        ctl = SeriesControl(max_terms=args.max_terms)
        return cmd_stress(fams[0], fams[1], args.method, args.tol, ctl, out, err)
    if args.command == "entropy":
        return cmd_entropy(f, args.alpha, args.method, args.tol, out)
    if args.command == "check":
        return cmd_check(f, out)
    raise DomainError(f"unknown command {args.command!r}")  # pragma: no cover


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = _build_parser().parse_args(argv)
    try:
        return _run(args, out, err)
    except DomainError as exc:
        err.write(f"polymix: error: {exc}\n")
        return EXIT_USAGE
    except ConvergenceError as exc:
        err.write(f"polymix: numerical failure: {exc}\n")
        return EXIT_NONCONVERGENCE
