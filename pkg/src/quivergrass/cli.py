"""Command-line front end.

Subcommands: kernel, shuffle, verify, sl2-lattice, poincare, carell,
ind-rank, zastava-fiber.  Global flags: --fgl, --tau, --seed, --format.
Reports are deterministic for a fixed configuration; wall-clock timing
is only emitted under --timing so golden files stay byte-identical.

Exit codes: 0 all checks passed, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction as Frac
from typing import Dict, List, Optional, Sequence

from . import checks as checksmod
from .checks import CheckResult
from .fgl import select_fgl
from .locality import (
    parse_point_config,
    tau_point,
    verify_m_locality,
    verify_trivialization,
)
from .quiver import (
    DilationTorus,
    QuiverFormatError,
    default_nakajima,
    load_quiver,
    stock_quiver,
)
from .shuffle import weight_space, word_product
from .symalg import PoleError, SymalgError
from .thom import KernelContext, crosscheck
from .fixedpoints import (
    carell_chart,
    gaussian_binomial,
    qpoly_eval,
    qpoly_str,
    quiver_grass_poincare,
    sl2_enumerate,
)
from .zastava import (
    ColoredDivisor,
    DivisorPoint,
    Poset,
    ind_fiber,
    ind_rank,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE_ERROR = 2


def _parse_fraction(text: str) -> Frac:
    return Frac(text.strip())


def _load_context(args) -> KernelContext:
    if args.quiver:
        quiver, weights, torus = load_quiver(args.quiver)
    else:
        quiver = stock_quiver("a1")
        weights, torus = default_nakajima(quiver), DilationTorus.diagonal()
    law = select_fgl(args.fgl)
    return KernelContext(quiver, weights, torus, law)


def _parse_flag(ctx: KernelContext, text: str):
    slots = []
    for chunk in text.split("|"):
        dims = [int(x) for x in chunk.split(",")]
        if len(dims) != len(ctx.quiver.vertices):
            raise QuiverFormatError(
                f"flag slot {chunk!r} must list {len(ctx.quiver.vertices)} dimensions"
            )
        slots.append(dict(zip(ctx.quiver.vertices, dims)))
    return tuple(slots)


def _parse_tau(ctx: KernelContext, text: Optional[str]):
    if text is None:
        return None
    values = [_parse_fraction(v) for v in text.split(",")]
    if len(values) == 1 and ctx.dilation.rank > 1:
        values = values * ctx.dilation.rank
    return tau_point(ctx, values)


def _report(command: str, config_echo: Dict, results: List[CheckResult], args) -> Dict:
    body = {
        "command": command,
        "config_echo": config_echo,
        "results": [
            {
                "name": r.name,
                "status": r.status,
                "value": r.value,
                "expected": r.expected,
                "provenance": r.provenance,
            }
            for r in results
        ],
    }
    if args.timing:
        body["elapsed_ms"] = int((time.time() - args._t0) * 1000)
    return body


def _emit(report: Dict, args) -> int:
    ok = all(r["status"] == "pass" for r in report["results"])
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for r in report["results"]:
            line = f"[{r['status']}] {r['name']}: {r['value']}"
            if r["expected"]:
                line += f"  (expected: {r['expected']})"
            print(line)
        if "elapsed_ms" in report:
            print(f"elapsed_ms: {report['elapsed_ms']}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _res(name, ok, value, expected="", provenance="") -> CheckResult:
    return CheckResult(name, "pass" if ok else "fail", str(value), str(expected), provenance)


# -- subcommand handlers -------------------------------------------------------


def cmd_kernel(args) -> int:
    ctx = _load_context(args)
    results: List[CheckResult] = []
    echo = {"quiver": args.quiver or "a1", "fgl": args.fgl, "flag": args.flag}
    from .quiver import validate_dilation

    dil = validate_dilation(ctx.quiver, ctx.weights, ctx.dilation)
    results.append(
        _res(
            "quiver.dilation_consistency",
            dil.all_ok,
            "; ".join(f"{aid}:{'ok' if ok else 'violated'}" for aid, ok, _, _ in dil.entries)
            or "no arrows",
            "weight pairs restrict to the symplectic character",
            "integer-linear check on the subtorus basis",
        )
    )
    if ctx.quiver.loops:
        results.append(
            _res(
                "quiver.loops",
                True,
                ",".join(a.aid for a in ctx.quiver.loops),
                "",
                "loop arrows produce weight-zero classical factors",
            )
        )
    if args.classical:
        dims = [int(x) for x in args.flag.split("|")[0].split(",")]
        v = dict(zip(ctx.quiver.vertices, dims))
        rep = ctx.classical_divisor(v)
        for pair, (got, want) in sorted(rep.incidence_match.items()):
            results.append(
                _res(
                    f"classical.multiplicity.{pair[0]}-{pair[1]}",
                    got == want,
                    got,
                    want,
                    "plain representation-space kernel",
                )
            )
        results.append(
            _res(
                "classical.kernel",
                True,
                repr(rep.kernel.fn) + ("  [degenerate: loop factors]" if rep.degenerate else ""),
                "",
                "factored form",
            )
        )
    else:
        flag = _parse_flag(ctx, args.flag)
        kernel = ctx.flag_kernel(flag)
        results.append(_res("kernel", True, repr(kernel.fn), "", "factored form"))
        cross = crosscheck(ctx, flag)
        results.append(
            _res(
                "kernel.dual_assembly_unit",
                cross.ok,
                repr(cross.unit),
                "a unit, constant per component",
                "independent one-pass assembly",
            )
        )
    return _emit(_report("kernel", echo, results, args), args)


def cmd_shuffle(args) -> int:
    ctx = _load_context(args)
    results: List[CheckResult] = []
    echo = {"quiver": args.quiver or "a1", "fgl": args.fgl}
    if args.word:
        word = tuple(w.strip() for w in args.word.split(","))
        echo["word"] = ",".join(word)
        elt = word_product(ctx, word)
        fn = elt.fn
        tau = _parse_tau(ctx, args.tau)
        if tau is not None:
            fn = fn.substitute(tau)
        shown = str(fn.scalar_value()) if fn.is_scalar() else repr(fn)
        results.append(
            _res("shuffle.product", True, shown, "", "symmetrized kernel product")
        )
        results.append(
            _res("shuffle.polynomial", elt.polynomial, elt.polynomial, True,
                 "denominator cancellation")
        )
    elif args.dim:
        dims = [int(x) for x in args.dim.split(",")]
        alpha = dict(zip(ctx.quiver.vertices, dims))
        echo["dim"] = args.dim
        echo["degree"] = args.degree
        basis = weight_space(ctx, alpha, args.degree, seed=args.seed)
        results.append(
            _res(
                "shuffle.weight_space_dim",
                True,
                basis.dimension,
                "",
                "exact row reduction at two random dilation points",
            )
        )
    else:
        raise QuiverFormatError("shuffle needs --word or --dim")
    return _emit(_report("shuffle", echo, results, args), args)


def cmd_verify(args) -> int:
    if args.suite == "crosscheck" and args.quiver:
        results = _crosscheck_single_quiver(args)
    else:
        results = checksmod.suite(args.suite, seed=args.seed)
    echo = {"suite": args.suite, "seed": args.seed}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        ctx = _load_context(args)
        d1, d2, tau_values = parse_point_config(data)
        tau = tau_point(ctx, tau_values)
        rep = verify_trivialization(ctx, d1, d2, tau)
        results.append(
            _res(
                "locality.config",
                rep.ok,
                rep.describe(),
                "finite nonzero when disjoint; named factor otherwise",
                "two-sided pair kernel evaluation",
            )
        )
        echo["config"] = args.config
    return _emit(_report("verify", echo, results, args), args)


def _crosscheck_single_quiver(args) -> List[CheckResult]:
    """Per-flag-type unit listing for one quiver file."""
    ctx = _load_context(args)
    results: List[CheckResult] = []
    for flag in checksmod.enumerate_flags(ctx.quiver, 4):
        rep = crosscheck(ctx, flag)
        label = "|".join(
            ",".join(str(v.get(name, 0)) for name in ctx.quiver.vertices) for v in flag
        )
        results.append(
            _res(
                f"crosscheck.flag[{label}]",
                rep.ok,
                repr(rep.unit),
                "a unit",
                "dual assembly of the correspondence kernel",
            )
        )
    return results


def cmd_sl2(args) -> int:
    rep = sl2_enumerate(args.p, args.e, args.n, args.window, m=args.m)
    results = [
        _res(
            "sl2.count",
            rep.s0_count == rep.s0_expected,
            rep.s0_count,
            rep.s0_expected,
            "exhaustive enumeration vs monic nilpotent-coefficient polynomials",
        ),
        _res(
            "sl2.routes",
            rep.routes_agree,
            "lattice route agrees with polynomial route",
            "agreement on every candidate",
            "windowed division vs degree/divisibility",
        ),
    ]
    if args.m is not None:
        results.append(
            _res("sl2.sminus_count", True, rep.sminus_count, "", "divisibility enumeration")
        )
    table = [
        "".join(str(c) for c in sum(cand.monic_poly, ()))
        for cand in rep.candidates
        if cand.monic_poly is not None
    ]
    results.append(_res("sl2.bijection_table", True, ";".join(sorted(table)), "", "coefficient strings"))
    echo = {"p": args.p, "e": args.e, "n": args.n, "window": args.window, "m": args.m}
    return _emit(_report("sl2-lattice", echo, results, args), args)


def cmd_poincare(args) -> int:
    dims = [int(x) for x in args.alpha.split(",")]
    alpha = {str(i + 1): d for i, d in enumerate(dims)}
    poly = quiver_grass_poincare(alpha)
    total = qpoly_eval(poly, 1)
    expected = 1
    for d in dims:
        expected *= 2 ** d
    results = [
        _res("poincare.series", True, qpoly_str(poly), "", "product of q-binomial sums"),
        _res("poincare.total", total == expected, total, expected, "value at q = 1"),
    ]
    return _emit(_report("poincare", {"alpha": args.alpha}, results, args), args)


def cmd_carell(args) -> int:
    from math import comb

    chart = carell_chart(args.n, args.k)
    gauss = gaussian_binomial(args.n, args.k)
    results = [
        _res(
            "carell.dim",
            chart.dimension == comb(args.n, args.k),
            chart.dimension,
            comb(args.n, args.k),
            "standard monomials of the fixed-scheme chart ideal",
        ),
        _res(
            "carell.weight_series",
            chart.weight_series() == gauss,
            qpoly_str(chart.weight_series()),
            qpoly_str(gauss),
            "rotation weights of the standard monomials",
        ),
    ]
    return _emit(_report("carell", {"n": args.n, "k": args.k}, results, args), args)


def cmd_ind_rank(args) -> int:
    poset = Poset.parse(args.poset)
    divisor = ColoredDivisor.parse(args.divisor)
    rank = ind_rank(poset, divisor)
    results = [
        _res("ind_rank", True, rank, "", "count of monotone subdivisor systems")
    ]
    echo = {"poset": args.poset, "divisor": args.divisor}
    return _emit(_report("ind-rank", echo, results, args), args)


def cmd_zastava_fiber(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    ctx = _load_context(args)
    tau_values = [_parse_fraction(str(v)) for v in data.get("tau", [])]
    if args.tau is not None:
        tau_values = [_parse_fraction(v) for v in args.tau.split(",")]
    tau = tau_point(ctx, tau_values)
    poset = Poset.parse(str(data.get("poset", "chain:1")))
    points = [
        DivisorPoint(str(p["id"]), str(p["color"]), int(p.get("multiplicity", 1)))
        for p in data["points"]
    ]
    coords = {str(p["id"]): _parse_fraction(str(p["coord"])) for p in data["points"]}
    divisor = ColoredDivisor(points, coords)
    fiber = ind_fiber(ctx, poset, divisor, tau)
    results = [
        _res("zastava.rank", True, fiber.rank, "", "monotone system count"),
    ]
    for system, value in zip(fiber.maps, fiber.values):
        label = ";".join(
            f"{e}:{'+'.join(pid for pid, k in sub if k) or 'empty'}"
            for e, sub in sorted(system.items())
        )
        results.append(_res(f"zastava.value[{label}]", True, value, "", "pair-kernel product"))
    echo = {"config": args.config, "poset": str(data.get("poset", "chain:1"))}
    return _emit(_report("zastava-fiber", echo, results, args), args)


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # Global flags may appear before or after the subcommand; SUPPRESS keeps
    # the subparser from clobbering a value given at the top level.
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--fgl", help="additive | multiplicative | series:<file>")
    common.add_argument("--tau", help="dilation coordinates, comma separated")
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=("text", "json"))
    common.add_argument("--timing", action="store_true",
                        help="include elapsed_ms in the report (non-deterministic)")

    parser = argparse.ArgumentParser(
        prog="quivergrass",
        parents=[common],
        description="Exact kernels, shuffle products, and fixed-point counts for quiver charts.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("kernel", parents=[common], help="kernel of a flag type")
    p.add_argument("--quiver", required=True)
    p.add_argument("--flag", required=True, help='slot dims, e.g. "1,0|0,1"')
    p.add_argument("--classical", action="store_true")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("shuffle", parents=[common],
                       help="generator products and weight spaces")
    p.add_argument("--quiver", default=None)
    p.add_argument("--word", default=None, help='vertices, e.g. "1,2,1"')
    p.add_argument("--dim", default=None, help='weight, e.g. "2" or "1,1"')
    p.add_argument("--degree", type=int, default=0)
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("verify", parents=[common], help="run a bundled verification suite")
    p.add_argument("suite", nargs="?", default=None)
    p.add_argument("--suite", dest="suite_flag", default=None,
                   help="fgl|biextension|crosscheck|locality|ideal|assoc|classical|all")
    p.add_argument("--quiver", default=None)
    p.add_argument("--config", default=None, help="point-configuration JSON for locality")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sl2-lattice", parents=[common],
                       help="lattice-model enumeration over a truncated ring")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_sl2)

    p = sub.add_parser("poincare", parents=[common],
                       help="graded count for a zero representation")
    p.add_argument("--alpha", required=True)
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("carell", parents=[common], help="fixed-scheme dimension oracle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_carell)

    p = sub.add_parser("ind-rank", parents=[common], help="rank of a poset-induced fiber")
    p.add_argument("--poset", required=True, help="chain:m | antichain:k | file.json")
    p.add_argument("--divisor", required=True, help='e.g. "a:i:2,b:j:1"')
    p.set_defaults(func=cmd_ind_rank)

    p = sub.add_parser("zastava-fiber", parents=[common],
                       help="fiber data at a point configuration")
    p.add_argument("--quiver", default=None)
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_zastava_fiber)

    return parser


_GLOBAL_DEFAULTS = {
    "fgl": "additive",
    "tau": None,
    "seed": 0,
    "format": "text",
    "timing": False,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, default in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, default)
    args._t0 = time.time()
    if args.cmd == "verify":
        args.suite = args.suite_flag or args.suite or "all"
    try:
        return args.func(args)
    except (QuiverFormatError, SymalgError, PoleError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
