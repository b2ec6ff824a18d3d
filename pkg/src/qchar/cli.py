"""Command-line harness.

Four subcommands: `series` renders one named or free-form series, `verify`
runs an identity family over a parameter grid, `oracle` cross-checks the
closed-form characters against brute-force state enumeration, and `asympt`
tabulates coefficient growth against the analytic estimate.

Orders are given in q-units on the command line and doubled internally
(everything lives on the u = q^(1/2) lattice).  Exit codes are a stable
contract: 0 all checks passed, 1 an identity failed, 2 usage or parse
error, 3 resource limit hit.

Reports are emitted in sorted parameter order no matter how they were
scheduled, and timings are zeroed unless --timings is given, so identical
invocations produce byte-identical output.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .bivariate import (
    ChargeSeries,
    compare_charge_series,
    fock_char_product,
    inverse_product_sides,
    jacobi_triple_sides,
)
from .characters import (
    IdentityReport,
    basic_char,
    compare_series,
    family_char,
    fock_sector_char,
    growth_report,
    quasiparticle_char,
    recurrence_step,
    sector_closed_form,
    sector_pair_product,
    vacuum_identity_sides,
)
from .errors import ExprError, QcharError, ResourceLimit
from .expr import evaluate
from .oracle import oracle_vs_quasiparticle
from .qseries import QSeries, dist_product, euler_phi, format_series, gauss_sum

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


# -- grids -------------------------------------------------------------------


def parse_range(text: str):
    """Inclusive "a..b" or a single integer."""
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
        if lo > hi:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


# -- identity families -------------------------------------------------------
#
# Each family maps to a list of case tuples (family, m, s, k) with unused
# slots None; _run_case turns one case into one or more reports.  Cases are
# generated in sorted order and the worker pool preserves it.

FAMILY_GRIDS = {
    # family: (m-range, s-range, k-range, default z half-width)
    "lemma11a": ((2, 6), (0, 6), None, None),
    "lemma11b": ((2, 6), (0, 6), None, None),
    "prop12": ((2, 4), None, (0, 4), None),
    "recurrence": ((2, 4), None, (0, 4), None),
    "thm13a": ((2, 6), None, None, None),
    "thm13b": ((2, 4), None, (-3, 3), None),
    "prop21": ((2, 4), (-3, 4), None, None),
    "fockprod": ((2, 3), None, None, 4),
    "cor22": ((2, 6), None, None, None),
    "jtp": (None, None, None, 10),
    "kp": (None, None, None, 8),
    "gauss": (None, None, None, None),
}


def _mirror_pair_sum(m: int, s: int, nu: int) -> QSeries:
    # u^{sm} fs(m,s) + u^{-sm} fs(m,-s), both terms claiming order nu
    a = fock_sector_char(m, s, nu - s * m).shifted(s * m)
    b = fock_sector_char(m, -s, nu + s * m).shifted(-s * m)
    return a + b


def _family_vs_sector(m: int, k: int, nu: int) -> IdentityReport:
    # one sign case per sign of k; both coincide at k = 0
    sh = k * m * (m - 1)
    if k >= 0:
        side = fock_sector_char(m, -k * (m - 1), nu + sh) * euler_phi(m, nu + sh)
        rhs = side.shifted(-sh)
    else:
        side = fock_sector_char(m, k * (m - 1), nu - sh) * euler_phi(m, nu - sh)
        rhs = side.shifted(sh)
    return compare_series("thm13b", {"m": m, "k": k}, family_char(m, k, nu), rhs)


def _iterated_recurrence(m: int, k: int, nu: int) -> IdentityReport:
    # k steps from the charge-0 sector land on the charge -k(m-1) closed
    # form; the mirror symmetry makes step j's input the charge-j(m-1)
    # series.  Each step from charge s spends 2sm of guaranteed order, so
    # start with the summed budget.
    budget = m * (m - 1) * k * (k + 1)
    f = fock_sector_char(m, 0, nu + budget)
    for j in range(1, k + 1):
        s = j * (m - 1)
        f = recurrence_step(m, s, f, f.order - 2 * s * m)
    lhs = f.restricted(nu) if f.order > nu else f
    return compare_series(
        "recurrence", {"m": m, "k": k}, lhs, sector_closed_form(m, k, nu)
    )


def _sector_rows(m: int, half: int, nu: int) -> ChargeSeries:
    rows = [fock_sector_char(m, s, nu) for s in range(-half, half + 1)]
    return ChargeSeries(-half, rows)


def _run_case(case):
    """One grid point -> list of reports. Top level so worker pools can
    pickle it."""
    family, m, s, k, nu, half, timings = case
    t0 = time.perf_counter()
    reports = []
    if family == "lemma11a":
        reports.append(compare_series(
            "lemma11a", {"m": m, "s": s},
            _mirror_pair_sum(m, s, nu), sector_pair_product(m, nu)))
    elif family == "lemma11b":
        reports.append(compare_series(
            "lemma11b", {"m": m, "s": s},
            fock_sector_char(m, s, nu), fock_sector_char(m, m - 1 - s, nu)))
    elif family == "prop12":
        closed = sector_closed_form(m, k, nu)
        for side, charge in (("plus", (k + 1) * (m - 1)), ("minus", -k * (m - 1))):
            reports.append(compare_series(
                "prop12", {"m": m, "k": k, "side": side},
                closed, fock_sector_char(m, charge, nu)))
    elif family == "recurrence":
        reports.append(_iterated_recurrence(m, k, nu))
    elif family == "thm13a":
        ch = basic_char(m, nu)
        d = dist_product(1, nu)
        phi_m = euler_phi(m, nu)
        forms = (
            ("product", (d * d) * phi_m.invert()),
            ("vacuum-sector", fock_sector_char(m, 0, nu) * phi_m),
            ("mirror-sector", fock_sector_char(m, m - 1, nu) * phi_m),
        )
        for form, rhs in forms:
            reports.append(compare_series(
                "thm13a", {"m": m, "form": form}, ch, rhs))
    elif family == "thm13b":
        reports.append(_family_vs_sector(m, k, nu))
    elif family == "prop21":
        reports.append(compare_series(
            "prop21", {"m": m, "s": s},
            quasiparticle_char(m, s, nu), fock_sector_char(m, s, nu)))
    elif family == "fockprod":
        prod = fock_char_product(m, nu, (-half, half))
        reports.append(compare_charge_series(
            "fockprod", {"m": m}, prod, _sector_rows(m, half, nu)))
    elif family == "cor22":
        lhs, rhs = vacuum_identity_sides(m, nu)
        reports.append(compare_series("cor22", {"m": m}, lhs, rhs))
    elif family == "jtp":
        lhs, rhs = jacobi_triple_sides(nu, (-half, half))
        reports.append(compare_charge_series("jtp", {}, lhs, rhs))
    elif family == "kp":
        lhs, rhs = inverse_product_sides(nu, (-half, half))
        reports.append(compare_charge_series("kp", {}, lhs, rhs))
    elif family == "gauss":
        d = dist_product(1, nu)
        reports.append(compare_series(
            "gauss", {}, gauss_sum(nu), euler_phi(1, nu) * (d * d)))
    else:
        raise QcharError(f"unknown family {family!r}")
    if timings:
        ms = (time.perf_counter() - t0) * 1000.0
        reports = [_with_ms(r, ms) for r in reports]
    return reports


def _with_ms(report: IdentityReport, ms: float) -> IdentityReport:
    return IdentityReport(report.identity, report.params, report.order_u,
                          report.verdict, report.first_diff_u_exp,
                          report.lhs_coeff, report.rhs_coeff, ms)


def _family_cases(family, args):
    grids = FAMILY_GRIDS[family]
    m_range, s_range, k_range, half_default = grids

    def resolve(flag, default):
        if flag is not None:
            return flag
        return list(range(default[0], default[1] + 1)) if default else [None]

    ms = resolve(args.m, m_range)
    ss = resolve(args.s, s_range)
    ks = resolve(args.k, k_range)
    half = args.zwin if args.zwin is not None else half_default
    nu = 2 * args.order
    cases = []
    for m in ms:
        for s in ss:
            for k in ks:
                cases.append((family, m, s, k, nu, half, args.timings))
    return cases


# -- output ------------------------------------------------------------------


def _dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _print_reports(reports, fmt):
    if fmt == "json":
        print(_dump_json([r.to_json_dict() for r in reports]))
        return
    if fmt == "csv":
        print("identity,params,order_u,verdict,first_diff_u_exp,lhs_coeff,rhs_coeff,ms")
        for r in reports:
            params = json.dumps(r.params, sort_keys=True).replace('"', "'")
            diff = "" if r.first_diff_u_exp is None else r.first_diff_u_exp
            lhs = "" if r.lhs_coeff is None else r.lhs_coeff
            rhs = "" if r.rhs_coeff is None else r.rhs_coeff
            print(f'{r.identity},"{params}",{r.order_u},{r.verdict},{diff},{lhs},{rhs},{r.ms}')
        return
    for r in reports:
        bits = [r.verdict.upper(), r.identity]
        bits += [f"{key}={r.params[key]}" for key in sorted(r.params)]
        bits.append(f"order_u={r.order_u}")
        if r.first_diff_u_exp is not None:
            bits.append(f"first_diff=u^{r.first_diff_u_exp}")
            bits.append(f"lhs={r.lhs_coeff} rhs={r.rhs_coeff}")
        if r.ms:
            bits.append(f"ms={r.ms:.1f}")
        print(" ".join(bits))
    passed = sum(1 for r in reports if r.passed())
    print(f"{passed}/{len(reports)} passed")


# -- subcommands -------------------------------------------------------------

_SERIES_EXPRS = {
    # name -> (expression template, required flags)
    "fs": ("fs({m},{s})", ("m", "s")),
    "qp": ("qp({m},{s})", ("m", "s")),
    "hs": ("hs({m},{s})", ("m", "s")),
    "L0": ("L0({m})", ("m",)),
    "Lk": ("Lk({m},{k})", ("m", "k")),
    "phi": ("phi({j})", ("j",)),
    "distp": ("distp({j})", ("j",)),
    "gauss": ("gauss()", ()),
}


def cmd_series(args) -> int:
    if (args.name is None) == (args.expr is None):
        print("series: exactly one of --name or --expr is required", file=sys.stderr)
        return EXIT_USAGE
    if args.expr is not None:
        text = args.expr
    else:
        template, needed = _SERIES_EXPRS[args.name]
        values = {}
        for flag in needed:
            value = getattr(args, flag)
            if value is None:
                if flag == "j":
                    value = 1  # phi/distp default to the plain q lattice
                else:
                    print(f"series: --name {args.name} needs --{flag}",
                          file=sys.stderr)
                    return EXIT_USAGE
            values[flag] = value
        text = template.format(**values)
    try:
        qs = evaluate(text, 2 * args.order)
    except ExprError as err:
        print(f"series: {err.render(text)}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        print(_dump_json(qs.to_json_dict()))
    elif args.format == "csv":
        print("u_exp,coeff")
        for e, c in qs.items():
            print(f"{e},{c}")
    else:
        print(format_series(qs))
    return EXIT_PASS


def cmd_verify(args) -> int:
    families = list(FAMILY_GRIDS) if args.family == "all" else [args.family]
    cases = []
    for family in families:
        cases.extend(_family_cases(family, args))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(_run_case, cases))
    else:
        chunks = [_run_case(case) for case in cases]
    reports = [r for chunk in chunks for r in chunk]
    _print_reports(reports, args.format)
    return EXIT_PASS if all(r.passed() for r in reports) else EXIT_FAIL


def cmd_oracle(args) -> int:
    report = oracle_vs_quasiparticle(args.m, args.s, 2 * args.qbound,
                                     max_nodes=args.max_nodes)
    _print_reports([report], args.format)
    return EXIT_PASS if report.passed() else EXIT_FAIL


def cmd_asympt(args) -> int:
    if args.nmax < 1:
        print("asympt: --nmax must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    rows = growth_report(args.m, args.nmax - 1)
    if args.format == "json":
        payload = [{"n": n, "a_n": str(a), "log_ratio": ratio}
                   for n, a, ratio in rows]
        print(_dump_json(payload))
    else:
        print("n,a_n,log_ratio")
        for n, a, ratio in rows:
            print(f"{n},{a},{ratio!r}")
    return EXIT_PASS


# -- argument plumbing -------------------------------------------------------


def _range_arg(text):
    try:
        return parse_range(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="qchar",
        description="Exact truncated q-series for level-1 characters: "
                    "compute, verify, cross-check, and tabulate growth.")
    sub = top.add_subparsers(dest="command", required=True)

    series = sub.add_parser("series", help="render one series")
    series.add_argument("--name", choices=sorted(_SERIES_EXPRS))
    series.add_argument("--expr", help="expression in the small q-series language")
    series.add_argument("--m", type=int)
    series.add_argument("--s", type=int)
    series.add_argument("--k", type=int)
    series.add_argument("--j", type=int)
    series.add_argument("--order", type=int, default=200,
                        help="guaranteed order in q-units (default 200)")
    series.add_argument("--format", choices=("json", "text", "csv"),
                        default="text")
    series.set_defaults(func=cmd_series)

    verify = sub.add_parser("verify", help="run an identity family over a grid")
    verify.add_argument("--family", required=True,
                        choices=sorted(FAMILY_GRIDS) + ["all"])
    verify.add_argument("--m", type=_range_arg, help='grid "a..b" or single value')
    verify.add_argument("--s", type=_range_arg)
    verify.add_argument("--k", type=_range_arg)
    verify.add_argument("--order", type=int, default=200)
    verify.add_argument("--zwin", type=int, help="z-window half-width")
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument("--timings", action="store_true",
                        help="include wall-clock ms (breaks byte-identical output)")
    verify.add_argument("--format", choices=("json", "text", "csv"),
                        default="json")
    verify.set_defaults(func=cmd_verify)

    oracle = sub.add_parser("oracle", help="brute-force state-count cross-check")
    oracle.add_argument("--m", type=int, required=True)
    oracle.add_argument("--s", type=int, required=True)
    oracle.add_argument("--qbound", type=int, required=True,
                        help="count states below this q-degree")
    oracle.add_argument("--max-nodes", type=int, default=10**8)
    oracle.add_argument("--format", choices=("json", "text", "csv"),
                        default="json")
    oracle.set_defaults(func=cmd_oracle)

    asympt = sub.add_parser("asympt", help="coefficient growth vs the estimate")
    asympt.add_argument("--m", type=int, required=True)
    asympt.add_argument("--nmax", type=int, required=True,
                        help="number of rows (n = 0 .. nmax-1)")
    asympt.add_argument("--format", choices=("json", "csv"), default="csv")
    asympt.set_defaults(func=cmd_asympt)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimit as err:
        print(f"qchar: {err}", file=sys.stderr)
        return EXIT_RESOURCE
    except QcharError as err:
        print(f"qchar: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
