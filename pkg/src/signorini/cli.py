"""Command-line front end.

Verbs:
  run <config>             full pipeline; exit 0 all-pass / 2 failed assertion / 1 error
  list-scenarios           shipped catalog
  verify-barriers <config> pipeline focused on the barrier certificates
  plot <report> --kind k   CSV plot data from a saved report

<config> is a shipped scenario name or a path to a JSON config file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys

from . import scenarios as catalog
from .pipeline import ConfigError, RunReport, emit_plot_data, run_scenario


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="siglab",
        description="boundary-obstacle finite element laboratory",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    run_p = sub.add_parser("run", help="run a scenario end to end")
    run_p.add_argument("config", help="scenario name or JSON config path")
    _common_overrides(run_p)

    sub.add_parser("list-scenarios", help="list shipped scenarios")

    ver_p = sub.add_parser("verify-barriers", help="run and judge only the certificates")
    ver_p.add_argument("config", help="scenario name or JSON config path")
    _common_overrides(ver_p)

    plot_p = sub.add_parser("plot", help="emit CSV plot data from a report")
    plot_p.add_argument("report", help="path to a saved report JSON")
    plot_p.add_argument(
        "--kind",
        required=True,
        choices=["boundary-trace", "field-heatmap", "coverage-vs-alpha"],
    )
    plot_p.add_argument("--out-dir", default=".")
    return parser


def _common_overrides(p):
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--method", choices=["pdas", "pgs"], default=None)
    p.add_argument("--tol", type=float, default=None, help="KKT tolerance override")
    p.add_argument(
        "--alpha-schedule",
        default=None,
        help="comma-separated decreasing positive alphas",
    )
    p.add_argument("--out-dir", default=None, help="write the report JSON here")


def _overrides(args):
    schedule = None
    if getattr(args, "alpha_schedule", None):
        schedule = [float(a) for a in args.alpha_schedule.split(",")]
    return {
        "resolution": getattr(args, "resolution", None),
        "method": getattr(args, "method", None),
        "kkt_tol": getattr(args, "tol", None),
        "alpha_schedule": schedule,
    }


def _print_summary(report: RunReport):
    data = report.data
    print(f"scenario: {data['scenario']}")
    mesh = data["mesh"]
    print(
        f"mesh: {mesh['nodes']} nodes, {mesh['triangles']} triangles, h = {mesh['h']:.4g}"
    )
    compat = data.get("compatibility")
    if compat and not compat.get("skipped"):
        print(f"compatibility value: {compat['value']:.6g} (admissible)")
    bal = data.get("balance")
    if bal:
        print(
            "balance margins: interior "
            f"{bal['interior_margin']:.6g} (need {bal['epsilon']}), boundary "
            f"{bal['boundary_margin']:.6g} (need {bal['delta']}) -> "
            f"{'pass' if bal['interior_passes'] and bal['boundary_passes'] else 'FAIL'}"
        )
    for cert in data.get("certificates", ()):
        status = "infeasible: " + cert["violated"] if not cert["feasible"] else (
            "pass" if cert["passed"] else "FAIL"
        )
        print(
            f"certificate[{cert['kind']}]: c = {cert['constants'].get('c'):.6g}, "
            f"{status}"
        )
    coin = data.get("coincidence")
    if coin and "coverage_fraction" in coin:
        print(
            f"coincidence coverage of {coin['target_tag']}: "
            f"{coin['coverage_fraction']:.6f} "
            f"({coin['covered_length']:.6g} of {coin['target_length']:.6g})"
        )
    for row in data.get("assertions", ()):
        mark = "PASS" if row["passed"] else "FAIL"
        print(f"assert {row['check']}: {mark} (observed {row['observed']})")
    print(f"all assertions passed: {data['all_passed']}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.verb == "list-scenarios":
        for name, desc in catalog.list_scenarios():
            print(f"{name:22s} {desc}")
        return 0

    try:
        if args.verb == "run":
            report = run_scenario(args.config, _overrides(args))
            _print_summary(report)
            if args.out_dir:
                os.makedirs(args.out_dir, exist_ok=True)
                path = os.path.join(args.out_dir, f"{report.data['scenario']}.json")
                report.save(path)
                print(f"report written to {path}")
            return 0 if report.all_passed else 2

        if args.verb == "verify-barriers":
            report = run_scenario(args.config, _overrides(args))
            ok = True
            for cert in report.data.get("certificates", ()):
                if not cert["feasible"]:
                    ok = False
                    print(f"certificate[{cert['kind']}]: infeasible; {cert['violated']}")
                    continue
                worst = min(cert["verification"].values())
                status = "pass" if cert["passed"] else "FAIL"
                print(
                    f"certificate[{cert['kind']}]: {status}, worst residual {worst:.3e}, "
                    f"constants {cert['constants']}"
                )
                ok = ok and cert["passed"]
            if args.out_dir:
                os.makedirs(args.out_dir, exist_ok=True)
                path = os.path.join(
                    args.out_dir, f"{report.data['scenario']}-barriers.json"
                )
                report.save(path)
            return 0 if ok else 2

        if args.verb == "plot":
            with open(args.report) as fh:
                data = json.load(fh)
            os.makedirs(args.out_dir, exist_ok=True)
            paths = emit_plot_data(RunReport(data), args.kind, args.out_dir)
            for p in paths:
                print(p)
            return 0
    except (ConfigError, ValueError, RuntimeError, OSError, KeyError) as err:
        print(f"error: {err}", file=_sys.stderr)
        return 1
    parser.error("unknown verb")


def main_exit():
    _sys.exit(main())


if __name__ == "__main__":
    main_exit()
