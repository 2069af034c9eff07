"""Scenario pipeline: mesh, assemble, solve, certify, extract, report.

A scenario config (JSON-compatible dict, see scenarios.py for shipped
examples) drives the full run.  Every pass/fail claim lands in the
report next to the residual number that backs it.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import scenarios as catalog
from .assembly import (
    build_system,
    check_compatibility,
    h1_error,
)
from .barriers import (
    attach_intrinsic,
    attach_quadratic,
    attach_ring,
    comparison_check,
    select_constants,
    verify_supersolution,
)
from .coincidence import alpha_stability, coverage, extract_coincidence
from .fields import ZeroExtension, check_balance, extend_obstacle, parse_field
from .geometry.domains import DomainDescriptor, SegmentSpec
from .geometry.intrinsic import intrinsic_distance
from .geometry.meshing import build_mesh, domain_area
from .geometry.tubular import (
    CollarRegion,
    RadialBand,
    nonconvexity_defect,
    tubular_frame,
)
from .solvers import (
    SolverOptions,
    solve_alpha,
    solve_problem_one,
)


class ConfigError(ValueError):
    pass


@dataclass
class RunReport:
    data: dict = field(default_factory=dict)

    @property
    def all_passed(self):
        return bool(self.data.get("all_passed", False))

    def to_json(self):
        return json.dumps(self.data, indent=2, sort_keys=True)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")


def _require(cond, where, message):
    if not cond:
        raise ConfigError(f"config.{where}: {message}")


def load_config(source):
    """Catalog name, path to a JSON file, or an already-built dict."""
    if isinstance(source, dict):
        return json.loads(json.dumps(source))  # defensive deep copy
    if source in catalog.SCENARIOS:
        return catalog.get_scenario(source)
    try:
        with open(source) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(
            f"'{source}' is neither a shipped scenario nor a readable config file"
        ) from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"{source}: not valid JSON ({err})") from None


def _descriptor(config):
    dom = config.get("domain")
    _require(isinstance(dom, dict), "domain", "missing or not an object")
    kind = dom.get("kind")
    _require(
        kind in ("ring", "disk", "star", "polygon"),
        "domain.kind",
        f"unknown kind {kind!r}",
    )
    params = dom.get("parameters")
    _require(isinstance(params, dict), "domain.parameters", "missing or not an object")
    segs = []
    for i, s in enumerate(dom.get("segments", ())):
        for key in ("tag", "curve", "lo", "hi"):
            _require(key in s, f"domain.segments[{i}]", f"missing '{key}'")
        segs.append(SegmentSpec(s["tag"], s["curve"], float(s["lo"]), float(s["hi"])))
    try:
        return DomainDescriptor(kind, params, tuple(segs))
    except ValueError as err:
        raise ConfigError(f"config.domain: {err}") from None


def _resolutions(config, overrides):
    if overrides and overrides.get("resolution"):
        return [int(overrides["resolution"])]
    if "resolutions" in config:
        res = config["resolutions"]
        _require(
            isinstance(res, list) and res and all(int(r) == r for r in res),
            "resolutions",
            "must be a nonempty integer list",
        )
        return [int(r) for r in res]
    res = config.get("resolution")
    _require(res is not None, "resolution", "missing")
    return [int(res)]


def _fields(config):
    spec = config.get("fields")
    _require(isinstance(spec, dict), "fields", "missing or not an object")
    out = {}
    for key in ("f", "g", "psi"):
        _require(key in spec, f"fields.{key}", "missing expression string")
        try:
            out[key] = parse_field(str(spec[key]))
        except ValueError as err:
            raise ConfigError(f"config.fields.{key}: {err}") from None
    return out


def _layout(config, dd):
    spec = config.get("layout")
    _require(isinstance(spec, dict) and spec, "layout", "missing or empty")
    tags = {s.tag for s in dd.segments}
    layout = {}
    for tag, entry in spec.items():
        _require(tag in tags, f"layout.{tag}", "tag not declared in the domain")
        if entry == "signorini":
            layout[tag] = "signorini"
        elif isinstance(entry, dict) and "dirichlet" in entry:
            layout[tag] = ("dirichlet", float(entry["dirichlet"]))
        else:
            raise ConfigError(
                f"config.layout.{tag}: expected 'signorini' or {{'dirichlet': value}}"
            )
    missing = tags - set(layout)
    _require(not missing, "layout", f"untyped segment tags {sorted(missing)}")
    return layout


def _solver_options(config, overrides):
    spec = dict(config.get("solver", {}))
    if overrides:
        if overrides.get("method"):
            spec["method"] = overrides["method"]
        if overrides.get("kkt_tol"):
            spec["kkt_tol"] = float(overrides["kkt_tol"])
        if overrides.get("alpha_schedule") is not None:
            spec["alpha_schedule"] = list(overrides["alpha_schedule"])
    method = spec.get("method", "pdas")
    _require(method in ("pdas", "pgs"), "solver.method", f"unknown method {method!r}")
    schedule = spec.get("alpha_schedule")
    if schedule is not None:
        schedule = tuple(float(a) for a in schedule)
    opts = SolverOptions(
        method=method,
        max_iter=spec.get("max_iter"),
        kkt_tol=spec.get("kkt_tol"),
        omega=spec.get("omega", 1.5),
        alpha_schedule=schedule,
    )
    return opts


def _obstacle_extension(config, dd, mesh, fields):
    psi = fields["psi"]
    spec = config.get("obstacle_extension")
    if spec:
        frame = tubular_frame(dd, spec["frame"])
        return extend_obstacle(
            psi, frame, float(spec["width"]), fd_step=mesh.h / 4.0
        )
    boundary_ids = np.concatenate(list(mesh.node_tags.values()))
    vals = psi(mesh.nodes[boundary_ids])
    if np.max(np.abs(vals)) > 1e-14:
        raise ConfigError(
            "config.obstacle_extension: a nonzero obstacle needs an extension "
            "entry {'frame': tag, 'width': w}"
        )
    return ZeroExtension()


def _balance_region(spec, dd):
    kind = spec.get("kind")
    if kind == "radial-band":
        return RadialBand(float(spec["r_lo"]), float(spec["r_hi"]))
    if kind == "collar":
        frame = tubular_frame(dd, spec["frame"])
        return CollarRegion(frame, float(spec["width"]))
    raise ConfigError(f"config.balance.region.kind: unknown {kind!r}")


def _distance_to_complement(dd, seg, x0):
    """Euclidean distance from x0 to the boundary outside the segment."""
    best = np.inf
    for other in dd.segments:
        frame = tubular_frame(dd, other.tag)
        ts = np.linspace(other.lo, other.hi, 2048)
        if other.tag == seg.tag:
            continue
        pts = frame.point(ts % frame.curve.period)
        best = min(best, float(np.min(np.linalg.norm(pts - x0, axis=1))))
    return best


def _solve_path(sys, opts):
    """Continuation for pure Signorini; direct coercive solve otherwise."""
    if sys.pure_signorini:
        schedule = opts.alpha_schedule or None
        sols = solve_problem_one(sys, schedule, method=opts.method, opts=opts)
        return sols, sols[-1], sols[-1].alpha
    if opts.alpha_schedule:
        sols = solve_problem_one(sys, opts.alpha_schedule, method=opts.method, opts=opts)
        final = solve_alpha(sys, 0.0, method=opts.method, opts=opts, warm=sols[-1])
        return sols + [final], final, 0.0
    final = solve_alpha(sys, 0.0, method=opts.method, opts=opts)
    return [final], final, 0.0


def _cap_bound(solution, mesh, indicator):
    mask = indicator(mesh.nodes)
    if not np.any(mask):
        return 0.0
    return float(max(0.0, np.max(solution.u[mask])))


def _certificates(config, dd, mesh, sys, solution, final_alpha, balance):
    certs = []
    eps = balance["epsilon"] if balance else None
    delta = balance["delta"] if balance else None
    sup_bound = float(np.max(np.abs(solution.u)))
    for i, spec in enumerate(config.get("barriers", ())):
        kind = spec.get("kind")
        where = f"barriers[{i}]"
        if kind == "ring":
            _require(dd.kind == "ring", where, "ring barrier needs a ring domain")
            r0 = dd.parameters["r_inner"]
            r1 = dd.parameters["r_outer"]
            r_eps = float(spec.get("r_eps", r1))
            e = float(spec.get("epsilon", eps))
            d = float(spec.get("delta", delta if delta is not None else 0.0))
            band = mesh.h
            cap = lambda pts, re=r_eps, b=band: (
                np.abs(np.linalg.norm(np.atleast_2d(pts), axis=1) - re) <= b + 1e-9
            )
            M = _cap_bound(solution, mesh, cap)
            cert = select_constants("ring", e, d, M, N=2, r0=r0, r1=r1, r_eps=r_eps)
            attach_ring(cert)
            cert.segment_tag = spec.get("segment", "gamma0")
        elif kind == "quadratic":
            tag = spec["segment"]
            seg = dd.segment(tag)
            frame = tubular_frame(dd, tag)
            width = float(spec.get("width", 0.5 * frame.rho_max))
            region = CollarRegion(frame, width)
            x0 = frame.point(float(spec["x0_angle"]))
            defect = nonconvexity_defect(frame, region, int(spec.get("density", 200)))
            dist = _distance_to_complement(dd, seg, x0)
            R = min(dist, width)
            ball = lambda pts, x=x0, r=R, b=mesh.h: (
                np.abs(np.linalg.norm(np.atleast_2d(pts) - x, axis=1) - r) <= b + 1e-9
            )
            M = _cap_bound(solution, mesh, ball)
            e = float(spec.get("epsilon", eps))
            d = float(spec.get("delta", delta if delta is not None else 0.0))
            cert = select_constants(
                "quadratic", e, d, M, N=2, R=R, nonconvexity=defect
            )
            attach_quadratic(cert, frame, x0, seg.lo, seg.hi)
            cert.segment_tag = tag
            cert.notes["distance_to_complement"] = dist
        elif kind == "intrinsic":
            tag = spec["segment"]
            frame = tubular_frame(dd, tag)
            x0 = frame.point(float(spec["x0_angle"]))
            metric = intrinsic_distance(
                frame,
                x0,
                mesh,
                width=float(spec.get("width", 0.9 * frame.rho_max)),
                exclusion=spec.get("exclusion"),
            )
            R = metric.ball_radius()
            capfun = lambda pts, m=metric, r=R, b=mesh.h: (
                np.abs(m.extension(np.atleast_2d(pts)) - r) <= b + 1e-9
            )
            M = _cap_bound(solution, mesh, capfun)
            e = float(spec.get("epsilon", eps))
            d = float(spec.get("delta", delta if delta is not None else 0.0))
            cert = select_constants(
                "intrinsic", e, d, M, N=2,
                laplacian_bound=metric.laplacian_bound, R=R,
            )
            attach_intrinsic(cert, metric)
            cert.segment_tag = tag
            cert.notes["metric"] = {
                "lower_ratio": metric.lower_ratio,
                "upper_ratio": metric.upper_ratio,
                "laplacian_bound": metric.laplacian_bound,
                "exclusion": metric.exclusion,
            }
        else:
            raise ConfigError(f"config.{where}.kind: unknown {kind!r}")
        cert.notes["sup_bound"] = sup_bound
        if cert.feasible:
            verify_supersolution(cert, mesh, alpha=final_alpha)
            ok, worst = comparison_check(solution, cert, mesh)
            cert.notes["comparison_ok"] = bool(ok)
            cert.notes["comparison_worst_gap"] = worst
        certs.append(cert)
    return certs


def _segment_polyline_length(mesh, tag):
    idx = mesh.edges_of_tag(tag)
    return float(mesh.boundary_edge_lengths()[idx].sum())


def _mean_flux(solution, sys, tag, g):
    """Mean boundary flux density over a tag: multipliers restore d(u)/dnu - g,
    so the g average is added back."""
    mesh = sys.mesh
    tag_nodes = set(int(i) for i in mesh.nodes_of_tag(tag))
    cons_index = {int(n): i for i, n in enumerate(sys.constrained)}
    ids = [cons_index[n] for n in tag_nodes if n in cons_index]
    if not ids:
        return None
    raw = float(solution.multipliers_raw[ids].sum())
    length = _segment_polyline_length(mesh, tag)
    node_ids = np.array(sorted(tag_nodes), dtype=np.int64)
    ell = mesh.boundary_lumped_lengths()[node_ids]
    gmean = float((g(mesh.nodes[node_ids]) * ell).sum() / length)
    return raw / length + gmean


def _trace_data(solution, sys):
    mesh = sys.mesh
    trace = {}
    cons_index = {int(n): i for i, n in enumerate(sys.constrained)}
    for tag in sys.signorini_tags:
        ids = [int(n) for n in mesh.nodes_of_tag(tag) if int(n) in cons_index]
        ids.sort(key=lambda n: mesh.boundary_params[n][1])
        pts = mesh.nodes[ids]
        arc = np.concatenate(
            [[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))]
        )
        gaps = [solution.u[n] - sys.psi[cons_index[n]] for n in ids]
        mults = [solution.multipliers[cons_index[n]] for n in ids]
        trace[tag] = {
            "arc": [float(a) for a in arc],
            "gap": [float(v) for v in gaps],
            "multiplier": [float(v) for v in mults],
        }
    return trace


def _evaluate_assertions(config, ctx):
    rows = []
    for spec in config.get("assertions", ()):
        check = spec.get("check")
        row = {"check": check, "passed": False, "observed": None, "threshold": None}
        if check == "coverage":
            frac = ctx["report_obj"].coverage_fraction(spec["segment"])
            row.update(
                observed=frac, threshold=spec.get("min", 1.0),
                passed=bool(frac >= spec.get("min", 1.0) - 1e-12),
            )
        elif check == "max_gap":
            sys = ctx["sys"]
            sol = ctx["solution"]
            tag_nodes = set(int(i) for i in sys.mesh.nodes_of_tag(spec["segment"]))
            cons_index = {int(n): i for i, n in enumerate(sys.constrained)}
            gaps = [
                sol.u[n] - sys.psi[cons_index[n]]
                for n in tag_nodes
                if n in cons_index
            ]
            worst = float(max(gaps)) if gaps else 0.0
            row.update(
                observed=worst, threshold=spec["max"], passed=bool(worst <= spec["max"])
            )
        elif check == "kkt":
            tol = float(spec.get("tol", 1e-10))
            res = ctx["solution"].residuals
            worst = max(res.values())
            row.update(observed=worst, threshold=tol, passed=bool(worst <= tol))
            row["residuals"] = dict(res)
        elif check == "alpha_stable":
            stable = ctx.get("alpha_stability")
            row.update(observed=stable, threshold=True, passed=bool(stable))
        elif check == "increments_decreasing":
            after = int(spec.get("after", 1))
            inc = ctx.get("increments") or []
            ok = len(inc) > after and all(
                inc[i + 1] < inc[i] for i in range(after, len(inc) - 1)
            )
            row.update(observed=inc, threshold=f"strict decrease from step {after}",
                       passed=bool(ok))
        elif check == "certificates_feasible":
            certs = ctx["certificates"]
            bad = [c.violated for c in certs if not c.feasible]
            row.update(observed=bad or "all feasible", threshold="feasible",
                       passed=not bad)
        elif check == "certificates_pass":
            certs = ctx["certificates"]
            worst = min(
                (min(c.verification.values()) for c in certs if c.verification),
                default=0.0,
            )
            ok = all(c.passed for c in certs if c.feasible) and all(
                c.feasible for c in certs
            )
            row.update(observed=worst, threshold=-1e-10, passed=bool(ok))
        elif check == "comparison":
            tol = float(spec.get("tol", 1e-8))
            worst = max(
                (c.notes.get("comparison_worst_gap", -np.inf) for c in ctx["certificates"]),
                default=-np.inf,
            )
            row.update(observed=worst, threshold=tol, passed=bool(worst <= tol))
        elif check == "balance_passes":
            bal = ctx.get("balance_data")
            row.update(
                observed=bal.to_dict() if bal else None,
                threshold="margins at least (epsilon, delta)",
                passed=bool(bal and bal.passes),
            )
        elif check == "nonconvexity_positive":
            defects = [
                c.constants.get("nonconvexity", 0.0) for c in ctx["certificates"]
                if c.kind == "quadratic"
            ]
            val = max(defects) if defects else 0.0
            row.update(observed=val, threshold="> 0", passed=bool(val > 0.0))
        elif check == "h1_slope":
            slope = ctx.get("h1_slope")
            lo, hi = float(spec.get("min", 0.85)), float(spec.get("max", 1.15))
            row.update(
                observed=slope, threshold=[lo, hi],
                passed=bool(slope is not None and lo <= slope <= hi),
            )
        elif check == "flux_error":
            err = ctx.get("flux_error_rel")
            row.update(
                observed=err, threshold=spec["max_rel"],
                passed=bool(err is not None and err <= spec["max_rel"]),
            )
        else:
            raise ConfigError(f"config.assertions: unknown check {check!r}")
        rows.append(row)
    return rows


def run_scenario(source, overrides=None) -> RunReport:
    """Execute a scenario end to end and return its report.

    Raises ConfigError and friends for invalid inputs (CLI exit 1);
    failed scenario assertions only mark the report (CLI exit 2).
    """
    t_start = time.perf_counter()
    config = load_config(source)
    dd = _descriptor(config)
    resolutions = _resolutions(config, overrides)
    fields = _fields(config)
    layout = _layout(config, dd)
    opts = _solver_options(config, overrides)
    exact = None
    if config.get("exact_solution"):
        name = config["exact_solution"]
        _require(name in catalog.EXACT_SOLUTIONS, "exact_solution", f"unknown '{name}'")
        exact = catalog.EXACT_SOLUTIONS[name]()

    timings = {}
    convergence_rows = []
    report = {}
    sys = solution = None
    solutions = []
    final_alpha = 0.0
    compat = None

    for resolution in resolutions:
        t0 = time.perf_counter()
        mesh = build_mesh(dd, resolution)
        timings[f"mesh_r{resolution}"] = time.perf_counter() - t0
        sys = build_system(mesh, fields["f"], fields["g"], fields["psi"], layout)
        compat = check_compatibility(
            mesh, fields["f"], fields["g"], has_dirichlet=not sys.pure_signorini
        )
        if not compat.skipped and not compat.admissible:
            from .solvers import CompatibilityError

            raise CompatibilityError(compat.value)
        t0 = time.perf_counter()
        solutions, solution, final_alpha = _solve_path(sys, opts)
        timings[f"solve_r{resolution}"] = time.perf_counter() - t0

        conv_row = {
            "resolution": resolution,
            "h": mesh.h,
            "nodes": int(mesh.nodes.shape[0]),
        }
        if exact:
            conv_row["h1_error"] = h1_error(
                mesh, solution.u, exact["value"], exact["gradient"]
            )
            flux = _mean_flux(solution, sys, exact["flux_tag"], fields["g"])
            if flux is not None:
                conv_row["flux"] = flux
                conv_row["flux_error_rel"] = abs(flux - exact["flux_inner"]) / abs(
                    exact["flux_inner"]
                )
        convergence_rows.append(conv_row)

    mesh = sys.mesh
    ext = _obstacle_extension(config, dd, mesh, fields)

    balance_cfg = config.get("balance")
    balance_data = None
    if balance_cfg:
        region = _balance_region(balance_cfg["region"], dd)
        t0 = time.perf_counter()
        balance_data = check_balance(
            fields["f"],
            fields["g"],
            ext,
            region,
            mesh,
            balance_cfg["segment"],
            float(balance_cfg["epsilon"]),
            float(balance_cfg["delta"]),
            alpha=final_alpha,
        )
        timings["balance"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    certs = _certificates(
        config, dd, mesh, sys, solution, final_alpha, balance_cfg
    )
    timings["certificates"] = time.perf_counter() - t0

    target = config.get("coincidence", {}).get("target")
    tol_c = config.get("coincidence", {}).get("tolerance")
    report_obj = extract_coincidence(solution, sys, tol_c)
    cov = coverage(report_obj, target) if target else None

    stability = None
    stability_table = None
    if target and len(solutions) >= 2:
        stability, stability_table = alpha_stability(solutions, sys, target, tol_c)

    increments = [
        s.diagnostics.get("h1_increment_from_previous")
        for s in solutions
        if s.diagnostics.get("h1_increment_from_previous") is not None
    ]

    h1_slope = None
    if exact and len(convergence_rows) >= 2:
        hs = np.log([row["h"] for row in convergence_rows])
        es = np.log([row["h1_error"] for row in convergence_rows])
        h1_slope = float(np.polyfit(hs, es, 1)[0])

    ctx = {
        "sys": sys,
        "solution": solution,
        "certificates": certs,
        "report_obj": report_obj,
        "balance_data": balance_data,
        "alpha_stability": stability,
        "increments": increments,
        "h1_slope": h1_slope,
        "flux_error_rel": convergence_rows[-1].get("flux_error_rel")
        if convergence_rows
        else None,
    }
    assertion_rows = _evaluate_assertions(config, ctx)
    all_passed = all(r["passed"] for r in assertion_rows)

    report = {
        "scenario": config.get("name", "unnamed"),
        "description": config.get("description", ""),
        "config": config,
        "mesh": {
            "resolution": resolutions[-1],
            "nodes": int(mesh.nodes.shape[0]),
            "triangles": int(mesh.triangles.shape[0]),
            "h": mesh.h,
            "euler_characteristic": int(mesh.euler_characteristic()),
            "area": mesh.area(),
            "domain_area": domain_area(dd),
        },
        "compatibility": compat.to_dict() if compat else None,
        "balance": balance_data.to_dict() if balance_data else None,
        "solver": {
            "method": opts.method,
            "kkt_tol": opts.kkt_tol,
            "per_alpha": [
                {
                    "alpha": s.alpha,
                    "iterations": s.iterations,
                    "converged": s.converged,
                    "residuals": s.residuals,
                    "h1_increment_from_previous": s.diagnostics.get(
                        "h1_increment_from_previous"
                    ),
                }
                for s in solutions
            ],
        },
        "kkt": solution.residuals,
        "certificates": [c.to_dict() for c in certs],
        "coincidence": report_obj.to_dict(),
        "alpha_stability": {
            "stable": stability,
            "coverage_vs_alpha": stability_table,
        }
        if stability is not None
        else None,
        "convergence": {"rows": convergence_rows, "h1_slope": h1_slope}
        if exact
        else None,
        "assertions": assertion_rows,
        "all_passed": all_passed,
        "trace": _trace_data(solution, sys),
        "heatmap": {
            "x": [float(v) for v in mesh.nodes[:, 0]],
            "y": [float(v) for v in mesh.nodes[:, 1]],
            "u": [float(v) for v in solution.u],
        },
        "timings": {k: float(v) for k, v in timings.items()},
    }
    report["timings"]["total"] = time.perf_counter() - t_start
    return RunReport(report)


def emit_plot_data(report: RunReport, kind: str, out_dir="."):
    """Write CSV plot data extracted from a run report; returns the paths."""
    import os

    data = report.data if isinstance(report, RunReport) else report
    name = data.get("scenario", "report")
    paths = []
    if kind == "boundary-trace":
        trace = data.get("trace") or {}
        if not trace:
            raise ConfigError("report carries no boundary trace data")
        for tag, cols in trace.items():
            path = os.path.join(out_dir, f"{name}-trace-{tag}.csv")
            with open(path, "w") as fh:
                fh.write("arc,gap,multiplier\n")
                for a, gp, m in zip(cols["arc"], cols["gap"], cols["multiplier"]):
                    fh.write(f"{a!r},{gp!r},{m!r}\n")
            paths.append(path)
    elif kind == "field-heatmap":
        hm = data.get("heatmap")
        if not hm:
            raise ConfigError("report carries no heatmap data")
        path = os.path.join(out_dir, f"{name}-heatmap.csv")
        with open(path, "w") as fh:
            fh.write("x,y,u\n")
            for x, y, u in zip(hm["x"], hm["y"], hm["u"]):
                fh.write(f"{x!r},{y!r},{u!r}\n")
        paths.append(path)
    elif kind == "coverage-vs-alpha":
        stab = data.get("alpha_stability")
        if not stab or not stab.get("coverage_vs_alpha"):
            raise ConfigError("report carries no coverage-vs-alpha data")
        path = os.path.join(out_dir, f"{name}-coverage-vs-alpha.csv")
        with open(path, "w") as fh:
            fh.write("alpha,coverage\n")
            for a, c in stab["coverage_vs_alpha"]:
                fh.write(f"{a!r},{c!r}\n")
        paths.append(path)
    else:
        raise ConfigError(f"unknown plot kind '{kind}'")
    return paths
