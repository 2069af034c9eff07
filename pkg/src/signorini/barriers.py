"""Explicit supersolutions (barriers) and their certificates.

Each barrier dominates the computed solution on a comparison region D
once three pointwise inequality families hold: the interior one
(-lap(bar) + alpha*bar >= -epsilon), the cap one (bar >= M on the
interior part of the region boundary) and the flux one
(d(bar)/dnu >= -delta on the boundary part).  Constants are selected by
closed formulas; verification samples the inequalities and stores the
worst residual per family, so every pass/fail claim is backed by a
number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry.intrinsic import IntrinsicMetric
from .geometry.tubular import RadialBand, TubularFrame


class BarrierError(ValueError):
    pass


VERIFY_TOL = 1e-10


# -- barrier evaluators ---------------------------------------------------------


@dataclass(frozen=True)
class QuadraticBarrier:
    """c/(2N) |x - x0|^2: vanishes at the base point, Laplacian c."""

    x0: tuple
    c: float
    N: int = 2

    def value(self, pts):
        d2 = ((np.atleast_2d(pts) - self.x0) ** 2).sum(axis=1)
        return self.c / (2.0 * self.N) * d2

    def gradient(self, pts):
        return (self.c / self.N) * (np.atleast_2d(pts) - self.x0)

    def laplacian(self, pts):
        return np.full(np.atleast_2d(pts).shape[0], self.c)

    def normal_flux(self, frame, ts):
        """d(bar)/dnu at boundary points xi(t): (c/N)(xi - x0).nu(xi)."""
        pts = frame.point(ts)
        nus = frame.normal(ts)
        return (self.c / self.N) * ((pts - self.x0) * nus).sum(axis=1)


@dataclass(frozen=True)
class RingBarrier:
    """c (r - r0)^2: vanishes on the inner circle, zero flux there."""

    r0: float
    c: float
    N: int = 2

    def value(self, pts):
        r = np.linalg.norm(np.atleast_2d(pts), axis=1)
        return self.c * (r - self.r0) ** 2

    def radial_derivative(self, r):
        return 2.0 * self.c * (np.asarray(r, dtype=float) - self.r0)

    def neg_laplacian(self, pts):
        r = np.linalg.norm(np.atleast_2d(pts), axis=1)
        if np.any(r < 1e-12):
            raise BarrierError("ring barrier is singular at the origin")
        return -2.0 * self.c - (self.N - 1.0) / r * 2.0 * self.c * (r - self.r0)

    def laplacian(self, pts):
        return -self.neg_laplacian(pts)

    def gradient(self, pts):
        pts = np.atleast_2d(pts)
        r = np.linalg.norm(pts, axis=1)
        if np.any(r < 1e-12):
            raise BarrierError("ring barrier is singular at the origin")
        return (self.radial_derivative(r) / r)[:, None] * pts


@dataclass(frozen=True)
class IntrinsicBarrier:
    """(c / laplacian_bound) * collar extension of the boundary distance."""

    metric: IntrinsicMetric
    c: float

    @property
    def scale(self):
        return self.c / self.metric.laplacian_bound

    def value(self, pts):
        pts = np.atleast_2d(pts)
        if np.any(np.linalg.norm(pts - self.metric.x0, axis=1) < 1e-14):
            raise BarrierError("intrinsic barrier is not differentiable at the base point")
        return self.scale * self.metric.extension(pts)

    def fd_laplacian(self, pts):
        return self.scale * self.metric.fd_laplacian(pts)

    def ray_flux(self):
        """Normal derivative limit along the inward ray at the base point.

        Away from the base point the extension is flat in the normal
        direction on the boundary (zero flux); the binding value -scale
        appears along the ray under the base point, where the extension
        reduces to |s|."""
        return -self.scale


@dataclass(frozen=True)
class OdeBarrier:
    """Closed-form collar profile for constant offset curvature.

    phi solves  -phi'' - b phi' = c  with phi(0) = 0, phi'(0) = -delta,
    where b is (N-1) times the constant mean curvature of the offset
    curves.  Positive near s = 0-, it stops being a barrier at the first
    sign change.
    """

    c: float
    delta: float
    b: float
    extrapolated: bool = False

    def phi(self, s):
        s = np.asarray(s, dtype=float)
        if self.extrapolated:
            return -self.delta * s - 0.5 * self.c * s * s
        A = self.c / self.b ** 2 - self.delta / self.b
        return A * (1.0 - np.exp(-self.b * s)) - (self.c / self.b) * s

    def dphi(self, s):
        s = np.asarray(s, dtype=float)
        if self.extrapolated:
            return -self.delta - self.c * s
        return (self.c / self.b - self.delta) * np.exp(-self.b * s) - self.c / self.b

    def d2phi(self, s):
        s = np.asarray(s, dtype=float)
        if self.extrapolated:
            return np.full(s.shape, -self.c)
        return -self.b * (self.c / self.b - self.delta) * np.exp(-self.b * s)

    def ode_residual(self, s):
        return -self.d2phi(s) - self.b * self.dphi(s) - self.c


def quadratic_barrier(x0, c, N=2) -> QuadraticBarrier:
    if c <= 0:
        raise BarrierError("barrier scale c must be positive")
    return QuadraticBarrier(x0=tuple(np.asarray(x0, dtype=float)), c=float(c), N=int(N))


def ring_barrier(r0, c, N=2) -> RingBarrier:
    if c <= 0 or r0 <= 0:
        raise BarrierError("ring barrier needs c > 0 and r0 > 0")
    return RingBarrier(r0=float(r0), c=float(c), N=int(N))


def intrinsic_barrier(metric: IntrinsicMetric, c) -> IntrinsicBarrier:
    if c <= 0:
        raise BarrierError("barrier scale c must be positive")
    if not (metric.laplacian_bound > 0):
        raise BarrierError("metric carries no positive Laplacian bound")
    return IntrinsicBarrier(metric=metric, c=float(c))


def ode_barrier(c, delta, b, extrapolate_flat=False, span=None):
    """Profile plus the largest interval (-s*, 0] of nonnegativity.

    Returns (barrier, s_star, sign_change_found).  b = 0 degenerates
    the closed form; the parabolic limit is served only behind the
    explicit ``extrapolate_flat`` flag.
    """
    if b == 0.0 and not extrapolate_flat:
        raise BarrierError(
            "flat boundary (b = 0) degenerates the closed form; "
            "pass extrapolate_flat=True for the parabolic limit"
        )
    bar = OdeBarrier(c=float(c), delta=float(delta), b=float(b), extrapolated=(b == 0.0))
    if span is None:
        span = 40.0 * max(1.0, 1.0 / abs(b) if b else 1.0, delta / c if c > 0 else 1.0)
    svals = -np.linspace(0.0, span, 4096)[1:]
    phis = bar.phi(svals)
    neg = np.nonzero(phis < 0.0)[0]
    if neg.size == 0:
        return bar, float(span), False
    hi = svals[neg[0]]           # first sampled point with phi < 0
    lo = svals[neg[0] - 1] if neg[0] else 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if bar.phi(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
        if abs(hi - lo) < 1e-13 * max(1.0, abs(hi)):
            break
    return bar, float(-lo), True


# -- regions --------------------------------------------------------------------


class BallRegion:
    def __init__(self, x0, radius):
        self.x0 = np.asarray(x0, dtype=float)
        self.radius = float(radius)

    def contains(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.linalg.norm(pts - self.x0, axis=1) <= self.radius + 1e-12


class MetricBallRegion:
    def __init__(self, metric, radius):
        self.metric = metric
        self.radius = float(radius)

    def contains(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return self.metric.extension(pts) <= self.radius + 1e-12


# -- certificates ----------------------------------------------------------------


@dataclass
class BarrierCertificate:
    kind: str
    constants: dict
    feasible: bool
    violated: str = None
    barrier: object = None
    region: object = None
    frame: object = None
    segment_tag: str = None
    x0: tuple = None
    verification: dict = field(default_factory=dict)
    passed: bool = None
    notes: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "kind": self.kind,
            "constants": {k: _jsonable(v) for k, v in self.constants.items()},
            "feasible": self.feasible,
            "violated": self.violated,
            "segment_tag": self.segment_tag,
            "x0": list(self.x0) if self.x0 is not None else None,
            "verification": dict(self.verification),
            "passed": self.passed,
            "notes": dict(self.notes),
        }


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def select_constants(kind, epsilon, delta, M, N=2, **geom) -> BarrierCertificate:
    """Largest admissible barrier scale for the kind, plus feasibility.

    Selection rules:
      quadratic  c = epsilon, tightened to delta*N/(defect*R) when the
                 segment has a positive nonconvexity defect; needs
                 R >= 2*N*M/c.
      ring       c = epsilon*r0/(4*N*r1); needs
                 r_eps >= r0 + 2*sqrt(M*N*r1/(epsilon*r0)).
      intrinsic  c = min(delta*laplacian_bound, epsilon); needs
                 (c/laplacian_bound)*R >= M.

    Infeasibility is reported (with the violated inequality named), not
    clamped away.
    """
    if epsilon <= 0:
        raise BarrierError("constant selection needs epsilon > 0")
    if M < 0:
        raise BarrierError("the solution bound M must be nonnegative")

    if kind == "quadratic":
        R = float(geom["R"])
        defect = float(geom.get("nonconvexity", 0.0))
        if defect > 1e-14:
            if delta <= 0:
                raise BarrierError("a nonconvex segment needs delta > 0")
            c = min(epsilon, delta * N / (defect * R))
        else:
            c = epsilon
        constants = {
            "c": c, "R": R, "M": M, "epsilon": epsilon, "delta": delta,
            "nonconvexity": defect, "N": N,
        }
        need = 2.0 * N * M / c
        if R < need - 1e-12:
            return BarrierCertificate(
                kind, constants, False,
                violated=f"R >= 2*N*M/c (needs R >= {need:.6g}, have {R:.6g})",
            )
        return BarrierCertificate(kind, constants, True)

    if kind == "ring":
        r0, r1 = float(geom["r0"]), float(geom["r1"])
        r_eps = float(geom.get("r_eps", r1))
        c = epsilon * r0 / (4.0 * N * r1)
        c_sharp = 0.5 * epsilon / (1.0 + (N - 1.0) / r0 * (r_eps - r0))
        constants = {
            "c": c, "c_sharp_bound": c_sharp, "r0": r0, "r1": r1, "r_eps": r_eps,
            "M": M, "epsilon": epsilon, "delta": delta, "N": N,
        }
        cert = BarrierCertificate(kind, constants, True)
        cert.notes["recipe_within_sharp_bound"] = bool(c <= c_sharp + 1e-15)
        need = r0 + 2.0 * math.sqrt(M * N * r1 / (epsilon * r0))
        constants["r_eps_required"] = need
        if r_eps < need - 1e-12:
            cert.feasible = False
            cert.violated = (
                f"r_eps >= r0 + 2*sqrt(M*N*r1/(epsilon*r0)) "
                f"(needs r_eps >= {need:.6g}, have {r_eps:.6g})"
            )
        return cert

    if kind == "intrinsic":
        lap_bound = float(geom["laplacian_bound"])
        R = float(geom["R"])
        if delta <= 0:
            raise BarrierError("the intrinsic barrier needs delta > 0")
        if lap_bound <= 0:
            raise BarrierError("the intrinsic barrier needs a positive Laplacian bound")
        c = min(delta * lap_bound, epsilon)
        constants = {
            "c": c, "R": R, "M": M, "epsilon": epsilon, "delta": delta,
            "laplacian_bound": lap_bound, "N": N,
        }
        need = M * lap_bound / c
        if R < need - 1e-12:
            return BarrierCertificate(
                kind, constants, False,
                violated=f"(c/laplacian_bound)*R >= M (needs R >= {need:.6g}, have {R:.6g})",
            )
        return BarrierCertificate(kind, constants, True)

    raise BarrierError(f"unknown barrier kind '{kind}'")


# -- verification -----------------------------------------------------------------


def _quad_points(mesh):
    p = mesh.nodes[mesh.triangles]
    return np.concatenate(
        [0.5 * (p[:, 0] + p[:, 1]), 0.5 * (p[:, 1] + p[:, 2]), 0.5 * (p[:, 2] + p[:, 0])]
    )


def attach_quadratic(cert, frame: TubularFrame, x0, seg_lo=None, seg_hi=None):
    c, N, R = cert.constants["c"], cert.constants["N"], cert.constants["R"]
    cert.barrier = quadratic_barrier(x0, c, N)
    cert.region = BallRegion(x0, R)
    cert.frame = frame
    cert.x0 = tuple(np.asarray(x0, dtype=float))
    cert.notes["frame_tag"] = frame.tag
    cert.notes["segment_range"] = [
        float(seg_lo if seg_lo is not None else frame.t_lo),
        float(seg_hi if seg_hi is not None else frame.t_hi),
    ]
    return cert


def attach_ring(cert):
    cert.barrier = ring_barrier(cert.constants["r0"], cert.constants["c"], cert.constants["N"])
    cert.region = RadialBand(cert.constants["r0"], cert.constants["r_eps"])
    return cert


def attach_intrinsic(cert, metric: IntrinsicMetric):
    cert.barrier = intrinsic_barrier(metric, cert.constants["c"])
    cert.region = MetricBallRegion(metric, cert.constants["R"])
    cert.x0 = tuple(metric.x0)
    return cert


def verify_supersolution(cert: BarrierCertificate, mesh, alpha=0.0, density=400) -> dict:
    """Sample the three inequality families; pass iff all residuals >= -1e-10.

    interior: -lap(bar) + alpha*bar + epsilon >= 0 on region quadrature
    points; cap: bar - M >= 0 on the comparison boundary; flux:
    d(bar)/dnu + delta >= 0 on the segment samples.
    """
    if cert.barrier is None or cert.region is None:
        raise BarrierError("certificate has no attached barrier/region; attach_* first")
    eps = cert.constants["epsilon"]
    delta = cert.constants["delta"]
    M = cert.constants["M"]
    pts = _quad_points(mesh)
    pts = pts[cert.region.contains(pts)]

    if cert.kind == "quadratic":
        bar = cert.barrier
        interior = eps - bar.c + alpha * (float(np.min(bar.value(pts))) if pts.size else 0.0)
        cap = bar.c / (2.0 * bar.N) * cert.constants["R"] ** 2 - M
        frame = cert.frame
        if frame is None:
            raise BarrierError("quadratic certificate carries no frame")
        frame_lo, frame_hi = cert.notes["segment_range"]
        ts = np.linspace(frame_lo, frame_hi, density)
        seg_pts = frame.point(ts % frame.curve.period)
        keep = np.linalg.norm(seg_pts - cert.x0, axis=1) <= cert.constants["R"] + 1e-12
        flux_vals = bar.normal_flux(frame, ts[keep] % frame.curve.period)
        flux = float(np.min(flux_vals)) + delta if flux_vals.size else delta
    elif cert.kind == "ring":
        bar = cert.barrier
        if pts.size:
            interior = float(np.min(bar.neg_laplacian(pts) + alpha * bar.value(pts))) + eps
        else:
            interior = eps - 2.0 * bar.c * (
                1.0 + (bar.N - 1.0) / bar.r0 * (cert.constants["r_eps"] - bar.r0)
            )
        cap = bar.c * (cert.constants["r_eps"] - bar.r0) ** 2 - M
        # the barrier has a double root on the inner circle: exact zero flux there
        flux = delta + 0.0
    elif cert.kind == "intrinsic":
        bar = cert.barrier
        metric = bar.metric
        # judge on the same grid that calibrated the Laplacian bound: the
        # 10% margin covers grid-to-continuum, not grid-to-grid, gaps
        sample_pts, vals = metric.sample_points, metric.sample_values
        inside = vals <= cert.constants["R"] + 1e-12
        sample_pts = sample_pts[inside]
        if sample_pts.size:
            lap = bar.fd_laplacian(sample_pts)
            interior = eps - float(np.max(lap))
            if alpha:
                interior = float(
                    np.min(eps - lap + alpha * bar.value(sample_pts))
                )
        else:
            interior = eps
        cap = bar.scale * cert.constants["R"] - M
        flux = delta + bar.ray_flux()  # worst case: the inward ray at the base point
    else:
        raise BarrierError(f"no verification rule for kind '{cert.kind}'")

    cert.verification = {
        "interior": float(interior),
        "cap": float(cap),
        "flux": float(flux),
    }
    cert.passed = bool(all(v >= -VERIFY_TOL for v in cert.verification.values()))
    return cert.verification


def comparison_check(solution, cert: BarrierCertificate, mesh, tol=1e-8):
    """Nodewise domination u <= bar on the certificate's region.

    Returns (ok, worst_gap) with worst_gap = max(u - bar) over region
    nodes (negative means strict domination everywhere).
    """
    if cert.barrier is None or cert.region is None:
        raise BarrierError("certificate has no attached barrier/region")
    mask = cert.region.contains(mesh.nodes)
    if not np.any(mask):
        raise BarrierError("certificate region contains no mesh nodes")
    pts = mesh.nodes[mask]
    if cert.kind == "intrinsic":
        # the barrier value extends continuously by 0 at the base point
        d = np.linalg.norm(pts - cert.barrier.metric.x0, axis=1)
        vals = np.empty(pts.shape[0])
        at0 = d < 1e-14
        if np.any(~at0):
            vals[~at0] = cert.barrier.value(pts[~at0])
        vals[at0] = 0.0
    else:
        vals = cert.barrier.value(pts)
    gaps = solution.u[mask] - vals
    worst = float(np.max(gaps))
    return worst <= tol, worst


def measure_solution_bounds(solution, cert_region, mesh, cap_indicator):
    """Bounds fed to the constant selection.

    Returns (cap_bound, sup_bound): the positive part of the solution on
    the comparison cap (what the domination argument actually needs) and
    the global sup norm (the generic a-priori choice, reported alongside).
    """
    sup_bound = float(np.max(np.abs(solution.u)))
    cap_nodes = cap_indicator(mesh.nodes)
    if not np.any(cap_nodes):
        return 0.0, sup_bound
    cap_bound = float(max(0.0, np.max(solution.u[cap_nodes])))
    return cap_bound, sup_bound
