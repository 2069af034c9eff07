"""Collar (tubular) coordinates along smooth boundary curves.

A frame maps between Cartesian points and coordinates (t, s), where t
parametrizes the boundary curve and s is the signed offset along the
outward unit normal: x = xi(t) + s * nu(t), s < 0 inside the domain.
The frame also provides the signed curvature of the boundary and of its
offset curves, which drives every curvature-dependent bound downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import TWO_PI, DomainDescriptor
from .meshing import star_radius


class GeometryError(ValueError):
    """Raised for requests outside a frame's validity."""


class _Curve:
    """Analytic closed curve, parametrized counter-clockwise.

    ``curvature`` follows the domain convention (positive where the
    boundary is convex seen from inside the domain); ``ccw_curvature``
    is the geometric signed curvature of the CCW parametrization, used
    by the projection Newton iteration.
    """

    period = TWO_PI

    def point(self, t):
        raise NotImplementedError

    def normal(self, t):
        raise NotImplementedError

    def curvature(self, t):
        raise NotImplementedError

    def ccw_curvature(self, t):
        raise NotImplementedError

    def unit_tangent(self, t):
        raise NotImplementedError

    def speed(self, t):
        raise NotImplementedError


class _CircleCurve(_Curve):
    def __init__(self, radius, outward_sign):
        self.radius = radius
        self.outward_sign = outward_sign  # +1: domain inside, -1: domain outside

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack(
            [self.radius * np.cos(t), self.radius * np.sin(t)], axis=-1
        )

    def normal(self, t):
        t = np.asarray(t, dtype=float)
        return self.outward_sign * np.stack([np.cos(t), np.sin(t)], axis=-1)

    def curvature(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.outward_sign / self.radius)

    def ccw_curvature(self, t):
        return np.full_like(np.asarray(t, dtype=float), 1.0 / self.radius)

    def unit_tangent(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([-np.sin(t), np.cos(t)], axis=-1)

    def speed(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.radius)

    def project(self, pts):
        """Closed-form foot point: angles and signed offsets."""
        t = np.arctan2(pts[:, 1], pts[:, 0]) % TWO_PI
        r = np.linalg.norm(pts, axis=1)
        return t, self.outward_sign * (r - self.radius)


class _StarCurve(_Curve):
    def __init__(self, dd):
        self.dd = dd
        self.a = dd.parameters["base_radius"]
        self.b = dd.parameters["amplitude"]
        self.k = dd.parameters["spikes"]

    def _r(self, t):
        return star_radius(self.dd, t)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        r = self._r(t)
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)

    def _derivs(self, t):
        t = np.asarray(t, dtype=float)
        r = self._r(t)
        rp = -self.b * self.k * np.sin(self.k * t)
        rpp = -self.b * self.k * self.k * np.cos(self.k * t)
        return r, rp, rpp

    def speed(self, t):
        r, rp, _ = self._derivs(t)
        return np.sqrt(r * r + rp * rp)

    def unit_tangent(self, t):
        t = np.asarray(t, dtype=float)
        r, rp, _ = self._derivs(t)
        tx = rp * np.cos(t) - r * np.sin(t)
        ty = rp * np.sin(t) + r * np.cos(t)
        sp = np.sqrt(tx * tx + ty * ty)
        return np.stack([tx / sp, ty / sp], axis=-1)

    def normal(self, t):
        tang = self.unit_tangent(t)
        # CCW tangent rotated -90 deg points outward
        return np.stack([tang[..., 1], -tang[..., 0]], axis=-1)

    def curvature(self, t):
        r, rp, rpp = self._derivs(t)
        return (r * r + 2.0 * rp * rp - r * rpp) / (r * r + rp * rp) ** 1.5

    ccw_curvature = curvature


@dataclass
class TubularFrame:
    """Offset coordinates on one tagged boundary segment."""

    tag: str
    curve: _Curve
    t_lo: float
    t_hi: float
    rho_max: float
    closed: bool

    def __post_init__(self):
        n = 4096
        period = self.curve.period
        # anchor the arc-length table mid-complement so the segment never
        # straddles the table's wrap point
        if self.closed:
            self._t_base = self.t_lo
        else:
            self._t_base = self.t_lo - 0.5 * (period - (self.t_hi - self.t_lo))
        self._ts = np.linspace(self._t_base, self._t_base + period, n + 1)
        pts = self.curve.point(self._ts)
        seglen = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        self._arclen = np.concatenate([[0.0], np.cumsum(seglen)])
        self._pts = pts
        self._seed_ts = self._ts[::8][:-1]  # coarse grid seeding the projection Newton
        self._seed_pts = self.curve.point(self._seed_ts)

    # -- parametrization ------------------------------------------------------

    def point(self, t):
        return self.curve.point(t)

    def normal(self, t):
        return self.curve.normal(t)

    def curvature(self, t):
        return self.curve.curvature(t)

    def offset_curvature(self, t, s):
        """Signed curvature of the offset curve at depth s (kappa/(1+s*kappa))."""
        k = self.curve.curvature(t)
        denom = 1.0 + s * k
        if np.any(denom <= 0):
            raise GeometryError("offset depth beyond the focal distance")
        return k / denom

    def arc_length(self, t):
        """Cumulative arc length from the table anchor, by dense polyline table."""
        period = self.curve.period
        t = self._t_base + (np.asarray(t, dtype=float) - self._t_base) % period
        return np.interp(t, self._ts, self._arclen)

    def total_length(self):
        return float(self._arclen[-1])

    def from_collar(self, t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        return self.point(t) + s[..., None] * self.normal(t)

    def to_collar(self, x):
        """Invert x = xi(t) + s*nu(t).  Closed form for circles, else Newton."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = np.atleast_2d(x)
        if hasattr(self.curve, "project"):
            t, s = self.curve.project(pts)
            if single:
                return float(t[0]), float(s[0])
            return t, s
        d2 = ((pts[:, None, :] - self._seed_pts[None, :, :]) ** 2).sum(axis=2)
        t = self._seed_ts[np.argmin(d2, axis=1)]
        for _ in range(60):
            p = self.curve.point(t)
            sp = self.curve.speed(t)
            tang = self.curve.unit_tangent(t)
            left = np.stack([-tang[:, 1], tang[:, 0]], axis=-1)
            resid = ((pts - p) * tang).sum(axis=1)
            w = ((pts - p) * left).sum(axis=1)
            slope = -sp * (1.0 - self.curve.ccw_curvature(t) * w)
            step = np.where(np.abs(slope) > 1e-30, -resid / slope, 0.0)
            step = np.clip(step, -0.2, 0.2)
            t = t + step
            if np.max(np.abs(resid)) < 1e-14:
                break
        t = t % self.curve.period
        p = self.curve.point(t)
        nrm = self.curve.normal(t)
        s = ((pts - p) * nrm).sum(axis=1)
        if single:
            return float(t[0]), float(s[0])
        return t, s

    def contains_param(self, t):
        t = np.asarray(t, dtype=float)
        if self.closed:
            return np.ones(t.shape, dtype=bool)
        width = self.t_hi - self.t_lo
        return ((t - self.t_lo) % self.curve.period) <= width + 1e-12

    def segment_params(self, n):
        """n parameters spanning the tagged segment (inclusive endpoints)."""
        return np.linspace(self.t_lo, self.t_hi, n) % self.curve.period


@dataclass
class CollarRegion:
    """Inner semi-neighborhood of (part of) a frame's segment."""

    frame: TubularFrame
    width: float
    t_lo: float = None
    t_hi: float = None

    def __post_init__(self):
        if self.t_lo is None:
            self.t_lo = self.frame.t_lo
        if self.t_hi is None:
            self.t_hi = self.frame.t_hi
        if not (0.0 < self.width <= self.frame.rho_max):
            raise GeometryError(
                f"collar width {self.width} outside (0, rho_max={self.frame.rho_max:.6g}]"
            )

    def contains(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        t, s = self.frame.to_collar(x)
        t = np.atleast_1d(t)
        s = np.atleast_1d(s)
        span = self.t_hi - self.t_lo
        in_t = ((t - self.t_lo) % self.frame.curve.period) <= span + 1e-12
        return in_t & (s > -self.width - 1e-12) & (s <= 1e-9)

    def sample_grid(self, n_t, n_s):
        """Interior sample points on a (t, s) product grid."""
        ts = np.linspace(self.t_lo, self.t_hi, n_t) % self.frame.curve.period
        ss = np.linspace(-self.width, 0.0, n_s + 1)[:-1] + (
            self.width / n_s
        ) * 0.5  # cell centers, strictly inside
        T, S = np.meshgrid(ts, ss, indexing="ij")
        pts = self.frame.from_collar(T.ravel(), S.ravel())
        return pts, T.ravel(), S.ravel()

    def boundary_params(self, n):
        return np.linspace(self.t_lo, self.t_hi, n) % self.frame.curve.period


class RadialBand:
    """Annular region r_lo < |x| < r_hi; the balance region of ring scenarios."""

    def __init__(self, r_lo, r_hi):
        if not (0.0 <= r_lo < r_hi):
            raise GeometryError(f"invalid radial band [{r_lo}, {r_hi}]")
        self.r_lo = r_lo
        self.r_hi = r_hi

    def contains(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        r = np.linalg.norm(x, axis=1)
        return (r > self.r_lo - 1e-12) & (r < self.r_hi + 1e-12)


def tubular_frame(dd: DomainDescriptor, tag: str) -> TubularFrame:
    """Build the collar frame for one tagged boundary segment.

    Only smooth (C^2) boundaries qualify; polygon segments carry corners
    and are rejected.
    """
    seg = dd.segment(tag)
    if dd.kind == "polygon":
        raise GeometryError(
            f"segment '{tag}' lies on a polygon; collar frames need a C^2 boundary"
        )
    if dd.kind == "ring":
        if seg.curve == "inner":
            curve = _CircleCurve(dd.parameters["r_inner"], outward_sign=-1.0)
        else:
            curve = _CircleCurve(dd.parameters["r_outer"], outward_sign=+1.0)
        clearance = dd.parameters["r_outer"] - dd.parameters["r_inner"]
    elif dd.kind == "disk":
        curve = _CircleCurve(dd.parameters["radius"], outward_sign=+1.0)
        clearance = dd.parameters["radius"]
    elif dd.kind == "star":
        curve = _StarCurve(dd)
        clearance = dd.parameters["base_radius"] - dd.parameters["amplitude"]
    else:
        raise GeometryError(f"no collar frame for domain kind '{dd.kind}'")

    ts = np.linspace(0.0, curve.period, 8192, endpoint=False)
    sup_k = float(np.max(np.abs(curve.curvature(ts))))
    rho = clearance if sup_k == 0.0 else min(clearance, 0.999 / sup_k)
    closed = abs(seg.length() - dd.curve_period(seg.curve)) < 1e-12
    return TubularFrame(
        tag=tag, curve=curve, t_lo=seg.lo, t_hi=seg.hi, rho_max=rho, closed=closed
    )


def nonconvexity_defect(frame: TubularFrame, region: CollarRegion, density: int) -> float:
    """Worst-case cosine defect of the segment over pairs within the collar reach.

    For base and probe points x0, xi on the segment with |xi - x0| no
    larger than the collar width, measures how negative
    cos(xi - x0, nu(xi)) can get.  Zero for convex segments; positive
    where the boundary bends away from the domain.
    """
    if density < 2:
        raise GeometryError("need at least 2 boundary samples for the cosine defect")
    ts = region.boundary_params(density)
    pts = frame.point(ts)
    nus = frame.normal(ts)
    worst = np.inf
    any_valid = False
    chunk = max(1, int(2e6 // density))
    for lo in range(0, density, chunk):
        base = pts[lo : lo + chunk]
        diff = pts[None, :, :] - base[:, None, :]  # diff[i, j] = xi_j - x0_i
        dist = np.linalg.norm(diff, axis=2)
        valid = (dist > 1e-12) & (dist <= region.width + 1e-12)
        if not np.any(valid):
            continue
        any_valid = True
        cosang = np.einsum("ijk,jk->ij", diff, nus) / np.where(dist > 1e-12, dist, 1.0)
        worst = min(worst, float(np.min(cosang[valid])))
    if not any_valid:
        raise GeometryError("empty sample set: no boundary pairs within the collar reach")
    return max(0.0, -worst)
