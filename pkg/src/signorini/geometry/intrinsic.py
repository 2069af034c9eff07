"""Intrinsic boundary distance and its collar extension.

The distance between boundary points is measured along the boundary
curve (polyline accumulation); it extends to the collar through
sqrt(s^2 + d^2).  The extension behaves like |x - x0| near the base
point up to two-sided ratio constants, and its Laplacian is bounded on
regions that stay away from the base point; both facts are quantified
here by sampling, since they feed the intrinsic barrier certificates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .meshing import TriMesh
from .tubular import CollarRegion, GeometryError, TubularFrame


@dataclass
class IntrinsicMetric:
    """Boundary distance to a base point and its collar extension."""

    frame: TubularFrame
    x0: np.ndarray
    t0: float
    d0_nodes: dict            # mesh node id -> boundary distance
    region: CollarRegion
    exclusion: float          # radius of the removed ball around x0
    lower_ratio: float        # c with c|x - x0| <= extension(x)
    upper_ratio: float        # C with extension(x) <= C|x - x0|
    laplacian_bound: float    # sampled sup of the extension's Laplacian, +10%
    fd_step: float
    sample_points: np.ndarray = None   # the calibration grid (base ball removed)
    sample_values: np.ndarray = None

    # -- evaluators -----------------------------------------------------------

    def boundary_distance(self, t):
        """Arc-length distance from the base point, along the segment."""
        L = self.frame.arc_length(np.asarray(t, dtype=float))
        L0 = self.frame.arc_length(self.t0)
        d = np.abs(L - L0)
        if self.frame.closed:
            d = np.minimum(d, self.frame.total_length() - d)
        return d

    def extension(self, x):
        """sqrt(s^2 + d0^2) at Cartesian points of the collar."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        t, s = self.frame.to_collar(np.atleast_2d(x))
        val = np.sqrt(np.atleast_1d(s) ** 2 + self.boundary_distance(t) ** 2)
        return float(val[0]) if single else val

    def fd_gradient(self, x, step=None):
        h = self.fd_step if step is None else step
        x = np.asarray(x, dtype=float)
        probes = np.array(
            [x + [h, 0], x - [h, 0], x + [0, h], x - [0, h]]
        )
        v = self.extension(probes)
        return np.array([(v[0] - v[1]) / (2 * h), (v[2] - v[3]) / (2 * h)])

    def fd_laplacian(self, x, step=None):
        h = self.fd_step if step is None else step
        x = np.atleast_2d(np.asarray(x, dtype=float))
        offsets = np.array([[h, 0], [-h, 0], [0, h], [0, -h]])
        acc = -4.0 * self.extension(x)
        for off in offsets:
            acc = acc + self.extension(x + off)
        out = acc / (h * h)
        return out if out.size > 1 else float(out[0])

    def ball_radius(self, cap=None):
        """Comparison radius: intrinsic reach to the segment ends, capped."""
        if self.frame.closed:
            reach = 0.5 * self.frame.total_length()
        else:
            ends = self.boundary_distance(
                np.array([self.frame.t_lo, self.frame.t_hi])
            )
            reach = float(np.min(ends))
        r = min(reach, self.region.width)
        return r if cap is None else min(r, cap)

    def sample_region(self, n_t=120, n_s=40):
        """Collar sample points with the base-point ball removed."""
        pts, _, _ = self.region.sample_grid(n_t, n_s)
        vals = self.extension(pts)
        keep = vals > self.exclusion
        return pts[keep], vals[keep]


def intrinsic_distance(
    frame: TubularFrame,
    x0,
    mesh: TriMesh,
    width=None,
    exclusion=None,
    n_t=160,
    n_s=48,
) -> IntrinsicMetric:
    """Build the intrinsic metric rooted at boundary point x0.

    Nodal distances come from the mesh boundary polyline of the frame's
    segment; ratio constants and the Laplacian bound are sampled on the
    collar with the base-point ball of radius ``exclusion`` removed (the
    extension is singular at x0, so the region must not contain it).
    """
    x0 = np.asarray(x0, dtype=float)
    t0, s0 = frame.to_collar(x0)
    if abs(s0) > 1e-8 * (1.0 + np.linalg.norm(x0)):
        raise GeometryError(f"base point {x0.tolist()} is not on segment '{frame.tag}'")
    if not frame.closed:
        span = frame.t_hi - frame.t_lo
        if ((t0 - frame.t_lo) % frame.curve.period) > span + 1e-9:
            raise GeometryError(
                f"base point {x0.tolist()} projects outside segment '{frame.tag}'"
            )

    if width is None:
        width = 0.9 * frame.rho_max
    if exclusion is None:
        exclusion = width / 20.0
    if exclusion <= 0.0:
        raise GeometryError("the sampling region must exclude the base point")
    region = CollarRegion(frame, width)

    metric = IntrinsicMetric(
        frame=frame,
        x0=x0,
        t0=t0,
        d0_nodes={},
        region=region,
        exclusion=exclusion,
        lower_ratio=np.nan,
        upper_ratio=np.nan,
        laplacian_bound=np.nan,
        fd_step=mesh.h / 4.0,
    )

    # nodal distances along the segment polyline
    d0 = {}
    seg_nodes = [
        nid
        for nid, (curve_name, t) in mesh.boundary_params.items()
        if _on_frame(frame, mesh, nid)
    ]
    for nid in seg_nodes:
        t = mesh.boundary_params[nid][1]
        d0[nid] = float(metric.boundary_distance(t))
    metric.d0_nodes = d0

    # sampled two-sided ratio constants and Laplacian bound
    pts, vals = metric.sample_region(n_t, n_s)
    if pts.shape[0] == 0:
        raise GeometryError("sampling region is empty after removing the base ball")
    radii = np.linalg.norm(pts - x0, axis=1)
    m, M = float(vals.min()), float(vals.max())
    l, L = float(radii.min()), float(radii.max())
    metric.lower_ratio = m / L
    metric.upper_ratio = M / l
    lap = metric.fd_laplacian(pts)
    metric.laplacian_bound = 1.1 * float(np.max(lap))
    metric.sample_points = pts
    metric.sample_values = vals
    return metric


def _on_frame(frame, mesh, nid):
    curve_name, t = mesh.boundary_params[nid]
    if frame.closed:
        # same curve? project the node; it must sit on the frame's curve
        p = mesh.nodes[nid]
        _, s = frame.to_collar(p)
        return abs(s) < 1e-9 * (1.0 + np.linalg.norm(p))
    span = frame.t_hi - frame.t_lo
    p = mesh.nodes[nid]
    tt, s = frame.to_collar(p)
    on_curve = abs(s) < 1e-9 * (1.0 + np.linalg.norm(p))
    return on_curve and ((tt - frame.t_lo) % frame.curve.period) <= span + 1e-9
