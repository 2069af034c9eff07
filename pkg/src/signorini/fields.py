"""Scalar data fields and the obstacle machinery built on top of them.

A ScalarField packages a vectorized point evaluator with optional
analytic gradient/Laplacian evaluators.  Fields come from the expression
grammar (see expressions.py), from a small named catalog, or from raw
callables.  The module also constructs the nonnegative collar extension
of a boundary obstacle and certifies the interior/boundary balance
margins used by the location certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expressions as ex
from .geometry.tubular import TubularFrame


class FieldError(ValueError):
    pass


class ObstacleError(ValueError):
    pass


class ScalarField:
    """A scalar function of 2D points, with optional analytic derivatives."""

    def __init__(self, evaluate, source, gradient=None, laplacian=None):
        self._evaluate = evaluate
        self._gradient = gradient
        self._laplacian = laplacian
        self.source = source

    def __repr__(self):
        return f"ScalarField({self.source!r})"

    def __call__(self, points):
        return self._evaluate(np.atleast_2d(np.asarray(points, dtype=float)))

    @property
    def has_gradient(self):
        return self._gradient is not None

    @property
    def has_laplacian(self):
        return self._laplacian is not None

    def gradient(self, points):
        if self._gradient is None:
            raise FieldError(f"field {self.source!r} has no analytic gradient")
        return self._gradient(np.atleast_2d(np.asarray(points, dtype=float)))

    def laplacian(self, points):
        if self._laplacian is None:
            raise FieldError(f"field {self.source!r} has no analytic Laplacian")
        return self._laplacian(np.atleast_2d(np.asarray(points, dtype=float)))


def parse_field(text: str) -> ScalarField:
    """Compile an expression string into a ScalarField.

    Analytic derivatives are attached whenever the expression stays in
    the smooth sub-language (no abs/min/max, constant exponents).
    """
    tree = ex.parse(text)

    def evaluate(pts):
        return ex.evaluate(tree, pts)

    gradient = laplacian = None
    dx = ex.differentiate(tree, "x")
    dy = ex.differentiate(tree, "y")
    if dx is not None and dy is not None:

        def gradient(pts, _dx=dx, _dy=dy):
            return np.column_stack([ex.evaluate(_dx, pts), ex.evaluate(_dy, pts)])

        dxx = ex.differentiate(dx, "x")
        dyy = ex.differentiate(dy, "y")
        if dxx is not None and dyy is not None:

            def laplacian(pts, _dxx=dxx, _dyy=dyy):
                return ex.evaluate(_dxx, pts) + ex.evaluate(_dyy, pts)

    return ScalarField(evaluate, text, gradient, laplacian)


def constant_field(value: float) -> ScalarField:
    value = float(value)
    return ScalarField(
        lambda pts: np.full(pts.shape[0], value),
        f"constant({value})",
        gradient=lambda pts: np.zeros_like(pts),
        laplacian=lambda pts: np.zeros(pts.shape[0]),
    )


def catalog_field(name: str, **params) -> ScalarField:
    """Named stock fields: constant, radial-step, gaussian-bump."""
    if name == "constant":
        return constant_field(params["value"])
    if name == "radial-step":
        r0 = float(params["radius"])
        inner = float(params["inside"])
        outer = float(params["outside"])

        def evaluate(pts):
            r = np.hypot(pts[:, 0], pts[:, 1])
            return np.where(r < r0, inner, outer)

        return ScalarField(evaluate, f"radial-step(r={r0}, {inner}|{outer})")
    if name == "gaussian-bump":
        amp = float(params["amplitude"])
        cx, cy = map(float, params.get("center", (0.0, 0.0)))
        w = float(params["width"])

        def evaluate(pts):
            q = ((pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2) / (w * w)
            return amp * np.exp(-q)

        def gradient(pts):
            d = pts - [cx, cy]
            q = (d ** 2).sum(axis=1) / (w * w)
            return (-2.0 * amp / (w * w)) * d * np.exp(-q)[:, None]

        def laplacian(pts):
            d2 = ((pts - [cx, cy]) ** 2).sum(axis=1)
            q = d2 / (w * w)
            return (amp * np.exp(-q) / (w * w)) * (4.0 * d2 / (w * w) - 4.0)

        return ScalarField(evaluate, f"gaussian-bump({amp}, w={w})", gradient, laplacian)
    raise FieldError(f"unknown catalog field '{name}'")


def field_from_callable(fn, source, gradient=None, laplacian=None) -> ScalarField:
    return ScalarField(fn, source, gradient, laplacian)


# -- obstacle extension ---------------------------------------------------------


def _quintic_step(u):
    """C^2 step on [0, 1]: 0 at 0, 1 at 1, flat to second order at both ends."""
    u = np.clip(u, 0.0, 1.0)
    return u ** 3 * (10.0 + u * (-15.0 + 6.0 * u))


def _quintic_step_d2(u):
    u = np.asarray(u, dtype=float)
    inside = (u > 0.0) & (u < 1.0)
    val = 60.0 * u - 180.0 * u ** 2 + 120.0 * u ** 3
    return np.where(inside, val, 0.0)


@dataclass
class ObstacleExtension:
    """Collar extension psi(xi) * eta(s) of a boundary obstacle.

    The cutoff eta is the quintic step in s: eta(0) = 1 with
    eta'(0) = 0 (so the extension does not perturb the boundary flux)
    and eta = eta' = eta'' = 0 at depth -width.
    """

    psi: ScalarField
    frame: TubularFrame
    width: float
    fd_step: float

    def cutoff(self, s):
        return _quintic_step(1.0 + np.asarray(s, dtype=float) / self.width)

    def cutoff_d2(self, s):
        return _quintic_step_d2(1.0 + np.asarray(s, dtype=float) / self.width) / (
            self.width ** 2
        )

    def value(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        t, s = self.frame.to_collar(pts)
        t = np.atleast_1d(t)
        s = np.atleast_1d(s)
        on_curve = self.psi(self.frame.point(t))
        out = np.where(s >= -self.width, on_curve * self.cutoff(np.minimum(s, 0.0)), 0.0)
        return out

    def boundary_values(self, t):
        return self.psi(self.frame.point(np.asarray(t, dtype=float)))

    def normal_derivative(self, t):
        """d/ds of psi(xi) eta(s) at s = 0; identically zero by the cutoff."""
        t = np.asarray(t, dtype=float)
        return np.zeros(t.shape)

    def fd_laplacian(self, points, step=None):
        h = self.fd_step if step is None else step
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        acc = -4.0 * self.value(pts)
        for off in ([h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]):
            acc = acc + self.value(pts + off)
        return acc / (h * h)


class ZeroExtension:
    """Extension of the zero obstacle; avoids needing a collar frame."""

    width = np.inf

    def value(self, points):
        return np.zeros(np.atleast_2d(points).shape[0])

    def boundary_values(self, t):
        return np.zeros(np.atleast_1d(t).shape)

    def normal_derivative(self, t):
        return np.zeros(np.atleast_1d(t).shape)

    def fd_laplacian(self, points, step=None):
        return np.zeros(np.atleast_2d(points).shape[0])


def extend_obstacle(psi: ScalarField, frame: TubularFrame, width: float,
                    fd_step=None, samples=501) -> ObstacleExtension:
    """Extend a nonnegative boundary obstacle into the collar.

    Rejects obstacles that sample negative on the segment: the location
    theory presumes a nonnegative extension exists.
    """
    if not (0.0 < width <= frame.rho_max):
        raise ObstacleError(
            f"extension width {width} outside (0, rho_max={frame.rho_max:.6g}]"
        )
    ts = frame.segment_params(samples)
    vals = psi(frame.point(ts))
    worst = int(np.argmin(vals))
    if vals[worst] < -1e-12:
        pt = frame.point(ts[worst])
        raise ObstacleError(
            f"obstacle is negative ({vals[worst]:.3e}) at boundary point "
            f"({pt[0]:.6g}, {pt[1]:.6g}); a nonnegative extension needs psi >= 0"
        )
    if fd_step is None:
        fd_step = width / 50.0
    return ObstacleExtension(psi=psi, frame=frame, width=width, fd_step=fd_step)


# -- balance --------------------------------------------------------------------


@dataclass
class BalanceData:
    """Interior/boundary balance margins of the shifted data.

    interior_margin m_i means  f + lap(Psi) - alpha Psi <= -m_i  on the
    sampled region; boundary_margin m_b means  g - dPsi/dnu <= -m_b  on
    the segment nodes.  The check passes when the requested (epsilon,
    delta) do not exceed the achieved margins.
    """

    epsilon: float
    delta: float
    interior_margin: float
    boundary_margin: float
    interior_passes: bool
    boundary_passes: bool
    worst_interior_point: tuple
    worst_boundary_point: tuple
    n_interior_samples: int
    n_boundary_samples: int
    alpha: float = 0.0

    @property
    def passes(self):
        return self.interior_passes and self.boundary_passes

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "interior_margin": self.interior_margin,
            "boundary_margin": self.boundary_margin,
            "interior_passes": self.interior_passes,
            "boundary_passes": self.boundary_passes,
            "worst_interior_point": [float(v) for v in self.worst_interior_point],
            "worst_boundary_point": [float(v) for v in self.worst_boundary_point],
            "n_interior_samples": self.n_interior_samples,
            "n_boundary_samples": self.n_boundary_samples,
            "alpha": self.alpha,
        }


def shifted_interior_field(f: ScalarField, ext, alpha=0.0) -> ScalarField:
    """f + lap(Psi) - alpha * Psi, as an evaluable field."""

    def evaluate(pts):
        out = f(pts) + ext.fd_laplacian(pts)
        if alpha > 0.0:
            out = out - alpha * ext.value(pts)
        return out

    return field_from_callable(evaluate, f"shifted({f.source})")


def check_balance(
    f: ScalarField,
    g: ScalarField,
    ext,
    region,
    mesh,
    segment_tag: str,
    epsilon: float,
    delta: float,
    alpha: float = 0.0,
) -> BalanceData:
    """Sample the shifted data margins over a region and a boundary segment.

    Interior samples are the mid-edge quadrature points of mesh elements
    that intersect the region; boundary samples are the segment's nodes.
    Failure is reported, not raised.
    """
    pts = _quad_points(mesh)
    mask = region.contains(pts)
    pts = pts[mask]
    f_shift = shifted_interior_field(f, ext, alpha)
    fvals = f_shift(pts)
    iworst = int(np.argmax(fvals)) if fvals.size else -1
    interior_margin = float(-np.max(fvals)) if fvals.size else np.inf
    worst_ipt = tuple(pts[iworst]) if fvals.size else (np.nan, np.nan)

    node_ids = mesh.nodes_of_tag(segment_tag)
    bpts = mesh.nodes[node_ids]
    if isinstance(ext, ZeroExtension):
        dpsi = np.zeros(len(node_ids))
    else:
        t, _ = ext.frame.to_collar(bpts)
        dpsi = ext.normal_derivative(t)
    gvals = g(bpts) - dpsi
    bworst = int(np.argmax(gvals))
    boundary_margin = float(-np.max(gvals))
    worst_bpt = tuple(bpts[bworst])

    tol = 1e-12
    return BalanceData(
        epsilon=epsilon,
        delta=delta,
        interior_margin=interior_margin,
        boundary_margin=boundary_margin,
        interior_passes=bool(interior_margin >= epsilon - tol),
        boundary_passes=bool(boundary_margin >= delta - tol),
        worst_interior_point=worst_ipt,
        worst_boundary_point=worst_bpt,
        n_interior_samples=int(fvals.size),
        n_boundary_samples=int(len(node_ids)),
        alpha=alpha,
    )


def _quad_points(mesh):
    """Mid-edge quadrature points of every triangle, stacked."""
    p = mesh.nodes[mesh.triangles]
    mids = np.concatenate(
        [
            0.5 * (p[:, 0] + p[:, 1]),
            0.5 * (p[:, 1] + p[:, 2]),
            0.5 * (p[:, 2] + p[:, 0]),
        ]
    )
    return mids
