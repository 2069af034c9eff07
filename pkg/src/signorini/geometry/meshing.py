"""Triangle mesh generation for the supported domain families.

Ring, disk and star domains get structured polar meshes (near-right
triangles, which keeps the stiffness matrix an M-matrix and the discrete
comparison principle valid).  Polygons are meshed with Delaunay over
boundary + interior grid points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay

from .domains import TWO_PI, DomainDescriptor, DomainError


class MeshError(ValueError):
    """Raised for invalid meshes or mesh requests."""


@dataclass
class TriMesh:
    """2D simplicial mesh with tagged boundary edges.

    nodes          : (n, 2) float array
    triangles      : (m, 3) int array, counter-clockwise
    boundary_edges : (k, 2) int array, oriented with the domain on the left
    edge_tags      : length-k list of segment tags
    node_tags      : dict tag -> sorted int array of boundary node ids
    h              : max edge length over all triangles
    """

    nodes: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    edge_tags: list
    node_tags: dict
    h: float
    descriptor: DomainDescriptor = None
    boundary_params: dict = field(default_factory=dict)  # node id -> (curve, t)

    def __post_init__(self):
        self.nodes = np.ascontiguousarray(self.nodes, dtype=float)
        self.triangles = np.ascontiguousarray(self.triangles, dtype=np.int64)
        self.boundary_edges = np.ascontiguousarray(self.boundary_edges, dtype=np.int64)
        areas = self.triangle_areas()
        if areas.size and areas.min() <= 1e-14:
            raise MeshError(f"non-positive triangle area {areas.min():.3e}")
        for arr in (self.nodes, self.triangles, self.boundary_edges):
            arr.setflags(write=False)

    # -- basic measures ------------------------------------------------------

    def triangle_areas(self):
        p = self.nodes[self.triangles]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def area(self):
        return float(self.triangle_areas().sum())

    def num_edges(self):
        e = np.vstack(
            [self.triangles[:, [0, 1]], self.triangles[:, [1, 2]], self.triangles[:, [2, 0]]]
        )
        e.sort(axis=1)
        return np.unique(e, axis=0).shape[0]

    def euler_characteristic(self):
        return self.nodes.shape[0] - self.num_edges() + self.triangles.shape[0]

    def boundary_edge_lengths(self):
        p = self.nodes[self.boundary_edges]
        return np.linalg.norm(p[:, 1] - p[:, 0], axis=1)

    def outward_edge_normals(self):
        """Unit normals per boundary edge, pointing out of the domain."""
        p = self.nodes[self.boundary_edges]
        t = p[:, 1] - p[:, 0]
        n = np.column_stack([t[:, 1], -t[:, 0]])
        return n / np.linalg.norm(n, axis=1)[:, None]

    def edges_of_tag(self, tag):
        idx = [i for i, t in enumerate(self.edge_tags) if t == tag]
        if not idx:
            raise MeshError(f"mesh has no boundary edges tagged '{tag}'")
        return np.array(idx, dtype=np.int64)

    def nodes_of_tag(self, tag):
        if tag not in self.node_tags:
            raise MeshError(f"mesh has no boundary nodes tagged '{tag}'")
        return self.node_tags[tag]

    def boundary_lumped_lengths(self):
        """Per-node measure: half the length of the adjacent boundary edges."""
        ell = np.zeros(self.nodes.shape[0])
        lengths = self.boundary_edge_lengths()
        for (a, b), L in zip(self.boundary_edges, lengths):
            ell[a] += 0.5 * L
            ell[b] += 0.5 * L
        return ell

    def export_text(self, path):
        """Plain-text dump: node lines "x y", blank line, triangle lines "i j k"."""
        with open(path, "w") as fh:
            for x, y in self.nodes:
                fh.write(f"{x!r} {y!r}\n")
            fh.write("\n")
            for i, j, k in self.triangles:
                fh.write(f"{i} {j} {k}\n")


# -- structured polar meshing ------------------------------------------------


def _polar_nodes(radii_of, n_theta, rings, with_center):
    """Nodes on concentric rings; radius may depend on the angle."""
    thetas = TWO_PI * np.arange(n_theta) / n_theta
    pts = []
    params = []
    if with_center:
        pts.append((0.0, 0.0))
        params.append(None)
    for r_frac in rings:
        for th in thetas:
            r = radii_of(th) * r_frac if with_center else radii_of(th, r_frac)
            pts.append((r * math.cos(th), r * math.sin(th)))
            params.append(th)
    return np.array(pts), params, thetas


def _quad_strip_triangles(row0, row1, n_theta):
    """Split the quad strip between two node rows into CCW triangle pairs."""
    tris = []
    for j in range(n_theta):
        jn = (j + 1) % n_theta
        a, b = row0 + j, row0 + jn
        c, d = row1 + jn, row1 + j
        tris.append((a, b, c))
        tris.append((a, c, d))
    return tris


def _orient_ccw(nodes, tris):
    tris = np.asarray(tris, dtype=np.int64)
    p = nodes[tris]
    det = (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1]) - (
        p[:, 1, 1] - p[:, 0, 1]
    ) * (p[:, 2, 0] - p[:, 0, 0])
    flip = det < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]
    return tris


def _tag_circle_boundary(dd, curve, node_ids, thetas, reverse=False):
    """Boundary edges along one node circle, domain kept on the left."""
    n = len(node_ids)
    edges, tags, nparams = [], [], {}
    order = range(n)
    for j in order:
        jn = (j + 1) % n
        a, b = (node_ids[jn], node_ids[j]) if reverse else (node_ids[j], node_ids[jn])
        mid = (thetas[j] + (thetas[jn] if jn != 0 else TWO_PI)) / 2.0
        edges.append((a, b))
        tags.append(dd.tag_of(curve, mid % TWO_PI))
    for j in order:
        nparams[node_ids[j]] = (curve, thetas[j])
    return edges, tags, nparams


def _finish_mesh(dd, nodes, tris, edges, tags, nparams):
    tris = _orient_ccw(nodes, tris)
    edge_arr = np.array(edges, dtype=np.int64)
    node_tags = {}
    for nid, (curve, t) in nparams.items():
        tag = dd.tag_of(curve, t % dd.curve_period(curve))
        node_tags.setdefault(tag, []).append(nid)
    node_tags = {k: np.array(sorted(v), dtype=np.int64) for k, v in node_tags.items()}
    p = nodes[tris]
    span = np.maximum(
        np.linalg.norm(p[:, 1] - p[:, 0], axis=1),
        np.maximum(
            np.linalg.norm(p[:, 2] - p[:, 1], axis=1),
            np.linalg.norm(p[:, 0] - p[:, 2], axis=1),
        ),
    )
    return TriMesh(
        nodes=nodes,
        triangles=tris,
        boundary_edges=edge_arr,
        edge_tags=tags,
        node_tags=node_tags,
        h=float(span.max()),
        descriptor=dd,
        boundary_params=nparams,
    )


def _ring_mesh(dd, resolution):
    r0 = dd.parameters["r_inner"]
    r1 = dd.parameters["r_outer"]
    n_theta = resolution
    n_layers = max(2, round(resolution * (r1 - r0) / (math.pi * (r0 + r1))))
    radii = np.linspace(r0, r1, n_layers + 1)
    thetas = TWO_PI * np.arange(n_theta) / n_theta
    pts = [
        (r * math.cos(th), r * math.sin(th)) for r in radii for th in thetas
    ]
    nodes = np.array(pts)
    tris = []
    for i in range(n_layers):
        tris.extend(_quad_strip_triangles(i * n_theta, (i + 1) * n_theta, n_theta))
    inner_ids = list(range(n_theta))
    outer_ids = list(range(n_layers * n_theta, (n_layers + 1) * n_theta))
    e0, t0, p0 = _tag_circle_boundary(dd, "inner", inner_ids, thetas, reverse=True)
    e1, t1, p1 = _tag_circle_boundary(dd, "outer", outer_ids, thetas, reverse=False)
    return _finish_mesh(dd, nodes, tris, e0 + e1, t0 + t1, {**p0, **p1})


def _disk_like_mesh(dd, resolution, radius_of):
    n_theta = resolution
    n_layers = max(2, round(resolution / 4))
    thetas = TWO_PI * np.arange(n_theta) / n_theta
    pts = [(0.0, 0.0)]
    for i in range(1, n_layers + 1):
        frac = i / n_layers
        for th in thetas:
            r = radius_of(th) * frac
            pts.append((r * math.cos(th), r * math.sin(th)))
    nodes = np.array(pts)
    tris = []
    for j in range(n_theta):  # center fan
        jn = (j + 1) % n_theta
        tris.append((0, 1 + j, 1 + jn))
    for i in range(1, n_layers):
        tris.extend(
            _quad_strip_triangles(1 + (i - 1) * n_theta, 1 + i * n_theta, n_theta)
        )
    rim_ids = list(range(1 + (n_layers - 1) * n_theta, 1 + n_layers * n_theta))
    e, t, p = _tag_circle_boundary(dd, "boundary", rim_ids, thetas, reverse=False)
    return _finish_mesh(dd, nodes, tris, e, t, p)


def star_radius(dd, theta):
    a = dd.parameters["base_radius"]
    b = dd.parameters["amplitude"]
    k = dd.parameters["spikes"]
    return a + b * np.cos(k * np.asarray(theta))


def _polygon_mesh(dd, resolution):
    verts = np.array(dd.parameters["vertices"], dtype=float)
    if _signed_area_np(verts) < 0:
        verts = verts[::-1]
    n_edges = len(verts)
    diam = max(np.ptp(verts[:, 0]), np.ptp(verts[:, 1]))
    target = diam / resolution

    bpts, bparams = [], []
    for i in range(n_edges):
        a, b = verts[i], verts[(i + 1) % n_edges]
        m = max(1, int(math.ceil(np.linalg.norm(b - a) / target)))
        for j in range(m):
            frac = j / m
            bpts.append(a + frac * (b - a))
            bparams.append(i + frac)
    bpts = np.array(bpts)

    xmin, ymin = verts.min(axis=0)
    xmax, ymax = verts.max(axis=0)
    xs = np.arange(xmin + 0.5 * target, xmax, target)
    ipts = []
    for row, y in enumerate(np.arange(ymin + 0.5 * target, ymax, target)):
        shift = 0.5 * target if row % 2 else 0.0  # hex offset avoids co-circular quads
        for x in xs + shift:
            ipts.append((x, y))
    ipts = np.array(ipts) if ipts else np.zeros((0, 2))
    if ipts.size:
        inside = _points_in_polygon(ipts, verts)
        dist = _distance_to_polyline(ipts, verts)
        ipts = ipts[inside & (dist > 0.45 * target)]

    pts = np.vstack([bpts, ipts]) if ipts.size else bpts
    tri = Delaunay(pts)
    cent = pts[tri.simplices].mean(axis=1)
    keep = tri.simplices[_points_in_polygon(cent, verts)]

    counts = {}
    for simplex in keep:
        for a, b in ((simplex[0], simplex[1]), (simplex[1], simplex[2]), (simplex[2], simplex[0])):
            key = (min(a, b), max(a, b))
            counts[key] = counts.get(key, 0) + 1
    tris = _orient_ccw(pts, keep)
    edges, tags = [], []
    for simplex in tris:
        s = list(simplex)
        for a, b in ((s[0], s[1]), (s[1], s[2]), (s[2], s[0])):
            if counts[(min(a, b), max(a, b))] == 1:
                edges.append((a, b))
                mid = 0.5 * (pts[a] + pts[b])
                tags.append(dd.tag_of("boundary", _polygon_param(mid, verts)))
    nparams = {}
    for nid in range(len(bpts)):
        nparams[nid] = ("boundary", bparams[nid])
    return _finish_mesh(dd, pts, tris, edges, tags, nparams)


def _signed_area_np(verts):
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)


def _points_in_polygon(pts, verts):
    inside = np.zeros(len(pts), dtype=bool)
    n = len(verts)
    x, y = pts[:, 0], pts[:, 1]
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        cond = (y0 <= y) != (y1 <= y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        inside ^= cond & (x < xint)
    return inside


def _distance_to_polyline(pts, verts):
    n = len(verts)
    best = np.full(len(pts), np.inf)
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        ab = b - a
        t = np.clip(((pts - a) @ ab) / (ab @ ab), 0.0, 1.0)
        proj = a + t[:, None] * ab
        best = np.minimum(best, np.linalg.norm(pts - proj, axis=1))
    return best


def _polygon_param(point, verts):
    n = len(verts)
    best, arg = np.inf, 0.0
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        ab = b - a
        t = float(np.clip(((point - a) @ ab) / (ab @ ab), 0.0, 1.0))
        d = np.linalg.norm(point - (a + t * ab))
        if d < best:
            best, arg = d, i + t
    return arg % n


def build_mesh(dd: DomainDescriptor, resolution: int) -> TriMesh:
    """Triangulate the descriptor's domain.

    ``resolution`` is the number of angular subdivisions (boundary
    subdivisions per diameter for polygons); radial layer counts are
    derived so that cells stay near-isotropic.
    """
    if resolution < 4:
        raise MeshError(f"resolution must be at least 4, got {resolution}")
    if dd.kind == "ring":
        return _ring_mesh(dd, resolution)
    if dd.kind == "disk":
        return _disk_like_mesh(dd, resolution, lambda th: dd.parameters["radius"])
    if dd.kind == "star":
        return _disk_like_mesh(dd, resolution, lambda th: float(star_radius(dd, th)))
    if dd.kind == "polygon":
        return _polygon_mesh(dd, resolution)
    raise DomainError(f"unknown domain kind '{dd.kind}'")


def domain_area(dd: DomainDescriptor) -> float:
    """Closed-form (or quadrature) area of the continuous domain."""
    if dd.kind == "ring":
        return math.pi * (dd.parameters["r_outer"] ** 2 - dd.parameters["r_inner"] ** 2)
    if dd.kind == "disk":
        return math.pi * dd.parameters["radius"] ** 2
    if dd.kind == "star":
        a = dd.parameters["base_radius"]
        b = dd.parameters["amplitude"]
        return math.pi * (a * a + 0.5 * b * b)  # polar area of r = a + b cos(k t)
    if dd.kind == "polygon":
        return abs(_signed_area_np(np.array(dd.parameters["vertices"])))
    raise DomainError(f"unknown domain kind '{dd.kind}'")
