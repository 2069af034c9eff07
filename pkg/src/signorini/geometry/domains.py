"""Domain descriptors for the 2D test geometries.

Four analytic domain families are supported: an annular ring, a disk, a
convex polygon and a smooth star (cosine-perturbed circle, the stock
non-convex case).  A descriptor also carries named boundary segments so
that meshes, solvers and certificates can refer to boundary parts by tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class DomainError(ValueError):
    """Raised for descriptors that do not define a valid domain."""


TWO_PI = 2.0 * math.pi

# curve identifiers per domain kind
_CURVES = {
    "ring": ("inner", "outer"),
    "disk": ("boundary",),
    "star": ("boundary",),
    "polygon": ("boundary",),
}


@dataclass(frozen=True)
class SegmentSpec:
    """A named parameter range on one boundary curve.

    For circular/star curves the parameter is the polar angle; for a
    polygon it is the perimeter coordinate ``edge_index + fraction``.
    ``lo < hi`` always; wrap-around ranges use ``hi > period``.
    """

    tag: str
    curve: str
    lo: float
    hi: float

    def length(self):
        return self.hi - self.lo

    def contains(self, t, period):
        """Half-open membership [lo, hi) with wrap-around modulo period."""
        return ((t - self.lo) % period) < (self.hi - self.lo) - 1e-12 * period


@dataclass(frozen=True)
class DomainDescriptor:
    kind: str
    parameters: dict
    segments: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in _CURVES:
            raise DomainError(f"unknown domain kind '{self.kind}'")
        validator = {
            "ring": self._check_ring,
            "disk": self._check_disk,
            "star": self._check_star,
            "polygon": self._check_polygon,
        }[self.kind]
        validator()
        if not self.segments:
            object.__setattr__(self, "segments", self._default_segments())
        self._check_segments()

    # -- per-kind parameter validation -------------------------------------

    def _check_ring(self):
        r0 = self.parameters.get("r_inner")
        r1 = self.parameters.get("r_outer")
        if r0 is None or r1 is None:
            raise DomainError("ring needs parameters r_inner and r_outer")
        if not (0.0 < r0 < r1):
            raise DomainError(
                f"ring radii must satisfy 0 < r_inner < r_outer, got {r0}, {r1}"
            )

    def _check_disk(self):
        r = self.parameters.get("radius")
        if r is None or r <= 0.0:
            raise DomainError(f"disk needs a positive radius, got {r}")

    def _check_star(self):
        a = self.parameters.get("base_radius")
        b = self.parameters.get("amplitude")
        k = self.parameters.get("spikes")
        if a is None or b is None or k is None:
            raise DomainError("star needs base_radius, amplitude and spikes")
        if not (a > b > 0.0):
            raise DomainError(
                f"star needs base_radius > amplitude > 0, got {a}, {b}"
            )
        if int(k) != k or k < 2:
            raise DomainError(f"star spike count must be an integer >= 2, got {k}")

    def _check_polygon(self):
        verts = self.parameters.get("vertices")
        if not verts or len(verts) < 3:
            raise DomainError("polygon needs at least 3 vertices")
        if abs(_signed_area(verts)) < 1e-14:
            raise DomainError("polygon is degenerate (zero area)")
        if _self_intersects(verts):
            raise DomainError("polygon boundary is self-intersecting")

    # -- segments -----------------------------------------------------------

    def _default_segments(self):
        if self.kind == "ring":
            return (
                SegmentSpec("gamma0", "inner", 0.0, TWO_PI),
                SegmentSpec("gamma1", "outer", 0.0, TWO_PI),
            )
        if self.kind == "polygon":
            n = len(self.parameters["vertices"])
            return (SegmentSpec("gamma", "boundary", 0.0, float(n)),)
        return (SegmentSpec("gamma", "boundary", 0.0, TWO_PI),)

    def curve_period(self, curve):
        if self.kind == "polygon":
            return float(len(self.parameters["vertices"]))
        return TWO_PI

    def _check_segments(self):
        tags = [s.tag for s in self.segments]
        if len(set(tags)) != len(tags):
            raise DomainError(f"duplicate segment tags in {tags}")
        for seg in self.segments:
            if seg.curve not in _CURVES[self.kind]:
                raise DomainError(
                    f"segment '{seg.tag}': curve '{seg.curve}' not part of a {self.kind}"
                )
            if not (seg.hi > seg.lo):
                raise DomainError(f"segment '{seg.tag}': empty range")
            if seg.length() > self.curve_period(seg.curve) + 1e-12:
                raise DomainError(f"segment '{seg.tag}': range longer than the curve")
        # disjointness + coverage, checked by dense sampling of each curve
        for curve in _CURVES[self.kind]:
            period = self.curve_period(curve)
            segs = [s for s in self.segments if s.curve == curve]
            if not segs:
                raise DomainError(f"boundary curve '{curve}' has no segment tags")
            for i in range(4096):
                t = period * (i + 0.31) / 4096.0
                hits = [s.tag for s in segs if s.contains(t, period)]
                if len(hits) != 1:
                    raise DomainError(
                        f"segment ranges on curve '{curve}' must partition it; "
                        f"parameter {t:.6f} matched {hits or 'nothing'}"
                    )

    def segment(self, tag):
        for seg in self.segments:
            if seg.tag == tag:
                return seg
        raise DomainError(f"unknown segment tag '{tag}'")

    def tag_of(self, curve, t):
        """Tag owning parameter t on the given curve."""
        period = self.curve_period(curve)
        for seg in self.segments:
            if seg.curve == curve and seg.contains(t, period):
                return seg.tag
        # t sat exactly on a shared endpoint; nudge deterministically
        for seg in self.segments:
            if seg.curve == curve and seg.contains(t + 1e-9 * period, period):
                return seg.tag
        raise DomainError(f"no segment tag at parameter {t} on curve '{curve}'")


def _signed_area(vertices):
    area = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        area += x0 * y1 - x1 * y0
    return 0.5 * area


def _self_intersects(vertices):
    """Check proper crossings between non-adjacent polygon edges, O(n^2)."""
    n = len(vertices)
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            a, b = edges[i]
            c, d = edges[j]
            if (
                orient(a, b, c) * orient(a, b, d) < 0
                and orient(c, d, a) * orient(c, d, b) < 0
            ):
                return True
    return False


def ring(r_inner, r_outer, segments=()):
    return DomainDescriptor("ring", {"r_inner": r_inner, "r_outer": r_outer}, tuple(segments))


def disk(radius, segments=()):
    return DomainDescriptor("disk", {"radius": radius}, tuple(segments))


def star(base_radius, amplitude, spikes, segments=()):
    return DomainDescriptor(
        "star",
        {"base_radius": base_radius, "amplitude": amplitude, "spikes": spikes},
        tuple(segments),
    )


def polygon(vertices, segments=()):
    return DomainDescriptor(
        "polygon", {"vertices": [tuple(map(float, v)) for v in vertices]}, tuple(segments)
    )
