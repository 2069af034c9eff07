"""P1 finite-element assembly: stiffness, mass, loads, compatibility.

Interior integrals use the 3-point mid-edge rule (exact for quadratic
integrands, hence for all P1 x P1 products); boundary integrals use
2-point Gauss per edge.  Dirichlet conditions are kept out of the
matrices here; solvers eliminate them with a load correction so the
matrices stay symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .geometry.meshing import TriMesh


class AssemblyError(ValueError):
    pass


def _tri_geometry(mesh):
    p = mesh.nodes[mesh.triangles]
    d1 = p[:, 1] - p[:, 0]
    d2 = p[:, 2] - p[:, 0]
    areas = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    if np.any(areas < 1e-14):
        bad = int(np.argmin(areas))
        raise AssemblyError(f"degenerate triangle {bad} (area {areas[bad]:.3e})")
    return p, areas


def assemble_stiffness(mesh: TriMesh) -> sp.csr_matrix:
    """Exact P1 stiffness: constant gradients per triangle."""
    p, areas = _tri_geometry(mesh)
    x, y = p[..., 0], p[..., 1]
    # b_i = y_j - y_k, c_i = x_k - x_j (cyclic), grad phi_i = (b_i, c_i)/(2A)
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    ke = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (
        4.0 * areas[:, None, None]
    )
    return _scatter(mesh, ke)


def assemble_mass(mesh: TriMesh) -> sp.csr_matrix:
    """Exact P1 mass: (A/12) * [[2,1,1],[1,2,1],[1,1,2]] per triangle."""
    _, areas = _tri_geometry(mesh)
    base = (np.ones((3, 3)) + np.eye(3)) / 12.0
    ke = areas[:, None, None] * base[None, :, :]
    return _scatter(mesh, ke)


def _locate_bad_element(f, mids):
    for e in range(mids.shape[0]):
        try:
            f(mids[e])
        except Exception:
            return e
    return -1


def _scatter(mesh, ke):
    n = mesh.nodes.shape[0]
    tri = mesh.triangles
    rows = np.repeat(tri, 3, axis=1).ravel()
    cols = np.tile(tri, (1, 3)).ravel()
    mat = sp.coo_matrix((ke.ravel(), (rows, cols)), shape=(n, n))
    return mat.tocsr()


def assemble_load(mesh: TriMesh, f=None, g=None, g_tags=None) -> np.ndarray:
    """Load vector: interior source by mid-edge quadrature, boundary flux
    datum by 2-point Gauss over the edges of the given tags (all boundary
    tags when g_tags is None)."""
    n = mesh.nodes.shape[0]
    F = np.zeros(n)
    if f is not None:
        p, areas = _tri_geometry(mesh)
        mids = np.stack(
            [0.5 * (p[:, 0] + p[:, 1]), 0.5 * (p[:, 1] + p[:, 2]), 0.5 * (p[:, 2] + p[:, 0])],
            axis=1,
        )  # (m, 3, 2); mid-edge q sees the two adjacent vertices with weight 1/2
        try:
            fv = f(mids.reshape(-1, 2)).reshape(-1, 3)
        except Exception as err:
            raise AssemblyError(
                f"source field failed on element {_locate_bad_element(f, mids)}: {err}"
            ) from err
        w = areas / 3.0
        # phi_i at the three mid-edge points: [0, .5, .5] patterns
        contrib = np.empty((fv.shape[0], 3))
        contrib[:, 0] = 0.5 * (fv[:, 0] + fv[:, 2])
        contrib[:, 1] = 0.5 * (fv[:, 0] + fv[:, 1])
        contrib[:, 2] = 0.5 * (fv[:, 1] + fv[:, 2])
        np.add.at(F, mesh.triangles.ravel(), (w[:, None] * contrib).ravel())
    if g is not None:
        if g_tags is None:
            idx = np.arange(mesh.boundary_edges.shape[0])
        else:
            keep = [i for i, t in enumerate(mesh.edge_tags) if t in set(g_tags)]
            idx = np.array(keep, dtype=np.int64)
        if idx.size:
            edges = mesh.boundary_edges[idx]
            pe = mesh.nodes[edges]
            L = np.linalg.norm(pe[:, 1] - pe[:, 0], axis=1)
            xi = 0.5 / np.sqrt(3.0)
            for q, wq in ((0.5 - xi, 0.5), (0.5 + xi, 0.5)):
                pts = (1.0 - q) * pe[:, 0] + q * pe[:, 1]
                try:
                    gv = g(pts)
                except Exception as err:
                    raise AssemblyError(
                        f"flux field failed on boundary quadrature: {err}"
                    ) from err
                np.add.at(F, edges[:, 0], wq * L * gv * (1.0 - q))
                np.add.at(F, edges[:, 1], wq * L * gv * q)
    return F


@dataclass
class DiscreteSystem:
    """Assembled Galerkin data plus the constraint layout."""

    mesh: TriMesh
    K: sp.csr_matrix
    M: sp.csr_matrix
    F: np.ndarray
    constrained: np.ndarray          # node ids carrying the obstacle bound
    psi: np.ndarray                  # obstacle values, aligned with `constrained`
    dirichlet: np.ndarray            # node ids with fixed values
    dirichlet_values: np.ndarray
    signorini_tags: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.intersect1d(self.constrained, self.dirichlet).size:
            raise AssemblyError("constrained and Dirichlet node sets overlap")

    @property
    def pure_signorini(self):
        return self.dirichlet.size == 0

    def operator(self, alpha=0.0):
        return self.K + alpha * self.M if alpha else self.K


def build_system(mesh: TriMesh, f, g, psi, layout) -> DiscreteSystem:
    """Assemble matrices/load and resolve the boundary layout.

    ``layout`` maps segment tag -> "signorini" or ("dirichlet", value).
    Nodes on a Dirichlet segment win over Signorini when a node sits on
    a tag interface (the sets must be disjoint).
    """
    tags = set(mesh.node_tags)
    for tag in layout:
        if tag not in tags:
            raise AssemblyError(f"layout references unknown segment tag '{tag}'")
    missing = tags - set(layout)
    if missing:
        raise AssemblyError(f"layout misses segment tags {sorted(missing)}")

    dir_nodes, dir_vals = [], []
    sig_nodes = []
    sig_tags = []
    for tag, spec in layout.items():
        ids = mesh.nodes_of_tag(tag)
        if spec == "signorini":
            sig_nodes.append(ids)
            sig_tags.append(tag)
        else:
            kind, value = spec
            if kind != "dirichlet":
                raise AssemblyError(f"unknown layout kind {spec!r} for tag '{tag}'")
            dir_nodes.append(ids)
            dir_vals.append(np.full(ids.shape, float(value)))
    dirichlet = np.concatenate(dir_nodes) if dir_nodes else np.array([], dtype=np.int64)
    dvals = np.concatenate(dir_vals) if dir_vals else np.array([])
    dirichlet, uniq = np.unique(dirichlet, return_index=True)
    dvals = dvals[uniq]
    constrained = (
        np.setdiff1d(np.concatenate(sig_nodes), dirichlet)
        if sig_nodes
        else np.array([], dtype=np.int64)
    )

    K = assemble_stiffness(mesh)
    M = assemble_mass(mesh)
    F = assemble_load(mesh, f=f, g=g, g_tags=tuple(sig_tags) if sig_tags else None)
    psi_vals = psi(mesh.nodes[constrained]) if constrained.size else np.array([])
    return DiscreteSystem(
        mesh=mesh,
        K=K,
        M=M,
        F=F,
        constrained=constrained,
        psi=psi_vals,
        dirichlet=dirichlet,
        dirichlet_values=dvals,
        signorini_tags=tuple(sig_tags),
    )


@dataclass
class CompatibilityResult:
    value: float
    admissible: bool
    borderline: bool
    skipped: bool = False

    def to_dict(self):
        return {
            "value": self.value,
            "admissible": self.admissible,
            "borderline": self.borderline,
            "skipped": self.skipped,
        }


def check_compatibility(mesh, f, g, has_dirichlet=False, tol=1e-11) -> CompatibilityResult:
    """Solvability gate for the pure-Signorini layout.

    The total load functional applied to the constant 1 must be
    nonpositive; with Dirichlet nodes present the form is coercive and
    the check is skipped.  Exactly zero is admissible but flagged: the
    discrete problem is then only determined up to the constant shifts
    allowed by the active set.
    """
    if has_dirichlet:
        return CompatibilityResult(np.nan, True, False, skipped=True)
    F = assemble_load(mesh, f=f, g=g, g_tags=None)
    value = float(F.sum())
    return CompatibilityResult(
        value=value, admissible=value <= tol, borderline=abs(value) <= tol
    )


def export_matrix_text(mat, path):
    """Coordinate dump: one "row col value" line per stored entry."""
    coo = mat.tocoo()
    with open(path, "w") as fh:
        for r, c, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{r} {c} {v!r}\n")


def h1_product(sys: DiscreteSystem, u, v):
    """Discrete H1 inner product via the K + M quadratic form."""
    return float(u @ (sys.K @ v) + u @ (sys.M @ v))


def h1_norm(sys: DiscreteSystem, u):
    return float(np.sqrt(max(h1_product(sys, u, u), 0.0)))


def h1_error(mesh, u_h, value_fn, grad_fn):
    """H1 error of a nodal field against an exact solution.

    Mid-edge quadrature per element; the P1 gradient is constant per
    triangle, the exact gradient is evaluated pointwise.
    """
    p, areas = _tri_geometry(mesh)
    x, y = p[..., 0], p[..., 1]
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    vals = u_h[mesh.triangles]  # (m, 3)
    gx = (vals * b).sum(axis=1) / (2.0 * areas)
    gy = (vals * c).sum(axis=1) / (2.0 * areas)

    total = 0.0
    pairs = ((0, 1), (1, 2), (2, 0))
    for i, j in pairs:
        mid = 0.5 * (p[:, i] + p[:, j])
        ge = grad_fn(mid)
        uh_mid = 0.5 * (vals[:, i] + vals[:, j])
        diff2 = (gx - ge[:, 0]) ** 2 + (gy - ge[:, 1]) ** 2
        diff2 = diff2 + (uh_mid - value_fn(mid)) ** 2
        total += float(((areas / 3.0) * diff2).sum())
    return math.sqrt(total)
