"""Contact-set extraction and coverage measurement.

The discrete contact set collects the constrained boundary nodes whose
gap to the obstacle is below a tolerance coupled to the mesh size and
the solution scale.  Arc coverage counts a boundary edge only when both
endpoints are in the set, an undercount of at most two mesh cells per
contact component, so reported coverage never overclaims.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class CoincidenceError(ValueError):
    pass


def default_gap_tolerance(solution, mesh, kkt_tol=1e-10):
    return max(10.0 * kkt_tol, 0.01 * mesh.h * float(np.max(np.abs(solution.u))))


@dataclass
class CoincidenceReport:
    node_set: np.ndarray          # contact node ids (subset of constrained)
    gaps: dict                    # constrained node id -> u - psi
    tolerance: float
    mesh: object
    covered_by_tag: dict = field(default_factory=dict)
    target_tag: str = None

    def coverage_fraction(self, tag=None):
        tag = tag or self.target_tag
        if tag is None:
            raise CoincidenceError("no target segment tag given")
        covered, total = self._arcs(tag)
        return covered / total

    def covered_length(self, tag=None):
        return self._arcs(tag or self.target_tag)[0]

    def target_length(self, tag=None):
        return self._arcs(tag or self.target_tag)[1]

    def _arcs(self, tag):
        if tag not in self.mesh.node_tags:
            raise CoincidenceError(f"unknown segment tag '{tag}'")
        if tag in self.covered_by_tag:
            return self.covered_by_tag[tag]
        in_set = set(int(i) for i in self.node_set)
        covered = total = 0.0
        lengths = self.mesh.boundary_edge_lengths()
        for i, (edge, etag) in enumerate(zip(self.mesh.boundary_edges, self.mesh.edge_tags)):
            if etag != tag:
                continue
            total += lengths[i]
            if int(edge[0]) in in_set and int(edge[1]) in in_set:
                covered += lengths[i]
        if total == 0.0:
            raise CoincidenceError(f"segment tag '{tag}' has no boundary edges")
        self.covered_by_tag[tag] = (covered, total)
        return covered, total

    def to_dict(self):
        out = {
            "n_contact_nodes": int(self.node_set.size),
            "tolerance": self.tolerance,
            "target_tag": self.target_tag,
        }
        if self.target_tag:
            covered, total = self._arcs(self.target_tag)
            out.update(
                {
                    "covered_length": covered,
                    "target_length": total,
                    "coverage_fraction": covered / total,
                }
            )
        return out


def extract_coincidence(solution, sys, tol_c=None) -> CoincidenceReport:
    """Contact nodes of a solution: gap u - psi below tol_c.

    Default tolerance: max(10 * kkt_tol, 0.01 * h * sup|u|), so the set
    is stable under refinement studies.
    """
    mesh = sys.mesh
    if tol_c is None:
        tol_c = default_gap_tolerance(solution, mesh)
    cons = sys.constrained
    gaps = solution.u[cons] - sys.psi
    included = cons[gaps <= tol_c]
    return CoincidenceReport(
        node_set=included,
        gaps={int(n): float(g) for n, g in zip(cons, gaps)},
        tolerance=float(tol_c),
        mesh=mesh,
    )


def coverage(report: CoincidenceReport, target_tag: str) -> float:
    """Fraction of the target segment's arc length inside the contact set."""
    report.target_tag = target_tag
    return report.coverage_fraction(target_tag)


def alpha_stability(solutions, sys, target_tag, tol_c=None):
    """Location stability along a vanishing-regularization run.

    True when the contact node sets restricted to the target agree
    exactly for the last two schedule entries and the coverage is
    non-decreasing once the regularization drops below 0.1.
    Returns (stable, [(alpha, coverage), ...]).
    """
    if len(solutions) < 2:
        raise CoincidenceError("stability needs at least two solutions")
    n = solutions[0].u.shape[0]
    if any(s.u.shape[0] != n for s in solutions):
        raise CoincidenceError("solutions live on different meshes")
    target_nodes = set(int(i) for i in sys.mesh.nodes_of_tag(target_tag))
    restricted = []
    table = []
    for sol in solutions:
        rep = extract_coincidence(sol, sys, tol_c)
        restricted.append(set(int(i) for i in rep.node_set) & target_nodes)
        table.append((sol.alpha, coverage(rep, target_tag)))
    stable = restricted[-1] == restricted[-2]
    small = [(a, c) for a, c in table if a < 0.1]
    for (a0, c0), (a1, c1) in zip(small, small[1:]):
        if c1 < c0 - 1e-12:
            stable = False
    return stable, table


def necessary_condition_integral(solution, sys, report, g_shifted_values=None):
    """Diagnostic integral of the shifted flux datum over the contact set.

    For a contact set of positive measure the integral cannot be
    positive; reported as a number, with no acceptance attached (the
    criterion presumes a regular contact set).
    """
    mesh = sys.mesh
    in_set = set(int(i) for i in report.node_set)
    total = 0.0
    lengths = mesh.boundary_edge_lengths()
    if g_shifted_values is None:
        return None
    for i, edge in enumerate(mesh.boundary_edges):
        a, b = int(edge[0]), int(edge[1])
        if a in in_set and b in in_set:
            ga = g_shifted_values.get(a)
            gb = g_shifted_values.get(b)
            if ga is not None and gb is not None:
                total += 0.5 * (ga + gb) * lengths[i]
    return total
