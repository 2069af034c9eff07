"""Solvers for the bound-constrained Galerkin problem.

The discrete problem is

    minimize  1/2 v' A v - F' v,   A = K + alpha M,
    over      v_i >= psi_i on the constrained (boundary) nodes,
              v_i fixed on Dirichlet nodes,

whose KKT conditions are the discrete complementarity system: primal
feasibility u >= psi, dual feasibility lambda = (A u - F) >= 0 on the
constrained set, zero residual elsewhere, and lambda * (u - psi) = 0.

Two iterations are provided (projected Gauss-Seidel and a primal-dual
active-set / semismooth Newton method) plus an exhaustive active-set
oracle for small instances, and the vanishing-regularization
continuation that approximates the non-coercive problem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import DiscreteSystem, h1_norm


class SolverError(RuntimeError):
    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history or []


class CompatibilityError(ValueError):
    """Pure-Signorini data violating the solvability condition
    (integral of f plus the boundary pairing of g with 1 must be <= 0)."""

    def __init__(self, value):
        super().__init__(
            "compatibility condition violated: the load functional applied to "
            f"the constant 1 is {value:+.6g} > 0; pure-Signorini data must "
            "satisfy integral(f) + <g, 1> <= 0"
        )
        self.value = value


@dataclass
class SolverOptions:
    method: str = "pdas"
    max_iter: int = None
    kkt_tol: float = None
    omega: float = 1.5
    alpha_schedule: tuple = None

    def __post_init__(self):
        if self.method not in ("pdas", "pgs"):
            raise ValueError(f"unknown method '{self.method}'")
        if self.kkt_tol is None:
            self.kkt_tol = 1e-10 if self.method == "pdas" else 1e-8
        if self.max_iter is None:
            self.max_iter = 100 if self.method == "pdas" else 50000


@dataclass
class Solution:
    u: np.ndarray
    multipliers: np.ndarray        # per unit boundary length, on constrained ids
    multipliers_raw: np.ndarray    # algebraic residual (A u - F) on constrained ids
    active: np.ndarray             # constrained node ids with u = psi
    iterations: int
    converged: bool
    residuals: dict
    alpha: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    def active_mask(self, sys):
        mask = np.zeros(sys.constrained.shape, dtype=bool)
        lookup = {nid: i for i, nid in enumerate(sys.constrained)}
        for nid in self.active:
            mask[lookup[nid]] = True
        return mask


def _reduced_problem(sys, alpha):
    """Eliminate Dirichlet nodes; returns A, F on free nodes + bookkeeping."""
    n = sys.F.shape[0]
    A = sp.csr_matrix(sys.operator(alpha))
    F = sys.F.copy()
    free = np.setdiff1d(np.arange(n), sys.dirichlet)
    u_fixed = np.zeros(n)
    if sys.dirichlet.size:
        u_fixed[sys.dirichlet] = sys.dirichlet_values
        F = F - A @ u_fixed
    A_ff = A[free][:, free].tocsc()
    F_f = F[free]
    pos_of = np.full(n, -1, dtype=np.int64)
    pos_of[free] = np.arange(free.size)
    cons = pos_of[sys.constrained]
    return A_ff, F_f, free, u_fixed, cons


def _full_residual(sys, alpha, u):
    return sys.operator(alpha) @ u - sys.F


def kkt_residuals(sys: DiscreteSystem, alpha, u, scale=None):
    """The four KKT residuals; all must vanish at a solution."""
    lam = _full_residual(sys, alpha, u)
    n = sys.F.shape[0]
    cons = sys.constrained
    others = np.setdiff1d(np.setdiff1d(np.arange(n), cons), sys.dirichlet)
    gap = u[cons] - sys.psi if cons.size else np.zeros(0)
    res = {
        "stationarity": float(np.max(np.abs(lam[others]))) if others.size else 0.0,
        "feasibility": float(max(0.0, np.max(-gap))) if cons.size else 0.0,
        "dual": float(max(0.0, np.max(-lam[cons]))) if cons.size else 0.0,
        "complementarity": float(np.max(np.abs(lam[cons] * gap))) if cons.size else 0.0,
    }
    return res


def _kkt_ok(res, tol):
    return all(v <= tol for v in res.values())


def _pack_solution(sys, alpha, u, iterations, method, tol):
    lam_full = _full_residual(sys, alpha, u)
    cons = sys.constrained
    lam_raw = lam_full[cons]
    ell = sys.mesh.boundary_lumped_lengths()[cons]
    with np.errstate(divide="ignore", invalid="ignore"):
        density = np.where(ell > 0, lam_raw / np.where(ell > 0, ell, 1.0), 0.0)
    gap = u[cons] - sys.psi
    # ties (gap = 0 and lambda = 0) count as contact
    active = cons[gap <= tol * (1.0 + np.abs(sys.psi))]
    res = kkt_residuals(sys, alpha, u)
    return Solution(
        u=u,
        multipliers=density,
        multipliers_raw=lam_raw,
        active=active,
        iterations=iterations,
        converged=_kkt_ok(res, tol * _scale(sys)),
        residuals=res,
        alpha=alpha,
        method=method,
    )


def _scale(sys):
    return 1.0 + float(np.max(np.abs(sys.F)))


def solve_alpha(sys: DiscreteSystem, alpha, method="pdas", opts=None, warm=None) -> Solution:
    """Solve the regularized problem for one alpha >= 0.

    alpha = 0 needs Dirichlet nodes (otherwise the form is only
    semicoercive; use solve_problem_one).
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if alpha == 0.0 and sys.pure_signorini:
        raise SolverError(
            "alpha = 0 with no Dirichlet nodes is not coercive; "
            "use solve_problem_one for the vanishing-alpha limit"
        )
    opts = opts or SolverOptions(method=method)
    if opts.method != method:
        opts = SolverOptions(method=method, omega=opts.omega)
    if method == "pdas":
        return _solve_pdas(sys, alpha, opts, warm)
    return _solve_pgs(sys, alpha, opts, warm)


def _solve_pdas(sys, alpha, opts, warm=None):
    A, F, free, u_fixed, cons = _reduced_problem(sys, alpha)
    nf = A.shape[0]
    psi = sys.psi
    diag = np.asarray(A.diagonal())[cons] if cons.size else np.zeros(0)

    if warm is not None:
        u_red = warm.u[free]
        lam = A @ u_red - F
        active = lam[cons] + diag * (psi - u_red[cons]) >= 0.0 if cons.size else np.zeros(0, bool)
    else:
        active = np.ones(cons.shape, dtype=bool)

    history = []
    seen = {}
    for it in range(1, opts.max_iter + 1):
        u_red = _solve_pinned(A, F, cons[active], psi[active])
        lam = A @ u_red - F
        indicator = lam[cons] + diag * (psi - u_red[cons])
        new_active = indicator >= 0.0
        res = kkt_residuals(sys, alpha, _expand(u_red, free, u_fixed))
        history.append(res)
        if np.array_equal(new_active, active) and _kkt_ok(res, opts.kkt_tol * _scale(sys)):
            u = _expand(u_red, free, u_fixed)
            sol = _pack_solution(sys, alpha, u, it, "pdas", opts.kkt_tol)
            return sol
        key = new_active.tobytes()
        if key in seen and not np.array_equal(new_active, active):
            # cycling guard: fall back to the union of the cycle's sets
            new_active = new_active | active
        seen[key] = it
        active = new_active
    raise SolverError(
        f"active-set iteration did not settle in {opts.max_iter} steps", history
    )


def _solve_pinned(A, F, pinned_pos, pinned_vals):
    """Solve A u = F with the given reduced positions pinned to values."""
    nf = A.shape[0]
    u = np.zeros(nf)
    if pinned_pos.size == nf:
        u[pinned_pos] = pinned_vals
        return u
    mask = np.ones(nf, dtype=bool)
    mask[pinned_pos] = False
    u[pinned_pos] = pinned_vals
    rhs = F[mask]
    if pinned_pos.size:
        rhs = rhs - A[mask][:, pinned_pos] @ pinned_vals
    u[mask] = spla.spsolve(A[mask][:, mask].tocsc(), rhs)
    return u


def _expand(u_red, free, u_fixed):
    u = u_fixed.copy()
    u[free] = u_red
    return u


def _solve_pgs(sys, alpha, opts, warm=None):
    A, F, free, u_fixed, cons = _reduced_problem(sys, alpha)
    A = A.tocsr()
    nf = A.shape[0]
    psi = sys.psi
    lower = np.full(nf, -np.inf)
    if cons.size:
        lower[cons] = psi
    u = warm.u[free].copy() if warm is not None else np.zeros(nf)
    u = np.maximum(u, lower)

    indptr, indices, data = A.indptr, A.indices, A.data
    diag = np.asarray(A.diagonal())
    omega = opts.omega
    scale = _scale(sys)
    history = []
    check_every = 8
    for sweep in range(1, opts.max_iter + 1):
        for i in range(nf):
            row = slice(indptr[i], indptr[i + 1])
            r = F[i] - data[row] @ u[indices[row]] + diag[i] * u[i]
            unew = (1.0 - omega) * u[i] + omega * (r / diag[i])
            u[i] = unew if unew > lower[i] else lower[i]
        if sweep % check_every == 0 or sweep == opts.max_iter:
            res = kkt_residuals(sys, alpha, _expand(u, free, u_fixed))
            history.append(res)
            if _kkt_ok(res, opts.kkt_tol * scale):
                return _pack_solution(
                    sys, alpha, _expand(u, free, u_fixed), sweep, "pgs", opts.kkt_tol
                )
    raise SolverError(
        f"projected Gauss-Seidel did not reach tolerance in {opts.max_iter} sweeps",
        history,
    )


def pgs_objective(sys, alpha, u):
    A = sys.operator(alpha)
    return float(0.5 * u @ (A @ u) - sys.F @ u)


def pgs_sweep(sys, alpha, u, omega=1.5):
    """One in-place projected sweep over the free nodes; returns the iterate.

    Exposed for the energy-monotonicity property: each nodal update is a
    projected line minimization, so the objective cannot increase while
    the iterate stays feasible (any omega in (0, 2))."""
    A, F, free, u_fixed, cons = _reduced_problem(sys, alpha)
    A = A.tocsr()
    lower = np.full(A.shape[0], -np.inf)
    if cons.size:
        lower[cons] = sys.psi
    v = np.maximum(u[free].copy(), lower)
    indptr, indices, data = A.indptr, A.indices, A.data
    diag = np.asarray(A.diagonal())
    for i in range(A.shape[0]):
        row = slice(indptr[i], indptr[i + 1])
        r = F[i] - data[row] @ v[indices[row]] + diag[i] * v[i]
        vnew = (1.0 - omega) * v[i] + omega * (r / diag[i])
        v[i] = vnew if vnew > lower[i] else lower[i]
    return _expand(v, free, u_fixed)


def solve_dirichlet_signorini(sys: DiscreteSystem, opts=None) -> Solution:
    """The mixed layout: alpha = 0 is coercive once Dirichlet nodes exist."""
    if sys.pure_signorini:
        raise SolverError("mixed solve needs a nonempty Dirichlet set")
    opts = opts or SolverOptions()
    return solve_alpha(sys, 0.0, method=opts.method, opts=opts)


def default_alpha_schedule():
    return tuple(10.0 ** (-k) for k in range(7))


def solve_problem_one(sys: DiscreteSystem, schedule=None, method="pdas", opts=None):
    """Vanishing-regularization continuation.

    Solves along a strictly decreasing positive alpha schedule with warm
    starts and records the H1 increment between consecutive iterates;
    the final entry approximates the non-regularized problem.  Pure
    Signorini data must pass the compatibility check first.
    """
    schedule = tuple(schedule) if schedule is not None else default_alpha_schedule()
    if not schedule or any(a <= 0 for a in schedule):
        raise ValueError("alpha schedule must be positive")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("alpha schedule must be strictly decreasing")
    if sys.pure_signorini:
        value = float(sys.F.sum())
        if value > 1e-11:
            raise CompatibilityError(value)

    opts = opts or SolverOptions(method=method)
    solutions = []
    increments = []
    prev = None
    for alpha in schedule:
        sol = solve_alpha(sys, alpha, method=method, opts=opts, warm=prev)
        if prev is not None:
            inc = h1_norm(sys, sol.u - prev.u)
            increments.append(inc)
            sol.diagnostics["h1_increment_from_previous"] = inc
        solutions.append(sol)
        prev = sol
    stagnant = any(
        increments[i] <= increments[i + 1] <= increments[i + 2]
        for i in range(len(increments) - 2)
    )
    for sol in solutions:
        sol.diagnostics["stagnation_flag"] = stagnant
    return solutions


def continuation_increments(solutions):
    return [
        s.diagnostics["h1_increment_from_previous"]
        for s in solutions
        if "h1_increment_from_previous" in s.diagnostics
    ]


def oracle_solve(sys: DiscreteSystem, alpha=0.0, return_all=False):
    """Exhaustive active-set enumeration for small instances.

    Tries all 2^k subsets of the k constrained nodes, solves each pinned
    linear system, and returns the KKT-consistent one.  Intended as an
    independent check of the iterative solvers; refuses k > 20.
    """
    k = sys.constrained.size
    if k > 20:
        raise SolverError(f"oracle limited to 20 constrained nodes, got {k}")
    if alpha == 0.0 and sys.pure_signorini:
        raise SolverError("oracle needs a coercive instance (alpha > 0 or Dirichlet)")
    A, F, free, u_fixed, cons = _reduced_problem(sys, alpha)
    Ad = A.toarray()
    nf = Ad.shape[0]
    psi = sys.psi
    tol = 1e-10 * _scale(sys)

    candidates = []
    best = None
    for active in itertools.product((False, True), repeat=k):
        active = np.array(active, dtype=bool)
        pinned = cons[active]
        u = np.zeros(nf)
        mask = np.ones(nf, dtype=bool)
        mask[pinned] = False
        u[pinned] = psi[active]
        try:
            rhs = F[mask] - Ad[np.ix_(mask, pinned)] @ psi[active]
            u[mask] = np.linalg.solve(Ad[np.ix_(mask, mask)], rhs)
        except np.linalg.LinAlgError:
            continue
        lam = Ad @ u - F
        feasible = not cons.size or np.min(u[cons] - psi) >= -tol
        dual_ok = not pinned.size or np.min(lam[pinned]) >= -tol
        obj = 0.5 * u @ (Ad @ u) - F @ u
        if return_all and feasible:
            candidates.append((active.copy(), obj, _expand(u, free, u_fixed)))
        if feasible and dual_ok and best is None:
            best = _expand(u, free, u_fixed)
            if not return_all:
                break
    if best is None:
        raise SolverError("oracle found no KKT-consistent active set")
    sol = _pack_solution(sys, alpha, best, 1, "oracle", 1e-10)
    if return_all:
        return sol, candidates
    return sol
