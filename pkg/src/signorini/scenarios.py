"""Shipped scenario catalog and the manufactured exact solutions.

Scenario configs are plain JSON-compatible dicts; the CLI accepts either
a catalog name or a path to a config file with the same schema.
"""

from __future__ import annotations

import math

import numpy as np

PI = math.pi
TWO_PI = 2.0 * math.pi


def _ring_radial_exact():
    """ring(1, 2), source -1, zero obstacle/flux data, outer wall held at 0.

    The inner boundary is in full contact, so the solution solves the
    plain Dirichlet problem: u(r) = r^2/4 - (3/(4 ln 2)) ln r - 1/4,
    with inward flux 3/(4 ln 2) - 1/2 at r = 1.
    """
    A = -0.75 / math.log(2.0)

    def value(pts):
        r = np.linalg.norm(np.atleast_2d(pts), axis=1)
        return 0.25 * r * r + A * np.log(r) - 0.25

    def gradient(pts):
        pts = np.atleast_2d(pts)
        r2 = (pts ** 2).sum(axis=1)
        return 0.5 * pts + A * pts / r2[:, None]

    flux_inner = 0.75 / math.log(2.0) - 0.5
    return {"value": value, "gradient": gradient, "flux_inner": flux_inner,
            "flux_tag": "gamma0"}


EXACT_SOLUTIONS = {
    "ring-radial": _ring_radial_exact,
}


SCENARIOS = {
    "ring-example": {
        "name": "ring-example",
        "description": (
            "annulus with a downward load: the whole inner boundary ends up "
            "in contact, certified by the radial barrier"
        ),
        "domain": {"kind": "ring", "parameters": {"r_inner": 1.0, "r_outer": 6.0}},
        "resolution": 64,
        "fields": {"f": "-0.5", "g": "0", "psi": "0"},
        "layout": {"gamma0": "signorini", "gamma1": {"dirichlet": 0.0}},
        "solver": {"method": "pdas", "kkt_tol": 1e-10},
        "balance": {
            "epsilon": 0.5,
            "delta": 0.0,
            "segment": "gamma0",
            "region": {"kind": "radial-band", "r_lo": 1.0, "r_hi": 6.0},
        },
        "barriers": [{"kind": "ring", "r_eps": 6.0}],
        "coincidence": {"target": "gamma0"},
        "assertions": [
            {"check": "balance_passes"},
            {"check": "kkt", "tol": 1e-10},
            {"check": "coverage", "segment": "gamma0", "min": 1.0},
            {"check": "max_gap", "segment": "gamma0", "max": 1e-10},
            {"check": "certificates_feasible"},
            {"check": "certificates_pass"},
            {"check": "comparison", "tol": 1e-8},
        ],
    },
    "theorem1-disk": {
        "name": "theorem1-disk",
        "description": (
            "disk with balanced data on an arc: convex location estimate with "
            "a quadratic barrier and the vanishing-regularization continuation"
        ),
        "domain": {
            "kind": "disk",
            "parameters": {"radius": 1.0},
            "segments": [
                {"tag": "gamma_target", "curve": "boundary", "lo": -PI / 2, "hi": PI / 2},
                {"tag": "gamma_far", "curve": "boundary", "lo": PI / 2, "hi": 3 * PI / 2},
            ],
        },
        "resolution": 64,
        "fields": {"f": "-0.6", "g": "-0.35", "psi": "0"},
        "layout": {"gamma_target": "signorini", "gamma_far": "signorini"},
        "solver": {"method": "pdas", "kkt_tol": 1e-10, "alpha_schedule": [
            1.0, 0.1, 0.01, 0.001, 0.0001, 0.00001, 0.000001
        ]},
        "balance": {
            "epsilon": 0.2,
            "delta": 0.2,
            "segment": "gamma_target",
            "region": {"kind": "collar", "frame": "gamma_target", "width": 0.5},
        },
        "barriers": [
            {"kind": "quadratic", "segment": "gamma_target", "x0_angle": 0.0, "width": 0.5}
        ],
        "coincidence": {"target": "gamma_target"},
        "assertions": [
            {"check": "balance_passes"},
            {"check": "kkt", "tol": 1e-10},
            {"check": "coverage", "segment": "gamma_target", "min": 0.99},
            {"check": "alpha_stable"},
            {"check": "increments_decreasing", "after": 1},
            {"check": "certificates_feasible"},
            {"check": "certificates_pass"},
            {"check": "comparison", "tol": 1e-8},
        ],
    },
    "theorem2-star": {
        "name": "theorem2-star",
        "description": (
            "non-convex star boundary: the location estimate survives with "
            "the cosine-defect correction of the quadratic barrier"
        ),
        "domain": {
            "kind": "star",
            "parameters": {"base_radius": 2.0, "amplitude": 0.4, "spikes": 3},
            # interfaces sit a quarter cell past mesh nodes of the dyadic
            # resolutions, so contact coverage is not clipped at the ends
            "segments": [
                {
                    "tag": "gamma_target",
                    "curve": "boundary",
                    "lo": 23 * PI / 128,
                    "hi": 65 * PI / 128,
                },
                {
                    "tag": "gamma_rest",
                    "curve": "boundary",
                    "lo": 65 * PI / 128,
                    "hi": TWO_PI + 23 * PI / 128,
                },
            ],
        },
        "resolution": 64,
        "fields": {"f": "-0.5", "g": "-0.3", "psi": "0"},
        "layout": {"gamma_target": "signorini", "gamma_rest": {"dirichlet": 0.0}},
        "solver": {"method": "pdas", "kkt_tol": 1e-10},
        "balance": {
            "epsilon": 0.2,
            "delta": 0.2,
            "segment": "gamma_target",
            "region": {"kind": "collar", "frame": "gamma_target", "width": 0.3},
        },
        "barriers": [
            {
                "kind": "quadratic",
                "segment": "gamma_target",
                "x0_angle": PI / 3,
                "width": 0.3,
            }
        ],
        "coincidence": {"target": "gamma_target"},
        "assertions": [
            {"check": "balance_passes"},
            {"check": "kkt", "tol": 1e-10},
            {"check": "nonconvexity_positive"},
            {"check": "coverage", "segment": "gamma_target", "min": 0.99},
            {"check": "certificates_feasible"},
            {"check": "certificates_pass"},
            {"check": "comparison", "tol": 1e-8},
        ],
    },
    "theorem3-intrinsic": {
        "name": "theorem3-intrinsic",
        "description": (
            "disk arc certified through the intrinsic boundary-distance "
            "barrier instead of the Euclidean one"
        ),
        "domain": {
            "kind": "disk",
            "parameters": {"radius": 2.0},
            "segments": [
                {
                    "tag": "gamma_target",
                    "curve": "boundary",
                    "lo": -65 * PI / 128,
                    "hi": 65 * PI / 128,
                },
                {
                    "tag": "gamma_rest",
                    "curve": "boundary",
                    "lo": 65 * PI / 128,
                    "hi": TWO_PI - 65 * PI / 128,
                },
            ],
        },
        "resolution": 64,
        "fields": {"f": "-0.5", "g": "-0.3", "psi": "0"},
        "layout": {"gamma_target": "signorini", "gamma_rest": {"dirichlet": 0.0}},
        "solver": {"method": "pdas", "kkt_tol": 1e-10},
        "balance": {
            "epsilon": 0.2,
            "delta": 0.2,
            "segment": "gamma_target",
            "region": {"kind": "collar", "frame": "gamma_target", "width": 1.0},
        },
        "barriers": [
            {
                "kind": "intrinsic",
                "segment": "gamma_target",
                "x0_angle": 0.0,
                "width": 1.0,
                "exclusion": 0.1,
            }
        ],
        "coincidence": {"target": "gamma_target"},
        "assertions": [
            {"check": "balance_passes"},
            {"check": "kkt", "tol": 1e-10},
            {"check": "coverage", "segment": "gamma_target", "min": 0.99},
            {"check": "certificates_feasible"},
            {"check": "certificates_pass"},
            {"check": "comparison", "tol": 1e-8},
        ],
    },
    "radial-exact": {
        "name": "radial-exact",
        "description": (
            "manufactured radial regression on ring(1, 2): H1 convergence "
            "slope and the inner-boundary flux against the closed form"
        ),
        "domain": {"kind": "ring", "parameters": {"r_inner": 1.0, "r_outer": 2.0}},
        "resolutions": [16, 32, 64],
        "fields": {"f": "-1", "g": "0", "psi": "0"},
        "layout": {"gamma0": "signorini", "gamma1": {"dirichlet": 0.0}},
        "solver": {"method": "pdas", "kkt_tol": 1e-10},
        "coincidence": {"target": "gamma0"},
        "exact_solution": "ring-radial",
        "assertions": [
            {"check": "kkt", "tol": 1e-10},
            {"check": "coverage", "segment": "gamma0", "min": 1.0},
            {"check": "h1_slope", "min": 0.85, "max": 1.15},
            {"check": "flux_error", "max_rel": 0.02},
        ],
    },
    "incompatible-data": {
        "name": "incompatible-data",
        "description": (
            "negative test: pure-Signorini data whose total load functional "
            "is +1, rejected by the solvability gate"
        ),
        "domain": {"kind": "ring", "parameters": {"r_inner": 1.0, "r_outer": 2.0}},
        "resolution": 32,
        # f = 1/(3 pi): the integral over the area-3pi annulus is +1
        "fields": {"f": "0.1061032953945969", "g": "0", "psi": "0"},
        "layout": {"gamma0": "signorini", "gamma1": "signorini"},
        "solver": {"method": "pdas", "kkt_tol": 1e-10},
        "coincidence": {"target": "gamma0"},
        "assertions": [],
    },
}


def list_scenarios():
    """Catalog names with one-line descriptions, in a fixed order."""
    return [(name, SCENARIOS[name]["description"]) for name in SCENARIOS]


def get_scenario(name):
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario '{name}'; known: {', '.join(SCENARIOS)}")
    import copy

    return copy.deepcopy(SCENARIOS[name])
