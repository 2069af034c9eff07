import numpy as np
import pytest

from signorini.assembly import build_system
from signorini.fields import constant_field, parse_field
from signorini.geometry import build_mesh, disk, ring
from signorini.geometry.meshing import TriMesh


@pytest.fixture(scope="session")
def ring12():
    return ring(1.0, 2.0)


@pytest.fixture(scope="session")
def ring12_mesh16(ring12):
    return build_mesh(ring12, 16)


@pytest.fixture(scope="session")
def ring12_mesh32(ring12):
    return build_mesh(ring12, 32)


@pytest.fixture(scope="session")
def radial_system16(ring12_mesh16):
    return build_system(
        ring12_mesh16,
        parse_field("-1"),
        parse_field("0"),
        parse_field("0"),
        {"gamma0": "signorini", "gamma1": ("dirichlet", 0.0)},
    )


def unit_square_two_tri():
    return TriMesh(
        nodes=np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
        triangles=np.array([[0, 1, 2], [0, 2, 3]]),
        boundary_edges=np.array([[0, 1], [1, 2], [2, 3], [3, 0]]),
        edge_tags=["g"] * 4,
        node_tags={"g": np.array([0, 1, 2, 3])},
        h=float(np.sqrt(2.0)),
    )


def single_triangle():
    return TriMesh(
        nodes=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        triangles=np.array([[0, 1, 2]]),
        boundary_edges=np.array([[0, 1], [1, 2], [2, 0]]),
        edge_tags=["g"] * 3,
        node_tags={"g": np.array([0, 1, 2])},
        h=float(np.sqrt(2.0)),
    )
