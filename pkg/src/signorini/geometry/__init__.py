from .domains import DomainDescriptor, DomainError, SegmentSpec, disk, polygon, ring, star
from .intrinsic import IntrinsicMetric, intrinsic_distance
from .meshing import MeshError, TriMesh, build_mesh, domain_area
from .tubular import (
    CollarRegion,
    GeometryError,
    RadialBand,
    TubularFrame,
    nonconvexity_defect,
    tubular_frame,
)

__all__ = [
    "DomainDescriptor",
    "DomainError",
    "SegmentSpec",
    "disk",
    "polygon",
    "ring",
    "star",
    "IntrinsicMetric",
    "intrinsic_distance",
    "MeshError",
    "TriMesh",
    "build_mesh",
    "domain_area",
    "CollarRegion",
    "GeometryError",
    "RadialBand",
    "TubularFrame",
    "nonconvexity_defect",
    "tubular_frame",
]
