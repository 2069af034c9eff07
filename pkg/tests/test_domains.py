import math

import pytest

from signorini.geometry import DomainDescriptor, SegmentSpec, disk, polygon, ring, star
from signorini.geometry.domains import DomainError


def test_ring_requires_ordered_radii():
    with pytest.raises(DomainError):
        ring(2.0, 1.0)
    with pytest.raises(DomainError):
        ring(0.0, 1.0)
    assert ring(1.0, 2.0).kind == "ring"


def test_default_segments_cover_boundary():
    dd = ring(1.0, 2.0)
    tags = {s.tag for s in dd.segments}
    assert tags == {"gamma0", "gamma1"}
    assert disk(1.0).segments[0].tag == "gamma"


def test_segment_partition_must_cover():
    with pytest.raises(DomainError, match="partition"):
        disk(1.0, segments=(SegmentSpec("a", "boundary", 0.0, math.pi),))


def test_segment_partition_must_not_overlap():
    with pytest.raises(DomainError, match="partition"):
        disk(
            1.0,
            segments=(
                SegmentSpec("a", "boundary", 0.0, 4.0),
                SegmentSpec("b", "boundary", 3.0, 2 * math.pi),
            ),
        )


def test_duplicate_tags_rejected():
    with pytest.raises(DomainError, match="duplicate"):
        disk(
            1.0,
            segments=(
                SegmentSpec("a", "boundary", 0.0, math.pi),
                SegmentSpec("a", "boundary", math.pi, 2 * math.pi),
            ),
        )


def test_tag_lookup_with_wraparound():
    dd = disk(
        1.0,
        segments=(
            SegmentSpec("front", "boundary", -0.5, 0.5),
            SegmentSpec("back", "boundary", 0.5, 2 * math.pi - 0.5),
        ),
    )
    assert dd.tag_of("boundary", 0.0) == "front"
    assert dd.tag_of("boundary", 2 * math.pi - 0.2) == "front"
    assert dd.tag_of("boundary", 3.0) == "back"


def test_star_parameter_validation():
    with pytest.raises(DomainError):
        star(1.0, 1.5, 3)  # amplitude >= base radius
    with pytest.raises(DomainError):
        star(2.0, 0.4, 1)
    assert star(2.0, 0.4, 3).parameters["spikes"] == 3


def test_polygon_rejects_self_intersection():
    bowtie = [(0, 0), (1, 1), (1, 0), (0, 1)]
    with pytest.raises(DomainError, match="self-intersecting"):
        polygon(bowtie)
    assert polygon([(0, 0), (1, 0), (1, 1), (0, 1)]).kind == "polygon"


def test_unknown_kind_rejected():
    with pytest.raises(DomainError):
        DomainDescriptor("pentagon", {})
