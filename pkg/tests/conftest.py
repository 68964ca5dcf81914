import math

import numpy as np
import pytest

from nervekit import Cover
from nervekit.samples import (circle_space, line_space, octahedron_space,
                              sphere_space, tree_space)


def three_arc_cover(n=64):
    """Three overlapping arc-balls on a circle sample.

    Each set is the open ball of chord radius 2*sin(35 deg) around one of
    three equally spaced samples, so consecutive sets overlap but the triple
    intersection is empty: the nerve is a hollow triangle.
    """
    space = circle_space(n)
    r = 2.0 * math.sin(math.radians(35.0))
    centers = (0, n // 3, (2 * n) // 3)
    sets = tuple(space.ball(c, r) for c in centers)
    return Cover(space, sets, centers, radius_hint=(r, r, r))


def octahedral_cover(extra=94):
    """Six axis-centered balls on a sphere sample containing the axis points.

    Radius 1.1 reaches past the octant corners (chord ~0.92 away) but stays
    short of the equator of the opposite pole (chord sqrt(2)), so opposite
    balls never meet and the nerve is the boundary of the octahedron.
    """
    space = octahedron_space(extra)
    sets = tuple(space.ball(c, 1.1) for c in range(6))
    return Cover(space, sets, tuple(range(6)), radius_hint=(1.1,) * 6)


def line_pair_cover():
    """Two sets on the 4-point line: {0,1} centered at 0 and {1,2,3} at 2."""
    space = line_space(4)
    return Cover(
        space,
        (frozenset({0, 1}), frozenset({1, 2, 3})),
        (0, 2),
    )


def tree_ball_cover(n=24, seed=5, radius=2.0):
    from nervekit import build_ball_cover

    return build_ball_cover(tree_space(n, seed=seed), radius, seed=seed)


@pytest.fixture
def circle_cover():
    return three_arc_cover()


@pytest.fixture
def sphere_cover():
    return octahedral_cover()


@pytest.fixture
def line_cover():
    return line_pair_cover()
