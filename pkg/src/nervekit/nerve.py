"""Nerve complex of a cover."""
from __future__ import annotations

from .complex import SimplicialComplex
from .cover import Cover, intersections

DEFAULT_MAX_DIM = 8


def nerve_of(cover: Cover, max_dim: int = DEFAULT_MAX_DIM) -> SimplicialComplex:
    """One vertex per cover set, one k-simplex per nonempty (k+1)-fold
    intersection, truncated above max_dim."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    recs = intersections(cover, max_dim + 1)
    return SimplicialComplex(
        cover.n_sets, frozenset(rec.indices for rec in recs)
    )
