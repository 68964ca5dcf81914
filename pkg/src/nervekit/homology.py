"""GF(2) simplicial homology and Vietoris-Rips reference complexes.

Betti numbers over the two-element field are the desk-scale proxy for
homotopy-type agreement; torsion is out of scope.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import numpy as np

from .complex import SimplicialComplex
from .cover import Cover
from .metric import FiniteMetricSpace
from .nerve import nerve_of


class HomologyError(ValueError):
    pass


def gf2_rank(mat: np.ndarray) -> int:
    """Rank of a 0/1 matrix over GF(2) by Gaussian elimination."""
    m = np.array(mat, dtype=np.uint8) & 1
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if m[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        hits = np.flatnonzero(m[:, col])
        hits = hits[hits != rank]
        m[hits] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def boundary_matrix(K: SimplicialComplex, k: int) -> np.ndarray:
    """GF(2) boundary matrix from k-simplices to (k-1)-simplices."""
    highs = K.k_simplices(k)
    lows = K.k_simplices(k - 1)
    low_index = {s: i for i, s in enumerate(lows)}
    mat = np.zeros((len(lows), len(highs)), dtype=np.uint8)
    for j, s in enumerate(highs):
        for drop in range(len(s)):
            face = s[:drop] + s[drop + 1:]
            mat[low_index[face], j] = 1
    return mat


@dataclass(frozen=True)
class BettiVector:
    ranks: tuple
    truncation_dim: int

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * r for k, r in enumerate(self.ranks))


def betti(K: SimplicialComplex, max_dim: int = None) -> BettiVector:
    """GF(2) Betti numbers b_0..b_max_dim of a nonempty complex."""
    if not K.simplices:
        raise HomologyError("empty complex has no homology")
    top = K.dim if max_dim is None else min(max_dim, K.dim)
    ranks = []
    rank_in = 0  # rank of the boundary map landing in dimension k
    for k in range(top + 1):
        n_k = len(K.k_simplices(k))
        rank_out = gf2_rank(boundary_matrix(K, k + 1)) if k + 1 <= K.dim else 0
        ranks.append(n_k - rank_in - rank_out)
        rank_in = rank_out
    return BettiVector(tuple(ranks), truncation_dim=top)


def vr_complex(space: FiniteMetricSpace, scale: float, max_dim: int = 3) -> SimplicialComplex:
    """Vietoris-Rips complex: cliques of the graph with edges of length <= scale."""
    if scale <= 0:
        raise HomologyError("scale must be positive")
    g = nx.Graph()
    g.add_nodes_from(range(space.n))
    close = np.argwhere(np.triu(space.dist <= scale, k=1))
    g.add_edges_from((int(i), int(j)) for i, j in close)
    maximal = []
    for clique in nx.find_cliques(g):
        clique = sorted(clique)
        if len(clique) > max_dim + 1:
            maximal.extend(combinations(clique, max_dim + 1))
        else:
            maximal.append(tuple(clique))
    return SimplicialComplex.from_maximal(space.n, maximal)


@dataclass(frozen=True)
class NerveMatchReport:
    nerve_betti: BettiVector
    space_betti: BettiVector
    matches: bool
    note: str = (
        "homology agreement is necessary, not sufficient, for "
        "homotopy equivalence of the space and the nerve"
    )

    def to_json(self) -> dict:
        return {
            "nerve_betti": list(self.nerve_betti.ranks),
            "space_betti": list(self.space_betti.ranks),
            "truncation_dim": min(
                self.nerve_betti.truncation_dim, self.space_betti.truncation_dim
            ),
            "pass": self.matches,
            "note": self.note,
        }


def nerve_matches_space(cover: Cover, scale: float, max_dim: int = 3) -> NerveMatchReport:
    """Compare Betti numbers of the cover's nerve with those of a VR complex
    of the underlying space at the given scale."""
    nb = betti(nerve_of(cover, max_dim=max_dim), max_dim=max_dim - 1)
    sb = betti(vr_complex(cover.space, scale, max_dim=max_dim), max_dim=max_dim - 1)
    a = nb.ranks + (0,) * (max_dim - len(nb.ranks))
    b = sb.ranks + (0,) * (max_dim - len(sb.ranks))
    return NerveMatchReport(nb, sb, matches=a == b)
