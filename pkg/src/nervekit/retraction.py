"""Explicit deformation retractions of the mapping cylinder.

Four homotopies are implemented: the straightening of the cover diagram onto
the graph of the nerve map, the collapse of the cylinder onto the apex slice,
the cone retraction over a single cover set, and the simplex-wise retraction
that peels one skeleton dimension at a time.  Endpoint and fixed-point
identities hold bit-exactly on the sampled parameter grid; interpolation
helpers branch on their plateaus to guarantee this.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .complex import BarycentricPoint, combine
from .cone import ConePoint, CylinderPoint, CylinderSpace, cone_distance
from .cover import Cover, intersections
from .metric import FiniteMetricSpace, MetricError
from .partition import PartitionOfUnity


def lerp(a: float, b: float, s: float) -> float:
    """(1-s)a + sb with bit-exact endpoints."""
    if s == 0.0 or a == b:
        return a
    if s == 1.0:
        return b
    return (1.0 - s) * a + s * b


class CutoffProfile:
    """Piecewise-linear cutoff functions g, mu, nu with their plateaus exact.

    g(t, s) is 1 for s <= 1/3 and 0 at s = 1; mu is 0 below 1/2 and 1 above
    2/3; nu is 0 below 2/3 and 1 above 3/4.  Between plateaus everything is
    linear, the simplest Lipschitz completion.
    """

    def g(self, t: float, s: float) -> float:
        if s <= 1.0 / 3.0:
            return 1.0
        if s >= 1.0:
            return 0.0
        return (1.0 - s) * 1.5

    def mu(self, s: float) -> float:
        if s <= 0.5:
            return 0.0
        if s >= 2.0 / 3.0:
            return 1.0
        return (s - 0.5) * 6.0

    def nu(self, s: float) -> float:
        if s <= 2.0 / 3.0:
            return 0.0
        if s >= 0.75:
            return 1.0
        return (s - 2.0 / 3.0) * 12.0


DEFAULT_PROFILE = CutoffProfile()


class Contraction:
    """Discrete stand-in for a strong deformation retraction of a point set
    to its center.

    Each point carries a waypoint path of greedy distance-decreasing steps to
    the center; time in [0, L] is mapped onto the path with saturation at the
    center from L/2 on.
    """

    def __init__(self, space: FiniteMetricSpace, members: frozenset, center: int,
                 L: float):
        if center not in members:
            raise MetricError("contraction center must belong to the set")
        self.members = frozenset(members)
        self.center = int(center)
        self.L = float(L)
        self.paths = {}
        d = space.dist
        ordered = sorted(members)
        for x in ordered:
            path = [x]
            cur = x
            while cur != center:
                here = d[cur, center]
                cands = [y for y in ordered if d[y, center] < here]
                cur = min(cands, key=lambda y: (d[cur, y], y))
                path.append(cur)
            self.paths[x] = path

    def __call__(self, x: int, time: float) -> int:
        if x not in self.paths:
            raise MetricError(f"point {x} outside contraction domain")
        if time >= self.L / 2.0:
            return self.center
        path = self.paths[x]
        if time <= 0.0 or len(path) == 1:
            return x
        frac = time / (self.L / 2.0)
        return path[int(round(frac * (len(path) - 1)))]


def build_contractions(cover: Cover, L: float, max_order: int = 9) -> dict:
    """One contraction per nonempty intersection, keyed by its index set."""
    return {
        rec.indices: Contraction(cover.space, rec.members, rec.center, L)
        for rec in intersections(cover, max_order)
    }


def homotopy_H(pou: PartitionOfUnity, theta: BarycentricPoint, x: int,
               s: float) -> CylinderPoint:
    """Slide theta toward the nerve image of x along the straight segment.

    At s=0 this is the identity, at s=1 the pair lands on the graph of the
    nerve map, and points already on the graph stay put for every s.
    """
    cover = pou.cover
    if any(x not in cover.sets[j] for j in theta.support):
        raise MetricError(
            f"membership violation: {x} outside the intersection of "
            f"{sorted(theta.support)}"
        )
    return CylinderPoint(combine(theta, pou.theta(x), s), ConePoint(x, 0.0))


def homotopy_F(p: CylinderPoint, s: float, L: float) -> CylinderPoint:
    """Push the cone factor toward the apex; the apex slice is fixed."""
    t = p.cone.t
    if s == 0.0 or t == L:
        new_t = t
    elif s == 1.0:
        new_t = L
    else:
        new_t = (1.0 - s) * t + s * L
    return CylinderPoint(p.theta, ConePoint(p.cone.base, new_t))


def cone_retraction_phi(contraction: Contraction, p: ConePoint, s: float,
                        profile: CutoffProfile = DEFAULT_PROFILE) -> ConePoint:
    """Retraction of the cone over one cover set onto its base slice."""
    t = p.t
    base = contraction(p.base, s * t)
    g = profile.g(t, s)
    return ConePoint(base, t if g == 1.0 else g * t)


def radial_projection(sigma, x: BarycentricPoint, t: float, L: float):
    """Project (x, t) in sigma x [0, L] away from the point hovering at
    height 2L over the barycenter, onto the base slice or the wall over the
    simplex boundary.

    Returns (target point, landing height).  Points of the boundary wall and
    of the base slice are their own images, exactly.
    """
    sigma = tuple(sorted(sigma))
    k = len(sigma)
    if k == 1 or t == 0.0:
        return x, 0.0
    if x.support < frozenset(sigma):
        return x, t
    if not x.support <= frozenset(sigma):
        raise MetricError("barycentric point is not carried by the simplex")
    bary = 1.0 / k
    coords = np.array([x[v] for v in sigma])
    lam0 = 2.0 * L / (2.0 * L - t)
    lam_wall = math.inf
    wall_hits = []
    for i, c in enumerate(coords):
        if c < bary:
            lam_i = bary / (bary - c)
            if lam_i < lam_wall:
                lam_wall, wall_hits = lam_i, [i]
            elif lam_i == lam_wall:
                wall_hits.append(i)
    out = None
    if lam_wall < lam0:
        lam = lam_wall
        u = min(max(2.0 * L + lam * (t - 2.0 * L), 0.0), L)
        out = bary + lam * (coords - bary)
        out[wall_hits] = 0.0
    else:
        lam = lam0
        u = 0.0
        out = bary + lam * (coords - bary)
    out = np.maximum(out, 0.0)
    point = BarycentricPoint({v: w for v, w in zip(sigma, out)})
    return point, float(u)


class _BlendGrid:
    """Sampled distances to the low-landing and high-landing regions of
    sigma x [0, L], shared across simplices of equal dimension."""

    def __init__(self, k: int, L: float, subdivisions: int = 12, heights: int = 25):
        verts = tuple(range(k))
        pts = []
        us = []
        for comp in itertools.combinations_with_replacement(range(k), subdivisions):
            counts = np.bincount(comp, minlength=k).astype(float) / subdivisions
            b = BarycentricPoint({v: c for v, c in zip(verts, counts) if c > 0})
            for t in np.linspace(0.0, L, heights):
                _, u = radial_projection(verts, b, float(t), L)
                pts.append(np.append(counts, t))
                us.append(u)
        pts = np.array(pts)
        us = np.array(us)
        self.low = pts[us <= L / 10.0]
        self.high = pts[us >= L / 2.0]

    def distances(self, coords: np.ndarray, t: float):
        q = np.append(coords, t)
        s0 = float(np.sqrt(((self.low - q) ** 2).sum(axis=1)).min())
        s1 = float(np.sqrt(((self.high - q) ** 2).sum(axis=1)).min())
        return s0, s1


_BLEND_CACHE = {}


def _blend_grid(k: int, L: float) -> _BlendGrid:
    key = (k, L)
    if key not in _BLEND_CACHE:
        _BLEND_CACHE[key] = _BlendGrid(k, L)
    return _BLEND_CACHE[key]


def height_blend(sigma, x: BarycentricPoint, t: float, L: float,
                 u: float = None) -> float:
    """Interpolated landing height w between the projection height and t.

    Equals u exactly when u <= L/10 and t exactly when u >= L/2; in between
    it weights by the distances to those two regions.
    """
    sigma = tuple(sorted(sigma))
    if u is None:
        _, u = radial_projection(sigma, x, t, L)
    if u == t or u >= L / 2.0:
        return t
    if u <= L / 10.0:
        return u
    coords = np.array([x[v] for v in sigma])
    s0, s1 = _blend_grid(len(sigma), L).distances(coords, t)
    return (s1 * u + s0 * t) / (s0 + s1)


def simplexwise_retraction(sigma, contraction: Contraction, x: BarycentricPoint,
                           p: ConePoint, s: float, L: float,
                           profile: CutoffProfile = DEFAULT_PROFILE):
    """One step of the retraction of sigma x K(U_sigma) onto its base and
    boundary part.

    Returns the pair (simplex point, cone point).  The base slice and the
    cone over the simplex boundary are fixed pointwise at every s.
    """
    sigma = tuple(sorted(sigma))
    t = p.t
    psi0, u = radial_projection(sigma, x, t, L)
    w = height_blend(sigma, x, t, L, u=u)
    new_x = combine(x, psi0, s)
    mu_s = profile.mu(s)
    nu_s = profile.nu(s)
    base = contraction(p.base, 0.0 if mu_s == 0.0 else mu_s * (t - u))
    if nu_s == 0.0 or w == t:
        new_t = t
    elif nu_s == 1.0:
        new_t = w
    else:
        new_t = (1.0 - nu_s) * t + nu_s * w
    return new_x, ConePoint(base, new_t)


@dataclass(frozen=True)
class TraceStage:
    simplex: tuple
    s_grid: tuple
    points: tuple


@dataclass(frozen=True)
class DeformationTrace:
    """Sampled path of a point under the composite cylinder retraction."""

    start: CylinderPoint
    stages: tuple
    membership_ok: bool

    @property
    def end(self) -> CylinderPoint:
        if not self.stages:
            return self.start
        return self.stages[-1].points[-1]

    @property
    def ends_in_base(self) -> bool:
        return self.end.cone.t == 0.0

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "stages": [
                {
                    "simplex": list(st.simplex),
                    "s_grid": list(st.s_grid),
                    "points": [q.to_json() for q in st.points],
                }
                for st in self.stages
            ],
            "membership_ok": self.membership_ok,
            "ends_in_base": self.ends_in_base,
        }


def full_cylinder_retraction(cyl: CylinderSpace, contractions: dict,
                             point: CylinderPoint, n_steps: int = 16,
                             profile: CutoffProfile = DEFAULT_PROFILE) -> DeformationTrace:
    """Compose the simplex-wise retractions from the top skeleton down until
    the point reaches the base slice.

    Each stage replays the homotopy of the current support simplex over the
    s grid; the support either loses a vertex or the height drops to zero,
    so the composition terminates.
    """
    cyl.require(point)
    grid = tuple(i / n_steps for i in range(n_steps + 1))
    stages = []
    membership_ok = True
    cur = point
    guard = 0
    while cur.cone.t != 0.0:
        guard += 1
        if guard > cyl.nerve.dim + 2:
            raise MetricError("cylinder retraction failed to terminate")
        supp = frozenset(cur.theta.support)
        if supp not in contractions:
            raise MetricError(
                f"missing contraction data for simplex {sorted(supp)}"
            )
        con = contractions[supp]
        sigma = tuple(sorted(supp))
        pts = []
        for s in grid:
            if len(sigma) == 1:
                q = CylinderPoint(cur.theta, cone_retraction_phi(con, cur.cone, s, profile))
            else:
                nx_, nc = simplexwise_retraction(sigma, con, cur.theta, cur.cone,
                                                 s, cyl.L, profile)
                q = CylinderPoint(nx_, nc)
            if not cyl.check_membership(q):
                membership_ok = False
            pts.append(q)
        stages.append(TraceStage(sigma, grid, tuple(pts)))
        cur = pts[-1]
    return DeformationTrace(point, tuple(stages), membership_ok)


def measure_retraction_lipschitz(contraction: Contraction,
                                 space: FiniteMetricSpace, L: float,
                                 n_steps: int = 16, seed: int = 0,
                                 samples: int = 400,
                                 profile: CutoffProfile = DEFAULT_PROFILE):
    """Empirical Lipschitz data for the cone retraction over one set.

    Returns (measured constant, measured constant of the contraction flow,
    shape ratio c with measured <= c * L * (1 + L) * flow constant).
    """
    rng = np.random.default_rng(seed)
    members = sorted(contraction.members)
    grid = [i / n_steps for i in range(n_steps + 1)]

    def sample_point():
        return (
            ConePoint(int(rng.choice(members)), float(rng.uniform(0.0, L))),
            float(rng.choice(grid)),
        )

    def flow_dist(a, b):
        worst = 0.0
        for tt in np.linspace(0.0, L, 9):
            worst = max(worst, float(space.dist[contraction(a, tt), contraction(b, tt)]))
        return worst

    lip_flow = 0.0
    for _ in range(samples):
        a, b = int(rng.choice(members)), int(rng.choice(members))
        if space.dist[a, b] > 0:
            lip_flow = max(lip_flow, flow_dist(a, b) / float(space.dist[a, b]))
    lip_flow = max(lip_flow, 1.0)

    lip = 0.0
    for _ in range(samples):
        (p, s), (q, r) = sample_point(), sample_point()
        dom = math.hypot(
            cone_distance(p, q, space, L), abs(s - r)
        )
        if dom == 0.0:
            continue
        img = cone_distance(
            cone_retraction_phi(contraction, p, s, profile),
            cone_retraction_phi(contraction, q, r, profile),
            space, L,
        )
        lip = max(lip, img / dom)
    c = lip / (L * (1.0 + L) * lip_flow)
    return lip, lip_flow, c
