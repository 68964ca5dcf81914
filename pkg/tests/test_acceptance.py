"""Acceptance gate: one test per criterion, one printed pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines alongside the pytest verdicts.
"""
import functools
import itertools
import json
import math

import numpy as np
import pytest

from conftest import (line_pair_cover, octahedral_cover, three_arc_cover,
                      tree_ball_cover)
from nervekit.complex import BarycentricPoint, realization_distance
from nervekit.cone import ConePoint, CylinderPoint, CylinderSpace, cone_distance
from nervekit.cover import Cover, build_ball_cover, intersections
from nervekit.homology import betti, nerve_matches_space, vr_complex
from nervekit.metric import (FiniteMetricSpace, PointMap, check_approximation,
                             gh_distance_bound, gh_distance_exhaustive)
from nervekit.nerve import nerve_of
from nervekit.partition import PartitionOfUnity
from nervekit.retraction import (Contraction, build_contractions,
                                 cone_retraction_phi, full_cylinder_retraction,
                                 homotopy_F, homotopy_H, radial_projection,
                                 height_blend, simplexwise_retraction)
from nervekit.samples import (circle_space, grid_with_strainers,
                              random_point_space)
from nervekit.stability import (GluingConfig, build_gluing_atlas, glue_maps,
                                homotopy_equivalence_via_nerves, lift_cover)

S_GRID = [i / 16 for i in range(17)]
TOL = 1e-9


def criterion(k, name):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"criterion {k} ({name}): FAIL")
                raise
            print(f"criterion {k} ({name}): PASS")
        return wrapper
    return deco


def _golden_covers():
    n = 64
    return [
        line_pair_cover(),
        three_arc_cover(n),
        build_ball_cover(circle_space(n), 0.6, seed=2),
        octahedral_cover(),
        tree_ball_cover(),
    ]


@criterion(1, "partition of unity")
def test_criterion_1_partition_suite():
    covers = _golden_covers()
    assert len(covers) >= 5
    for cov in covers:
        pou = PartitionOfUnity(cov)
        sums = pou.values.sum(axis=1)
        assert np.all(np.abs(sums - 1.0) <= 1e-12)
        K = nerve_of(cov)
        for x in range(cov.space.n):
            supp = pou.support(x)
            assert supp == cov.membership(x)
            assert K.contains(supp)


@criterion(2, "cone and realization metrics")
def test_criterion_2_metric_suite():
    sp = random_point_space(15, seed=8)
    L = 7.0
    rng = np.random.default_rng(21)
    for _ in range(10000):
        a, b, c = (
            ConePoint(int(rng.integers(sp.n)), float(rng.uniform(0.0, L)))
            for _ in range(3)
        )
        dab = cone_distance(a, b, sp, L)
        dbc = cone_distance(b, c, sp, L)
        dac = cone_distance(a, c, sp, L)
        assert dab >= 0.0
        assert dab == cone_distance(b, a, sp, L)
        assert cone_distance(a, a, sp, L) == 0.0
        assert dac <= dab + dbc + TOL

    verts = list(range(6))
    def random_bary():
        k = int(rng.integers(1, 5))
        picks = rng.choice(verts, size=k, replace=False)
        w = rng.uniform(0.1, 1.0, size=k)
        return BarycentricPoint({int(v): float(c) for v, c in zip(picks, w)})

    for _ in range(10000):
        a, b, c = random_bary(), random_bary(), random_bary()
        dab = realization_distance(a, b)
        assert dab >= 0.0
        assert dab == realization_distance(b, a)
        assert realization_distance(a, a) == 0.0
        assert realization_distance(a, c) <= dab + realization_distance(b, c) + TOL

    # apex identification and the apex-slice embedding are exact
    assert cone_distance(ConePoint(0, L), ConePoint(9, L), sp, L) == 0.0
    cov = three_arc_cover()
    cyl = CylinderSpace(cov)
    thetas = [
        BarycentricPoint({0: 1.0}),
        BarycentricPoint({0: 0.25, 1: 0.75}),
        BarycentricPoint({1: 0.5, 2: 0.5}),
    ]
    for a in thetas:
        for b in thetas:
            assert cyl.distance(cyl.psi_embed(a), cyl.psi_embed(b)) == \
                realization_distance(a, b)


@criterion(3, "retraction endpoints")
def test_criterion_3_retraction_endpoints():
    checked = 0
    covers = [three_arc_cover(64), octahedral_cover()]
    for cov in covers:
        pou = PartitionOfUnity(cov)
        cyl = CylinderSpace(cov)
        cons = build_contractions(cov, cyl.L)
        L = cyl.L

        for x in range(cov.space.n):
            target = pou.theta(x)
            j = min(target.support)
            start = BarycentricPoint({j: 1.0})
            assert homotopy_H(pou, start, x, 0.0).theta == start
            assert homotopy_H(pou, start, x, 1.0).theta == target
            for s in S_GRID:
                assert homotopy_H(pou, target, x, s).theta == target
                checked += 1

        rng = np.random.default_rng(5)
        for _ in range(120):
            x = int(rng.integers(cov.space.n))
            t = float(rng.uniform(0.0, L))
            p = CylinderPoint(pou.theta(x), ConePoint(x, t))
            assert homotopy_F(p, 0.0, L).cone.t == t
            assert homotopy_F(p, 1.0, L).cone.t == L
            apex = CylinderPoint(p.theta, ConePoint(x, L))
            for s in S_GRID:
                assert homotopy_F(apex, s, L).cone.t == L
                checked += 1

        for rec in intersections(cov, 2):
            con = cons[rec.indices]
            for x in sorted(rec.members)[:4]:
                p = ConePoint(x, 2.5)
                assert cone_retraction_phi(con, p, 0.0) == p
                assert cone_retraction_phi(con, p, 1.0).t == 0.0
                base = ConePoint(x, 0.0)
                for s in S_GRID:
                    assert cone_retraction_phi(con, base, s) == base
                    checked += 1
            if len(rec.indices) < 2:
                continue
            sigma = tuple(sorted(rec.indices))
            w = {v: 1.0 / len(sigma) for v in sigma}
            w[sigma[0]] += 0.2
            w[sigma[-1]] -= 0.2
            xb = BarycentricPoint(w)
            pc = ConePoint(rec.center, 3.0)
            nx0, nc0 = simplexwise_retraction(sigma, con, xb, pc, 0.0, L)
            assert nx0 == xb and nc0 == pc
            psi0, u = radial_projection(sigma, xb, pc.t, L)
            wland = height_blend(sigma, xb, pc.t, L, u=u)
            nx1, nc1 = simplexwise_retraction(sigma, con, xb, pc, 1.0, L)
            assert nx1 == psi0 and nc1.t == wland
            base = ConePoint(rec.center, 0.0)
            wall = BarycentricPoint({sigma[0]: 1.0})
            for s in S_GRID:
                bx, bc = simplexwise_retraction(sigma, con, xb, base, s, L)
                assert bx == xb and bc == base
                wx, wc = simplexwise_retraction(sigma, con, wall, pc, s, L)
                assert wx == wall and wc.t == pc.t
                checked += 2

        rng = np.random.default_rng(17)
        for _ in range(40):
            x = int(rng.integers(cov.space.n))
            t = float(rng.uniform(0.0, L))
            p = CylinderPoint(pou.theta(x), ConePoint(x, t))
            trace = full_cylinder_retraction(cyl, cons, p)
            assert trace.membership_ok
            assert trace.ends_in_base
    assert checked >= 1000


@criterion(4, "nerve equivalence oracle")
def test_criterion_4_nerve_oracle():
    circle = nerve_matches_space(three_arc_cover(64), scale=0.2, max_dim=2)
    assert circle.matches
    assert circle.nerve_betti.ranks == (1, 1)
    assert circle.space_betti.ranks == (1, 1)

    sphere = nerve_matches_space(octahedral_cover(94), scale=0.6, max_dim=3)
    assert sphere.matches
    assert sphere.nerve_betti.ranks == (1, 0, 1)
    assert sphere.space_betti.ranks == (1, 0, 1)


@criterion(5, "GH oracle bracket")
def test_criterion_5_gh_bracket():
    spaces = [
        random_point_space(2 + seed % 4, dim=2 + seed % 2, seed=seed)
        for seed in range(11)
    ]
    pairs = list(itertools.combinations(range(len(spaces)), 2))
    assert len(pairs) >= 50
    for i, j in pairs:
        X, Y = spaces[i], spaces[j]
        exact = gh_distance_exhaustive(X, Y)
        lower, upper = gh_distance_bound(X, Y, trials=8, seed=0)
        assert lower <= exact + 1e-12
        assert exact <= upper + 1e-12
    for sp in spaces[:5]:
        assert gh_distance_exhaustive(sp, sp) == 0.0


@criterion(6, "stability displacements")
def test_criterion_6_stability():
    n = 64
    cov = three_arc_cover(n)
    mesh = cov.mesh()
    rng = np.random.default_rng(3)
    ang = 2.0 * np.pi * np.arange(n) / n
    coords = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    coords = coords + rng.uniform(-1.0, 1.0, size=coords.shape) * mesh / 25.0
    perm = (np.arange(n) + 7) % n
    tgt = FiniteMetricSpace.from_coords(coords[perm])
    pm = PointMap(cov.space, tgt, np.argsort(perm))
    cert = check_approximation(pm, mesh / 5.0)
    assert max(cert.distortion, cert.defect) <= mesh / 10.0

    lift = lift_cover(cov, cert)
    assert nerve_of(lift.target).simplices == nerve_of(cov).simplices
    report = homotopy_equivalence_via_nerves(lift)
    assert report.membership_ok
    assert max(report.disp_h, report.disp_g) <= 10.0 * mesh
    assert report.disp_roundtrip <= 100.0 * mesh


@criterion(7, "chart gluing")
def test_criterion_7_gluing():
    m = 9
    space, pairs = grid_with_strainers(m, spacing=1.0)
    D = frozenset(i * m + j for i in range(3, 6) for j in range(3, 6))
    config = GluingConfig(space, D, mu=2.0)
    # inner map: shift east by one column, an exact translation where defined
    g = {
        x: x + 1 if (x < m * m and x % m < m - 1) else x
        for x in config.D1
    }
    f = PointMap(space, space, np.arange(space.n))
    blend = [x for x in range(space.n) if 0.0 < config.d(x) < config.mu]
    atlas = build_gluing_atlas(space, space, blend, 3.0, pairs, pairs, g,
                               delta=0.3)
    glued, report = glue_maps(f, g, config, atlas)
    for x in config.D:
        assert glued(x) == g[x]
    for x in range(space.n):
        if x not in config.D0:
            assert glued(x) == f(x)
    idx = sorted(D)
    img = [glued(x) for x in idx]
    gap = float(np.abs(
        space.dist[np.ix_(img, img)] - space.dist[np.ix_(idx, idx)]
    ).max())
    assert gap <= 2.0 * report["max_chart_distortion"]


@criterion(8, "determinism")
def test_criterion_8_determinism(tmp_path):
    from nervekit.cli import main

    sp = circle_space(32)
    space_path = tmp_path / "space.json"
    space_path.write_text(json.dumps(sp.to_json()))
    cov = three_arc_cover(32)
    cover_path = tmp_path / "cover.json"
    cov.save(str(cover_path))

    snapshots = []
    for _ in range(2):
        files = {
            "cover_out": tmp_path / "ball_cover.json",
            "cover_report": tmp_path / "cover_report.json",
            "verify": tmp_path / "verify.json",
            "stability": tmp_path / "stability.json",
        }
        main(["cover", str(space_path), "--radius", "0.9", "--seed", "5",
              "--out", str(files["cover_out"]),
              "--report", str(files["cover_report"])])
        main(["verify", str(space_path), str(cover_path),
              "--vr-scale", "0.6", "--max-dim", "2",
              "--out", str(files["verify"])])
        main(["stability", str(space_path), str(space_path), str(cover_path),
              "--epsilon", str(cov.mesh() / 8.0),
              "--out", str(files["stability"])])
        snapshots.append({k: p.read_bytes() for k, p in files.items()})
    assert snapshots[0] == snapshots[1]
    assert gh_distance_bound(sp, sp, seed=4) == gh_distance_bound(sp, sp, seed=4)
