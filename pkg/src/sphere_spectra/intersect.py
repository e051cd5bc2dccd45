"""Self-intersection testing for triangle meshes on S^3.

Two 2-simplices in 4-space generically miss each other, so the
well-posed test projects the mesh to R^3 first: stereographic projection
from a pole chosen automatically as far as possible from the surface (a
diffeomorphism of S^3 minus the pole, so embeddedness is preserved).

The projected mesh goes through a uniform spatial hash (broad phase) and
a triangle-triangle intersection test between non-adjacent triangles
(narrow phase).  Narrow-phase predicates are evaluated in floating point
with a conservative error bound; any sign decision within the bound is
re-evaluated in exact rational arithmetic, so the reported verdict is
exact for the projected coordinates.  Touching configurations count as
intersections.
"""

import math
from fractions import Fraction

import numpy as np

__all__ = ["PoleSelectionError", "select_pole", "stereographic_project",
           "self_intersection_test", "triangles_intersect"]

_ORIENT_EPS = 1e-14


class PoleSelectionError(RuntimeError):
    """No projection pole with enough clearance from the mesh."""


def select_pole(vertices, samples=4096, seed=20240317):
    """Point of S^3 far from every vertex (maximizing the minimum distance).

    Deterministic: candidates are a fixed seeded sample plus the
    coordinate axes.  Returns (pole, clearance_angle).
    """
    rng = np.random.default_rng(seed)
    cand = rng.standard_normal((samples, 4))
    cand = np.concatenate([cand, np.eye(4), -np.eye(4)])
    cand /= np.linalg.norm(cand, axis=1)[:, None]
    # max_i <pole, v_i> -> cos of distance to the nearest vertex
    worst = np.max(cand @ vertices.T, axis=1)
    best = int(np.argmin(worst))
    clearance = math.acos(min(1.0, max(-1.0, worst[best])))
    return cand[best], clearance


def stereographic_project(vertices, pole):
    """Stereographic chart of S^3 minus the pole onto R^3."""
    pole = np.asarray(pole, dtype=float)
    basis = []
    for k in np.argsort(np.abs(pole)):
        e = np.zeros(4)
        e[k] = 1.0
        for b in basis:
            e = e - b * (e @ b)
        e = e - pole * (e @ pole)
        nrm = np.linalg.norm(e)
        if nrm > 1e-8:
            basis.append(e / nrm)
        if len(basis) == 3:
            break
    basis = np.array(basis)
    denom = 1.0 - vertices @ pole
    if (denom < 1e-12).any():
        raise PoleSelectionError("mesh passes through the projection pole")
    return (vertices @ basis.T) / denom[:, None]


def _orient3d_float(a, b, c, d):
    """Batched signed volume det[b-a, c-a, d-a] with an error bound.

    Returns (det, bound): |det - true det| <= bound, so the sign is
    certain whenever |det| > bound.
    """
    u = b - a
    v = c - a
    w = d - a
    m0 = v[..., 1] * w[..., 2] - v[..., 2] * w[..., 1]
    m1 = v[..., 0] * w[..., 2] - v[..., 2] * w[..., 0]
    m2 = v[..., 0] * w[..., 1] - v[..., 1] * w[..., 0]
    det = u[..., 0] * m0 - u[..., 1] * m1 + u[..., 2] * m2
    av, aw, au = np.abs(v), np.abs(w), np.abs(u)
    perm = (au[..., 0] * (av[..., 1] * aw[..., 2] + av[..., 2] * aw[..., 1])
            + au[..., 1] * (av[..., 0] * aw[..., 2] + av[..., 2] * aw[..., 0])
            + au[..., 2] * (av[..., 0] * aw[..., 1] + av[..., 1] * aw[..., 0]))
    return det, _ORIENT_EPS * perm


def _orient3d_exact(a, b, c, d):
    """Exact sign of det[b-a, c-a, d-a] using rational arithmetic."""
    u = [Fraction(b[k]) - Fraction(a[k]) for k in range(3)]
    v = [Fraction(c[k]) - Fraction(a[k]) for k in range(3)]
    w = [Fraction(d[k]) - Fraction(a[k]) for k in range(3)]
    det = (u[0] * (v[1] * w[2] - v[2] * w[1])
           - u[1] * (v[0] * w[2] - v[2] * w[0])
           + u[2] * (v[0] * w[1] - v[1] * w[0]))
    return (det > 0) - (det < 0)


def _orient2d_exact(a, b, c):
    det = ((Fraction(b[0]) - Fraction(a[0])) * (Fraction(c[1]) - Fraction(a[1]))
           - (Fraction(b[1]) - Fraction(a[1])) * (Fraction(c[0]) - Fraction(a[0])))
    return (det > 0) - (det < 0)


def _segment_hits_triangle_exact(p, q, tri):
    """Exact: does segment pq meet triangle tri (boundary contact counts)?"""
    a, b, c = tri
    sp = _orient3d_exact(a, b, c, p)
    sq = _orient3d_exact(a, b, c, q)
    if sp == 0 and sq == 0:
        return _coplanar_segment_hits_exact(p, q, tri)
    if sp * sq > 0:
        return False
    u = _orient3d_exact(p, a, b, q)
    v = _orient3d_exact(p, b, c, q)
    w = _orient3d_exact(p, c, a, q)
    signs = {u, v, w}
    return not (1 in signs and -1 in signs)


def _drop_axis(tri3, extra):
    """Project coplanar points to the 2D plane of largest normal component."""
    a, b, c = (np.asarray(p, dtype=float) for p in tri3)
    n = np.cross(b - a, c - a)
    axis = int(np.argmax(np.abs(n)))
    keep = [k for k in range(3) if k != axis]
    return ([tuple(np.asarray(p)[keep]) for p in tri3],
            [tuple(np.asarray(p)[keep]) for p in extra])


def _point_in_triangle_2d(p, tri2):
    a, b, c = tri2
    s1 = _orient2d_exact(a, b, p)
    s2 = _orient2d_exact(b, c, p)
    s3 = _orient2d_exact(c, a, p)
    return not (1 in {s1, s2, s3} and -1 in {s1, s2, s3})


def _segments_cross_2d(p, q, a, b):
    s1 = _orient2d_exact(p, q, a)
    s2 = _orient2d_exact(p, q, b)
    s3 = _orient2d_exact(a, b, p)
    s4 = _orient2d_exact(a, b, q)
    if s1 * s2 < 0 and s3 * s4 < 0:
        return True
    # collinear / endpoint contacts
    for (u, v, w, s) in [(p, q, a, s1), (p, q, b, s2), (a, b, p, s3), (a, b, q, s4)]:
        if s == 0 and _between_2d(u, v, w):
            return True
    return False


def _between_2d(u, v, w):
    """Is w within the bounding box of collinear segment uv?"""
    return (min(u[0], v[0]) <= w[0] <= max(u[0], v[0])
            and min(u[1], v[1]) <= w[1] <= max(u[1], v[1]))


def _coplanar_segment_hits_exact(p, q, tri):
    tri2, (p2, q2) = _drop_axis(tri, [p, q])
    if _point_in_triangle_2d(p2, tri2) or _point_in_triangle_2d(q2, tri2):
        return True
    a, b, c = tri2
    return any(_segments_cross_2d(p2, q2, u, v)
               for (u, v) in [(a, b), (b, c), (c, a)])


def triangles_intersect(tri1, tri2):
    """Exact triangle-triangle intersection in R^3 (contact counts).

    Reference predicate used for the exact narrow-phase fallback: any of
    the six edges meeting the other triangle, or coplanar overlap.
    """
    t1 = [tuple(map(float, p)) for p in tri1]
    t2 = [tuple(map(float, p)) for p in tri2]
    for (p, q) in [(t1[0], t1[1]), (t1[1], t1[2]), (t1[2], t1[0])]:
        if _segment_hits_triangle_exact(p, q, t2):
            return True
    for (p, q) in [(t2[0], t2[1]), (t2[1], t2[2]), (t2[2], t2[0])]:
        if _segment_hits_triangle_exact(p, q, t1):
            return True
    return False


def _broad_phase(points, triangles):
    """Uniform spatial hash of triangle AABBs -> candidate non-adjacent pairs."""
    tp = points[triangles]
    lo = tp.min(axis=1)
    hi = tp.max(axis=1)
    ext = (hi - lo).max(axis=1)
    cell = max(float(np.median(ext)), 1e-12)
    lo_idx = np.floor(lo / cell).astype(np.int64)
    hi_idx = np.floor(hi / cell).astype(np.int64)
    buckets = {}
    for t in range(len(triangles)):
        x0, y0, z0 = lo_idx[t]
        x1, y1, z1 = hi_idx[t]
        for ix in range(x0, x1 + 1):
            for iy in range(y0, y1 + 1):
                for iz in range(z0, z1 + 1):
                    buckets.setdefault((ix, iy, iz), []).append(t)
    tri_sets = [set(row) for row in triangles]
    pairs = set()
    for members in buckets.values():
        if len(members) < 2:
            continue
        for i in range(len(members)):
            ti = members[i]
            for j in range(i + 1, len(members)):
                tj = members[j]
                key = (ti, tj) if ti < tj else (tj, ti)
                if key in pairs:
                    continue
                if tri_sets[ti] & tri_sets[tj]:
                    continue
                # AABB overlap re-check (hash cells over-approximate)
                if (lo[ti] <= hi[tj]).all() and (lo[tj] <= hi[ti]).all():
                    pairs.add(key)
    return pairs


def _narrow_phase(points, triangles, pairs):
    """Split candidate pairs into certain hits and uncertain pairs.

    Vectorized float predicates with conservative error bounds; anything
    not decidable at the bound goes to the exact fallback.
    """
    if not pairs:
        return [], []
    pair_arr = np.array(sorted(pairs), dtype=np.int64)
    p1 = points[triangles[pair_arr[:, 0]]]
    p2 = points[triangles[pair_arr[:, 1]]]
    a, b, c = p1[:, 0], p1[:, 1], p1[:, 2]
    d, e, f = p2[:, 0], p2[:, 1], p2[:, 2]

    # plane side tests (shared by the edge tests)
    sides2 = []   # vertices of tri2 against plane of tri1
    for x in (d, e, f):
        sides2.append(_orient3d_float(a, b, c, x))
    sides1 = []
    for x in (a, b, c):
        sides1.append(_orient3d_float(d, e, f, x))

    def certain_pos(sd):
        return sd[0] > sd[1]

    def certain_neg(sd):
        return sd[0] < -sd[1]

    sep1 = np.logical_and.reduce([certain_pos(s) for s in sides2]) \
        | np.logical_and.reduce([certain_neg(s) for s in sides2])
    sep2 = np.logical_and.reduce([certain_pos(s) for s in sides1]) \
        | np.logical_and.reduce([certain_neg(s) for s in sides1])
    alive = ~(sep1 | sep2)
    if not alive.any():
        return [], []

    idx = np.nonzero(alive)[0]
    hits = np.zeros(len(idx), dtype=bool)
    uncertain = np.zeros(len(idx), dtype=bool)
    edge_lists = (
        [(a, b), (b, c), (c, a)],
        [(d, e), (e, f), (f, d)],
    )
    tri_of = ((d, e, f), (a, b, c))
    side_of = (sides1, sides2)
    for which in (0, 1):
        ta, tb, tc = tri_of[which]
        for k, (p, q) in enumerate(edge_lists[which]):
            sp_det, sp_bnd = side_of[which][k]
            sq_det, sq_bnd = side_of[which][(k + 1) % 3]
            sp_det, sp_bnd = sp_det[idx], sp_bnd[idx]
            sq_det, sq_bnd = sq_det[idx], sq_bnd[idx]
            cross = ((sp_det > sp_bnd) & (sq_det < -sq_bnd)) \
                | ((sp_det < -sp_bnd) & (sq_det > sq_bnd))
            fuzzy = (np.abs(sp_det) <= sp_bnd) | (np.abs(sq_det) <= sq_bnd)
            pi, qi = p[idx], q[idx]
            u_det, u_bnd = _orient3d_float(pi, ta[idx], tb[idx], qi)
            v_det, v_bnd = _orient3d_float(pi, tb[idx], tc[idx], qi)
            w_det, w_bnd = _orient3d_float(pi, tc[idx], ta[idx], qi)
            all_pos = (u_det > u_bnd) & (v_det > v_bnd) & (w_det > w_bnd)
            all_neg = (u_det < -u_bnd) & (v_det < -v_bnd) & (w_det < -w_bnd)
            pierce_fuzzy = ((np.abs(u_det) <= u_bnd) | (np.abs(v_det) <= v_bnd)
                            | (np.abs(w_det) <= w_bnd))
            hits |= cross & (all_pos | all_neg)
            uncertain |= fuzzy
            uncertain |= cross & pierce_fuzzy & ~(all_pos | all_neg)
    uncertain &= ~hits
    hit_pairs = [tuple(pair_arr[i]) for i in idx[hits]]
    fuzzy_pairs = [tuple(pair_arr[i]) for i in idx[uncertain]]
    return hit_pairs, fuzzy_pairs


def self_intersection_test(mesh, max_witnesses=64):
    """Test a mesh on S^3 for self-intersections.

    Returns (embedded, witnesses): `embedded` is True when no pair of
    non-adjacent triangles meets; `witnesses` lists offending triangle
    index pairs (capped at max_witnesses).  Disjoint nested components
    are embedded.  Raises PoleSelectionError when no projection pole
    clears the surface.
    """
    pole, clearance = select_pole(mesh.vertices)
    tp = mesh.triangle_points()
    # chordal diameter -> angular bound on how far the surface can stray
    # from its vertices; the pole must clear vertices by more than that
    diam = np.linalg.norm(tp - np.roll(tp, 1, axis=1), axis=2).max()
    margin = 2.0 * math.asin(min(1.0, 0.5 * diam))
    if clearance <= margin + 1e-6:
        raise PoleSelectionError(
            f"best pole clearance {clearance:.4f} rad does not exceed the "
            f"triangle-size margin {margin:.4f} rad; mesh too dense in S^3")
    points = stereographic_project(mesh.vertices, pole)
    pairs = _broad_phase(points, mesh.triangles)
    hits, fuzzy = _narrow_phase(points, mesh.triangles, pairs)
    witnesses = list(hits)
    for (i, j) in fuzzy:
        if len(witnesses) >= max_witnesses:
            break
        if triangles_intersect(points[mesh.triangles[i]],
                               points[mesh.triangles[j]]):
            witnesses.append((i, j))
    witnesses = sorted(set(witnesses))[:max_witnesses]
    return len(witnesses) == 0, witnesses
