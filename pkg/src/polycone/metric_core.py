"""Shared metric primitives: points, balls, nets, exact graph engine.

Concrete spaces implement a small oracle interface:
  point_distance(locA, locB) -> float      exact or certified-approximate
  canonical_loc(loc) -> loc                 deterministic point identity
  build_net_locs(h) -> list of locs         deterministic eps-net
  error_bound(d) -> float                   additive engine error at scale d
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MixedSpaces, NonPositiveScale


@dataclass(frozen=True)
class Point:
    """A location in a host space.

    loc formats: metric graph ("edge", eid, offset); complex ("tri", sid,
    (b0, b1, b2)); cone ("cone", radius, linkpt); product ("prod", ecoords,
    fiber loc).
    """

    space: object
    loc: tuple

    def __repr__(self):
        return f"Point({self.loc})"


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise NonPositiveScale(f"ball radius must be positive, got {self.radius}")


@dataclass
class GeodesicPath:
    """Polyline realization of a minimizing geodesic."""

    start: Point
    end: Point
    polyline: list
    length: float


@dataclass
class EpsNet:
    points: list
    mesh: float


@dataclass
class LengthSpaceReport:
    passed: bool
    checked_pairs: int
    worst_deviation: float
    worst_pair: tuple | None
    failures: list = field(default_factory=list)


def scale_ball(b: Ball, lam: float) -> Ball:
    """Scale a ball about its center: lam * B(x, r) = B(x, lam * r)."""
    if lam <= 0:
        raise NonPositiveScale(f"scale factor must be positive, got {lam}")
    return Ball(b.center, lam * b.radius)


def _require_same_space(p: Point, q: Point):
    if p.space is not q.space:
        raise MixedSpaces("points belong to different spaces")


def distance(space, p: Point, q: Point) -> float:
    """Distance between two points of `space`."""
    _require_same_space(p, q)
    if p.space is not space:
        raise MixedSpaces("points do not belong to the given space")
    return space.point_distance(p.loc, q.loc)


def pairwise_distances(space, points) -> np.ndarray:
    """Dense distance matrix over a point list (delegates if supported)."""
    locs = [p.loc for p in points]
    if hasattr(space, "pairwise_loc_distances"):
        return space.pairwise_loc_distances(locs)
    n = len(locs)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = space.point_distance(locs[i], locs[j])
    return out


def build_net(space, h: float) -> EpsNet:
    """Deterministic eps-net of mesh h."""
    if h <= 0:
        raise NonPositiveScale(f"net mesh must be positive, got {h}")
    locs = space.build_net_locs(h)
    return EpsNet([Point(space, loc) for loc in locs], h)


def check_length_space(space, net: EpsNet, tol: float) -> LengthSpaceReport:
    """Approximate-midpoint test on all net pairs.

    For each pair (p, q) an m with |d(p,m) - d/2| <= tol and
    |d(m,q) - d/2| <= tol must exist among the net points.
    """
    pts = net.points
    n = len(pts)
    dm = pairwise_distances(space, pts)
    worst = 0.0
    worst_pair = None
    failures = []
    checked = 0
    for i in range(n):
        for j in range(i + 1, n):
            checked += 1
            d = dm[i, j]
            if not math.isfinite(d):
                failures.append((pts[i], pts[j], math.inf))
                worst = math.inf
                worst_pair = (pts[i], pts[j])
                continue
            half = d / 2.0
            dev = np.maximum(np.abs(dm[i] - half), np.abs(dm[j] - half)).min()
            if dev > worst:
                worst = dev
                worst_pair = (pts[i], pts[j])
            if dev > tol:
                failures.append((pts[i], pts[j], dev))
    return LengthSpaceReport(not failures, checked, worst, worst_pair, failures)


class FiniteMetricSpace:
    """Finite metric space given by a symmetric distance matrix."""

    def __init__(self, dist_matrix):
        m = np.asarray(dist_matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("distance matrix must be square")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(m) != 0):
            raise ValueError("diagonal must be zero")
        self.matrix = m
        self.n = m.shape[0]

    def point_distance(self, a, b):
        return float(self.matrix[a, b])

    def canonical_loc(self, loc):
        return int(loc)

    def points(self):
        return list(range(self.n))

    def diameter(self):
        return float(self.matrix.max()) if self.n else 0.0

    def error_bound(self, d):
        return 0.0


class MetricGraph:
    """Finite metric graph: weighted multigraph with exact point distances.

    Points live on edges as ("edge", eid, offset), offset in [0, length].
    Parallel edges and self-loops are allowed.
    """

    def __init__(self, num_vertices: int, edges):
        self.nv = int(num_vertices)
        self.edges = []
        for (u, v, length) in edges:
            u, v, length = int(u), int(v), float(length)
            if not (0 <= u < self.nv and 0 <= v < self.nv):
                raise ValueError(f"edge endpoint out of range: {(u, v)}")
            if length <= 0:
                raise ValueError(f"edge length must be positive: {length}")
            self.edges.append((u, v, length))
        self.ne = len(self.edges)
        self._vdist = self._vertex_distances()
        # canonical representative of each vertex: smallest (edge, offset)
        reps = {}
        for eid, (u, v, length) in enumerate(self.edges):
            reps.setdefault(u, []).append((eid, 0.0))
            reps.setdefault(v, []).append((eid, length))
        self._vertex_rep = {w: min(r) for w, r in reps.items()}

    # -- infrastructure ---------------------------------------------------

    def _vertex_distances(self):
        if self.nv == 0:
            return np.zeros((0, 0))
        adj = [[] for _ in range(self.nv)]
        for (u, v, length) in self.edges:
            if u != v:
                adj[u].append((v, length))
                adj[v].append((u, length))
        dist = np.full((self.nv, self.nv), np.inf)
        for s in range(self.nv):
            d = np.full(self.nv, np.inf)
            d[s] = 0.0
            pq = [(0.0, s)]
            while pq:
                du, u = heapq.heappop(pq)
                if du > d[u]:
                    continue
                for v, w in adj[u]:
                    nd = du + w
                    if nd < d[v]:
                        d[v] = nd
                        heapq.heappush(pq, (nd, v))
            dist[s] = d
        return dist

    def vertex_distance(self, u, v):
        return float(self._vdist[u, v])

    def edge_length(self, eid):
        return self.edges[eid][2]

    # -- point interface ---------------------------------------------------

    def vertex_loc(self, w):
        eid, t = self._vertex_rep[w]
        return ("edge", eid, t)

    def canonical_loc(self, loc):
        kind, eid, t = loc
        u, v, length = self.edges[eid]
        tol = 1e-12 * max(1.0, length)
        if t <= tol:
            return self.vertex_loc(u)
        if t >= length - tol:
            return self.vertex_loc(v)
        return ("edge", int(eid), float(t))

    def loc_vertex(self, loc):
        """Vertex id if loc sits at a vertex, else None."""
        kind, eid, t = loc
        u, v, length = self.edges[eid]
        tol = 1e-12 * max(1.0, length)
        if t <= tol:
            return u
        if t >= length - tol:
            return v
        return None

    def point_distance(self, a, b):
        _, e1, t1 = a
        _, e2, t2 = b
        u1, v1, l1 = self.edges[e1]
        u2, v2, l2 = self.edges[e2]
        best = math.inf
        if e1 == e2:
            best = abs(t1 - t2)
        for (w1, s1) in ((u1, t1), (v1, l1 - t1)):
            for (w2, s2) in ((u2, t2), (v2, l2 - t2)):
                cand = s1 + self._vdist[w1, w2] + s2
                if cand < best:
                    best = cand
        return float(best)

    def pairwise_loc_distances(self, locs):
        n = len(locs)
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                out[i, j] = out[j, i] = self.point_distance(locs[i], locs[j])
        return out

    def error_bound(self, d):
        return 0.0

    def diameter_upper_bound(self):
        finite = self._vdist[np.isfinite(self._vdist)]
        base = float(finite.max()) if finite.size else 0.0
        return base + max((l for (_, _, l) in self.edges), default=0.0)

    def total_length(self):
        return float(sum(l for (_, _, l) in self.edges))

    def vertex_degree(self, w):
        deg = 0
        for (u, v, _) in self.edges:
            deg += (u == w) + (v == w)
        return deg

    # -- nets ----------------------------------------------------------------

    def build_net_locs(self, h):
        locs = []
        seen = set()
        for eid, (u, v, length) in enumerate(self.edges):
            m = max(1, math.ceil(length / h))
            for k in range(m + 1):
                loc = self.canonical_loc(("edge", eid, length * k / m))
                if loc not in seen:
                    seen.add(loc)
                    locs.append(loc)
        return locs

    # -- local structure (directions, shooting) ------------------------------

    def directions_at(self, loc):
        """Outgoing directions: list of (eid, orientation) with orientation
        +1 (increasing offset) or -1. Interior points have both orientations
        of their edge; vertices one per incident edge end."""
        w = self.loc_vertex(loc)
        if w is None:
            _, eid, _ = loc
            return [(eid, +1), (eid, -1)]
        dirs = []
        for eid, (u, v, _) in enumerate(self.edges):
            if u == w:
                dirs.append((eid, +1))
            if v == w:
                dirs.append((eid, -1))
        return sorted(dirs)

    def shoot(self, loc, direction, dist):
        """Walk distance `dist` from loc along `direction`.

        Continues through degree-2 vertices (unique continuation); stops at
        branch points and dead ends. Returns (loc, travelled, polyline).
        """
        _, eid, t = loc
        e_dir, orient = direction
        if e_dir != eid:
            w = self.loc_vertex(loc)
            if w is None:
                raise ValueError("direction does not match point's edge")
            eid, t = e_dir, (0.0 if orient > 0 else self.edges[e_dir][2])
        travelled = 0.0
        polyline = [self.canonical_loc(("edge", eid, t))]
        remaining = dist
        while remaining > 1e-15:
            u, v, length = self.edges[eid]
            room = (length - t) if orient > 0 else t
            step = min(room, remaining)
            t = t + step if orient > 0 else t - step
            travelled += step
            remaining -= step
            polyline.append(self.canonical_loc(("edge", eid, t)))
            if remaining <= 1e-15:
                break
            w = v if orient > 0 else u
            nxt = [d for d in self.directions_at(self.vertex_loc(w))
                   if not (d[0] == eid and d[1] == -orient)]
            if len(nxt) != 1:
                break  # dead end or branch point: no unique continuation
            eid, orient = nxt[0]
            t = 0.0 if orient > 0 else self.edges[eid][2]
        return self.canonical_loc(("edge", eid, t)), travelled, polyline

    def geodesic(self, a, b):
        """Exact shortest polyline between two locs."""
        _, e1, t1 = a
        _, e2, t2 = b
        u1, v1, l1 = self.edges[e1]
        u2, v2, l2 = self.edges[e2]
        best = (math.inf, None)
        if e1 == e2:
            best = (abs(t1 - t2), [a, b])
        for (w1, s1) in ((u1, t1), (v1, l1 - t1)):
            for (w2, s2) in ((u2, t2), (v2, l2 - t2)):
                total = s1 + self._vdist[w1, w2] + s2
                if total < best[0]:
                    mid = self._vertex_path(w1, w2)
                    poly = [a] + [self.vertex_loc(w) for w in mid] + [b]
                    best = (total, poly)
        return best[0], best[1]

    def _vertex_path(self, s, t):
        if s == t:
            return [s]
        adj = [[] for _ in range(self.nv)]
        for (u, v, length) in self.edges:
            if u != v:
                adj[u].append((v, length))
                adj[v].append((u, length))
        d = {s: 0.0}
        prev = {}
        pq = [(0.0, s)]
        while pq:
            du, u = heapq.heappop(pq)
            if du > d.get(u, math.inf):
                continue
            if u == t:
                break
            for v, w in adj[u]:
                nd = du + w
                if nd < d.get(v, math.inf):
                    d[v] = nd
                    prev[v] = u
                    heapq.heappush(pq, (nd, v))
        path = [t]
        while path[-1] != s:
            path.append(prev[path[-1]])
        return path[::-1]

    def first_direction(self, a, b):
        """Direction (eid, orient) at `a` of a shortest path a -> b."""
        d, poly = self.geodesic(a, b)
        if d <= 0:
            raise ValueError("no direction between identical points")
        _, e1, t1 = poly[0]
        prev = poly[0]
        for nxt in poly[1:]:
            _, e2, t2 = nxt
            if self.point_distance(prev, nxt) <= 1e-15:
                prev = nxt
                e1, t1 = e2, t2
                continue
            if e2 == e1:
                return (e1, +1 if t2 > t1 else -1)
            w = self.loc_vertex(prev)
            u2, v2, l2 = self.edges[e2]
            w2 = self.loc_vertex(nxt)
            if w2 is None:
                # next point is interior to e2: orientation from the end at w
                if u2 == w and v2 == w:
                    return (e2, +1 if t2 <= l2 / 2 else -1)
                return (e2, +1) if u2 == w else (e2, -1)
            # full edge traversal vertex-to-vertex
            if u2 == w and w2 == v2:
                return (e2, +1)
            if v2 == w and w2 == u2:
                return (e2, -1)
            return (e2, +1) if u2 == w else (e2, -1)
        raise ValueError("degenerate geodesic polyline")

    def ball_segments(self, loc, r):
        """Exact closed metric ball: list of (eid, lo, hi) intervals."""
        _, e0, t0 = loc
        segs = []
        for eid, (u, v, length) in enumerate(self.edges):
            d_u = self.point_distance(loc, self.vertex_loc(u))
            d_v = self.point_distance(loc, self.vertex_loc(v))
            intervals = []
            if r >= d_u:
                intervals.append((0.0, min(length, r - d_u)))
            if r >= d_v:
                intervals.append((max(0.0, length - (r - d_v)), length))
            if eid == e0:
                intervals.append((max(0.0, t0 - r), min(length, t0 + r)))
            intervals.sort()
            merged = []
            for lo, hi in intervals:
                if merged and lo <= merged[-1][1] + 1e-15:
                    merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
                else:
                    merged.append((lo, hi))
            segs.extend((eid, lo, hi) for (lo, hi) in merged if hi >= lo)
        return segs
