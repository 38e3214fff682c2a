"""Line arrangements as exact DCELs, clipped to a rational bounding box.

The DCEL is array-backed: half-edge ``h`` has its twin at ``h ^ 1``, so twins
never need storing.  Carriers tag every half-edge with the input line it lies
on, or with SUPPORT / bbox-side markers for segments added by triangulation
and clipping.  Faces are convex; the subdivision inside the box plus the outer
face satisfies Euler's formula, which ``audit`` re-checks after every build.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import ExactLine, ExactPoint, as_rat, cross2, line_intersection, PARALLEL

CARRIER_SUPPORT = -1
CARRIER_BBOX_LEFT = -2
CARRIER_BBOX_RIGHT = -3
CARRIER_BBOX_BOTTOM = -4
CARRIER_BBOX_TOP = -5
_BBOX_CARRIERS = (CARRIER_BBOX_LEFT, CARRIER_BBOX_RIGHT,
                  CARRIER_BBOX_BOTTOM, CARRIER_BBOX_TOP)

_AREA_FLOAT_CUTOFF = 1e-6


class DuplicateLines(ValueError):
    def __init__(self, ids):
        super().__init__(f"duplicate input lines: {ids}")
        self.ids = ids


@dataclass(frozen=True)
class BBox:
    xmin: Fraction
    xmax: Fraction
    ymin: Fraction
    ymax: Fraction

    def __post_init__(self):
        if self.xmin >= self.xmax or self.ymin >= self.ymax:
            raise ValueError("empty bounding box")

    def side_lines(self):
        """(carrier, line) for the four sides."""
        return [
            (CARRIER_BBOX_LEFT, ExactLine.make(1, 0, self.xmin)),
            (CARRIER_BBOX_RIGHT, ExactLine.make(1, 0, self.xmax)),
            (CARRIER_BBOX_BOTTOM, ExactLine.make(0, 1, self.ymin)),
            (CARRIER_BBOX_TOP, ExactLine.make(0, 1, self.ymax)),
        ]

    def contains(self, p: ExactPoint, strict=False) -> bool:
        if strict:
            return self.xmin < p.x < self.xmax and self.ymin < p.y < self.ymax
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax

    def corners(self):
        return [ExactPoint(self.xmin, self.ymin), ExactPoint(self.xmax, self.ymin),
                ExactPoint(self.xmax, self.ymax), ExactPoint(self.xmin, self.ymax)]


def enclosing_bbox(lines, margin=1, vertical_closure=False) -> BBox:
    """Rectangle strictly containing all pairwise intersections, margin 1.

    Every input line is guaranteed to cross the box: the box also covers each
    line's closest point to the origin.  With ``vertical_closure`` the y-range
    additionally covers every line's values over the whole x-range, so vertical
    visibility segments between lines never leave the box.
    """
    margin = as_rat(margin)
    xs, ys = [], []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            p = line_intersection(lines[i], lines[j])
            if p is not PARALLEL:
                xs.append(p.x)
                ys.append(p.y)
    for l in lines:
        den = l.a * l.a + l.b * l.b
        xs.append(l.a * l.c / den)
        ys.append(l.b * l.c / den)
    if not xs:
        xs, ys = [Fraction(0)], [Fraction(0)]
    xmin, xmax = min(xs) - margin, max(xs) + margin
    ymin, ymax = min(ys) - margin, max(ys) + margin
    if vertical_closure:
        for l in lines:
            if not l.is_vertical():
                for x in (xmin, xmax):
                    y = l.y_at(x)
                    ymin = min(ymin, y - margin)
                    ymax = max(ymax, y + margin)
    return BBox(xmin, xmax, ymin, ymax)


@dataclass
class Face:
    id: int
    bounded: bool
    start_he: int
    edge_ids: list = field(default_factory=list)
    corner_vertices: list = field(default_factory=list)
    carriers: list = field(default_factory=list)


@dataclass
class SubproblemSpec:
    """One face's recursive workload: crossing object ids and residual target."""

    face_id: int
    object_ids: np.ndarray
    residual_target: int = 0
    depth: int = 0

    def __post_init__(self):
        if self.residual_target < 0:
            raise ValueError("residual target must be nonnegative")

    @property
    def size(self) -> int:
        return len(self.object_ids)


class Dcel:
    """Arrangement subdivision; immutable once built."""

    def __init__(self, points, vxy, he_origin, he_next, he_carrier, he_face,
                 faces, bbox, n_lines, lines):
        self.points = points            # list[ExactPoint]
        self.vxy = vxy                  # float64 (V, 2) mirror of points
        self.he_origin = he_origin
        self.he_next = he_next
        self.he_carrier = he_carrier
        self.he_face = he_face
        self.faces = faces
        self.bbox = bbox
        self.n_lines = n_lines
        self.lines = lines

    # twins live at h ^ 1
    @staticmethod
    def twin(h: int) -> int:
        return h ^ 1

    def dest(self, h: int) -> int:
        return int(self.he_origin[h ^ 1])

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    @property
    def n_half_edges(self) -> int:
        return len(self.he_origin)

    @property
    def n_edges(self) -> int:
        return len(self.he_origin) // 2

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def bounded_faces(self):
        return [f for f in self.faces if f.bounded]

    def face_cycle(self, fid: int) -> list:
        out = []
        h0 = self.faces[fid].start_he
        h = h0
        while True:
            out.append(h)
            h = int(self.he_next[h])
            if h == h0:
                break
            if len(out) > self.n_half_edges:
                raise AssertionError("next-cycle does not close")
        return out

    def face_corners(self, fid: int) -> list:
        return [int(self.he_origin[h]) for h in self.face_cycle(fid)]

    def face_info(self, fid: int) -> Face:
        f = self.faces[fid]
        cyc = self.face_cycle(fid)
        return Face(id=fid, bounded=f.bounded, start_he=f.start_he,
                    edge_ids=[h // 2 for h in cyc],
                    corner_vertices=[int(self.he_origin[h]) for h in cyc],
                    carriers=[int(self.he_carrier[h]) for h in cyc])

    def vertex_degree(self, v: int) -> int:
        return int(np.count_nonzero(self.he_origin == v))

    def audit(self) -> None:
        """Structural DCEL audit: twin/next/face consistency plus Euler."""
        nhe = self.n_half_edges
        if nhe % 2:
            raise AssertionError("odd number of half-edges")
        nxt = self.he_next
        if sorted(nxt.tolist()) != list(range(nhe)):
            raise AssertionError("next is not a permutation of the half-edges")
        for h in range(nhe):
            if self.he_origin[nxt[h]] != self.he_origin[h ^ 1]:
                raise AssertionError(f"next({h}) does not start at dest({h})")
            if self.he_face[nxt[h]] != self.he_face[h]:
                raise AssertionError(f"face label changes along next at {h}")
        v, e, f = self.n_vertices, self.n_edges, self.n_faces
        if v - e + f != 2:
            raise AssertionError(f"Euler check failed: V={v} E={e} F={f}")
        n_unbounded = sum(1 for fc in self.faces if not fc.bounded)
        if n_unbounded != 1:
            raise AssertionError(f"expected exactly one outer face, got {n_unbounded}")
        for fc in self.faces:
            if fc.bounded:
                corners = self.face_corners(fc.id)
                if len(set(corners)) != len(corners):
                    raise AssertionError(f"bounded face {fc.id} is not a simple cycle")


def _clip_line_to_bbox(line: ExactLine, bbox: BBox):
    """Endpoints of line inside the closed bbox, or None if it misses."""
    hits = []
    for _, side in bbox.side_lines():
        p = line_intersection(line, side)
        if p is not PARALLEL and bbox.contains(p):
            hits.append(p)
    if not hits:
        return None
    key = (lambda p: (p.x, p.y)) if not line.is_vertical() else (lambda p: (p.y, p.x))
    hits.sort(key=key)
    lo, hi = hits[0], hits[-1]
    if lo == hi:
        return None
    return lo, hi


def _direction_half(dx: Fraction, dy: Fraction) -> int:
    return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1


def _cmp_directions(d1, d2) -> int:
    h1, h2 = _direction_half(*d1), _direction_half(*d2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    cr = d1[0] * d2[1] - d1[1] * d2[0]
    if cr > 0:
        return -1
    if cr < 0:
        return 1
    return 0


def _dcel_from_edges(points, edges, bbox, n_lines, lines):
    """Assemble the DCEL from an exact vertex list and undirected edges."""
    nv = len(points)
    ne = len(edges)
    nhe = 2 * ne
    he_origin = np.empty(nhe, dtype=np.int64)
    he_carrier = np.empty(nhe, dtype=np.int64)
    for i, (u, v, carrier) in enumerate(edges):
        he_origin[2 * i] = u
        he_origin[2 * i + 1] = v
        he_carrier[2 * i] = carrier
        he_carrier[2 * i + 1] = carrier

    vxy = np.array([[float(p.x), float(p.y)] for p in points], dtype=np.float64)
    if nv == 0 or ne == 0:
        raise ValueError("cannot build a DCEL without edges")

    dest = he_origin.reshape(-1, 2)[:, ::-1].reshape(-1)
    dvec = vxy[dest] - vxy[he_origin]
    ang = np.arctan2(dvec[:, 1], dvec[:, 0])

    order = np.lexsort((ang, he_origin))
    starts = np.searchsorted(he_origin[order], np.arange(nv), side="left")
    ends = np.searchsorted(he_origin[order], np.arange(nv), side="right")

    # float angle ties within a vertex star get re-sorted exactly
    sorted_ang = ang[order]
    for v in range(nv):
        s, e = starts[v], ends[v]
        if e - s < 2:
            continue
        block = sorted_ang[s:e]
        if np.min(np.diff(block)) < 1e-12 or (block[-1] - block[0]) > 2 * math.pi - 1e-12:
            hes = order[s:e].tolist()

            def exact_dir(h):
                p, q = points[he_origin[h]], points[dest[h]]
                return (q.x - p.x, q.y - p.y)

            hes.sort(key=functools.cmp_to_key(
                lambda h1, h2: _cmp_directions(exact_dir(h1), exact_dir(h2))))
            order[s:e] = hes

    pos_in_star = np.empty(nhe, dtype=np.int64)
    star_start = np.empty(nhe, dtype=np.int64)
    star_len = np.empty(nhe, dtype=np.int64)
    for v in range(nv):
        s, e = starts[v], ends[v]
        pos_in_star[order[s:e]] = np.arange(e - s)
        star_start[order[s:e]] = s
        star_len[order[s:e]] = e - s
    if np.any(star_len == 0):
        raise AssertionError("isolated vertex in DCEL input")

    # next(h): the clockwise successor of twin(h) around dest(h)
    twin = np.arange(nhe) ^ 1
    tpos = pos_in_star[twin]
    tstart = star_start[twin]
    tlen = star_len[twin]
    he_next = order[tstart + (tpos - 1) % tlen]

    he_face = np.full(nhe, -1, dtype=np.int64)
    faces = []
    for h0 in range(nhe):
        if he_face[h0] != -1:
            continue
        fid = len(faces)
        cyc = []
        h = h0
        while he_face[h] == -1:
            he_face[h] = fid
            cyc.append(h)
            h = int(he_next[h])
        if h != h0:
            raise AssertionError("face tracing hit a visited half-edge mid-cycle")
        faces.append((fid, h0, cyc))

    # classify cycles: exactly one negative (outer) cycle
    face_records = []
    neg = []
    for fid, h0, cyc in faces:
        area2 = 0.0
        for h in cyc:
            x1, y1 = vxy[he_origin[h]]
            x2, y2 = vxy[dest[h]]
            area2 += x1 * y2 - x2 * y1
        if abs(area2) < _AREA_FLOAT_CUTOFF:
            area2 = _exact_cycle_area2(points, he_origin, dest, cyc)
        face_records.append(Face(id=fid, bounded=area2 > 0, start_he=h0))
        if area2 < 0:
            neg.append(fid)
    if len(neg) != 1:
        raise AssertionError(f"expected one outer cycle, found {len(neg)}")

    return Dcel(points, vxy, he_origin, he_next, he_carrier, he_face,
                face_records, bbox, n_lines, lines)


def _exact_cycle_area2(points, he_origin, dest, cyc):
    total = Fraction(0)
    for h in cyc:
        p, q = points[he_origin[h]], points[dest[h]]
        total += p.x * q.y - q.x * p.y
    if total > 0:
        return 1.0
    if total < 0:
        return -1.0
    raise AssertionError("zero-area face cycle")


class _VertexRegistry:
    def __init__(self):
        self.points = []
        self.index = {}

    def add(self, p: ExactPoint) -> int:
        key = (p.x, p.y)
        vid = self.index.get(key)
        if vid is None:
            vid = len(self.points)
            self.index[key] = vid
            self.points.append(p)
        return vid


def build_arrangement(lines, bbox: BBox = None) -> Dcel:
    """Exact DCEL of the line arrangement clipped to ``bbox``.

    The box must contain every pairwise intersection strictly (enclosing_bbox
    guarantees this).  Coincident intersection points merge into one vertex,
    so concurrences of any order are one vertex of the proper degree.
    """
    lines = list(lines)
    dup = _duplicate_line_ids(lines)
    if dup:
        raise DuplicateLines(dup)
    if bbox is None:
        bbox = enclosing_bbox(lines)

    reg = _VertexRegistry()
    corner_ids = [reg.add(c) for c in bbox.corners()]
    side_lines = bbox.side_lines()

    per_line_pts = [[] for _ in lines]      # (point, vid) on each input line
    per_side_pts = {carrier: [] for carrier, _ in side_lines}

    clip = []
    for i, line in enumerate(lines):
        seg = _clip_line_to_bbox(line, bbox)
        clip.append(seg)
        if seg is None:
            continue
        for p in seg:
            vid = reg.add(p)
            per_line_pts[i].append((p, vid))
            for carrier, side in side_lines:
                if side.contains(p):
                    per_side_pts[carrier].append((p, vid))

    for i in range(len(lines)):
        if clip[i] is None:
            continue
        for j in range(i + 1, len(lines)):
            if clip[j] is None:
                continue
            p = line_intersection(lines[i], lines[j])
            if p is PARALLEL or not bbox.contains(p):
                continue
            vid = reg.add(p)
            per_line_pts[i].append((p, vid))
            per_line_pts[j].append((p, vid))

    for idx, (carrier, _) in enumerate(side_lines):
        a = corner_ids[[3, 1, 0, 2][idx]]
        b = corner_ids[[0, 2, 1, 3][idx]]
        per_side_pts[carrier].append((reg.points[a], a))
        per_side_pts[carrier].append((reg.points[b], b))

    edges = []
    for i, line in enumerate(lines):
        if clip[i] is None:
            continue
        vertical = line.is_vertical()
        edges.extend(_chain_edges(per_line_pts[i], i, vertical))
    for idx, (carrier, side) in enumerate(side_lines):
        vertical = side.is_vertical()
        edges.extend(_chain_edges(per_side_pts[carrier], carrier, vertical))

    return _dcel_from_edges(reg.points, edges, bbox, len(lines), lines)


def _chain_edges(tagged_points, carrier, vertical):
    key = (lambda pv: (pv[0].y, pv[0].x)) if vertical else (lambda pv: (pv[0].x, pv[0].y))
    tagged_points.sort(key=key)
    out = []
    prev = None
    for p, vid in tagged_points:
        if prev is not None and vid != prev:
            out.append((prev, vid, carrier))
        prev = vid
    return out


def _duplicate_line_ids(lines):
    seen = {}
    dup = []
    for i, l in enumerate(lines):
        key = (l.a, l.b, l.c)
        if key in seen:
            dup.append((seen[key], i))
        else:
            seen[key] = i
    return dup


def triangulate(dcel: Dcel) -> Dcel:
    """Fan-triangulate every bounded face from its lexicographically least corner.

    Faces of a clipped line arrangement are convex, so fans are valid.  Added
    chords carry the SUPPORT marker; no new vertices appear, and the bounded
    face count stays within 4*(k^2 + k + 1) for k input lines.
    """
    edges = []
    seen = set()
    for h in range(dcel.n_half_edges):
        e = h // 2
        if e in seen:
            continue
        seen.add(e)
        edges.append((int(dcel.he_origin[2 * e]), int(dcel.he_origin[2 * e + 1]),
                      int(dcel.he_carrier[2 * e])))

    chord_set = set()
    for f in dcel.faces:
        if not f.bounded:
            continue
        corners = dcel.face_corners(f.id)
        if len(corners) <= 3:
            continue
        apex_pos = min(range(len(corners)),
                       key=lambda i: (dcel.points[corners[i]].x, dcel.points[corners[i]].y))
        ordered = corners[apex_pos:] + corners[:apex_pos]
        apex = ordered[0]
        for c in ordered[2:-1]:
            key = (min(apex, c), max(apex, c))
            if key not in chord_set:
                chord_set.add(key)
                edges.append((apex, c, CARRIER_SUPPORT))

    tri = _dcel_from_edges(dcel.points, edges, dcel.bbox, dcel.n_lines, dcel.lines)
    k = dcel.n_lines
    if k >= 3:
        nb = sum(1 for f in tri.faces if f.bounded)
        limit = 4 * (k * k + k + 1)
        if nb > limit:
            raise AssertionError(f"triangulated face count {nb} exceeds {limit}")
    return tri


def face_corner_table(dcel: Dcel):
    """(face ids, corner vertex ids padded row table) for bounded faces only."""
    fids, rows = [], []
    width = 0
    for f in dcel.faces:
        if not f.bounded:
            continue
        corners = dcel.face_corners(f.id)
        fids.append(f.id)
        rows.append(corners)
        width = max(width, len(corners))
    table = np.full((len(rows), width), -1, dtype=np.int64)
    for i, row in enumerate(rows):
        table[i, :len(row)] = row
    return fids, table


def line_crossing_faces(dcel: Dcel, lines, tol=1e-7):
    """For each line, the bounded-face ids it crosses (closed face minus corners).

    Classification is by corner signs, float-first with exact confirmation of
    any corner within ``tol`` of the line, so the "touches only at a vertex"
    exclusion is decided exactly.
    """
    fids, table = face_corner_table(dcel)
    nfaces, width = table.shape
    mask = table >= 0
    safe = np.where(mask, table, 0)
    cx = dcel.vxy[safe, 0]
    cy = dcel.vxy[safe, 1]

    out = []
    for li, line in enumerate(lines):
        a, b, c = float(line.a), float(line.b), float(line.c)
        norm = math.hypot(a, b)
        w = (a * cx + b * cy - c) / norm
        pos = (w > tol) & mask
        negv = (w < -tol) & mask
        nearz = (np.abs(w) <= tol) & mask
        any_pos = pos.any(axis=1)
        any_neg = negv.any(axis=1)
        any_zero = nearz.any(axis=1)
        include = any_pos & any_neg
        suspicious = np.nonzero(any_zero)[0]
        for row in suspicious:
            corners = table[row][mask[row]]
            signs = [line.side_of(dcel.points[v]) for v in corners]
            include[row] = _classify_signs(signs)
        out.append(np.array(fids, dtype=np.int64)[np.nonzero(include)[0]])
    return fids, out


def _classify_signs(signs) -> bool:
    has_pos = any(s > 0 for s in signs)
    has_neg = any(s < 0 for s in signs)
    zeros = sum(1 for s in signs if s == 0)
    if has_pos and has_neg:
        return True
    if zeros >= 2:
        return True          # the line carries an edge or a chord of the face
    return False             # strictly one side, or vertex-only touch


def subproblems_of(dcel: Dcel, objects, crossing=None, depth=0,
                   residual_targets=None) -> list:
    """One SubproblemSpec per bounded face.

    With ``crossing=None`` the objects must be ExactLines and the fast sign
    classifier is used; otherwise ``crossing(obj, corner_points)`` decides
    closed-face-minus-vertices intersection for arbitrary objects.
    """
    if crossing is None:
        fids, per_line = line_crossing_faces(dcel, objects)
        face_lists = {fid: [] for fid in fids}
        for oid, fid_arr in enumerate(per_line):
            for fid in fid_arr:
                face_lists[int(fid)].append(oid)
        specs = []
        for fid in fids:
            tgt = residual_targets[fid] if residual_targets else 0
            specs.append(SubproblemSpec(face_id=fid,
                                        object_ids=np.array(face_lists[fid], dtype=np.int64),
                                        residual_target=tgt, depth=depth))
        return specs
    specs = []
    for f in dcel.faces:
        if not f.bounded:
            continue
        corners = [dcel.points[v] for v in dcel.face_corners(f.id)]
        ids = [oid for oid, obj in enumerate(objects) if crossing(obj, corners)]
        tgt = residual_targets[f.id] if residual_targets else 0
        specs.append(SubproblemSpec(face_id=f.id,
                                    object_ids=np.array(ids, dtype=np.int64),
                                    residual_target=tgt, depth=depth))
    return specs
