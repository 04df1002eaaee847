"""Convex polytopes and their plane slices.

A :class:`Polytope` is validated on construction (closed 2-manifold, planar
faces, convex, outward orientation).  :func:`slice` intersects it with a plane
and returns the closed slice curve with, at each corner, the interior angle
of the cross-section polygon and the surface angles to either side of the
curve.  "Right" is the side opposite the plane normal: the curve runs
counterclockwise seen from the normal side, so the surface below the plane is
on the right of a walker standing on the outside of the polytope.
"""
from __future__ import annotations

import enum
import functools
import logging
import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import tolerance

log = logging.getLogger(__name__)

EDGE_CROSSING = "EdgeCrossing"
POLYTOPE_VERTEX = "PolytopeVertex"


class OFFParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PolytopeError(ValueError):
    """Input is not a valid convex polytope."""

    def __init__(self, message: str, face: int | None = None, vertex: int | None = None):
        self.face = face
        self.vertex = vertex
        super().__init__(message)


def _angle(u, v) -> float:
    """Unsigned angle between two 3-vectors, stable near 0 and pi."""
    c = np.cross(u, v)
    return math.atan2(math.sqrt(float(c @ c)), float(np.dot(u, v)))


def _newell(pts: np.ndarray) -> np.ndarray:
    nxt = np.roll(pts, -1, axis=0)
    return 0.5 * np.array([
        np.sum((pts[:, 1] - nxt[:, 1]) * (pts[:, 2] + nxt[:, 2])),
        np.sum((pts[:, 2] - nxt[:, 2]) * (pts[:, 0] + nxt[:, 0])),
        np.sum((pts[:, 0] - nxt[:, 0]) * (pts[:, 1] + nxt[:, 1])),
    ])


@dataclass(frozen=True, eq=False)
class Polytope:
    vertices: np.ndarray
    faces: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise PolytopeError(f"vertices must be an (n, 3) array, got shape {v.shape}")
        faces = tuple(tuple(int(i) for i in f) for f in self.faces)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", faces)
        self._validate()
        v.setflags(write=False)

    # ------------------------------------------------------------ validation
    def _validate(self):
        v, faces = self.vertices, self.faces
        nv = len(v)
        if nv < 4 or len(faces) < 4:
            raise PolytopeError(f"need at least 4 vertices and 4 faces, got {nv} and {len(faces)}")
        if not np.all(np.isfinite(v)):
            raise PolytopeError("non-finite vertex coordinates")
        for fi, f in enumerate(faces):
            if len(f) < 3:
                raise PolytopeError(f"face {fi} has fewer than 3 vertices", face=fi)
            if len(set(f)) != len(f):
                raise PolytopeError(f"face {fi} repeats a vertex", face=fi)
            for i in f:
                if not 0 <= i < nv:
                    raise PolytopeError(f"face {fi} references missing vertex {i}", face=fi)

        directed: dict[tuple[int, int], int] = {}
        for fi, f in enumerate(faces):
            for a, b in zip(f, f[1:] + f[:1]):
                if (a, b) in directed:
                    raise PolytopeError(
                        f"edge ({a},{b}) traversed twice in the same direction "
                        f"(faces {directed[(a, b)]} and {fi}): inconsistent orientation", face=fi)
                directed[(a, b)] = fi
        for (a, b), fi in directed.items():
            if (b, a) not in directed:
                raise PolytopeError(f"edge ({a},{b}) of face {fi} is not shared by exactly two faces",
                                    face=fi)
        used = {i for f in faces for i in f}
        if len(used) != nv:
            missing = min(set(range(nv)) - used)
            raise PolytopeError(f"vertex {missing} belongs to no face", vertex=missing)
        ne = len(directed) // 2
        if nv - ne + len(faces) != 2:
            raise PolytopeError(f"Euler characteristic {nv - ne + len(faces)} != 2")

        diam = float(np.max(np.linalg.norm(v - v.mean(axis=0), axis=1))) * 2
        eps = tolerance.current().length * diam
        volume = sum(float(_newell(v[list(f)]) @ v[f[0]]) for f in faces) / 3.0
        if abs(volume) <= eps * diam * diam:
            raise PolytopeError("polytope has zero volume")
        if volume < 0:
            faces = tuple((f[0],) + tuple(reversed(f[1:])) for f in faces)
            object.__setattr__(self, "faces", faces)
            log.info("face orientation repaired to outward")

        for fi, f in enumerate(faces):
            area = _newell(v[list(f)])
            norm = math.sqrt(float(area @ area))
            if norm <= eps * diam:
                raise PolytopeError(f"face {fi} has zero area", face=fi)
            nrm = area / norm
            off = float(nrm @ v[list(f)].mean(axis=0))
            dev = v[list(f)] @ nrm - off
            k = int(np.argmax(np.abs(dev)))
            if abs(dev[k]) > eps:
                raise PolytopeError(f"face {fi} is not planar (vertex {f[k]} off by {dev[k]:.3g})",
                                    face=fi, vertex=f[k])
            dist = v @ nrm - off
            k = int(np.argmax(dist))
            if dist[k] > eps:
                raise PolytopeError(
                    f"not convex: vertex {k} lies {dist[k]:.3g} outside the plane of face {fi}",
                    face=fi, vertex=k)

    # ------------------------------------------------------------ topology
    @functools.cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted({(min(a, b), max(a, b))
                             for f in self.faces for a, b in zip(f, f[1:] + f[:1])}))

    @functools.cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: k for k, e in enumerate(self.edges)}

    @functools.cached_property
    def edge_faces(self) -> dict[tuple[int, int], tuple[int, int]]:
        out: dict[tuple[int, int], list[int]] = {}
        for fi, f in enumerate(self.faces):
            for a, b in zip(f, f[1:] + f[:1]):
                out.setdefault((min(a, b), max(a, b)), []).append(fi)
        return {e: tuple(fs) for e, fs in out.items()}

    @functools.cached_property
    def face_normals(self) -> np.ndarray:
        n = np.array([_newell(self.vertices[list(f)]) for f in self.faces])
        return n / np.linalg.norm(n, axis=1)[:, None]

    @functools.cached_property
    def vertex_faces(self) -> tuple[tuple[tuple[int, int, int], ...], ...]:
        """For each vertex: (face, previous vertex, next vertex) per incident face."""
        out: list[list[tuple[int, int, int]]] = [[] for _ in range(len(self.vertices))]
        for fi, f in enumerate(self.faces):
            k = len(f)
            for j, vi in enumerate(f):
                out[vi].append((fi, f[j - 1], f[(j + 1) % k]))
        return tuple(tuple(x) for x in out)

    @property
    def diameter(self) -> float:
        v = self.vertices
        return 2 * float(np.max(np.linalg.norm(v - v.mean(axis=0), axis=1)))

    def dihedral_angle(self, edge: tuple[int, int]) -> float:
        f1, f2 = self.edge_faces[edge]
        return math.pi - _angle(self.face_normals[f1], self.face_normals[f2])

    def total_angle(self, vertex: int) -> float:
        v = self.vertices
        return sum(_angle(v[a] - v[vertex], v[b] - v[vertex]) for _, a, b in self.vertex_faces[vertex])

    def transformed(self, rotation, translation=(0.0, 0.0, 0.0)) -> "Polytope":
        r = np.asarray(rotation, dtype=float)
        return Polytope(self.vertices @ r.T + np.asarray(translation, dtype=float), self.faces)


# ---------------------------------------------------------------- OFF I/O

def _data_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def load_off(text: str) -> Polytope:
    """Parse an ASCII OFF document into a validated polytope."""
    lines = list(_data_lines(text))
    if not lines:
        raise OFFParseError("empty document", 1)
    no, head = lines[0]
    tokens = head.split()
    if tokens[0] != "OFF":
        raise OFFParseError(f"expected header 'OFF', got {tokens[0]!r}", no)
    rest = tokens[1:]
    pos = 1
    if not rest:
        if len(lines) < 2:
            raise OFFParseError("missing counts line", no)
        no, counts_line = lines[1]
        rest = counts_line.split()
        pos = 2
    try:
        counts = [int(t) for t in rest[:3]]
    except ValueError:
        raise OFFParseError(f"bad counts {rest!r}", no) from None
    if len(counts) < 2:
        raise OFFParseError("counts line needs 'V F [E]'", no)
    nv, nf = counts[0], counts[1]
    if nv < 0 or nf < 0:
        raise OFFParseError("negative counts", no)
    if len(lines) < pos + nv + nf:
        last = lines[-1][0]
        raise OFFParseError(f"expected {nv} vertices and {nf} faces, file ends early", last)

    verts = np.empty((nv, 3))
    for k in range(nv):
        no, line = lines[pos + k]
        parts = line.split()
        try:
            verts[k] = [float(t) for t in parts[:3]]
        except ValueError:
            raise OFFParseError(f"bad vertex {line!r}", no) from None
        if len(parts) < 3:
            raise OFFParseError(f"vertex needs 3 coordinates: {line!r}", no)
    pos += nv
    faces = []
    for k in range(nf):
        no, line = lines[pos + k]
        try:
            parts = [int(t) for t in line.split()[:1]]
            size = parts[0]
            idx = [int(t) for t in line.split()[1:1 + size]]
        except (ValueError, IndexError):
            raise OFFParseError(f"bad face {line!r}", no) from None
        if len(idx) != size:
            raise OFFParseError(f"face declares {size} vertices, lists {len(idx)}", no)
        faces.append(tuple(idx))
    return Polytope(verts, tuple(faces))


def read_off(path) -> Polytope:
    with open(path) as fh:
        return load_off(fh.read())


def to_off(p: Polytope) -> str:
    lines = ["OFF", f"{len(p.vertices)} {len(p.faces)} {len(p.edges)}"]
    lines += [" ".join(repr(float(x)) for x in row) for row in p.vertices]
    lines += [" ".join(map(str, (len(f),) + f)) for f in p.faces]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- shapes

def cube(size: float = 1.0) -> Polytope:
    v = np.array([[x, y, z] for z in (0, 1) for y in (0, 1) for x in (0, 1)], dtype=float) * size
    faces = [(0, 2, 3, 1), (4, 5, 7, 6), (0, 1, 5, 4), (2, 6, 7, 3), (0, 4, 6, 2), (1, 3, 7, 5)]
    return Polytope(v, faces)


def tetrahedron() -> Polytope:
    """Regular tetrahedron with base in z = 0 and apex above."""
    r = 1 / math.sqrt(3)
    base = [[r * math.cos(t), r * math.sin(t), 0.0] for t in (0, 2 * math.pi / 3, 4 * math.pi / 3)]
    apex = [0.0, 0.0, math.sqrt(2 / 3)]
    return Polytope(np.array(base + [apex]), [(0, 2, 1), (0, 1, 3), (1, 2, 3), (2, 0, 3)])


def random_hull(n: int, seed) -> Polytope:
    """Convex hull of n points drawn uniformly on the unit sphere."""
    from scipy.spatial import ConvexHull, QhullError

    if n < 4:
        raise ValueError("a random hull needs at least 4 points")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    with tolerance.pinned():
        for _ in range(1000):
            pts = rng.normal(size=(n, 3))
            pts /= np.linalg.norm(pts, axis=1)[:, None]
            try:
                hull = ConvexHull(pts)
            except QhullError:
                log.warning("degenerate sample, resampling")
                continue
            if len(hull.vertices) != n:
                log.warning("sample has %d of %d points on its hull, resampling", len(hull.vertices), n)
                continue
            faces = []
            for simplex, eq in zip(hull.simplices, hull.equations):
                a, b, c = (int(i) for i in simplex)
                if np.cross(pts[b] - pts[a], pts[c] - pts[a]) @ eq[:3] < 0:
                    b, c = c, b
                faces.append((a, b, c))
            try:
                return Polytope(pts, faces)
            except PolytopeError as exc:
                log.warning("rejected hull (%s), resampling", exc)
    raise RuntimeError(f"no valid hull of {n} points after 1000 samples")


# ---------------------------------------------------------------- planes

@dataclass(frozen=True)
class PlaneSpec:
    normal: tuple[float, float, float]
    offset: float

    def __post_init__(self):
        n = tuple(float(x) for x in self.normal)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))
        if abs(math.sqrt(sum(x * x for x in n)) - 1.0) > 1e-12:
            raise ValueError(f"plane normal {n} is not unit length")

    @classmethod
    def from_coefficients(cls, nx, ny, nz, d) -> "PlaneSpec":
        norm = math.sqrt(nx * nx + ny * ny + nz * nz)
        if norm == 0:
            raise ValueError("plane normal is zero")
        n = np.array([nx, ny, nz]) / norm
        n = n / np.linalg.norm(n)
        return cls(tuple(n.tolist()), d / norm)

    @classmethod
    def parse(cls, text: str) -> "PlaneSpec":
        parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
        if len(parts) != 4:
            raise ValueError(f"plane must be 'nx,ny,nz,d', got {text!r}")
        return cls.from_coefficients(*(float(p) for p in parts))

    def to_dict(self) -> dict:
        return {"normal": list(self.normal), "offset": self.offset}

    @classmethod
    def from_dict(cls, d: dict) -> "PlaneSpec":
        return cls(tuple(d["normal"]), d["offset"])

    def transformed(self, rotation, translation=(0.0, 0.0, 0.0)) -> "PlaneSpec":
        n = np.asarray(rotation, dtype=float) @ np.asarray(self.normal)
        n = n / np.linalg.norm(n)
        return PlaneSpec(tuple(n.tolist()), self.offset + float(n @ np.asarray(translation, dtype=float)))


def random_plane(p: Polytope, seed, margin: float = 0.05) -> PlaneSpec:
    """Random plane with polytope volume on both sides."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    s = p.vertices @ n
    lo, hi = float(s.min()), float(s.max())
    span = hi - lo
    return PlaneSpec(tuple(n.tolist()), float(rng.uniform(lo + margin * span, hi - margin * span)))


# ---------------------------------------------------------------- slicing

class SliceVariant(enum.Enum):
    CURVE = "Curve"
    DEGENERATE_FACE = "DegenerateFace"
    DEGENERATE_EDGE = "DegenerateEdge"
    DEGENERATE_VERTEX = "DegenerateVertex"
    EMPTY = "Empty"


@dataclass(frozen=True)
class Corner:
    position: tuple[float, float, float]
    kind: str               # EDGE_CROSSING or POLYTOPE_VERTEX
    element: int            # edge id or vertex id
    phi: float
    theta_right: float
    theta_left: float
    edge: tuple[int, int] | None = None  # endpoints, for edge crossings

    def to_dict(self) -> dict:
        d = {
            "position": list(self.position),
            "kind": self.kind,
            "phi": self.phi,
            "theta_right": self.theta_right,
            "theta_left": self.theta_left,
        }
        if self.kind == EDGE_CROSSING:
            d["edge_id"] = self.element
            d["edge"] = list(self.edge) if self.edge is not None else None
        else:
            d["vertex_id"] = self.element
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Corner":
        if d["kind"] == EDGE_CROSSING:
            element = d["edge_id"]
            edge = tuple(d["edge"]) if d.get("edge") is not None else None
        elif d["kind"] == POLYTOPE_VERTEX:
            element, edge = d["vertex_id"], None
        else:
            raise ValueError(f"unknown corner kind {d['kind']!r}")
        return cls(tuple(float(x) for x in d["position"]), d["kind"], int(element),
                   float(d["phi"]), float(d["theta_right"]), float(d["theta_left"]), edge)


@dataclass(frozen=True)
class SliceCurve:
    corners: tuple[Corner, ...]
    plane: PlaneSpec | None = None
    warnings: tuple[str, ...] = ()

    @property
    def positions(self) -> np.ndarray:
        return np.array([c.position for c in self.corners])

    @property
    def lengths(self) -> tuple[float, ...]:
        """Link lengths c_0c_1, ..., c_{m-1}c_0."""
        p = self.positions
        return tuple(np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1).tolist())

    @property
    def perimeter(self) -> float:
        return math.fsum(self.lengths)

    @property
    def avoids_vertices(self) -> bool:
        return all(c.kind == EDGE_CROSSING for c in self.corners)

    def to_dict(self) -> dict:
        d = {"variant": SliceVariant.CURVE.value,
             "corners": [c.to_dict() for c in self.corners],
             "warnings": list(self.warnings)}
        if self.plane is not None:
            d["plane"] = self.plane.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SliceCurve":
        plane = PlaneSpec.from_dict(d["plane"]) if d.get("plane") else None
        return cls(tuple(Corner.from_dict(c) for c in d["corners"]), plane,
                   tuple(d.get("warnings", ())))


@dataclass(frozen=True)
class SliceResult:
    variant: SliceVariant
    curve: SliceCurve | None = None
    contact: tuple[int, ...] = ()   # vertices lying in the plane, for degenerate variants
    warnings: tuple[str, ...] = ()

    @property
    def is_degenerate(self) -> bool:
        return self.variant not in (SliceVariant.CURVE, SliceVariant.EMPTY)

    def to_dict(self) -> dict:
        if self.curve is not None:
            return self.curve.to_dict()
        return {"variant": self.variant.value, "contact": list(self.contact),
                "warnings": list(self.warnings)}


def _signed_distances(p: Polytope, plane: PlaneSpec):
    n = np.asarray(plane.normal)
    s = p.vertices @ n - plane.offset
    eps = tolerance.current().length * p.diameter
    near = np.abs(s) <= eps
    warnings = tuple(
        f"vertex {int(i)} lies {s[i]:.3g} from the plane; snapped onto it"
        for i in np.flatnonzero(near & (s != 0)))
    s = np.where(near, 0.0, s)
    return s, warnings


def _vertex_split(p: Polytope, s: np.ndarray, v: int):
    """Below/above portions of the total face angle at a vertex on the plane."""
    pts = p.vertices
    below = above = 0.0
    for _, a, b in p.vertex_faces[v]:
        u1, u2 = pts[a] - pts[v], pts[b] - pts[v]
        g1, g2 = s[a], s[b]
        wedge = _angle(u1, u2)
        if g1 <= 0 and g2 <= 0:
            if g1 == 0 and g2 == 0:
                below += wedge / 2
                above += wedge / 2
            else:
                below += wedge
        elif g1 >= 0 and g2 >= 0:
            above += wedge
        else:
            w = abs(g2) * u1 + abs(g1) * u2
            neg, pos = (u1, u2) if g1 < 0 else (u2, u1)
            below += _angle(neg, w)
            above += _angle(pos, w)
    return below, above


def _crossing_split(p: Polytope, s: np.ndarray, edge, x, prev, nxt):
    i, j = edge
    down = p.vertices[i] - x if s[i] < 0 else p.vertices[j] - x
    r_in, r_out = prev - x, nxt - x
    below = _angle(r_in, down) + _angle(down, r_out)
    above = _angle(r_in, -down) + _angle(-down, r_out)
    return below, above


def _surface_angles(p, s, kind, element, x, prev, nxt):
    if kind == POLYTOPE_VERTEX:
        return _vertex_split(p, s, element)
    return _crossing_split(p, s, p.edges[element], x, prev, nxt)


def slice(p: Polytope, plane: PlaneSpec) -> SliceResult:  # noqa: A001 - domain name
    s, warns = _signed_distances(p, plane)
    for w in warns:
        log.warning(w)
    pos, neg = bool(np.any(s > 0)), bool(np.any(s < 0))
    zero = tuple(int(i) for i in np.flatnonzero(s == 0))
    if not (pos and neg):
        if not zero:
            return SliceResult(SliceVariant.EMPTY, warnings=warns)
        if len(zero) == 1:
            return SliceResult(SliceVariant.DEGENERATE_VERTEX, contact=zero, warnings=warns)
        pts = p.vertices[list(zero)]
        spread = np.linalg.matrix_rank(pts[1:] - pts[0], tol=tolerance.current().length * p.diameter)
        variant = SliceVariant.DEGENERATE_FACE if spread >= 2 else SliceVariant.DEGENERATE_EDGE
        return SliceResult(variant, contact=zero, warnings=warns)

    # candidate points: vertices on the plane and strict edge crossings
    cand = []
    for v in zero:
        cand.append((tuple(p.vertices[v].tolist()), POLYTOPE_VERTEX, v, None))
    for k, (i, j) in enumerate(p.edges):
        if s[i] * s[j] < 0:
            t = s[i] / (s[i] - s[j])
            x = p.vertices[i] + t * (p.vertices[j] - p.vertices[i])
            cand.append((tuple(x.tolist()), EDGE_CROSSING, k, (i, j)))

    n = np.asarray(plane.normal)
    e1 = np.cross(n, [1.0, 0.0, 0.0] if abs(n[0]) < 0.9 else [0.0, 1.0, 0.0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    xyz = np.array([c[0] for c in cand])
    centre = xyz.mean(axis=0)
    ang = np.arctan2((xyz - centre) @ e2, (xyz - centre) @ e1)
    order = list(np.argsort(ang, kind="stable"))
    start = min(range(len(order)), key=lambda r: (cand[order[r]][0], cand[order[r]][1] != EDGE_CROSSING,
                                                   cand[order[r]][2]))
    order = order[start:] + order[:start]
    cand = [cand[k] for k in order]
    xyz = np.array([c[0] for c in cand])

    m = len(cand)
    raw = []
    for k, (x, kind, element, edge) in enumerate(cand):
        prev, nxt = xyz[k - 1], xyz[(k + 1) % m]
        right, left = _surface_angles(p, s, kind, element, xyz[k], prev, nxt)
        raw.append((k, right, left))

    eps = tolerance.current().angle
    keep = []
    for k, right, left in raw:
        phi = _angle(xyz[k - 1] - xyz[k], xyz[(k + 1) % m] - xyz[k])
        flat = abs(phi - math.pi) <= eps and abs(right - math.pi) <= eps and abs(left - math.pi) <= eps
        if not flat:
            keep.append((k, right, left))
    kept = xyz[[k for k, _, _ in keep]]
    mk = len(keep)
    corners = []
    for r, (k, right, left) in enumerate(keep):
        phi = _angle(kept[r - 1] - kept[r], kept[(r + 1) % mk] - kept[r])
        x, kind, element, edge = cand[k]
        corners.append(Corner(x, kind, element, phi, right, left, edge))
    curve = SliceCurve(tuple(corners), plane, warns)
    return SliceResult(SliceVariant.CURVE, curve, warnings=warns)


def right_surface_angle(p: Polytope, curve: SliceCurve, i: int) -> float:
    m = len(curve.corners)
    if not 0 <= i < m:
        raise IndexError(f"corner index {i} out of range for {m} corners")
    if curve.plane is None:
        raise ValueError("curve carries no plane")
    s, _ = _signed_distances(p, curve.plane)
    pos = curve.positions
    c = curve.corners[i]
    right, _ = _surface_angles(p, s, c.kind, c.element, pos[i], pos[i - 1], pos[(i + 1) % m])
    return right


def planar_angles(curve: SliceCurve) -> tuple[float, ...]:
    pos = curve.positions
    m = len(pos)
    return tuple(_angle(pos[k - 1] - pos[k], pos[(k + 1) % m] - pos[k]) for k in range(m))


def verify_angle_bounds(curve: SliceCurve) -> bool:
    eps = tolerance.current().angle
    return all(c.phi - eps <= c.theta_right <= math.tau - c.phi + eps for c in curve.corners)
