"""Planar polygonal chains.

A chain is fixed by its link lengths and the signed turn angles at its
interior joints (positive = counterclockwise).  :func:`configure` places the
shoulder at the origin with the first link along +x; every distance claim in
this package is invariant under that choice.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import tolerance

Point = tuple[float, float]
Segment = tuple[Point, Point]


def wrap_angle(t: float) -> float:
    """Map an angle into (-pi, pi]."""
    t = math.remainder(t, math.tau)
    return math.pi if t <= -math.pi else t


@dataclass(frozen=True)
class ChainSpec:
    lengths: tuple[float, ...]
    turns: tuple[float, ...]

    def __post_init__(self):
        lengths = tuple(float(x) for x in self.lengths)
        turns = tuple(float(x) for x in self.turns)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "turns", turns)
        if len(lengths) < 1:
            raise ValueError("a chain needs at least one link")
        if len(turns) != len(lengths) - 1:
            raise ValueError(
                f"{len(lengths)} links need {len(lengths) - 1} turn angles, got {len(turns)}")
        for i, ell in enumerate(lengths):
            if not (math.isfinite(ell) and ell > 0):
                raise ValueError(f"link {i} has nonpositive length {ell!r}")
        for i, t in enumerate(turns, start=1):
            if not (math.isfinite(t) and -math.pi < t <= math.pi):
                raise ValueError(f"turn at joint {i} is {t!r}, outside (-pi, pi]")

    @property
    def n(self) -> int:
        return len(self.lengths)

    def with_turns(self, turns: Iterable[float]) -> "ChainSpec":
        return ChainSpec(self.lengths, tuple(turns))

    def to_dict(self) -> dict:
        return {"lengths": list(self.lengths), "turns": list(self.turns)}

    @classmethod
    def from_dict(cls, d: dict) -> "ChainSpec":
        return cls(tuple(d["lengths"]), tuple(d["turns"]))


@dataclass(frozen=True, eq=False)
class Chain:
    """Realized joint coordinates a_0 ... a_n (an (n+1, 2) read-only array)."""

    joints: np.ndarray

    def __post_init__(self):
        j = np.array(self.joints, dtype=float)
        if j.ndim != 2 or j.shape[1] != 2 or len(j) < 2:
            raise ValueError(f"joints must be an (m>=2, 2) array, got shape {j.shape}")
        j.setflags(write=False)
        object.__setattr__(self, "joints", j)

    @property
    def n(self) -> int:
        return len(self.joints) - 1

    @property
    def links(self) -> np.ndarray:
        return np.diff(self.joints, axis=0)

    @property
    def lengths(self) -> np.ndarray:
        return np.hypot(*self.links.T)

    @property
    def shoulder(self) -> np.ndarray:
        return self.joints[0]

    @property
    def hand(self) -> np.ndarray:
        return self.joints[-1]

    def hand_distance(self) -> float:
        return math.dist(self.joints[-1], self.joints[0])

    def segments(self) -> list[Segment]:
        pts = [tuple(p) for p in self.joints.tolist()]
        return list(zip(pts[:-1], pts[1:]))

    def to_dict(self) -> dict:
        return {"joints": self.joints.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Chain":
        return cls(np.asarray(d["joints"], dtype=float))


def configure(spec: ChainSpec) -> Chain:
    headings = np.concatenate([[0.0], np.cumsum(spec.turns)])
    lengths = np.asarray(spec.lengths)
    steps = np.stack([lengths * np.cos(headings), lengths * np.sin(headings)], axis=1)
    joints = np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)])
    joints[1] = (spec.lengths[0], 0.0)
    return Chain(joints)


def turn_angles(chain: Chain) -> tuple[float, ...]:
    v = chain.links
    if np.any(np.hypot(*v.T) == 0):
        raise ValueError("zero-length link: turn angle undefined")
    u, w = v[:-1], v[1:]
    cross = u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0]
    dot = (u * w).sum(axis=1)
    return tuple(wrap_angle(t) for t in np.arctan2(cross, dot).tolist())


def spec_of(chain: Chain) -> ChainSpec:
    """Lengths and turns of a realized chain (inverse of configure up to placement)."""
    return ChainSpec(tuple(chain.lengths.tolist()), turn_angles(chain))


def reflect(spec: ChainSpec) -> ChainSpec:
    return spec.with_turns(wrap_angle(-t) for t in spec.turns)


# ---------------------------------------------------------------- convexity

class ConvexityReason(enum.Enum):
    OK = "OK"
    REPEATED_JOINT = "RepeatedJoint"
    CLOSED_AT_SHOULDER = "ClosedAtShoulder"
    JOINT_OFF_HULL = "JointOffHull"
    ALL_COLLINEAR = "AllCollinear"
    NEGATIVE_TURN = "NegativeTurn"


@dataclass(frozen=True)
class ConvexityReport:
    is_convex: bool
    reason: ConvexityReason
    joint: int | None = None  # offending joint, when one is identifiable

    def __bool__(self):
        return self.is_convex


def _report(reason, joint=None):
    return ConvexityReport(reason is ConvexityReason.OK, reason, joint)


def classify_convex(chain: Chain, closed: bool = False) -> ConvexityReport:
    """Decide whether the joints form a nondegenerate convex polygon, in order.

    Convex chains are taken counterclockwise, so a clockwise one is reported
    as ``NegativeTurn``.  With ``closed=True`` a chain whose hand returns to the
    shoulder is accepted and its joints a_0..a_{n-1} must form the polygon.
    """
    tol = tolerance.current()
    pts = chain.joints
    diam = float(np.max(np.hypot(*(pts - pts[0]).T)))
    if diam == 0:
        return _report(ConvexityReason.REPEATED_JOINT, 1)
    eps = tol.length * diam

    is_closed = math.dist(pts[0], pts[-1]) <= eps
    if is_closed and not closed:
        return _report(ConvexityReason.CLOSED_AT_SHOULDER, chain.n)
    poly = pts[:-1] if is_closed else pts
    m = len(poly)

    d = np.hypot(*(poly[:, None, :] - poly[None, :, :]).transpose(2, 0, 1))
    d[np.diag_indices(m)] = np.inf
    i, j = np.unravel_index(np.argmin(d), d.shape)
    if d[i, j] <= eps:
        return _report(ConvexityReason.REPEATED_JOINT, int(max(i, j)))

    far = poly[int(np.argmax(np.hypot(*(poly - poly[0]).T)))]
    axis = (far - poly[0]) / math.dist(far, poly[0])
    rel = poly - poly[0]
    if np.all(np.abs(rel[:, 0] * axis[1] - rel[:, 1] * axis[0]) <= eps):
        return _report(ConvexityReason.ALL_COLLINEAR)

    turns = turn_angles(chain)
    interior = turns[: m - 1] if is_closed else turns
    for k, t in enumerate(interior, start=1):
        if t < -tol.angle:
            return _report(ConvexityReason.NEGATIVE_TURN, k)
        if t >= math.pi - tol.angle:
            return _report(ConvexityReason.JOINT_OFF_HULL, k)

    # turns of the closed polygon, including the missing link's endpoints
    ring = np.vstack([poly, poly[:2]])
    loop = turn_angles(Chain(ring))  # at poly[1], ..., poly[m-1], poly[0]
    if any(t < -tol.angle for t in loop) or abs(sum(loop) - math.tau) > 1e-6:
        bad = [k for k, t in enumerate(loop) if t < -tol.angle]
        joint = (bad[0] + 1) % m if bad else None
        return _report(ConvexityReason.JOINT_OFF_HULL, joint)
    for k in range(m):
        a, b = poly[k], poly[(k + 1) % m]
        e = b - a
        side = e[0] * (poly[:, 1] - a[1]) - e[1] * (poly[:, 0] - a[0])
        if np.any(side < -eps * math.hypot(*e)):
            return _report(ConvexityReason.JOINT_OFF_HULL, int(np.argmin(side)))
    return _report(ConvexityReason.OK)


def is_convex_spec(spec: ChainSpec, closed: bool = False) -> bool:
    return classify_convex(configure(spec), closed=closed).is_convex


def require_convex(spec: ChainSpec, closed: bool = False) -> None:
    rep = classify_convex(configure(spec), closed=closed)
    if not rep.is_convex:
        raise ValueError(f"chain is not convex ({rep.reason.value}, joint {rep.joint}): {spec.to_dict()}")


def is_valid_reconfiguration(alpha: Sequence[float], beta: Sequence[float]) -> bool:
    """Every beta_i lies in [-alpha_i, alpha_i] up to the angle tolerance."""
    if len(alpha) != len(beta):
        raise ValueError(f"size mismatch: {len(alpha)} alpha vs {len(beta)} beta")
    eps = tolerance.current().angle
    return all(abs(b) <= a + eps for a, b in zip(alpha, beta))


@dataclass(frozen=True)
class ForbiddenDisk:
    center: Point
    radius: float

    def contains(self, p, strict_margin: float = 0.0) -> bool:
        """True if p is inside the open disk by more than ``strict_margin``."""
        return math.dist(p, self.center) < self.radius - strict_margin


def forbidden_disk(spec: ChainSpec, closed: bool = False) -> ForbiddenDisk:
    require_convex(spec, closed=closed)
    return ForbiddenDisk((0.0, 0.0), configure(spec).hand_distance())


# ---------------------------------------------------------------- predicates

class SegmentRelation(enum.Enum):
    DISJOINT = "Disjoint"
    PROPER = "Proper"
    ENDPOINT_TOUCH = "EndpointTouch"
    OVERLAP = "Overlap"


def _orient_sign(a, b, c, band, exact):
    if exact:
        ax, ay, bx, by, cx, cy = map(Fraction, (*a, *b, *c))
        v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        return (v > 0) - (v < 0)
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if abs(v) <= band:
        return 0
    return 1 if v > 0 else -1


def _param(a, b, p, exact):
    """Position of p along a->b (0 at a, 1 at b), for p on the line."""
    if exact:
        ax, ay, bx, by, px, py = map(Fraction, (*a, *b, *p))
    else:
        ax, ay, bx, by, px, py = (*a, *b, *p)
    dx, dy = bx - ax, by - ay
    return ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy)


def segments_intersect(s1: Segment, s2: Segment, exact: bool = False) -> SegmentRelation:
    """Classify how two closed segments meet.

    ``ENDPOINT_TOUCH`` covers any contact in a single point that is an
    endpoint of at least one segment; ``PROPER`` is a crossing at a point
    interior to both.  The float path treats orientations within a band
    scaled by segment length and the local coordinate extent as zero; the
    exact path evaluates the same predicates in rational arithmetic.
    """
    p1, p2 = s1
    q1, q2 = s2
    if tuple(p1) == tuple(p2) or tuple(q1) == tuple(q2):
        raise ValueError("degenerate (zero-length) segment")
    if exact:
        eps_p = 0
        band1 = band2 = 0.0
    else:
        pts = (p1, p2, q1, q2)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        extent = max(max(xs) - min(xs), max(ys) - min(ys))
        k = tolerance.current().orient
        band1 = k * math.dist(p1, p2) * extent
        band2 = k * math.dist(q1, q2) * extent
        eps_p = k * extent

    o1 = _orient_sign(p1, p2, q1, band1, exact)
    o2 = _orient_sign(p1, p2, q2, band1, exact)
    o3 = _orient_sign(q1, q2, p1, band2, exact)
    o4 = _orient_sign(q1, q2, p2, band2, exact)

    if o1 == 0 and o2 == 0:
        # collinear: compare parameter intervals along s1
        t1 = _param(p1, p2, q1, exact)
        t2 = _param(p1, p2, q2, exact)
        lo, hi = min(t1, t2), max(t1, t2)
        length = math.dist(p1, p2)
        slack = eps_p / length if not exact else 0
        overlap = min(hi, 1) - max(lo, 0)
        if overlap > slack:
            return SegmentRelation.OVERLAP
        if overlap >= -slack:
            return SegmentRelation.ENDPOINT_TOUCH
        return SegmentRelation.DISJOINT

    if o1 * o2 < 0 and o3 * o4 < 0:
        return SegmentRelation.PROPER

    def on(a, b, p, o):
        if o != 0:
            return False
        t = _param(a, b, p, exact)
        slack = 0 if exact else eps_p / math.dist(a, b)
        return -slack <= t <= 1 + slack

    if on(p1, p2, q1, o1) or on(p1, p2, q2, o2) or on(q1, q2, p1, o3) or on(q1, q2, p2, o4):
        return SegmentRelation.ENDPOINT_TOUCH
    return SegmentRelation.DISJOINT


def is_simple(chain: Chain, closed: bool = False, exact: bool = False) -> bool:
    """Nonadjacent links disjoint, adjacent links meeting only at their joint.

    In closed mode the hand must coincide with the shoulder and the last link
    counts as adjacent to the first.  Candidate pairs come from an x-sorted
    sweep over link bounding boxes.
    """
    segs = chain.segments()
    n = len(segs)
    if closed:
        scale = max(1.0, float(np.max(np.abs(chain.joints))))
        if math.dist(chain.joints[0], chain.joints[-1]) > tolerance.current().length * scale:
            raise ValueError("closed mode requires the hand to coincide with the shoulder")
        segs[-1] = (segs[-1][0], segs[0][0])

    def adjacent(i, j):
        return j == i + 1 or (closed and n >= 3 and i == 0 and j == n - 1)

    boxes = []
    for k, (a, b) in enumerate(segs):
        if a == b:
            return False
        boxes.append((min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1]), k))
    ext = max(max(b[1] for b in boxes) - min(b[0] for b in boxes),
              max(b[3] for b in boxes) - min(b[2] for b in boxes))
    pad = 0.0 if exact else 4 * tolerance.current().orient * ext
    boxes.sort()
    active: list[tuple] = []
    for box in boxes:
        x0, x1, y0, y1, k = box
        active = [b for b in active if b[1] >= x0 - pad]
        for ox0, ox1, oy0, oy1, o in active:
            if oy1 < y0 - pad or y1 < oy0 - pad:
                continue
            i, j = min(k, o), max(k, o)
            rel = segments_intersect(segs[i], segs[j], exact=exact)
            if adjacent(i, j):
                if rel is not SegmentRelation.ENDPOINT_TOUCH:
                    return False
            elif rel is not SegmentRelation.DISJOINT:
                return False
        active.append(box)
    if closed and n == 2:
        return False
    return True
