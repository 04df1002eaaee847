"""Independent reference implementations used only by the tests.

Nothing here imports the package's geometry code, so agreement between an
oracle and the library is real evidence rather than a tautology.
"""
from __future__ import annotations

import math
from fractions import Fraction


def place_chain(lengths, turns):
    """Joints by summing rotated links one at a time (plain trigonometry)."""
    x = y = 0.0
    heading = 0.0
    out = [(0.0, 0.0)]
    for i, ell in enumerate(lengths):
        if i > 0:
            heading += turns[i - 1]
        x += ell * math.cos(heading)
        y += ell * math.sin(heading)
        out.append((x, y))
    return out


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _intersection(p1, p2, q1, q2):
    """Exact intersection of two closed segments.

    Returns None, ("point", P) or ("overlap", (P, Q)) with rational points.
    """
    r = (p2[0] - p1[0], p2[1] - p1[1])
    s = (q2[0] - q1[0], q2[1] - q1[1])
    denom = r[0] * s[1] - r[1] * s[0]
    qp = (q1[0] - p1[0], q1[1] - p1[1])
    if denom != 0:
        t = (qp[0] * s[1] - qp[1] * s[0]) / denom
        u = (qp[0] * r[1] - qp[1] * r[0]) / denom
        if 0 <= t <= 1 and 0 <= u <= 1:
            return "point", (p1[0] + t * r[0], p1[1] + t * r[1])
        return None
    if _cross(p1, p2, q1) != 0:
        return None  # parallel, distinct lines
    rr = r[0] * r[0] + r[1] * r[1]
    t0 = (qp[0] * r[0] + qp[1] * r[1]) / rr
    t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / rr
    lo, hi = max(min(t0, t1), 0), min(max(t0, t1), 1)
    if lo > hi:
        return None
    a = (p1[0] + lo * r[0], p1[1] + lo * r[1])
    if lo == hi:
        return "point", a
    return "overlap", (a, (p1[0] + hi * r[0], p1[1] + hi * r[1]))


def brute_force_simple(joints, closed=False):
    """O(n^2) all-pairs simplicity test in exact rational arithmetic."""
    pts = [(Fraction(x), Fraction(y)) for x, y in joints]
    if closed:
        pts[-1] = pts[0]
    segs = list(zip(pts, pts[1:]))
    n = len(segs)
    if any(a == b for a, b in segs):
        return False
    if closed and n < 3:
        return False
    for i in range(n):
        for j in range(i + 1, n):
            hit = _intersection(*segs[i], *segs[j])
            if j == i + 1 or (closed and i == 0 and j == n - 1):
                shared = segs[i][1] if j == i + 1 else segs[i][0]
                if hit != ("point", shared):
                    return False
            elif hit is not None:
                return False
    return True


def in_convex_hull_3d(point, vertices):
    """True when point is inside the hull of the given 3-D points, by
    checking it against every supporting plane through three vertices."""
    import itertools

    import numpy as np

    v = np.asarray(vertices, dtype=float)
    p = np.asarray(point, dtype=float)
    for a, b, c in itertools.combinations(range(len(v)), 3):
        nrm = np.cross(v[b] - v[a], v[c] - v[a])
        if np.linalg.norm(nrm) < 1e-12:
            continue
        d = (v - v[a]) @ nrm
        if np.all(d <= 1e-12) and (p - v[a]) @ nrm > 1e-12:
            return False
        if np.all(d >= -1e-12) and (p - v[a]) @ nrm < -1e-12:
            return False
    return True
