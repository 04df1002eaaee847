"""Tangent indicatrix of a planar polygonal chain.

The indicatrix is kept as one unit direction per link plus the running sum of
absolute turns; positions on it are addressed either by a link or by a point
inside the turn at a vertex (``TangentLocator``).  These measures give a
constructive version of the projection argument behind the arm lemma: project
the reconfigured chain onto a reference direction and compare with the
original chord.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tolerance
from .chain import (
    Chain,
    ChainSpec,
    classify_convex,
    configure,
    is_valid_reconfiguration,
    require_convex,
    turn_angles,
)


@dataclass(frozen=True, eq=False)
class Indicatrix:
    link_directions: np.ndarray      # (n, 2) unit vectors
    cumulative_turning: np.ndarray   # (n,) running sum of |turn|, 0 at link 0
    turns: tuple[float, ...]

    @property
    def total_turning(self) -> float:
        return float(self.cumulative_turning[-1])

    def to_dict(self) -> dict:
        return {
            "directions": self.link_directions.tolist(),
            "cumulative_turning": self.cumulative_turning.tolist(),
        }


@dataclass(frozen=True)
class TangentLocator:
    """A link, or a point part-way through the turn at a vertex.

    With ``vertex_index=j`` the turn at joint j is split as
    ``turn_split = (first, second)``: the tangent has turned ``first`` past
    link j-1 and has ``second`` left before link j.
    """

    link_index: int | None = None
    vertex_index: int | None = None
    turn_split: tuple[float, float] | None = None

    def __post_init__(self):
        if (self.link_index is None) == (self.vertex_index is None):
            raise ValueError("give exactly one of link_index or vertex_index")
        if self.vertex_index is not None:
            if self.turn_split is None:
                raise ValueError("a vertex locator needs a turn split")
            object.__setattr__(self, "turn_split", tuple(float(x) for x in self.turn_split))

    @classmethod
    def link(cls, i: int) -> "TangentLocator":
        return cls(link_index=i)

    @classmethod
    def vertex(cls, j: int, first: float, second: float) -> "TangentLocator":
        return cls(vertex_index=j, turn_split=(first, second))


def build_indicatrix(chain: Chain) -> Indicatrix:
    v = chain.links
    norms = np.hypot(*v.T)
    if np.any(norms == 0):
        raise ValueError("zero-length link: direction undefined")
    dirs = v / norms[:, None]
    turns = turn_angles(chain) if chain.n >= 2 else ()
    cum = np.concatenate([[0.0], np.cumsum(np.abs(turns))])
    dirs.setflags(write=False)
    cum.setflags(write=False)
    return Indicatrix(dirs, cum, tuple(turns))


def _check_locator(ind: Indicatrix, s: TangentLocator):
    n = len(ind.link_directions)
    if s.link_index is not None:
        if not 0 <= s.link_index < n:
            raise ValueError(f"link index {s.link_index} out of range")
        return
    j = s.vertex_index
    if not 1 <= j <= n - 1:
        raise ValueError(f"vertex index {j} out of range")
    first, second = s.turn_split
    turn = ind.turns[j - 1]
    eps = tolerance.current().angle
    if abs(first + second - turn) > eps or first * turn < -eps**2 or second * turn < -eps**2:
        raise ValueError(f"split {s.turn_split} does not partition the turn {turn} at joint {j}")


def _order_key(s: TangentLocator):
    if s.link_index is not None:
        return (2 * s.link_index + 1, 0.0)
    return (2 * s.vertex_index, abs(s.turn_split[0]))


def _coordinate(ind: Indicatrix, s: TangentLocator) -> float:
    if s.link_index is not None:
        return float(ind.cumulative_turning[s.link_index])
    return float(ind.cumulative_turning[s.vertex_index - 1]) + abs(s.turn_split[0])


def tangent_direction(ind: Indicatrix, s: TangentLocator) -> np.ndarray:
    _check_locator(ind, s)
    if s.link_index is not None:
        return ind.link_directions[s.link_index]
    return _rotate(ind.link_directions[s.vertex_index - 1], s.turn_split[0])


def _rotate(d, angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([c * d[0] - s * d[1], s * d[0] + c * d[1]])


def arc_length(ind: Indicatrix, s1: TangentLocator, s2: TangentLocator) -> float:
    """Total absolute turning from s1 to s2; doubled-back turning is not cancelled."""
    _check_locator(ind, s1)
    _check_locator(ind, s2)
    if _order_key(s2) < _order_key(s1):
        raise ValueError("locators out of chain order")
    return max(0.0, _coordinate(ind, s2) - _coordinate(ind, s1))


def circular_distance(d1, d2) -> float:
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    for d in (d1, d2):
        if abs(math.hypot(*d) - 1.0) > 1e-9:
            raise ValueError(f"not a unit vector: {d.tolist()}")
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    return math.atan2(abs(cross), float(d1 @ d2))


def find_tangent_point(chain: Chain) -> TangentLocator:
    """Where the tangent of a convex chain is parallel to the chord a_0 -> a_n."""
    rep = classify_convex(chain)
    if not rep.is_convex:
        raise ValueError(f"chain is not convex ({rep.reason.value})")
    ind = build_indicatrix(chain)
    chord = chain.hand - chain.shoulder
    u = chord / math.hypot(*chord)
    d0 = ind.link_directions[0]
    target = math.atan2(d0[0] * u[1] - d0[1] * u[0], float(d0 @ u))
    eps = tolerance.current().angle
    if target < -eps:
        raise ValueError("chord direction precedes the first link")
    target = max(target, 0.0)
    cum = ind.cumulative_turning
    for i, c in enumerate(cum):
        if abs(c - target) <= eps:
            return TangentLocator.link(i)
    for j in range(1, len(cum)):
        if cum[j - 1] < target < cum[j]:
            first = target - float(cum[j - 1])
            return TangentLocator.vertex(j, first, ind.turns[j - 1] - first)
    raise ValueError("chord direction beyond the last link")


def projection_chord(chain: Chain, direction) -> float:
    """Sum of link lengths times cos(angle to ``direction``)."""
    ind = build_indicatrix(chain)
    lengths = chain.lengths
    return math.fsum(
        float(ell) * math.cos(circular_distance(d, direction))
        for ell, d in zip(lengths, ind.link_directions)
    )


@dataclass(frozen=True, eq=False)
class ChordComparison:
    """Per-link angles to the reference lines in A and in the reconfigured B."""

    locator: TangentLocator
    reference: np.ndarray       # unit direction in A (the chord)
    reference_star: np.ndarray  # corresponding tangent direction in B
    theta: np.ndarray
    theta_star: np.ndarray
    chord: float                # |a_n a_0|
    chord_star: float           # |b_n b_0|
    bound: float                # sum of l_i cos(theta*_i)


def corresponding_tangent(locator: TangentLocator, ind_b: Indicatrix) -> np.ndarray:
    """Tangent of B matching ``locator`` on A.

    A vertex split (first, second) carries over as the incoming link of B
    rotated by clamp(beta, -first, first).
    """
    if locator.link_index is not None:
        return ind_b.link_directions[locator.link_index]
    j = locator.vertex_index
    first = locator.turn_split[0]
    beta = ind_b.turns[j - 1]
    turn = min(max(beta, -first), first)
    return _rotate(ind_b.link_directions[j - 1], turn)


def compare_chords(spec: ChainSpec, beta: Sequence[float]) -> ChordComparison:
    require_convex(spec)
    beta = tuple(float(b) for b in beta)
    if not is_valid_reconfiguration(spec.turns, beta):
        raise ValueError(f"beta {list(beta)} is not valid for alpha {list(spec.turns)}")
    a = configure(spec)
    b = configure(spec.with_turns(beta))
    q = find_tangent_point(a)
    ind_a = build_indicatrix(a)
    ind_b = build_indicatrix(b)
    chord = a.hand - a.shoulder
    ref = chord / math.hypot(*chord)
    ref_star = corresponding_tangent(q, ind_b)
    ref_star = ref_star / math.hypot(*ref_star)
    theta = np.array([circular_distance(d, ref) for d in ind_a.link_directions])
    theta_star = np.array([circular_distance(d, ref_star) for d in ind_b.link_directions])
    lengths = np.asarray(spec.lengths)
    bound = math.fsum((lengths * np.cos(theta_star)).tolist())
    return ChordComparison(q, ref, ref_star, theta, theta_star,
                           a.hand_distance(), b.hand_distance(), bound)


def chord_lower_bound(spec: ChainSpec, beta: Sequence[float]) -> float:
    return compare_chords(spec, beta).bound
