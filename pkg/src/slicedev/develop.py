"""Planar development of slice curves.

The development cuts the slice curve open at its first corner and lays it
flat with the same link lengths, turning at each corner by the surface angle
on the chosen side minus pi.  Its turns form a valid reconfiguration of the
boundary chain of the cross-section polygon, so the arm-lemma machinery
applies directly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from . import tolerance
from .arm import ArmCheckReport, check_arm
from .chain import Chain, ChainSpec, configure, is_simple, is_valid_reconfiguration
from .polytope import (
    EDGE_CROSSING,
    PlaneSpec,
    Polytope,
    SliceCurve,
    SliceVariant,
    slice as slice_polytope,
    verify_angle_bounds,
)

NOTHING_TO_PROVE = "develops as is, and there is nothing to prove"


class Side(enum.Enum):
    RIGHT = "right"
    LEFT = "left"


@dataclass(frozen=True, eq=False)
class Development:
    chain: Chain
    betas: tuple[float, ...]
    side: Side
    source: SliceCurve | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"joints": self.chain.joints.tolist(), "betas": list(self.betas),
                "side": self.side.value}

    @property
    def length(self) -> float:
        return math.fsum(self.chain.lengths.tolist())

    def is_simple(self) -> bool:
        return _developed_chain_is_simple(self.chain)


def _developed_chain_is_simple(chain: Chain) -> bool:
    # the developed hand coincides with the shoulder only when B closes up;
    # then first and last link are adjacent, otherwise plain open-chain test
    scale = max(1.0, math.fsum(chain.lengths.tolist()))
    closed = chain.hand_distance() <= tolerance.current().length * scale
    return is_simple(chain, closed=closed)


def _turns(curve: SliceCurve, side: Side) -> tuple[float, ...]:
    # The left development turns by pi - theta_left measured clockwise, i.e.
    # it is drawn as seen from the other side of the surface.  This makes it
    # the mirror image of the right development wherever theta_l = 2pi - theta_r.
    inner = curve.corners[1:]
    if side is Side.RIGHT:
        return tuple(c.theta_right - math.pi for c in inner)
    return tuple(c.theta_left - math.pi for c in inner)


def develop(curve: SliceCurve, side: Side | str = Side.RIGHT) -> Development:
    side = Side(side)
    betas = _turns(curve, side)
    spec = ChainSpec(curve.lengths, betas)
    return Development(configure(spec), betas, side, curve)


def as_reconfiguration(curve: SliceCurve):
    """(alpha, beta, valid): boundary-chain turns of Q and the right development's turns."""
    alpha = tuple(math.pi - c.phi for c in curve.corners[1:])
    beta = _turns(curve, Side.RIGHT)
    return alpha, beta, is_valid_reconfiguration(alpha, beta)


def boundary_spec(curve: SliceCurve) -> ChainSpec:
    """The closed chain A around the cross-section polygon, opened at c_0."""
    alpha, _, _ = as_reconfiguration(curve)
    return ChainSpec(curve.lengths, alpha)


def congruent(d1: Development, d2: Development) -> bool:
    """Same link lengths and turn sequences equal or negated (reflection)."""
    eps = tolerance.current().angle
    if len(d1.betas) != len(d2.betas):
        return False
    l1, l2 = d1.chain.lengths, d2.chain.lengths
    if any(abs(a - b) > tolerance.current().length * (1 + a) for a, b in zip(l1, l2)):
        return False
    same = all(abs(a - b) <= eps for a, b in zip(d1.betas, d2.betas))
    mirror = all(abs(a + b) <= eps for a, b in zip(d1.betas, d2.betas))
    return same or mirror


@dataclass(frozen=True, eq=False)
class SliceTheoremReport:
    variant: SliceVariant
    passed: bool
    message: str = ""
    curve: SliceCurve | None = None
    angle_bounds: bool = True
    edge_sums: bool = True
    valid_reconfiguration: bool = True
    right_simple: bool = True
    left_simple: bool | None = None   # reported, never part of ``passed``
    arm: ArmCheckReport | None = None
    alpha: tuple[float, ...] = ()
    beta: tuple[float, ...] = ()
    right: Development | None = None
    left: Development | None = None
    min_margin: float = math.inf     # smallest slack among the checked inequalities

    def to_dict(self) -> dict:
        d = {"variant": self.variant.value, "passed": self.passed, "message": self.message}
        if self.curve is not None:
            d.update({
                "angle_bounds": self.angle_bounds,
                "edge_sums": self.edge_sums,
                "valid_reconfiguration": self.valid_reconfiguration,
                "right_simple": self.right_simple,
                "left_simple": self.left_simple,
                "alpha": list(self.alpha),
                "beta": list(self.beta),
                "min_margin": self.min_margin,
                "development_length": self.right.length if self.right else None,
                "arm": self.arm.to_dict() if self.arm else None,
            })
        return d


def check_curve(curve: SliceCurve) -> SliceTheoremReport:
    """Run every slice-development check on an already computed curve."""
    eps = tolerance.current().angle
    margins = []
    for c in curve.corners:
        margins += [c.theta_right - c.phi, math.tau - c.phi - c.theta_right]
    angle_ok = verify_angle_bounds(curve)
    sums_ok = all(abs(c.theta_right + c.theta_left - math.tau) <= eps
                  for c in curve.corners if c.kind == EDGE_CROSSING)
    alpha, beta, valid = as_reconfiguration(curve)
    right = develop(curve, Side.RIGHT)
    left = develop(curve, Side.LEFT)
    right_simple = right.is_simple()
    left_simple = left.is_simple()
    arm = None
    if valid:
        arm = check_arm(ChainSpec(curve.lengths, alpha), beta, closed=True)
        margins.append(arm.margin)
    passed = angle_ok and sums_ok and valid and right_simple and (arm is None or arm.passed)
    return SliceTheoremReport(
        SliceVariant.CURVE, passed, "" if passed else "slice-development check failed",
        curve, angle_ok, sums_ok, valid, right_simple, left_simple, arm,
        alpha, beta, right, left, min(margins) if margins else math.inf)


def check_slice_theorem(p: Polytope, plane: PlaneSpec) -> SliceTheoremReport:
    result = slice_polytope(p, plane)
    if result.variant is SliceVariant.EMPTY:
        return SliceTheoremReport(result.variant, True, "plane misses the polytope")
    if result.is_degenerate:
        return SliceTheoremReport(result.variant, True, NOTHING_TO_PROVE)
    return check_curve(result.curve)
