"""Checkers for the extended arm lemma.

A convex chain A with turn angles alpha may be reconfigured to any B with
|beta_i| <= alpha_i; the hand of B never gets closer to the shoulder than the
hand of A was.  Everything here evaluates that claim (and its corollaries)
on concrete instances.
"""
from __future__ import annotations

import enum
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
    spec_of,
)
from .errors import TheoremViolation


class SamplingMode(enum.Enum):
    UNIFORM = "Uniform"
    EXTREME = "Extreme"
    SIGN_FLIPS = "SignFlips"


def trial_seed(master: int, index: int) -> int:
    """64-bit seed for one trial, derived only from (master seed, trial index)."""
    ss = np.random.SeedSequence([master & (2**64 - 1), index])
    return int(ss.generate_state(1, np.uint64)[0])


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


# ------------------------------------------------------------ random chains

def _valtr_polygon(rng: np.random.Generator, m: int) -> np.ndarray:
    """Random convex polygon with m vertices, counterclockwise (Valtr's method)."""

    def split(vals):
        vals = np.sort(vals)
        lo, hi = vals[0], vals[-1]
        last_a = last_b = lo
        out = []
        for v in vals[1:-1]:
            if rng.random() < 0.5:
                out.append(v - last_a)
                last_a = v
            else:
                out.append(last_b - v)
                last_b = v
        out.append(hi - last_a)
        out.append(last_b - hi)
        return np.array(out)

    dx = split(rng.random(m))
    dy = split(rng.random(m))
    rng.shuffle(dy)
    vec = np.stack([dx, dy], axis=1)
    vec = vec[np.argsort(np.arctan2(vec[:, 1], vec[:, 0]))]
    return np.cumsum(vec, axis=0)


def _ellipse_polygon(rng: np.random.Generator, m: int) -> np.ndarray:
    t = np.sort(rng.uniform(0, math.tau, m))
    a, b = 1.0, rng.uniform(0.05, 1.0)
    return np.stack([a * np.cos(t), b * np.sin(t)], axis=1)


MAX_ATTEMPTS = 1000


def random_convex_spec(seed, n: int) -> ChainSpec:
    """A random open convex chain with n links (n >= 2)."""
    if n < 2:
        raise ValueError("a convex chain needs at least 2 links")
    rng = _rng(seed)
    with tolerance.pinned():
        for _ in range(MAX_ATTEMPTS):
            poly = (_valtr_polygon if rng.random() < 0.5 else _ellipse_polygon)(rng, n + 1)
            start = int(rng.integers(n + 1))
            poly = np.roll(poly, -start, axis=0)
            poly = poly * rng.uniform(0.5, 5.0)
            chain = Chain(poly)
            if not classify_convex(chain).is_convex:
                continue
            spec = spec_of(chain)
            if classify_convex(configure(spec)).is_convex:
                return spec
    raise RuntimeError(f"no convex chain with {n} links after {MAX_ATTEMPTS} draws")


# ---------------------------------------------------------------- sampling

def _sample_turns(alpha: Sequence[float], rng: np.random.Generator, mode: SamplingMode):
    alpha = np.asarray(alpha, dtype=float)
    if mode is SamplingMode.UNIFORM:
        beta = rng.uniform(-alpha, alpha)
    elif mode is SamplingMode.EXTREME:
        beta = rng.choice([-1.0, 1.0], size=alpha.shape) * alpha
    elif mode is SamplingMode.SIGN_FLIPS:
        # uniform over the number of flips, so near-identity and
        # near-reflection vectors are drawn as often as balanced ones
        k = int(rng.integers(len(alpha) + 1))
        signs = np.ones_like(alpha)
        signs[rng.permutation(len(alpha))[:k]] = -1.0
        beta = signs * alpha
    else:
        raise ValueError(f"unknown sampling mode {mode!r}")
    return tuple(float(b) + 0.0 for b in beta)


def sample_valid_turns(alpha: Sequence[float], seed, mode: SamplingMode = SamplingMode.UNIFORM):
    return _sample_turns(alpha, _rng(seed), SamplingMode(mode))


def sample_cauchy_turns(alpha: Sequence[float], seed):
    """beta_i drawn uniformly from [0, alpha_i]: the classic opening condition."""
    rng = _rng(seed)
    return tuple(float(b) for b in rng.uniform(0.0, np.asarray(alpha, dtype=float)))


def convexify(gamma: Sequence[float], alpha: Sequence[float] | None = None):
    beta = tuple(abs(float(g)) for g in gamma)
    if alpha is not None:
        if not is_valid_reconfiguration(alpha, gamma):
            raise ValueError("gamma is not a valid reconfiguration of alpha")
        eps = tolerance.current().angle
        if not all(0.0 <= b <= a + eps for a, b in zip(alpha, beta)):
            raise TheoremViolation("convexified turns leave [0, alpha]",
                                   {"alpha": list(alpha), "gamma": list(gamma)})
    return beta


# ---------------------------------------------------------------- checks

@dataclass(frozen=True)
class ArmCheckReport:
    hand_distance: float
    forbidden_radius: float
    margin: float
    passed: bool
    beta: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "hand_distance": self.hand_distance,
            "forbidden_radius": self.forbidden_radius,
            "margin": self.margin,
            "passed": self.passed,
            "beta": list(self.beta),
        }


def _check_inputs(spec, beta, closed):
    require_convex(spec, closed=closed)
    beta = tuple(float(b) for b in beta)
    if not is_valid_reconfiguration(spec.turns, beta):
        raise ValueError(f"beta {list(beta)} is not valid for alpha {list(spec.turns)}")
    return beta


def check_arm(spec: ChainSpec, beta: Sequence[float], closed: bool = False) -> ArmCheckReport:
    beta = _check_inputs(spec, beta, closed)
    radius = configure(spec).hand_distance()
    hand = configure(spec.with_turns(beta)).hand_distance()
    margin = hand - radius
    passed = margin >= -tolerance.current().length * (1.0 + radius)
    return ArmCheckReport(hand, radius, margin, passed, beta)


def _sample_points(chain: Chain, samples_per_link: int) -> np.ndarray:
    t = np.arange(samples_per_link + 1) / (samples_per_link + 1)
    a = chain.joints[:-1]
    d = chain.links
    pts = a[:, None, :] + t[None, :, None] * d[:, None, :]
    return np.vstack([pts.reshape(-1, 2), chain.joints[-1:]])


def pairwise_slack(spec: ChainSpec, beta: Sequence[float], samples_per_link: int,
                   closed: bool = False) -> float:
    """min over sampled pairs of (|q1 q2| - |p1 p2|) / (1 + |p1 p2|)."""
    if samples_per_link < 1:
        raise ValueError("samples_per_link must be >= 1")
    beta = _check_inputs(spec, beta, closed)
    pa = _sample_points(configure(spec), samples_per_link)
    pb = _sample_points(configure(spec.with_turns(beta)), samples_per_link)
    iu = np.triu_indices(len(pa), k=1)
    da = np.hypot(*(pa[:, None] - pa[None, :]).transpose(2, 0, 1))[iu]
    db = np.hypot(*(pb[:, None] - pb[None, :]).transpose(2, 0, 1))[iu]
    return float(np.min((db - da) / (1.0 + da)))


def check_pairwise(spec: ChainSpec, beta: Sequence[float], samples_per_link: int,
                   closed: bool = False) -> bool:
    slack = pairwise_slack(spec, beta, samples_per_link, closed=closed)
    return slack >= -tolerance.current().length


# ---------------------------------------------------------------- reachability

@dataclass(frozen=True)
class ReachableArc:
    center: tuple[float, float]
    radius: float
    angular_interval: tuple[float, float]

    def point(self, angle: float) -> np.ndarray:
        return np.array(self.center) + self.radius * np.array([math.cos(angle), math.sin(angle)])

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.angular_interval
        return self.point(lo), self.point(hi)

    def distance_to(self, p) -> float:
        """Euclidean distance from p to the arc."""
        v = np.asarray(p, dtype=float) - self.center
        ang = math.atan2(v[1], v[0])
        lo, hi = self.angular_interval
        if lo <= ang <= hi:
            return abs(math.hypot(*v) - self.radius)
        return min(math.dist(p, e) for e in self.endpoints())

    def min_shoulder_distance(self) -> float:
        # shoulder distance falls monotonically as |angle| grows on [0, pi]
        return min(math.hypot(*e) for e in self.endpoints())


def reachable_region_2link(spec: ChainSpec) -> ReachableArc:
    if spec.n != 2:
        raise ValueError(f"exactly 2 links required, got {spec.n}")
    require_convex(spec)
    alpha = spec.turns[0]
    return ReachableArc((spec.lengths[0], 0.0), spec.lengths[1], (-alpha, alpha))


def sample_reachable(spec: ChainSpec, count: int, seed,
                     mode: SamplingMode = SamplingMode.UNIFORM) -> np.ndarray:
    if count < 1:
        raise ValueError("count must be >= 1")
    require_convex(spec)
    rng = _rng(seed)
    radius = configure(spec).hand_distance()
    floor = radius - tolerance.current().length * (1.0 + radius)
    out = np.empty((count, 2))
    for k in range(count):
        beta = _sample_turns(spec.turns, rng, SamplingMode(mode))
        out[k] = configure(spec.with_turns(beta)).hand
        if math.hypot(*out[k]) < floor:
            raise TheoremViolation("hand entered the forbidden disk",
                                   {"spec": spec.to_dict(), "beta": list(beta)})
    return out
