"""Randomized property suites behind ``slicedev verify``.

Every trial draws its own generator from (master seed, trial index), so a
report depends only on the seed and trial count, never on scheduling.  A
failure record carries the trial seed plus the serialized inputs.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import tolerance
from .arm import (
    SamplingMode,
    check_arm,
    convexify,
    pairwise_slack,
    random_convex_spec,
    sample_cauchy_turns,
    sample_valid_turns,
    trial_seed,
)
from .chain import ChainSpec, configure, is_simple, is_valid_reconfiguration
from .develop import check_slice_theorem, congruent
from .indicatrix import build_indicatrix, compare_chords, projection_chord
from .polytope import SliceVariant, random_hull, random_plane

MODES = (SamplingMode.UNIFORM, SamplingMode.EXTREME, SamplingMode.SIGN_FLIPS)
SUITES = ("arm", "indicatrix", "slice")
PAIRWISE_SAMPLES = 4
# the check whose smallest slack is reported as a suite's min_margin
PRIMARY_CHECK = {"arm": "forbidden_disk", "indicatrix": "chord_sandwich", "slice": "angle_bounds"}


@dataclass(frozen=True)
class ArmTrial:
    index: int
    seed: int
    spec: ChainSpec
    beta: tuple[float, ...]
    mode: SamplingMode

    def payload(self) -> dict:
        return {"trial": self.index, "trial_seed": self.seed, "mode": self.mode.value,
                "spec": self.spec.to_dict(), "beta": list(self.beta)}


def arm_trial(master: int, index: int, n_range=(2, 12)) -> ArmTrial:
    seed = trial_seed(master, index)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    mode = MODES[index % len(MODES)]
    spec = random_convex_spec(rng, n)
    beta = sample_valid_turns(spec.turns, rng, mode)
    return ArmTrial(index, seed, spec, beta, mode)


class _Tally:
    def __init__(self, suite: str, seed: int, trials: int):
        self.suite = suite
        self.seed = seed
        self.trials = trials
        self.failures: list[dict] = []
        self.passed: dict[str, int] = {}
        self.margins: dict[str, float] = {}
        self.notes: dict[str, int] = {}

    def record(self, check: str, ok: bool, margin: float | None, payload: dict, detail=None):
        self.passed.setdefault(check, 0)
        if ok:
            self.passed[check] += 1
        else:
            rec = {"suite": self.suite, "check": check, **payload}
            if detail is not None:
                rec["detail"] = detail
            self.failures.append(rec)
        if margin is not None and math.isfinite(margin):
            self.margins[check] = min(self.margins.get(check, math.inf), float(margin))

    def note(self, key: str, count: int = 1):
        self.notes[key] = self.notes.get(key, 0) + count

    def merge(self, other: "_Tally"):
        self.failures += other.failures
        for k, v in other.passed.items():
            self.passed[k] = self.passed.get(k, 0) + v
        for k, v in other.margins.items():
            self.margins[k] = min(self.margins.get(k, math.inf), v)
        for k, v in other.notes.items():
            self.notes[k] = self.notes.get(k, 0) + v

    def report(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "failures": self.failures,
            "min_margin": self.margins.get(PRIMARY_CHECK[self.suite]),
            "margins": dict(sorted(self.margins.items())),
            "passed": dict(sorted(self.passed.items())),
            "notes": dict(sorted(self.notes.items())),
        }


# ---------------------------------------------------------------- per-trial bodies

def _arm_body(t: _Tally, trial: ArmTrial):
    spec, beta, payload = trial.spec, trial.beta, trial.payload()
    eps_len = tolerance.current().length

    rep = check_arm(spec, beta)
    t.record("forbidden_disk", rep.passed, rep.margin / (1.0 + rep.forbidden_radius), payload,
             rep.margin)

    b = configure(spec.with_turns(beta))
    t.record("simple", is_simple(b), None, payload)

    slack = pairwise_slack(spec, beta, PAIRWISE_SAMPLES)
    t.record("pairwise", slack >= -eps_len, slack, payload, slack)

    rng = np.random.default_rng([trial.seed, 1])
    cauchy = sample_cauchy_turns(spec.turns, rng)
    rep_c = check_arm(spec, cauchy)
    t.record("cauchy", rep_c.passed, rep_c.margin / (1.0 + rep_c.forbidden_radius),
             {**payload, "beta": list(cauchy)}, rep_c.margin)

    flipped = convexify(beta, spec.turns)
    t.record("convexify", all(0 <= f <= a + tolerance.current().angle
                              for f, a in zip(flipped, spec.turns)), None, payload)

    gamma = tuple(float(g) for g in rng.uniform(-np.abs(beta), np.abs(beta)))
    nest = (not is_valid_reconfiguration([abs(x) for x in beta], gamma)
            or is_valid_reconfiguration(spec.turns, gamma))
    t.record("nesting", nest, None, {**payload, "gamma": list(gamma)})


def _indicatrix_body(t: _Tally, trial: ArmTrial):
    spec, beta, payload = trial.spec, trial.beta, trial.payload()
    eps = tolerance.current().angle
    ta = build_indicatrix(configure(spec)).total_turning
    tb = build_indicatrix(configure(spec.with_turns(beta))).total_turning
    t.record("total_turning", tb <= ta + eps, ta - tb, payload, [ta, tb])

    cmp = compare_chords(spec, beta)
    lo = cmp.bound - (cmp.chord - eps)
    hi = (cmp.chord_star + eps) - cmp.bound
    t.record("chord_sandwich", lo >= 0 and hi >= 0, min(cmp.bound - cmp.chord, cmp.chord_star - cmp.bound),
             payload, [cmp.chord, cmp.bound, cmp.chord_star])
    gap = float(np.max(cmp.theta_star - cmp.theta))
    ok = gap <= eps and float(np.max(cmp.theta)) <= math.pi + eps
    t.record("theta_order", ok, -gap, payload, gap)

    # projection identity on an unconstrained random chain
    rng = np.random.default_rng([trial.seed, 2])
    n = int(rng.integers(2, 21))
    free = ChainSpec(tuple(rng.uniform(0.1, 2.0, n).tolist()),
                     tuple(rng.uniform(-math.pi, math.pi, n - 1).tolist()))
    ch = configure(free)
    chord = ch.hand - ch.shoulder
    a = math.hypot(*chord)
    rel = abs(projection_chord(ch, chord / a) - a) / a
    t.record("projection_identity", rel <= 1e-12, 1e-12 - rel, {**payload, "free_chain": free.to_dict()}, rel)


def _slice_body(t: _Tally, index: int, seed: int):
    rng = np.random.default_rng(seed)
    npts = int(rng.integers(4, 51))
    p = random_hull(npts, rng)
    plane = random_plane(p, rng)
    payload = {"trial": index, "trial_seed": seed, "points": npts, "plane": plane.to_dict()}
    rep = check_slice_theorem(p, plane)
    if rep.variant is not SliceVariant.CURVE:
        t.note(f"variant_{rep.variant.value}")
        t.record("slice_theorem", rep.passed, None, payload)
        return
    t.note("nondegenerate")
    t.record("angle_bounds", rep.angle_bounds, rep.min_margin, payload)
    t.record("edge_sums", rep.edge_sums, None, payload)
    t.record("valid_reconfiguration", rep.valid_reconfiguration, None, payload,
             {"alpha": list(rep.alpha), "beta": list(rep.beta)})
    t.record("development_simple", rep.right_simple, None, payload)
    if rep.arm is not None:
        t.record("arm_link", rep.arm.passed, rep.arm.margin, payload)
    perim = rep.curve.perimeter
    rel = abs(rep.right.length - perim) / perim
    t.record("length_preserved", rel <= 1e-9, None, payload, rel)
    if rep.curve.avoids_vertices:
        t.record("left_right_congruent", congruent(rep.right, rep.left), None, payload)
    if not rep.left_simple:
        t.note("left_development_nonsimple")
    t.record("slice_theorem", rep.passed, None, payload)


# ---------------------------------------------------------------- drivers

def _run_chunk(args):
    suite, seed, indices, tol = args
    tolerance.set_current(tol)
    t = _Tally(suite, seed, len(indices))
    for i in indices:
        payload = {"trial": i, "trial_seed": trial_seed(seed, i)}
        try:
            if suite == "slice":
                _slice_body(t, i, payload["trial_seed"])
            else:
                trial = arm_trial(seed, i)
                payload = trial.payload()
                (_arm_body if suite == "arm" else _indicatrix_body)(t, trial)
        except (ValueError, ArithmeticError, IndexError) as exc:
            # a check that cannot even run on a generated instance is a failure too
            t.record("exception", False, None, payload, f"{type(exc).__name__}: {exc}")
    return t


def run_suite(suite: str, trials: int, seed: int, jobs: int = 1) -> dict:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    total = _Tally(suite, seed, trials)
    tol = tolerance.current()
    if jobs <= 1:
        total.merge(_run_chunk((suite, seed, range(trials), tol)))
    else:
        step = max(1, math.ceil(trials / (4 * jobs)))
        chunks = [(suite, seed, range(k, min(trials, k + step)), tol) for k in range(0, trials, step)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_run_chunk, chunks):
                total.merge(part)
    total.failures.sort(key=lambda r: (r["trial"], r["check"]))
    return total.report()


def run_all(suites, trials: int, seed: int, jobs: int = 1) -> dict:
    reports = {s: run_suite(s, trials, seed, jobs) for s in suites}
    margins = [r["min_margin"] for r in reports.values() if r["min_margin"] is not None]
    return {
        "seed": seed,
        "trials": trials,
        "suites": reports,
        "failures": [f for r in reports.values() for f in r["failures"]],
        "min_margin": min(margins) if margins else None,
    }
