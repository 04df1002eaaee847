"""Numerical tolerances shared by every module.

Library code reads :func:`current` at call time, so a temporary override
(``with override(angle=1e-6): ...``) applies to everything inside the block.
The ``SLICEDEV_TOLERANCE`` environment variable is honoured only by the CLI.
"""
from __future__ import annotations

import contextlib
import dataclasses
import os
from dataclasses import dataclass

ENV_VAR = "SLICEDEV_TOLERANCE"


@dataclass(frozen=True)
class Tolerance:
    angle: float = 1e-9   # radians, for angle-range checks
    length: float = 1e-9  # relative, for distance comparisons
    orient: float = 1e-12  # relative, scales the orientation-predicate zero band


DEFAULT = Tolerance()
_current = DEFAULT


def current() -> Tolerance:
    return _current


def set_current(tol: Tolerance) -> None:
    global _current
    _current = tol


@contextlib.contextmanager
def override(**changes):
    prev = current()
    set_current(dataclasses.replace(prev, **changes))
    try:
        yield current()
    finally:
        set_current(prev)


@contextlib.contextmanager
def pinned(tol: Tolerance = DEFAULT):
    """Run a block under exactly ``tol``; random generators use this so the
    instances they produce never depend on a user override."""
    prev = current()
    set_current(tol)
    try:
        yield tol
    finally:
        set_current(prev)


def parse(text: str, base: Tolerance = DEFAULT) -> Tolerance:
    """Parse ``"1e-8"`` (both len and angle) or ``"len=1e-8,angle=1e-7"``."""
    text = text.strip()
    if not text:
        return base
    if "=" not in text:
        v = float(text)
        return dataclasses.replace(base, length=v, angle=v)
    changes = {}
    for part in text.split(","):
        key, _, val = part.partition("=")
        key = key.strip()
        key = {"len": "length", "eps_len": "length", "eps_angle": "angle"}.get(key, key)
        if key not in ("length", "angle", "orient"):
            raise ValueError(f"unknown tolerance key {key!r} in {text!r}")
        changes[key] = float(val)
    return dataclasses.replace(base, **changes)


def from_env(environ=None, base: Tolerance = DEFAULT) -> Tolerance:
    environ = os.environ if environ is None else environ
    raw = environ.get(ENV_VAR)
    return base if raw is None else parse(raw, base)
