"""Exception types and resource limits."""
from __future__ import annotations

import contextvars
import json
import os
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace


class VbassError(Exception):
    pass


class ParseError(VbassError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class RingMismatchError(VbassError, ValueError):
    pass


class ResourceLimitError(VbassError):
    """A configured computation limit was exceeded."""

    def __init__(self, limit, value, bound):
        super().__init__(f"resource limit {limit} exceeded ({value} > {bound})")
        self.limit = limit
        self.value = value
        self.bound = bound


class NotFiniteLengthError(VbassError, ValueError):
    pass


class HypothesisError(VbassError, ValueError):
    """Input violates a standing hypothesis (e.g. generator degree not coprime to n)."""


class PresentationUnavailableError(VbassError):
    pass


class RankCertificationError(VbassError):
    pass


class NotPrimeError(VbassError, ValueError):
    pass


@dataclass(frozen=True)
class Limits:
    max_polys: int = 10_000
    max_degree: int = 60
    max_terms: int = 100_000
    i_max: int = 4
    degree_lo: int = -10
    degree_hi: int = 10
    cech_box: int = 6

    def updated(self, **kw):
        unknown = set(kw) - {f.name for f in fields(self)}
        if unknown:
            raise ValueError(f"unknown limit(s): {sorted(unknown)}")
        return replace(self, **kw)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_LIMITS = Limits()


def limits_from_env(base=DEFAULT_LIMITS):
    """Apply the JSON fragment in ``VBASS_LIMITS`` (if any) on top of ``base``."""
    raw = os.environ.get("VBASS_LIMITS")
    if not raw:
        return base
    return base.updated(**json.loads(raw))


_ACTIVE = contextvars.ContextVar("vbass_limits", default=DEFAULT_LIMITS)


def current_limits():
    """Limits in force for computations that were not handed explicit limits."""
    return _ACTIVE.get()


@contextmanager
def use_limits(limits):
    token = _ACTIVE.set(limits)
    try:
        yield limits
    finally:
        _ACTIVE.reset(token)
