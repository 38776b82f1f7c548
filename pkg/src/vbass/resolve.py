"""Minimal graded free resolutions, Betti tables and graded Ext.

Degree convention: a generator of ``F_i`` with twist ``a`` (a summand
``R(-a)``) contributes to ``β(i, a)``; ``Hom(R(-a), M)_d = M_{d+a}``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import current_limits
from .exactalg import wdeg
from .gmod import GradedModule, prune, subquotient, kernel_of_map
from .groebner import _axpy, minimal_subset, reduce_mod_relations, syzygy_vecs


@dataclass
class Resolution:
    """``F_len -> ... -> F_0``; ``differentials[i-1]`` holds the columns of d_i."""

    ring: object
    twists: list
    differentials: list
    i_max: int
    minimal: bool = True

    @property
    def length(self):
        return len(self.twists) - 1

    def rank(self, i):
        return len(self.twists[i]) if i < len(self.twists) else 0

    def differential(self, i):
        return self.differentials[i - 1] if 1 <= i <= len(self.differentials) else []

    def compose_is_zero(self, i):
        """d_i ∘ d_{i+1} = 0 exactly (modulo the defining ideal)."""
        p = self.ring.field.p
        di = self.differential(i)
        for col in self.differential(i + 1):
            acc = {}
            for (l, m), a in col.items():
                _axpy(acc, -a % p if p else -a, di[l], m, p)
            if reduce_mod_relations(acc, self.ring):
                return False
        return True

    def is_complex(self):
        return all(self.compose_is_zero(i) for i in range(1, len(self.differentials)))

    def has_unit_entries(self):
        zero = (0,) * self.ring.nvars
        return any(m == zero for d in self.differentials for col in d for (_, m) in col)


@dataclass
class BettiTable:
    entries: dict = field(default_factory=dict)
    i_max: int = 0

    def totals(self):
        out = [0] * (self.i_max + 1)
        for (i, _a), v in self.entries.items():
            if i <= self.i_max:
                out[i] += v
        return out

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def degrees(self, i):
        return sorted(a for (j, a) in self.entries if j == i)

    def to_json(self):
        return {
            "iMax": self.i_max,
            "totals": self.totals(),
            "entries": {f"{i}:{a}": v for (i, a), v in sorted(self.entries.items())},
        }

    def to_csv(self):
        degs = sorted({a for (_, a) in self.entries})
        lines = ["i,total," + ",".join(f"z:{a}" for a in degs)]
        for i, tot in enumerate(self.totals()):
            lines.append(f"{i},{tot}," + ",".join(str(self[(i, a)]) for a in degs))
        return "\n".join(lines) + "\n"


@dataclass
class ExtModule:
    index: int
    value: GradedModule


def minimal_free_resolution(M, i_max, limits=None):
    """Minimal graded free resolution of ``M`` through homological degree ``i_max``."""
    if i_max < 0:
        raise ValueError("i_max must be >= 0")
    limits = limits or current_limits()
    ring = M.ring
    P, _ = prune(M)
    twists = [P.twists]
    diffs = []
    if i_max >= 1 and P.cols:
        diffs.append(list(P.cols))
        twists.append(P.source_twists)
    while len(diffs) < i_max and diffs and diffs[-1]:
        prev, prev_tw, tgt_tw = diffs[-1], twists[-1], twists[-2]
        syz, _ = syzygy_vecs(prev, ring, tgt_tw, prev_tw, limits)
        if not syz:
            break
        vecs = [s for s, _ in syz]
        keep = minimal_subset(vecs, ring, prev_tw, limits)
        cols = [vecs[k] for k in keep]
        degs = [syz[k][1] for k in keep]
        order = sorted(range(len(cols)), key=lambda k: degs[k])
        diffs.append([cols[k] for k in order])
        twists.append(tuple(degs[k] for k in order))
    return Resolution(ring, [tuple(t) for t in twists], diffs, i_max)


def betti_table(M, i_max, resolution=None):
    res = resolution or minimal_free_resolution(M, i_max)
    entries = Counter()
    for i, tw in enumerate(res.twists):
        if i <= i_max:
            for a in tw:
                entries[(i, a)] += 1
    return BettiTable(dict(entries), i_max)


def poincare_truncated(M, i_max):
    """Total Betti numbers β_0..β_{i_max}."""
    return betti_table(M, i_max).totals()


# --------------------------------------------------------------------------
# Ext


def _hom_twists(res_tw, M):
    return [g - a for a in res_tw for g in M.twists]


def _hom_relations(n_blocks, M):
    r = M.rank
    out = []
    for b in range(n_blocks):
        for v in M.cols:
            out.append({(b * r + c, m): a for (c, m), a in v.items()})
    return out


def _hom_map(d_cols, n_src, M):
    """Columns of Hom(d, M): Hom(F_src, M) -> Hom(F_tgt, M), d: F_tgt -> F_src."""
    r = M.rank
    out = [dict() for _ in range(n_src * r)]
    for lp, col in enumerate(d_cols):
        for (l, m), a in col.items():
            for c in range(r):
                out[l * r + c][(lp * r + c, m)] = a
    return out


def ext_module(N, M, i, resolution=None, limits=None):
    """``Ext^i_R(N, M)`` as a graded module, from a resolution of ``N``."""
    if N.ring != M.ring:
        from .errors import RingMismatchError
        raise RingMismatchError("Ext arguments over different rings")
    ring = M.ring
    res = resolution if resolution is not None and resolution.i_max >= i + 1 else \
        minimal_free_resolution(N, i + 1, limits)
    if res.rank(i) == 0 or M.rank == 0:
        return ExtModule(i, GradedModule(ring, []))
    tw_i = _hom_twists(res.twists[i], M)
    n_i = len(tw_i)
    if res.rank(i + 1):
        tw_next = _hom_twists(res.twists[i + 1], M)
        target = GradedModule(ring, tw_next, _hom_relations(res.rank(i + 1), M))
        phi = _hom_map(res.differential(i + 1), res.rank(i), M)
        K = kernel_of_map(phi, tw_i, target)
    else:
        one = ring.field.one
        zero = (0,) * ring.nvars
        K = [{(k, zero): one} for k in range(n_i)]
    image = _hom_relations(res.rank(i), M)
    if i >= 1 and res.rank(i - 1):
        image += [v for v in _hom_map(res.differential(i), res.rank(i - 1), M) if v]
    E = subquotient(ring, tw_i, K, image)
    return ExtModule(i, prune(E)[0])


def ext_modules(N, M, i_max, limits=None):
    res = minimal_free_resolution(N, i_max + 1, limits)
    return [ext_module(N, M, i, res, limits) for i in range(i_max + 1)]
