"""Degreewise Čech local cohomology of affine semigroup rings at monomial ideals.

For a monomial ideal generated by ``g_1..g_r`` the Čech complex is
multigraded, and in multidegree ``a`` its term at a subset σ is ``k`` when
``a`` lies in the localization ``S_σ`` (``a + t·Σ_{g∈σ} g ∈ S`` for some
``t ≥ 0``) and 0 otherwise.  The differentials are the simplicial signs, so
every piece is a finite complex of 0/1-dimensional spaces.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .errors import ResourceLimitError, current_limits
from .exactalg import QQ, monomials_of_degree, rank, wdeg


@dataclass(frozen=True)
class SemigroupRing:
    """``ℕ^e`` (n = 1) or its degree-``≡ 0 mod n`` subsemigroup."""

    e: int
    weights: tuple = None
    n: int = 1

    def __post_init__(self):
        if self.weights is None:
            object.__setattr__(self, "weights", (1,) * self.e)
        if len(self.weights) != self.e:
            raise ValueError("one weight per coordinate required")

    def degree(self, a):
        return wdeg(a, self.weights)

    def contains(self, a):
        return all(x >= 0 for x in a) and self.degree(a) % self.n == 0

    def in_localization(self, a, direction, t_max):
        """Is ``a + t·direction ∈ S`` for some ``0 ≤ t ≤ t_max``?"""
        for t in range(t_max + 1):
            if self.contains(tuple(x + t * d for x, d in zip(a, direction))):
                return True
        return False

    def to_json(self):
        return {"e": self.e, "weights": list(self.weights), "n": self.n}


@dataclass
class CechWindow:
    gens: list
    i: int
    box: int
    total_window: tuple
    semigroup: SemigroupRing
    dims: dict = field(default_factory=dict)
    coarse: dict = field(default_factory=dict)
    boundary_flag: bool = False
    euler_ok: bool = True

    def to_json(self):
        return {
            "semigroup": self.semigroup.to_json(),
            "gens": [list(g) for g in self.gens],
            "i": self.i,
            "box": self.box,
            "totalWindow": list(self.total_window) if self.total_window else None,
            "dims": {",".join(map(str, a)): v for a, v in sorted(self.dims.items()) if v},
            "coarse": {str(d): v for d, v in sorted(self.coarse.items())},
            "boundaryFlag": self.boundary_flag,
            "exact": not self.boundary_flag,
        }


def _complex_at(S, gens, a, t_max):
    """Terms (per cohomological degree) and differential ranks at multidegree a."""
    r = len(gens)
    on = {}
    for size in range(r + 1):
        on[size] = []
        for sigma in itertools.combinations(range(r), size):
            direction = [sum(gens[j][c] for j in sigma) for c in range(S.e)]
            if S.in_localization(a, direction, t_max):
                on[size].append(sigma)
    ranks = {}
    for size in range(r):
        src, tgt = on[size], on[size + 1]
        if not src or not tgt:
            ranks[size] = 0
            continue
        idx = {tau: k for k, tau in enumerate(tgt)}
        rows = []
        for sigma in src:
            row = [0] * len(tgt)
            for j in range(r):
                if j in sigma:
                    continue
                tau = tuple(sorted(sigma + (j,)))
                if tau in idx:
                    row[idx[tau]] = (-1) ** tau.index(j)
            rows.append(row)
        ranks[size] = rank(rows, QQ)
    return {s: len(v) for s, v in on.items()}, ranks


def cohomology_at(S, gens, a, t_max):
    """All ``dim H^i`` at multidegree ``a``, plus the Euler-characteristic audit."""
    terms, ranks = _complex_at(S, gens, a, t_max)
    r = len(gens)
    h = {i: terms[i] - ranks.get(i, 0) - ranks.get(i - 1, 0) for i in range(r + 1)}
    euler_ok = sum((-1) ** i * h[i] for i in h) == sum((-1) ** i * terms[i] for i in terms)
    return h, euler_ok


def cech_window(S, gens, i, box, total_window=None, limits=None):
    limits = limits or current_limits()
    gens = [tuple(int(x) for x in g) for g in gens]
    if not gens:
        raise ValueError("at least one generator required")
    if any(len(g) != S.e for g in gens):
        raise ValueError("generator length does not match the semigroup rank")
    if any(not any(g) for g in gens):
        raise ValueError("generators must be nonconstant monomials")
    if box < 0:
        raise ValueError("box must be nonnegative")
    points = (2 * box + 1) ** S.e
    if points > limits.max_terms:
        raise ResourceLimitError("cech_box", points, limits.max_terms)
    t_max = S.e * box * max(S.weights) + S.n
    win = CechWindow(gens, i, box, tuple(total_window) if total_window else None, S)
    coarse = Counter()
    for a in itertools.product(range(-box, box + 1), repeat=S.e):
        d = S.degree(a)
        if total_window and not total_window[0] <= d <= total_window[1]:
            continue
        h, ok = cohomology_at(S, gens, a, t_max)
        win.euler_ok &= ok
        v = h.get(i, 0)
        if v:
            win.dims[a] = v
            coarse[d] += v
            if any(abs(x) == box for x in a):
                win.boundary_flag = True
    lo, hi = total_window if total_window else (-box * sum(S.weights), box * sum(S.weights))
    win.coarse = {d: coarse.get(d, 0) for d in range(lo, hi + 1)}
    return win


def contract_monomial_ideal(gens, n, weights=None):
    """Radical-sufficient generators of ``I ∩ R^(n)``: ``u·m`` with deg u ≡ −deg m (mod n) minimal."""
    out = []
    for m in gens:
        m = tuple(m)
        w = tuple(weights) if weights else (1,) * len(m)
        d = wdeg(m, w)
        r = (-d) % n
        while True:
            comps = monomials_of_degree(w, r)
            if comps:
                break
            r += n
        for u in comps:
            v = tuple(x + y for x, y in zip(u, m))
            if v not in out:
                out.append(v)
    return sorted(out, reverse=True)


def verify_veronese_localcoh(gens, n, i, box, total_window=None, weights=None, limits=None):
    """Prop 6.2: coarse dims of H^i_I(R) in degrees n·ℤ equal those of H^i_{I∩R^(n)}(R^(n))."""
    gens = [tuple(g) for g in gens]
    e = len(gens[0])
    w = tuple(weights) if weights else (1,) * e
    left = cech_window(SemigroupRing(e, w, 1), gens, i, box, total_window, limits)
    contracted = contract_monomial_ideal(gens, n, w)
    right = cech_window(SemigroupRing(e, w, n), contracted, i, box, total_window, limits)
    mismatches = []
    compared = {}
    for d in sorted(left.coarse):
        if d % n:
            continue
        lv, rv = left.coarse.get(d, 0), right.coarse.get(d, 0)
        compared[d] = [lv, rv]
        if lv != rv:
            mismatches.append({"degree": d, "R": lv, "Rn": rv})
    return {
        "pass": not mismatches,
        "n": n,
        "i": i,
        "box": box,
        "contractedGens": [list(g) for g in contracted],
        "coarse": {str(d): v for d, v in compared.items()},
        "boundaryFlags": {"R": left.boundary_flag, "Rn": right.boundary_flag},
        "mismatches": mismatches,
    }
