"""Bass numbers at 𝔪 and at graded primes, 𝔭*, deg(t_𝔭) and the transfer checks.

* ``*μ(i, 𝔪, M) = dim_k Ext^i(k, M)`` with the degree refinement read off the
  graded Ext module.
* ``*μ(i, 𝔭, M) = rank_{R/𝔭} Ext^i(R/𝔭, M)`` (Prop 2.22), where the rank of
  ``coker A`` is ``#rows − rank A`` over ``Frac(R/𝔭)``.

The rank over the fraction field is computed by evaluation at random
rational points of V(𝔭) (agreement over several points is required) and,
for small matrices, by a deterministic fraction-free elimination over
``R/𝔭`` whose zero tests are Groebner normal forms.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

from .errors import NotPrimeError, RankCertificationError
from .exactalg import GradedRing, Poly, gcd_list, monomials_of_degree, nullspace, rank
from .gmod import (
    all_standard_terms,
    cyclic_module,
    matlis_dual_finite_length,
    residue_field,
)
from .groebner import groebner_basis, independent_sets, krull_dim
from .resolve import betti_table, ext_module, minimal_free_resolution

RANK_TRIALS = 3
DETERMINISTIC_MAX = 6
UNDETERMINED = "none ≤ iMax"


class PrimeSpec:
    """A (user-asserted) prime ideal of a graded ring."""

    def __init__(self, ring, generators, flags=()):
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            elif not isinstance(g, Poly):
                g = ring.const(g)
            if g:
                gens.append(g)
        self.generators = gens
        self.is_homogeneous = all(g.is_homogeneous() for g in gens)
        self.flags = list(flags)
        self.deg_t = None
        self.star = None

    @cached_property
    def gb(self):
        """Groebner basis of ``p + J`` in the ambient polynomial ring."""
        amb = self.ring.ambient()
        gens = [g.change_ring(amb) for g in self.generators]
        gens += [r.change_ring(amb) for r in self.ring.relations]
        return groebner_basis(gens, amb)

    def contains(self, f):
        return self.gb.contains(f.change_ring(self.gb.ambient))

    def is_irrelevant(self):
        return all(self.contains(x) for x in self.ring.gens())

    def to_json(self):
        out = {"generators": [str(g) for g in self.generators],
               "homogeneous": self.is_homogeneous}
        if self.flags:
            out["flags"] = list(self.flags)
        return out

    def __repr__(self):
        return f"PrimeSpec({', '.join(str(g) for g in self.generators) or '0'})"


@dataclass
class BassTable:
    prime: PrimeSpec
    i_max: int
    entries: dict
    refined: dict = None
    flags: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    def as_list(self):
        return [self.entries.get(i, 0) for i in range(self.i_max + 1)]

    def to_json(self):
        out = {
            "prime": self.prime.to_json(),
            "iMax": self.i_max,
            "entries": {str(i): self.entries.get(i, 0) for i in range(self.i_max + 1)},
        }
        if self.refined is not None:
            out["refined"] = {f"{i}:{z}": c for (i, z), c in sorted(self.refined.items())}
        out["flags"] = list(self.flags)
        return out

    def to_csv(self):
        zs = sorted({z for (_, z) in (self.refined or {})})
        lines = ["i,total" + "".join(f",z:{z}" for z in zs)]
        for i in range(self.i_max + 1):
            row = [str(i), str(self.entries.get(i, 0))]
            row += [str(self.refined.get((i, z), 0)) for z in zs]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# at the irrelevant ideal


def bass_at_irrelevant(M, i_max, limits=None):
    ring = M.ring
    res = minimal_free_resolution(residue_field(ring), i_max + 1, limits)
    entries, refined = {}, {}
    w = ring.weights
    for i in range(i_max + 1):
        E = ext_module(residue_field(ring), M, i, res, limits).value
        counts = Counter()
        if E.rank:
            for c, m in all_standard_terms(E):
                counts[sum(a * b for a, b in zip(m, w)) + E.twists[c]] += 1
        entries[i] = sum(counts.values())
        for z, v in counts.items():
            refined[(i, z)] = v
    irrelevant = PrimeSpec(ring, ring.gens())
    return BassTable(irrelevant, i_max, entries, refined)


def torsion_indicator(M, i_max):
    """χ_𝔪(M) = min{i : μ(i, 𝔪, M) ≠ 0}, or the bounded-undetermined marker."""
    table = bass_at_irrelevant(M, i_max)
    for i in range(i_max + 1):
        if table.entries[i]:
            return i
    return UNDETERMINED


def verify_duality(M, i_max):
    """Theorem 4.6: β(i, M, −z) = *μ refined (i, z) of M^∨ at 𝔪, for i ≤ i_max."""
    betti = betti_table(M, i_max)
    dual = matlis_dual_finite_length(M)
    bass = bass_at_irrelevant(dual, i_max)
    left = {(i, -a): v for (i, a), v in betti.entries.items() if v}
    right = {k: v for k, v in bass.refined.items() if v}
    mismatches = [
        {"i": i, "z": z, "betti": left.get((i, z), 0), "bass": right.get((i, z), 0)}
        for (i, z) in sorted(set(left) | set(right))
        if left.get((i, z), 0) != right.get((i, z), 0)
    ]
    return {"pass": not mismatches, "iMax": i_max,
            "betti": betti.to_json(), "bassOfDual": bass.to_json(),
            "mismatches": mismatches}


# --------------------------------------------------------------------------
# rank over Frac(R/p)


def _matrix_entries(E):
    """Presentation matrix of ``E`` as rows of term dicts in the ambient ring."""
    rows = [[{} for _ in E.cols] for _ in E.twists]
    for j, v in enumerate(E.cols):
        for (c, m), a in v.items():
            rows[c][j][m] = a
    return rows


def _random_point(p, rng, attempts=20):
    """A rational point of V(p + J), generic along an independent set."""
    gb = p.gb
    amb = gb.ambient
    F = amb.field
    sets = independent_sets(gb)
    if not sets:
        raise RankCertificationError("prime is the unit ideal")
    U = sets[0]
    rest = [i for i in range(amb.nvars) if i not in U]
    if not rest:
        return [F(rng.randint(1, 10 ** 6)) for _ in range(amb.nvars)]
    sub = GradedRing([amb.variables[i] for i in rest],
                     [amb.weights[i] for i in rest], (), F)
    for _ in range(attempts):
        vals = {i: F(rng.randint(1, 10 ** 6)) for i in U}
        images = []
        for i in range(amb.nvars):
            images.append(sub.const(vals[i]) if i in vals else sub.gen(rest.index(i)))
        fib = groebner_basis([g.substitute(images, sub) for g in gb.generators], sub)
        sol = _linear_point(fib, sub)
        if sol is not None:
            point = [None] * amb.nvars
            for i, v in vals.items():
                point[i] = v
            for k, i in enumerate(rest):
                point[i] = sol[k]
            return point
    raise RankCertificationError("no rational point found on the prime's fiber")


def _linear_point(gb, ring):
    """The unique point of a zero-dimensional reduced GB {x_i − c_i}, else None."""
    F = ring.field
    sol = [None] * ring.nvars
    for g in gb.generators:
        lead, lc = g.lead_term()
        if sum(lead) != 1 or len(g.terms) > 2:
            return None
        i = lead.index(1)
        const = g.terms.get((0,) * ring.nvars, F.zero)
        if len(g.terms) == 2 and not const:
            return None
        sol[i] = F.neg(F.div(const, lc))
    return sol if all(s is not None for s in sol) else None


def rank_randomized(rows, p, rng, trials=RANK_TRIALS):
    """Rank over Frac(R/p) by evaluation at ``trials`` random points of V(p)."""
    if not rows or not rows[0]:
        return 0
    amb = p.gb.ambient
    F = amb.field
    ranks = []
    for _ in range(trials):
        pt = _random_point(p, rng)
        num = [[Poly(amb, e).evaluate(pt) for e in row] for row in rows]
        ranks.append(rank(num, F))
    if len(set(ranks)) != 1:
        raise RankCertificationError(f"random evaluations disagree: {ranks}")
    return ranks[0]


def rank_deterministic(rows, p):
    """Fraction-free elimination over the domain R/p; zero tests by normal form."""
    gb = p.gb
    amb = gb.ambient
    mat = [[gb.normal_form(Poly(amb, e)) for e in row] for row in rows]
    ncols = len(mat[0]) if mat else 0
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pr = mat[r]
        for i in range(r + 1, len(mat)):
            a = mat[i][col]
            if a:
                mat[i] = [gb.normal_form(pr[col] * mat[i][j] - a * pr[j]) for j in range(ncols)]
        r += 1
    return r


# --------------------------------------------------------------------------
# at graded primes


def primality_sanity_check(p, rng, trials=20, degree=2):
    """Randomized necessary condition for primality (strict mode only)."""
    amb = p.gb.ambient
    if p.gb.is_unit_ideal():
        raise NotPrimeError("ideal is the unit ideal")
    F = amb.field

    def random_element():
        terms = {}
        for d in range(1, degree + 1):
            for m in monomials_of_degree(amb.weights, d):
                terms[m] = F(rng.randint(-5, 5))
        return p.gb.normal_form(Poly(amb, terms))

    for _ in range(trials):
        f, g = random_element(), random_element()
        if f and g and p.gb.contains(f * g):
            raise NotPrimeError(f"({f})*({g}) lies in the ideal but neither factor does")
    return True


def bass_at_graded_prime(M, p, i_max, seed=0, method="randomized", strict=False,
                         limits=None):
    """``*μ(i, p, M)`` for i ≤ i_max.  ``method``: randomized, deterministic or both."""
    ring = M.ring
    if p.ring != ring:
        from .errors import RingMismatchError
        raise RingMismatchError("prime and module over different rings")
    if not p.is_homogeneous:
        raise ValueError("bass_at_graded_prime needs a homogeneous prime; use translate_bass")
    rng = random.Random(seed)
    if strict:
        primality_sanity_check(p, rng)
    N = cyclic_module(ring, p.generators)
    res = minimal_free_resolution(N, i_max + 1, limits)
    entries, diagnostics, flags = {}, [], []
    for i in range(i_max + 1):
        E = ext_module(N, M, i, res, limits).value
        rows = _matrix_entries(E)
        diag = {"i": i, "generators": E.rank, "relations": len(E.cols)}
        small = min(E.rank, len(E.cols)) <= DETERMINISTIC_MAX
        fallback = False
        if method in ("randomized", "both"):
            try:
                diag["randomized"] = rank_randomized(rows, p, rng)
            except RankCertificationError:
                if not small:
                    raise
                flags.append(f"randomized-rank-uncertified:{i}")
                fallback = True
        if method in ("deterministic", "both") or fallback:
            diag["deterministic"] = rank_deterministic(rows, p)
        ranks = {diag[k] for k in ("randomized", "deterministic") if k in diag}
        if len(ranks) > 1:
            raise RankCertificationError(f"rank methods disagree at i={i}: {diag}")
        r = ranks.pop() if ranks else 0
        entries[i] = E.rank - r
        diagnostics.append(diag)
    return BassTable(p, i_max, entries, None, flags, diagnostics)


# --------------------------------------------------------------------------
# deg(t_p), shifts, p*


def unit_degree(p, ring=None):
    """gcd of the weights of the generators outside p; 0 marks the field case p = 𝔪."""
    ring = ring or p.ring
    outside = [w for x, w in zip(ring.gens(), ring.weights) if not p.contains(x)]
    return gcd_list(outside) if outside else 0


def shifts_isomorphic(p, n, k, ring=None):
    """*E(R/p)(−n) ≅ *E(R/p)(−k) iff deg(t_p) divides k − n."""
    d = unit_degree(p, ring)
    if d == 0:
        return n == k
    return (k - n) % d == 0


def star_ideal(p, ring=None, degree_bound=6, n_stab=3):
    """Truncated 𝔭* with certificates; flags ``truncated`` / ``unstabilized``."""
    ring = ring or p.ring
    if p.is_homogeneous:
        star = PrimeSpec(ring, p.generators, ["exact"])
        p.star = star
        return star
    gb = p.gb
    amb = gb.ambient
    F = amb.field
    found = []
    cur = groebner_basis([r.change_ring(amb) for r in ring.relations], amb)
    quiet = 0
    for d in range(degree_bound + 1):
        monos = monomials_of_degree(amb.weights, d)
        images = [gb.normal_form(amb.monomial(m)) for m in monos]
        support = sorted({t for f in images for t in f.terms})
        cols = {t: k for k, t in enumerate(support)}
        mat = [[F.zero] * len(monos) for _ in support]
        for j, f in enumerate(images):
            for t, c in f.terms.items():
                mat[cols[t]][j] = c
        kernel = nullspace(mat, F, len(monos)) if support else \
            [[F.one if k == j else F.zero for k in range(len(monos))] for j in range(len(monos))]
        new = []
        for v in kernel:
            f = Poly(amb, {m: c for m, c in zip(monos, v) if c})
            if f and not cur.contains(f):
                new.append(f)
        if new:
            found.extend(new)
            cur = groebner_basis(found + [r.change_ring(amb) for r in ring.relations], amb)
            quiet = 0
        else:
            quiet += 1
    stabilized = quiet >= n_stab
    dims_ok = krull_dim(cur) == krull_dim(gb) + 1
    gens = [g.change_ring(ring) for g in cur.generators]
    gens = [g for g in gens if not any(g == r for r in ring.relations)]
    flags = ["truncated"]
    if not (stabilized and dims_ok):
        flags.append("unstabilized")
    star = PrimeSpec(ring, gens, flags)
    p.star = star
    return star


def translate_bass(bass_graded, p_nonhomog):
    """Prop 2.23: μ(0, p, M) = 0 and μ(i, p, M) = *μ(i−1, p*, M) for i > 0."""
    i_max = bass_graded.i_max + 1
    entries = {0: 0}
    for i in range(1, i_max + 1):
        entries[i] = bass_graded.entries.get(i - 1, 0)
    flags = list(bass_graded.flags) + [f for f in bass_graded.prime.flags if f != "exact"]
    return BassTable(p_nonhomog, i_max, entries, None, flags)


# --------------------------------------------------------------------------
# Theorem 5.3


def verify_bass_transfer(M, n, p, i_max, seed=0, method="both", limits=None):
    from .veronese import contract_prime, veronese_module, veronese_ring

    V = veronese_ring(M.ring, n, limits)
    left = bass_at_graded_prime(M, p, i_max, seed, method, limits=limits)
    VM = veronese_module(M, V, limits).value
    q = contract_prime(p, V, limits)
    right = bass_at_graded_prime(VM, q, i_max, seed, method, limits=limits)
    mismatch = None
    for i in range(i_max + 1):
        if left.entries[i] != right.entries[i]:
            mismatch = {"i": i, "left": left.entries[i], "right": right.entries[i]}
            break
    return {
        "pass": mismatch is None,
        "n": n,
        "prime": p.to_json(),
        "contracted": q.to_json(),
        "left": left.to_json(),
        "right": right.to_json(),
        "rankChecks": {"left": left.diagnostics, "right": right.diagnostics},
        "firstMismatch": mismatch,
    }
