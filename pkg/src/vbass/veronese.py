"""The n-th Veronese functor: presentations of R^(n), M^(n) and p ∩ R^(n).

Presentations are computed with one auxiliary ring ``k[x, a]`` holding the
source variables (weight 1) followed by the new variables ``a1..am`` (weight
n), and an elimination order for the ``x`` block.  Everything is
homogeneous, so the degree-first elimination order is a true elimination
order degree by degree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import HypothesisError, PresentationUnavailableError, current_limits
from .exactalg import GradedRing, MonomialOrder, Poly, monomials_of_degree, wdeg
from .gmod import GradedModule, hilbert_window, prune, standard_terms
from .groebner import Engine, TermOrder, eliminate, groebner_basis, minimal_subset


@dataclass
class VeroneseRing:
    source: GradedRing
    n: int
    presentation: GradedRing
    lift_map: dict  # new variable name -> Poly in source

    @property
    def lifts(self):
        return [self.lift_map[v] for v in self.presentation.variables]

    def lift(self, f):
        """Image in the source ring of a polynomial over the presentation."""
        return f.substitute(self.lifts, self.source)

    def _aux(self):
        """``k[x, a]`` and embeddings of both variable sets into it."""
        S, P = self.source, self.presentation
        names = list(S.variables) + list(P.variables)
        if len(set(names)) != len(names):
            names = [f"x_{v}" for v in S.variables] + list(P.variables)
        T = GradedRing(names, list(S.weights) + list(P.weights), (), S.field)
        nx = S.nvars
        xmap = list(range(nx))
        amap = list(range(nx, nx + P.nvars))
        return T, xmap, amap

    def to_json(self):
        return {
            "n": self.n,
            "source": {"variables": list(self.source.variables),
                       "weights": list(self.source.weights),
                       "relations": [str(r) for r in self.source.relations]},
            "variables": list(self.presentation.variables),
            "weights": list(self.presentation.weights),
            "relations": [str(r) for r in self.presentation.relations],
            "liftMap": {v: str(self.lift_map[v]) for v in self.presentation.variables},
        }


@dataclass
class VeroneseModule:
    base: VeroneseRing
    value: GradedModule
    generator_lifts: list = field(default_factory=list)  # [(component, exponents)] in M

    def to_json(self):
        src = self.base.source
        lifts = []
        for c, m in self.generator_lifts:
            lifts.append({"component": c, "monomial": str(src.monomial(m))})
        out = self.value.to_json()
        out["generatorLifts"] = lifts
        return out


def check_coprime(R, n):
    bad = [w for w in R.weights if gcd(w, n) != 1]
    if bad:
        raise HypothesisError(
            f"generator degree(s) {sorted(set(bad))} not coprime to n={n}")


def veronese_ring(R, n, limits=None):
    if n < 1:
        raise ValueError("n must be positive")
    check_coprime(R, n)
    if n == 1:
        return VeroneseRing(R, 1, R, {v: R.gen(v) for v in R.variables})
    if not R.is_standard_graded:
        raise PresentationUnavailableError(
            "Veronese presentation requires a standard graded source ring")
    monos = monomials_of_degree(R.weights, n)  # lex-descending
    names = [f"a{i + 1}" for i in range(len(monos))]
    P0 = GradedRing(names, [n] * len(names), (), R.field)
    V0 = VeroneseRing(R, n, P0, {v: R.monomial(m) for v, m in zip(names, monos)})
    T, xmap, amap = V0._aux()
    gens = [T.gen(amap[i]) - lift.change_ring(T, xmap) for i, lift in enumerate(V0.lifts)]
    gens += [r.change_ring(T, xmap) for r in R.relations]
    kept = eliminate(gens, T, amap, limits)
    rels = [Poly(P0, {m[R.nvars:]: c for m, c in g.terms.items()}) for g in kept]
    rels = _minimal_ideal_gens(rels, P0)
    P = GradedRing(names, [n] * len(names), rels, R.field)
    return VeroneseRing(R, n, P, {v: V0.lift_map[v] for v in names})


def _minimal_ideal_gens(polys, ring):
    polys = sorted((p for p in polys if p), key=lambda p: p.homogeneous_degree)
    if not polys:
        return []
    vecs = [{(0, m): c for m, c in p.terms.items()} for p in polys]
    keep = minimal_subset(vecs, ring.ambient(), [0])
    return [polys[i] for i in keep]


def veronese_module(M, V, limits=None):
    """Presentation of ``M^(n)`` over ``V.presentation``."""
    R, n = V.source, V.n
    if M.ring != R:
        from .errors import RingMismatchError
        raise RingMismatchError("module is not over the Veronese source ring")
    if n == 1:
        zero = (0,) * R.nvars
        return VeroneseModule(V, M, [(c, zero) for c in range(M.rank)])
    if not R.is_standard_graded:
        raise PresentationUnavailableError(
            "Veronese module presentation requires a standard graded source ring")
    if M.rank == 0:
        return VeroneseModule(V, GradedModule(V.presentation, []), [])
    lo = -(-min(M.twists) // n) * n  # first multiple of n at or above the lowest twist
    hi = max(M.twists) + n - 1
    gens = []
    for d in range(lo, hi + 1, n):
        gens.extend(standard_terms(M, d))
    if not gens:
        return VeroneseModule(V, GradedModule(V.presentation, []), [])
    T, xmap, amap = V._aux()
    r, s = M.rank, len(gens)
    nx, na = R.nvars, V.presentation.nvars
    F = R.field
    one = F.one

    def emb_x(m):
        return tuple(m) + (0,) * na

    gen_deg = [wdeg(m, R.weights) + M.twists[c] for c, m in gens]
    twists = list(M.twists) + gen_deg
    order = TermOrder(MonomialOrder("elim", T.weights, nx), twists, head=r)
    eng = Engine(F, order, limits or current_limits())
    inputs = []
    for l, (c, m) in enumerate(gens):
        inputs.append({(c, emb_x(m)): one, (r + l, (0,) * (nx + na)): F.neg(one)})
    for col in M.cols:
        inputs.append({(c, emb_x(m)): a for (c, m), a in col.items()})
    subs = []
    for i, lift in enumerate(V.lifts):
        e = [0] * (nx + na)
        e[nx + i] = 1
        g = {tuple(e): one}
        for m, c in lift.terms.items():
            g[emb_x(m)] = F.neg(c)
        subs.append(g)
    subs += [{emb_x(m): c for m, c in rel.terms.items()} for rel in R.relations]
    for k in range(r + s):
        for g in subs:
            inputs.append({(k, m): c for m, c in g.items()})
    eng.run(inputs)
    cols = []
    for v in eng.reduced_basis():
        if all(c >= r and not any(m[:nx]) for (c, m) in v):
            cols.append({(c - r, m[nx:]): a for (c, m), a in v.items()})
    value = GradedModule(V.presentation, gen_deg, cols)
    pruned, alive = prune(value)
    return VeroneseModule(V, pruned, [gens[i] for i in alive])


def contract_prime(p, V, limits=None):
    """``p ∩ R^(n)`` as a PrimeSpec over ``V.presentation`` (certified)."""
    from .bass import PrimeSpec

    R = V.source
    if not p.is_homogeneous:
        raise HypothesisError("contract_prime needs a homogeneous prime")
    if V.n == 1:
        return PrimeSpec(V.presentation, [g.change_ring(V.presentation) for g in p.generators])
    T, xmap, amap = V._aux()
    gens = [T.gen(amap[i]) - lift.change_ring(T, xmap) for i, lift in enumerate(V.lifts)]
    gens += [g.change_ring(T, xmap) for g in p.generators]
    gens += [r.change_ring(T, xmap) for r in R.relations]
    kept = eliminate(gens, T, amap, limits)
    P = V.presentation
    nx = R.nvars
    out = [Poly(P, {m[nx:]: c for m, c in g.terms.items()}) for g in kept]
    out = _minimal_ideal_gens(out, P)
    # drop generators that already vanish in the presentation ring
    relgb = groebner_basis([], P)
    out = [g for g in out if not relgb.contains(g)]
    pgb = p.gb
    for g in out:
        if not pgb.contains(V.lift(g)):
            raise AssertionError(f"contraction certificate failed for {g}")
    return PrimeSpec(P, out)


def veronese_hilbert_check(M, V, window, summands=None):
    """Degreewise comparison of ``M^(n)`` with ``M`` over ``window = (lo, hi)``."""
    lo, hi = window
    n = V.n
    VM = veronese_module(M, V).value
    hv = hilbert_window(VM, lo, hi) if VM.rank else None
    hm = hilbert_window(M, lo, hi) if M.rank else None
    rows, mismatches = [], []
    for d in range(lo, hi + 1):
        src = hm[d] if hm else 0
        expect = src if d % n == 0 else 0
        got = hv[d] if hv else 0
        rows.append({"degree": d, "source": src, "veronese": got})
        if got != expect:
            mismatches.append({"degree": d, "expected": expect, "got": got})
    if summands is not None:
        parts = [veronese_module(S, V).value for S in summands]
        for d in range(lo, hi + 1):
            tot = sum(hilbert_window(Pm, d, d)[d] for Pm in parts if Pm.rank)
            got = hv[d] if hv else 0
            if tot != got:
                mismatches.append({"degree": d, "additivity": True, "expected": tot, "got": got})
    return {"pass": not mismatches, "n": n, "window": [lo, hi], "dims": rows,
            "mismatches": mismatches}
