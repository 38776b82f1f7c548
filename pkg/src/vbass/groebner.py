"""Groebner bases for ideals and submodules of free modules over ``k[x]/J``.

Everything runs on sparse vectors ``{(component, exponents): coeff}``; an
ideal is the one-component case.  Computations over a quotient ring append
``J``'s Groebner basis times each basis vector, flagged as relation elements
(pairs between two relation elements are never formed).

The engine uses the normal selection strategy (smallest lcm degree first) and
the Gebauer-Moeller pair update.  The product criterion is only applied to
ideals without representation tracking: for vectors, and for Schreyer-style
syzygy extraction, the coprime pairs still carry information.

Three consumers share the engine:

* plain bases (:func:`module_gb`, :func:`groebner_basis`);
* syzygies -- tails record each element in terms of the inputs, and every
  S-pair that reduces to zero contributes its tail (Schreyer);
* minimal generators -- inputs are fed in degree order after all pairs of
  smaller or equal degree, so an input survives reduction iff it is not in
  the span of what came before (homogeneous inputs only).
"""
from __future__ import annotations

import heapq
import itertools
from collections import defaultdict

from .errors import ResourceLimitError, current_limits
from .exactalg import (
    MonomialOrder,
    Poly,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    wdeg,
)


class TermOrder:
    """Order on module terms ``(component, exponents)``.

    Graded monomial orders compare the twisted degree first, then the
    monomial, then the component (lower index wins).  With ``head=h``
    components ``< h`` dominate all others (position-over-term split).
    """

    def __init__(self, mono, twists=(), head=None):
        self.mono = mono
        self.weights = mono.weights
        self.twists = tuple(twists)
        self.head = head
        self._cache = {}

    def twist(self, c):
        return self.twists[c] if c < len(self.twists) else 0

    def degree(self, term):
        c, m = term
        return wdeg(m, self.weights) + self.twist(c)

    def key(self, term):
        k = self._cache.get(term)
        if k is None:
            c, m = term
            mk = self.mono.key(m)
            if self.mono.graded:
                k = (wdeg(m, self.weights) + self.twist(c), mk, -c)
            else:
                k = (mk, -c)
            if self.head is not None:
                k = (c < self.head,) + k
            self._cache[term] = k
        return k


class _Elt:
    __slots__ = ("vec", "lead", "deg", "tail", "is_rel")

    def __init__(self, vec, lead, deg, tail, is_rel):
        self.vec = vec
        self.lead = lead
        self.deg = deg
        self.tail = tail
        self.is_rel = is_rel


def _axpy(target, c, src, u, p):
    """target -= c * u * src  (u a monomial shift; in place)."""
    for (sc, sm), sv in src.items():
        t = (sc, tuple(a + b for a, b in zip(sm, u)))
        if p:
            nv = (target.get(t, 0) - c * sv) % p
        else:
            nv = target.get(t, 0) - c * sv
        if nv:
            target[t] = nv
        else:
            target.pop(t, None)


def _scale(vec, c, p):
    if p:
        return {t: (v * c) % p for t, v in vec.items()}
    return {t: v * c for t, v in vec.items()}


class Engine:
    """Buchberger engine with optional representation tracking."""

    def __init__(self, field, order, limits=None, track=False, ideal_mode=False):
        self.field = field
        self.p = field.p
        self.order = order
        self.limits = limits or current_limits()
        self.track = track
        self.ideal_mode = ideal_mode and not track
        self.elts = []
        self.by_comp = defaultdict(list)
        self.pairs = {}
        self.heap = []
        self._pid = itertools.count()
        self.syzygies = []

    # -- basic steps
    def lead(self, vec):
        return max(vec, key=self.order.key)

    def find_reducer(self, term):
        c, m = term
        for idx in self.by_comp.get(c, ()):
            if mono_divides(self.elts[idx].lead[1], m):
                return idx
        return None

    def reduce(self, vec, tail=None, full=False):
        """Reduce ``vec`` (copied); returns (vec, tail)."""
        vec = dict(vec)
        tail = dict(tail) if tail is not None else None
        p = self.p
        key = self.order.key
        maxterms = self.limits.max_terms
        done = {}
        while vec:
            if len(vec) > maxterms:
                raise ResourceLimitError("max_terms", len(vec), maxterms)
            t = max(vec, key=key)
            r = self.find_reducer(t)
            if r is None:
                if not full:
                    break
                done[t] = vec.pop(t)
                continue
            c = vec[t]
            g = self.elts[r]
            u = mono_div(t[1], g.lead[1])
            _axpy(vec, c, g.vec, u, p)
            if tail is not None and g.tail:
                _axpy(tail, c, g.tail, u, p)
        if full:
            done.update(vec)
            vec = done
        return vec, tail

    def _monic(self, vec, tail):
        t = self.lead(vec)
        c = vec[t]
        if c == 1:
            return vec, tail, t
        inv = self.field.inv(c)
        vec = _scale(vec, inv, self.p)
        if tail is not None:
            tail = _scale(tail, inv, self.p)
        return vec, tail, t

    def add(self, vec, tail=None, is_rel=False):
        vec, tail, t = self._monic(vec, tail)
        if len(self.elts) >= self.limits.max_polys:
            raise ResourceLimitError("max_polys", len(self.elts) + 1, self.limits.max_polys)
        e = _Elt(vec, t, self.order.degree(t), tail if tail else None, is_rel)
        self.elts.append(e)
        h = len(self.elts) - 1
        self._update(h)
        self.by_comp[t[0]].append(h)
        return h

    def _coprime(self, a, b):
        return all(x == 0 or y == 0 for x, y in zip(a, b))

    def _update(self, h):
        eh = self.elts[h]
        ch, mh = eh.lead
        cands = []
        for i in self.by_comp.get(ch, ()):
            ei = self.elts[i]
            if ei.is_rel and eh.is_rel:
                continue
            cands.append((i, mono_lcm(ei.lead[1], mh)))
        ideal = self.ideal_mode
        kept = []
        for k, (i, l) in enumerate(cands):
            if ideal and self._coprime(self.elts[i].lead[1], mh):
                kept.append((i, l, True))
                continue
            if any(mono_divides(l2, l) for _, l2 in cands[k + 1:]):
                continue
            if any(mono_divides(l2, l) for _, l2, _ in kept):
                continue
            kept.append((i, l, False))
        # B-criterion on existing pairs
        for pid, (i, j, (c, l)) in list(self.pairs.items()):
            if c != ch or not mono_divides(mh, l):
                continue
            if mono_lcm(self.elts[i].lead[1], mh) != l and mono_lcm(self.elts[j].lead[1], mh) != l:
                del self.pairs[pid]
        maxdeg = self.limits.max_degree
        for i, l, coprime in kept:
            if coprime:
                continue
            term = (ch, l)
            d = self.order.degree(term)
            if d > maxdeg:
                raise ResourceLimitError("max_degree", d, maxdeg)
            pid = next(self._pid)
            self.pairs[pid] = (i, h, term)
            heapq.heappush(self.heap, (d, self.order.key(term), pid))

    def _next_pair_degree(self):
        while self.heap and self.heap[0][2] not in self.pairs:
            heapq.heappop(self.heap)
        return self.heap[0][0] if self.heap else None

    def _spoly(self, i, j, term):
        p = self.p
        a, b = self.elts[i], self.elts[j]
        ua = mono_div(term[1], a.lead[1])
        ub = mono_div(term[1], b.lead[1])
        vec = {}
        _axpy(vec, -1 % p if p else -1, a.vec, ua, p)
        _axpy(vec, 1, b.vec, ub, p)
        tail = None
        if self.track:
            tail = {}
            if a.tail:
                _axpy(tail, -1 % p if p else -1, a.tail, ua, p)
            if b.tail:
                _axpy(tail, 1, b.tail, ub, p)
        return vec, tail

    def process_pair(self):
        _, _, pid = heapq.heappop(self.heap)
        i, j, term = self.pairs.pop(pid)
        vec, tail = self._spoly(i, j, term)
        vec, tail = self.reduce(vec, tail)
        if vec:
            self.add(vec, tail)
        elif tail:
            self.syzygies.append(tail)

    def run(self, inputs, tails=None):
        """Feed ``inputs`` in degree order, interleaved with pair processing.

        Returns a list of booleans: whether each input survived reduction
        (for homogeneous inputs this marks a minimal generating subset).
        """
        order = self.order
        degs = []
        for v in inputs:
            degs.append(min(order.degree(t) for t in v) if v else None)
        seq = sorted((i for i in range(len(inputs)) if inputs[i]), key=lambda i: (degs[i], i))
        kept = [False] * len(inputs)
        ptr = 0
        while True:
            dp = self._next_pair_degree()
            if ptr < len(seq):
                i = seq[ptr]
                if dp is not None and dp <= degs[i]:
                    self.process_pair()
                    continue
                ptr += 1
                tail = tails[i] if tails is not None else None
                vec, tail = self.reduce(inputs[i], tail)
                if vec:
                    self.add(vec, tail)
                    kept[i] = True
                elif tail:
                    self.syzygies.append(tail)
            elif dp is not None:
                self.process_pair()
            else:
                break
        return kept

    # -- results
    def minimal_indices(self):
        out = []
        for i, e in enumerate(self.elts):
            c, m = e.lead
            redundant = False
            for j in self.by_comp[c]:
                if j == i:
                    continue
                mj = self.elts[j].lead[1]
                if mono_divides(mj, m) and (mj != m or j < i):
                    redundant = True
                    break
            if not redundant:
                out.append(i)
        return out

    def reduced_basis(self):
        """Reduced basis as a list of monic vectors sorted by lead term."""
        keep = self.minimal_indices()
        sub = Engine(self.field, self.order, self.limits)
        for i in keep:
            e = self.elts[i]
            sub.elts.append(e)
            sub.by_comp[e.lead[0]].append(len(sub.elts) - 1)
        out = []
        for k, i in enumerate(keep):
            e = self.elts[i]
            lead_c = e.vec[e.lead]
            rest = {t: v for t, v in e.vec.items() if t != e.lead}
            # reduce the tail part against all other basis elements
            saved = sub.by_comp[e.lead[0]]
            sub.by_comp[e.lead[0]] = [j for j in saved if j != k]
            red, _ = sub.reduce(rest, full=True)
            sub.by_comp[e.lead[0]] = saved
            red[e.lead] = lead_c
            out.append(red)
        out.sort(key=lambda v: self.order.key(self.lead(v)), reverse=True)
        return out


# --------------------------------------------------------------------------
# helpers shared by the public API


def relation_vecs(ring, comps):
    gb = ring.relation_gb()
    return [{(k, m): c for m, c in g.items()} for k in comps for g in gb]


def poly_vec(poly, comp=0):
    return {(comp, m): c for m, c in poly.terms.items()}


def vec_degree(vec, order):
    t = next(iter(vec))
    return order.degree(t)


def make_engine(ring, mono=None, twists=(), head=None, track=False, limits=None,
                ideal_mode=False, with_relations=True, ncomps=None, rel_comps=None):
    """Engine over ``ring`` with its defining relations appended per component."""
    mono = mono or ring.order
    eng = Engine(ring.field, TermOrder(mono, twists, head), limits, track=track,
                 ideal_mode=ideal_mode)
    if with_relations and ring.relations:
        comps = rel_comps if rel_comps is not None else range(ncomps if ncomps else max(len(twists), 1))
        for v in relation_vecs(ring, comps):
            eng.add(v, None, is_rel=True)
    return eng


def ideal_gb_dicts(term_dicts, ring):
    """Reduced GB (term dicts) of the ideal generated in the *ambient* ring."""
    eng = Engine(ring.field, TermOrder(ring.order), ideal_mode=True)
    eng.run([{(0, m): c for m, c in t.items() if c} for t in term_dicts])
    return [{m: c for (_, m), c in v.items()} for v in eng.reduced_basis()]


# --------------------------------------------------------------------------
# ideals


class GroebnerBasis:
    """Reduced Groebner basis of ``(gens) + J`` in a graded ring."""

    def __init__(self, generators, order, ambient, is_reduced=True):
        self.generators = list(generators)
        self.order = order
        self.ambient = ambient
        self.is_reduced = is_reduced
        self._engine = None

    def _eng(self):
        if self._engine is None:
            eng = Engine(self.ambient.field, TermOrder(self.order))
            for g in self.generators:
                v = poly_vec(g)
                lead = max(v, key=eng.order.key)
                eng.elts.append(_Elt(v, lead, 0, None, False))
                eng.by_comp[0].append(len(eng.elts) - 1)
            self._engine = eng
        return self._engine

    def leads(self):
        return [g.lead_term(self.order)[0] for g in self.generators]

    def normal_form(self, f):
        if f.ring != self.ambient:
            from .errors import RingMismatchError
            raise RingMismatchError(f"{f.ring!r} vs {self.ambient!r}")
        vec, _ = self._eng().reduce(poly_vec(f), full=True)
        return Poly(self.ambient, {m: c for (_, m), c in vec.items()})

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def is_unit_ideal(self):
        return any(not any(m) for m in self.leads())

    def check_buchberger(self):
        """All S-polynomials reduce to zero (the Buchberger criterion)."""
        gens = self.generators
        for a, b in itertools.combinations(gens, 2):
            ma, ca = a.lead_term(self.order)
            mb, cb = b.lead_term(self.order)
            l = mono_lcm(ma, mb)
            F = self.ambient.field
            s = (a * self.ambient.monomial(mono_div(l, ma), F.inv(ca))
                 - b * self.ambient.monomial(mono_div(l, mb), F.inv(cb)))
            if not self.normal_form(s).is_zero():
                return False
        return True

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return f"GroebnerBasis([{', '.join(str(g) for g in self.generators)}])"


def groebner_basis(gens, ring, order=None, limits=None):
    """Reduced GB of ``(gens) + J``; returned polynomials live in ``ring``."""
    mono = _as_order(order, ring)
    eng = Engine(ring.field, TermOrder(mono), limits, ideal_mode=True)
    inputs = [poly_vec(g) for g in gens if not g.is_zero()]
    inputs += [{(0, m): c for m, c in r.terms.items()} for r in ring.relations]
    eng.run(inputs)
    out = [Poly(ring, {m: c for (_, m), c in v.items()}) for v in eng.reduced_basis()]
    return GroebnerBasis(out, mono, ring)


def _as_order(order, ring):
    if order is None:
        return ring.order
    if isinstance(order, MonomialOrder):
        return order
    if isinstance(order, tuple):
        kind, block = order
        return MonomialOrder(kind, ring.weights, block)
    return MonomialOrder(order, ring.weights)


def normal_form(f, gb):
    return gb.normal_form(f)


def eliminate(gens, ring, keep_vars, limits=None):
    """Generators of ``((gens) + J) ∩ k[keep_vars]`` (as Polys of ``ring``)."""
    keep = [ring.var_index(v) if isinstance(v, str) else v for v in keep_vars]
    elim = [i for i in range(ring.nvars) if i not in keep]
    perm = elim + keep
    # reorder variables so eliminated ones come first, use a block order
    from .exactalg import GradedRing
    tmp = GradedRing([ring.variables[i] for i in perm], [ring.weights[i] for i in perm],
                     (), ring.field)
    inv = {old: new for new, old in enumerate(perm)}
    moved = [g.change_ring(tmp, [inv[i] for i in range(ring.nvars)])
             for g in list(gens) + list(ring.relations)]
    gb = groebner_basis(moved, tmp, MonomialOrder("elim", tmp.weights, len(elim)), limits)
    out = []
    back = [perm[i] for i in range(ring.nvars)]
    nel = len(elim)
    for g in gb.generators:
        if all(not any(m[:nel]) for m in g.terms):
            out.append(g.change_ring(ring, back))
    return out


def krull_dim(gb):
    """Krull dimension of ambient / ideal from the leading monomials."""
    ring = gb.ambient
    leads = gb.leads()
    if any(not any(m) for m in leads):
        return -1
    n = ring.nvars
    best = 0
    for size in range(n, 0, -1):
        for U in itertools.combinations(range(n), size):
            Us = set(U)
            if all(any(e and i not in Us for i, e in enumerate(m)) for m in leads):
                return size
    return best


def independent_sets(gb):
    """Maximal-size independent variable sets modulo the ideal (sorted)."""
    ring = gb.ambient
    leads = gb.leads()
    d = krull_dim(gb)
    if d < 0:
        return []
    out = []
    for U in itertools.combinations(range(ring.nvars), d):
        Us = set(U)
        if all(any(e and i not in Us for i, e in enumerate(m)) for m in leads):
            out.append(U)
    return out


# --------------------------------------------------------------------------
# submodules of free modules


class ModuleGB:
    """Groebner basis of a submodule ``U + J·F`` of a graded free module ``F``."""

    def __init__(self, ring, twists, vecs, limits=None):
        self.ring = ring
        self.twists = tuple(twists)
        self.order = TermOrder(ring.order, self.twists)
        eng = make_engine(ring, twists=self.twists, limits=limits, ncomps=len(self.twists))
        eng.run([v for v in vecs if v])
        self.basis = eng.reduced_basis()
        self._eng = Engine(ring.field, self.order, limits)
        for v in self.basis:
            lead = max(v, key=self.order.key)
            self._eng.elts.append(_Elt(v, lead, self.order.degree(lead), None, False))
            self._eng.by_comp[lead[0]].append(len(self._eng.elts) - 1)

    def leads(self):
        return [e.lead for e in self._eng.elts]

    def leads_by_comp(self):
        out = defaultdict(list)
        for c, m in self.leads():
            out[c].append(m)
        return out

    def normal_form(self, vec):
        return self._eng.reduce(vec, full=True)[0]

    def contains(self, vec):
        return not self._eng.reduce(vec)[0]

    def signature(self):
        return tuple(tuple(sorted(v.items())) for v in self.basis)


def syzygy_vecs(vecs, ring, twists, src_twists=None, limits=None):
    """Generators of ``{a : sum a_l vecs_l ∈ J·F}`` as (vector, degree) pairs.

    Returned vectors live in the free module with one component per input,
    twisted by the input degrees (or ``src_twists`` when given).
    """
    twists = tuple(twists)
    order = TermOrder(ring.order, twists)
    if src_twists is None:
        src_twists = [order.degree(next(iter(v))) if v else 0 for v in vecs]
    src_twists = tuple(src_twists)
    eng = make_engine(ring, twists=twists, track=True, limits=limits, ncomps=len(twists))
    one = ring.field.one
    zero_exps = (0,) * ring.nvars
    tails = [{(l, zero_exps): one} for l in range(len(vecs))]
    eng.run(list(vecs), tails)
    for l, v in enumerate(vecs):
        if not v:
            eng.syzygies.append(dict(tails[l]))
    src_order = TermOrder(ring.order, src_twists)
    out = []
    seen = set()
    for s in eng.syzygies:
        s = reduce_mod_relations({t: c for t, c in s.items() if c}, ring)
        if not s:
            continue
        key = tuple(sorted(s.items()))
        if key in seen:
            continue
        seen.add(key)
        out.append((s, src_order.degree(next(iter(s)))))
    return out, src_twists


def minimal_subset(vecs, ring, twists, limits=None):
    """Indices of a minimal generating subset of ``vecs`` modulo ``J·F``."""
    eng = make_engine(ring, twists=twists, limits=limits, ncomps=len(twists))
    kept = eng.run(list(vecs))
    return [i for i, k in enumerate(kept) if k]


def _relation_engine(ring):
    eng = getattr(ring, "_rel_engine", None)
    if eng is None:
        eng = Engine(ring.field, TermOrder(ring.order))
        for g in ring.relation_gb():
            v = {(0, m): c for m, c in g.items()}
            eng.elts.append(_Elt(v, max(v, key=eng.order.key), 0, None, False))
            eng.by_comp[0].append(len(eng.elts) - 1)
        ring._rel_engine = eng
    return eng


def reduce_poly_terms(terms, ring):
    """Normal form of a term dict modulo the defining ideal."""
    if not ring.relations:
        return dict(terms)
    red, _ = _relation_engine(ring).reduce({(0, m): c for m, c in terms.items()}, full=True)
    return {m: c for (_, m), c in red.items()}


def reduce_mod_relations(vec, ring):
    """Reduce every coordinate of a vector modulo the defining ideal."""
    if not ring.relations:
        return dict(vec)
    by = defaultdict(dict)
    for (c, m), a in vec.items():
        by[c][m] = a
    out = {}
    for c in sorted(by):
        for m, a in reduce_poly_terms(by[c], ring).items():
            out[(c, m)] = a
    return out
