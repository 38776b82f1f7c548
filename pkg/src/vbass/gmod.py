"""Finitely presented graded modules ``coker(F1 -> F0)``.

A module stores the twists ``a_c`` of ``F0 = ⊕ R(-a_c)`` and its relation
columns as sparse vectors ``{(row, exponents): coeff}``.  Column ``j`` is
homogeneous of degree ``source_twists[j]``: every entry in row ``c`` has
weighted degree ``source_twists[j] - a_c``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import NotFiniteLengthError
from .exactalg import (
    Poly,
    mono_divides,
    monomials_of_degree,
    nullspace,
    parse_poly,
    rank,
    rref,
    wdeg,
)
from .groebner import (
    ModuleGB,
    TermOrder,
    _axpy,
    minimal_subset,
    reduce_mod_relations,
    syzygy_vecs,
)


def _vec_degree(vec, ring, twists):
    (c, m) = next(iter(vec))
    return wdeg(m, ring.weights) + twists[c]


class GradedModule:
    """``coker`` of a homogeneous matrix between graded free modules."""

    def __init__(self, ring, twists, relations=(), source_twists=None):
        self.ring = ring
        self.twists = tuple(int(t) for t in twists)
        r = len(self.twists)
        cols = []
        for col in relations:
            if isinstance(col, dict):
                v = {t: ring.field(c) for t, c in col.items() if c}
            else:
                if len(col) != r:
                    raise ValueError(f"column has {len(col)} entries, expected {r}")
                v = {}
                for row, entry in enumerate(col):
                    if isinstance(entry, str):
                        entry = parse_poly(entry, ring)
                    elif not isinstance(entry, Poly):
                        entry = ring.const(entry)
                    for m, c in entry.terms.items():
                        v[(row, m)] = c
            for (row, _m) in v:
                if not 0 <= row < r:
                    raise ValueError(f"row index {row} out of range")
            cols.append(v)
        if source_twists is None:
            source_twists = [_vec_degree(v, ring, self.twists) if v else 0 for v in cols]
        source_twists = tuple(int(s) for s in source_twists)
        if len(source_twists) != len(cols):
            raise ValueError("one source twist per relation column required")
        for j, (v, s) in enumerate(zip(cols, source_twists)):
            for (row, m) in v:
                if wdeg(m, ring.weights) + self.twists[row] != s:
                    raise ValueError(
                        f"entry ({row},{j}) is not homogeneous of degree "
                        f"{s - self.twists[row]}")
        keep = [j for j, v in enumerate(cols) if v]
        self.cols = tuple(cols[j] for j in keep)
        self.source_twists = tuple(source_twists[j] for j in keep)

    # -- basic data
    @property
    def rank(self):
        return len(self.twists)

    def is_zero_presentation(self):
        return not self.twists

    def matrix(self):
        """Rows of Polys (``rank`` rows, one column per relation)."""
        rows = [[{} for _ in self.cols] for _ in self.twists]
        for j, v in enumerate(self.cols):
            for (c, m), a in v.items():
                rows[c][j][m] = a
        return [[Poly(self.ring, e) for e in row] for row in rows]

    def to_json(self):
        return {
            "twists": list(self.twists),
            "matrix": [[str(e) for e in row] for row in self.matrix()],
            "sourceTwists": list(self.source_twists),
        }

    @classmethod
    def from_json(cls, data, ring):
        twists = data.get("twists", [])
        rows = data.get("matrix", [])
        src = data.get("sourceTwists")
        ncols = len(rows[0]) if rows else len(src or [])
        if len(rows) != len(twists) and ncols:
            raise ValueError("matrix must have one row per twist")
        cols = [[rows[i][j] for i in range(len(twists))] for j in range(ncols)]
        return cls(ring, twists, cols, src)

    @cached_property
    def gb(self):
        return ModuleGB(self.ring, self.twists, self.cols)

    def element_degree(self, vec):
        return _vec_degree(vec, self.ring, self.twists)

    def __repr__(self):
        return (f"GradedModule(rank={self.rank}, twists={list(self.twists)}, "
                f"relations={len(self.cols)})")


# --------------------------------------------------------------------------
# constructors


def free_module(ring, twists):
    return GradedModule(ring, twists)


def cyclic_module(ring, ideal_gens=(), twist=0):
    """``(R / I)(-twist)`` for an ideal given by generators (strings or Polys)."""
    cols = []
    for g in ideal_gens:
        g = parse_poly(g, ring) if isinstance(g, str) else g
        if not g.is_zero():
            cols.append({(0, m): c for m, c in g.terms.items()})
    return GradedModule(ring, [twist], cols)


def residue_field(ring, twist=0):
    return cyclic_module(ring, ring.gens(), twist)


def module_shift(M, k):
    """``M(-k)``: all twists increased by ``k``."""
    return GradedModule(M.ring, [a + k for a in M.twists], M.cols,
                        [s + k for s in M.source_twists])


def direct_sum(*mods):
    ring = mods[0].ring
    twists, cols, src = [], [], []
    off = 0
    for M in mods:
        twists.extend(M.twists)
        for v, s in zip(M.cols, M.source_twists):
            cols.append({(c + off, m): a for (c, m), a in v.items()})
            src.append(s)
        off += M.rank
    return GradedModule(ring, twists, cols, src)


# --------------------------------------------------------------------------
# Hilbert data


@dataclass(frozen=True)
class HilbertWindow:
    lo: int
    hi: int
    dims: dict = field(default_factory=dict)

    def __getitem__(self, d):
        return self.dims[d]

    def as_list(self):
        return [self.dims[d] for d in range(self.lo, self.hi + 1)]


def standard_terms(M, d):
    """Standard terms ``(comp, exps)`` of degree ``d`` (a k-basis of M_d)."""
    leads = M.gb.leads_by_comp()
    out = []
    for c, a in enumerate(M.twists):
        lc = leads.get(c, [])
        for m in monomials_of_degree(M.ring.weights, d - a):
            if not any(mono_divides(l, m) for l in lc):
                out.append((c, m))
    return out


def hilbert_window(M, lo, hi):
    if lo > hi:
        raise ValueError("empty window")
    return HilbertWindow(lo, hi, {d: len(standard_terms(M, d)) for d in range(lo, hi + 1)})


def is_finite_length(M):
    """Finitely many standard terms, i.e. the annihilator is m-primary."""
    leads = M.gb.leads_by_comp()
    n = M.ring.nvars
    for c in range(M.rank):
        lc = leads.get(c, [])
        if any(not any(m) for m in lc):
            continue
        for j in range(n):
            if not any(m[j] > 0 and all(m[i] == 0 for i in range(n) if i != j) for m in lc):
                return False
    return True


def degree_range(M):
    """(lowest, highest) degree with nonzero piece of a finite-length module."""
    if not is_finite_length(M):
        raise NotFiniteLengthError("module does not have finite length")
    terms = all_standard_terms(M)
    if not terms:
        return None
    ds = [wdeg(m, M.ring.weights) + M.twists[c] for c, m in terms]
    return min(ds), max(ds)


def all_standard_terms(M):
    """Every standard term of a finite-length module, by increasing degree."""
    if not is_finite_length(M):
        raise NotFiniteLengthError("module does not have finite length")
    leads = M.gb.leads_by_comp()
    n = M.ring.nvars
    out = []
    for c in range(M.rank):
        lc = leads.get(c, [])
        start = (0,) * n
        if any(mono_divides(l, start) for l in lc):
            continue
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for m in frontier:
                for j in range(n):
                    e = list(m)
                    e[j] += 1
                    e = tuple(e)
                    if e not in seen and not any(mono_divides(l, e) for l in lc):
                        seen.add(e)
                        nxt.append(e)
            frontier = nxt
        out.extend((c, m) for m in seen)
    w = M.ring.weights
    out.sort(key=lambda t: (wdeg(t[1], w) + M.twists[t[0]], t[0], tuple(-x for x in t[1])))
    return out


def length(M):
    return len(all_standard_terms(M))


# --------------------------------------------------------------------------
# presentations, kernels, subquotients


def _poly_times_vec(target, a_terms, v, scale, field):
    """target -= scale * a * v (a given as a term dict)."""
    p = field.p
    for m, c in a_terms.items():
        _axpy(target, field.mul(scale, c), v, m, p)


def prune(M):
    """Minimal presentation.  Returns (module, indices of surviving generators)."""
    ring = M.ring
    F = ring.field
    cols = [reduce_mod_relations(v, ring) for v in M.cols]
    cols = [v for v in cols if v]
    alive = list(range(M.rank))
    twists = list(M.twists)
    zero = (0,) * ring.nvars
    while True:
        piv = None
        for j, v in enumerate(cols):
            for (c, m), a in v.items():
                if m == zero:
                    piv = (j, c, a)
                    break
            if piv:
                break
        if piv is None:
            break
        j, r, u = piv
        v = cols[j]
        inv = F.inv(u)
        new_cols = []
        for k, w in enumerate(cols):
            if k == j:
                continue
            a = {m: c for (cc, m), c in w.items() if cc == r}
            if a:
                w = dict(w)
                _poly_times_vec(w, a, v, inv, F)
            new_cols.append(w)
        # drop component r and renumber
        remap = {c: (c if c < r else c - 1) for c in range(len(twists)) if c != r}
        cols = []
        for w in new_cols:
            w2 = {(remap[c], m): a for (c, m), a in w.items() if c != r}
            w2 = reduce_mod_relations(w2, ring)
            if w2:
                cols.append(w2)
        del alive[r]
        del twists[r]
    if cols:
        keep = minimal_subset(cols, ring, twists)
        cols = [cols[i] for i in keep]
    return GradedModule(ring, twists, cols), alive


def kernel_of_map(phi_cols, src_twists, target):
    """Generators of ``{v ∈ ⊕R(-src_twists) : phi(v) = 0 in target}``."""
    ring = target.ring
    k = len(phi_cols)
    vecs = list(phi_cols) + list(target.cols)
    srcs = list(src_twists) + list(target.source_twists)
    syz, _ = syzygy_vecs(vecs, ring, target.twists, srcs)
    out = []
    for s, _d in syz:
        v = {(c, m): a for (c, m), a in s.items() if c < k}
        if v:
            out.append(v)
    return out


def subquotient(ring, twists, gens, rels, gen_twists=None):
    """Presentation of ``(<gens> + <rels>) / <rels>`` inside ``⊕R(-twists)``."""
    gens = [g for g in gens if g]
    if not gens:
        return GradedModule(ring, [])
    if gen_twists is None:
        gen_twists = [_vec_degree(g, ring, twists) for g in gens]
    rel_tw = [_vec_degree(r, ring, twists) for r in rels]
    syz, _ = syzygy_vecs(list(gens) + list(rels), ring, twists, list(gen_twists) + rel_tw)
    k = len(gens)
    cols = []
    for s, _d in syz:
        v = {(c, m): a for (c, m), a in s.items() if c < k}
        if v:
            cols.append(v)
    return GradedModule(ring, gen_twists, cols)


def submodule(M, elements):
    """The submodule of M generated by ``elements`` (vectors over F0)."""
    return subquotient(M.ring, M.twists, elements, M.cols)


def quotient_module(M, elements):
    return GradedModule(M.ring, M.twists, list(M.cols) + [e for e in elements if e])


def kernel_module(M, phi_cols, target):
    """Kernel of the map ``M -> target`` given on generators by ``phi_cols``."""
    K = kernel_of_map(phi_cols, M.twists, target)
    return subquotient(M.ring, M.twists, K, M.cols)


# --------------------------------------------------------------------------
# m-torsion


def _colon_maximal(ring, twists, cols):
    """Generators of ``U : m`` for the submodule U spanned by ``cols``."""
    r = len(twists)
    w = ring.weights
    n = ring.nvars
    t_twists = [twists[c] - w[j] for j in range(n) for c in range(r)]
    t_cols = []
    for j in range(n):
        for v in cols:
            t_cols.append({(j * r + c, m): a for (c, m), a in v.items()})
    target = GradedModule(ring, t_twists, t_cols)
    phi = []
    one = ring.field.one
    for c in range(r):
        col = {}
        for j in range(n):
            e = [0] * n
            e[j] = 1
            col[(j * r + c, tuple(e))] = one
        phi.append(col)
    return kernel_of_map(phi, twists, target)


def _minimize_cols(ring, twists, cols):
    cols = [v for v in cols if v]
    if not cols:
        return []
    keep = minimal_subset(cols, ring, twists)
    return [cols[i] for i in keep]


def saturation_cols(M, max_steps=100):
    """Generators of ``U : m^∞`` where ``M = F0 / U``."""
    ring = M.ring
    cur = list(M.cols)
    sig = ModuleGB(ring, M.twists, cur).signature()
    for _ in range(max_steps):
        nxt = _minimize_cols(ring, M.twists, _colon_maximal(ring, M.twists, cur) + cur)
        nsig = ModuleGB(ring, M.twists, nxt).signature()
        if nsig == sig:
            return cur
        cur, sig = nxt, nsig
    raise RuntimeError("colon chain did not stabilize")


def torsion_submodule(M, with_quotient=False):
    """``Γ_m(M)``, optionally with ``M / Γ_m(M)``."""
    sat = saturation_cols(M)
    gamma = subquotient(M.ring, M.twists, sat, M.cols)
    gamma = prune(gamma)[0]
    if with_quotient:
        return gamma, GradedModule(M.ring, M.twists, sat)
    return gamma


# --------------------------------------------------------------------------
# degreewise structure of finite-length modules


def _coords(vec, index):
    return index.get(vec, None)


def action_data(M):
    """Per-degree bases and variable actions of a finite-length module.

    Returns ``(basis, act)`` where ``basis[d]`` lists standard terms of
    degree d and ``act[(j, d)]`` is the matrix (list of rows) of
    multiplication by variable j from ``M_d`` to ``M_{d+w_j}``.
    """
    ring = M.ring
    terms = all_standard_terms(M)
    basis = {}
    for c, m in terms:
        basis.setdefault(wdeg(m, ring.weights) + M.twists[c], []).append((c, m))
    pos = {d: {t: i for i, t in enumerate(b)} for d, b in basis.items()}
    F = ring.field
    act = {}
    for d, b in basis.items():
        for j, w in enumerate(ring.weights):
            tgt = basis.get(d + w, [])
            rows = [[F.zero] * len(b) for _ in tgt]
            for k, (c, m) in enumerate(b):
                e = list(m)
                e[j] += 1
                nf = M.gb.normal_form({(c, tuple(e)): F.one})
                for t, a in nf.items():
                    rows[pos[d + w][t]][k] = a
            act[(j, d)] = rows
    return basis, act


def _apply(rows, vec, field):
    if not rows:
        return []
    p = field.p
    out = []
    for r in rows:
        s = 0
        for a, b in zip(r, vec):
            if a and b:
                s += a * b
        out.append(s % p if p else s)
    return out


def module_from_action(ring, dims, act):
    """Build a finite presentation from vector-space data.

    ``dims[d]`` is the dimension in degree d; ``act[(j, d)]`` is the matrix
    (rows) of variable j from degree d to degree d + w_j.
    """
    F = ring.field
    degs = sorted(d for d, k in dims.items() if k)
    if not degs:
        return GradedModule(ring, []), []
    w = ring.weights

    def act_var(j, d, v):
        if not dims.get(d) or not dims.get(d + w[j]):
            return None
        return _apply(act[(j, d)], v, F)

    gens = []  # (degree, vector)
    for d in degs:
        img = []
        for j in range(ring.nvars):
            src = d - w[j]
            for k in range(dims.get(src, 0)):
                e = [F.zero] * dims[src]
                e[k] = F.one
                v = act_var(j, src, e)
                if v is not None and any(v):
                    img.append(v)
        R, piv = rref(img, F, dims[d]) if img else ([], [])
        have = len(piv)
        rows = list(R)
        for k in range(dims[d]):
            if have == dims[d]:
                break
            e = [F.zero] * dims[d]
            e[k] = F.one
            if rank(rows + [e], F) > have:
                rows.append(e)
                have += 1
                gens.append((d, e))

    def apply_mono(m, d, v):
        for j, e in enumerate(m):
            for _ in range(e):
                v = act_var(j, d, v)
                d += w[j]
                if v is None:
                    return None, d
        return v, d

    twists = [g[0] for g in gens]
    top = degs[-1]
    cols = []
    for d in range(min(twists), top + max(w) + 1):
        labels = []
        images = []
        for gi, (a, gv) in enumerate(gens):
            for m in ring.standard_monomials(d - a):
                v, _ = apply_mono(m, a, list(gv))
                labels.append((gi, m))
                images.append(v if v is not None else [F.zero] * dims.get(d, 0))
        if not labels:
            continue
        dim = dims.get(d, 0)
        if dim:
            mat = [[images[k][r] for k in range(len(labels))] for r in range(dim)]
            ker = nullspace(mat, F, len(labels))
        else:
            ker = []
            for k in range(len(labels)):
                e = [F.zero] * len(labels)
                e[k] = F.one
                ker.append(e)
        for kv in ker:
            col = {}
            for (gi, m), c in zip(labels, kv):
                if c:
                    col[(gi, m)] = c
            if col:
                cols.append(col)
    cols = _minimize_cols(ring, twists, cols)
    return GradedModule(ring, twists, cols), gens


def matlis_dual_finite_length(M):
    """Graded Matlis dual ``Hom_k(M, k)`` of a finite-length module."""
    if not is_finite_length(M):
        raise NotFiniteLengthError("Matlis dual requires a finite-length module "
                                   "(annihilator not m-primary)")
    basis, act = action_data(M)
    ring = M.ring
    dims = {-d: len(b) for d, b in basis.items()}
    dual_act = {}
    for (j, d), rows in act.items():
        # x_j on the dual: degree -(d + w) -> -d is the transpose of M_d -> M_{d+w}
        w = ring.weights[j]
        src = -(d + w)
        if dims.get(src):
            dual_act[(j, src)] = [list(c) for c in zip(*rows)] if rows else []
    for d in dims:
        for j in range(ring.nvars):
            dual_act.setdefault((j, d), [])
    N, _ = module_from_action(ring, dims, dual_act)
    return N


# --------------------------------------------------------------------------
# annihilators


def annihilator(M):
    """Generators (Polys) of ``ann_R(M)``."""
    ring = M.ring
    r = M.rank
    if r == 0:
        return [ring.one()]
    t_twists = []
    t_cols = []
    for b in range(r):
        shift = M.twists[b]
        t_twists.extend(a - shift for a in M.twists)
        for v in M.cols:
            t_cols.append({(b * r + c, m): a for (c, m), a in v.items()})
    target = GradedModule(ring, t_twists, t_cols)
    one = ring.field.one
    zero = (0,) * ring.nvars
    phi = [{(b * r + b, zero): one for b in range(r)}]
    K = kernel_of_map(phi, [0], target)
    return [Poly(ring, {m: a for (_, m), a in v.items()}) for v in K]
