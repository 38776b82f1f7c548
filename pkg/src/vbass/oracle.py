"""Brute-force degreewise linear algebra, independent of the Groebner path.

Every graded piece is a finite-dimensional k-vector space:

* ``R_d = k[x]_d / J_d`` with ``J_d`` spanned by monomial multiples of the
  relations (row reduction picks the standard monomials);
* ``M_d = (F0)_d / U_d`` with ``U_d`` spanned by monomial multiples of the
  relation columns;
* free resolutions are built one internal degree at a time: the kernel of
  ``(F_j)_d -> (F_{j-1})_d`` modulo what lower-degree generators already
  span gives the new generators of ``F_{j+1}`` in degree ``d``.

Only the field arithmetic layer (``exactalg``) is shared with the rest of
the package.  The single exception is :func:`rank_over_domain_bruteforce`,
whose minor-vanishing test in ``R/p`` needs an ideal-membership oracle and
uses Groebner normal forms for exactly that.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ResourceLimitError, current_limits
from .exactalg import monomials_of_degree, nullspace, rank, rref, wdeg


def _mono_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class _Reducer:
    """Row-reduced spanning set of a subspace of a coordinate space."""

    def __init__(self, rows, field, ncols):
        self.field = field
        red, piv = rref(rows, field, ncols) if rows else ([], [])
        self.rows = red
        self.pivots = piv
        self.pivset = set(piv)

    def reduce(self, vec):
        """``vec`` (dict index -> coeff) modulo the subspace; pivot coords become zero."""
        F = self.field
        v = dict(vec)
        for row, p in zip(self.rows, self.pivots):
            c = v.get(p)
            if c:
                for k, a in enumerate(row):
                    if a:
                        nv = F.sub(v.get(k, F.zero), F.mul(c, a))
                        if nv:
                            v[k] = nv
                        else:
                            v.pop(k, None)
        return v


class RingPieces:
    """``R_d`` for ``R = k[x]/J`` by linear algebra on monomials."""

    def __init__(self, ring):
        self.ring = ring
        self.field = ring.field
        self.weights = ring.weights
        self.rels = [(r.homogeneous_degree, dict(r.terms)) for r in ring.relations]
        self._cache = {}

    def piece(self, d):
        if d not in self._cache:
            monos = monomials_of_degree(self.weights, d) if d >= 0 else []
            index = {m: k for k, m in enumerate(monos)}
            rows = []
            for e, terms in self.rels:
                for u in (monomials_of_degree(self.weights, d - e) if d >= e else []):
                    row = [self.field.zero] * len(monos)
                    for m, c in terms.items():
                        row[index[_mono_add(m, u)]] = c
                    rows.append(row)
            red = _Reducer(rows, self.field, len(monos))
            basis = [m for k, m in enumerate(monos) if k not in red.pivset]
            self._cache[d] = (monos, index, red, basis)
        return self._cache[d]

    def basis(self, d):
        return self.piece(d)[3]

    def normal(self, terms, d):
        """Terms of degree d -> {standard monomial: coeff}."""
        monos, index, red, _ = self.piece(d)
        v = red.reduce({index[m]: c for m, c in terms.items() if c})
        return {monos[k]: c for k, c in v.items()}


TOP_SEARCH_SPAN = 16


class TruncatedModule:
    """Exact degreewise realization of ``coker(F1 -> F0)`` (degrees on demand)."""

    def __init__(self, M, lo=None, hi=None, pieces=None):
        self.ring = M.ring
        self.field = M.ring.field
        self.R = pieces or RingPieces(M.ring)
        self.twists = tuple(M.twists)
        self.cols = [(s, dict(v)) for s, v in zip(M.source_twists, M.cols)]
        self.lo, self.hi = lo, hi
        self._cache = {}
        self._label_cache = {}

    def _space(self, d):
        if d not in self._cache:
            R, F = self.R, self.field
            coords = [(c, m) for c, a in enumerate(self.twists) for m in R.basis(d - a)]
            index = {t: k for k, t in enumerate(coords)}
            rows = []
            for s, v in self.cols:
                if d < s:
                    continue
                for u in monomials_of_degree(R.weights, d - s):
                    row = [F.zero] * len(coords)
                    for comp in {c for (c, _m) in v}:
                        terms = {}
                        for (c, m), a in v.items():
                            if c == comp:
                                mu = _mono_add(m, u)
                                terms[mu] = F.add(terms.get(mu, F.zero), a)
                        for m, a in R.normal(terms, d - self.twists[comp]).items():
                            row[index[(comp, m)]] = a
                    if any(row):
                        rows.append(row)
            red = _Reducer(rows, F, len(coords))
            basis = [k for k in range(len(coords)) if k not in red.pivset]
            self._cache[d] = (coords, index, red, basis, {k: i for i, k in enumerate(basis)})
        return self._cache[d]

    def dim(self, d):
        return len(self._space(d)[3])

    def dims(self, lo=None, hi=None):
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        return [self.dim(d) for d in range(lo, hi + 1)]

    def basis_labels(self, d):
        coords, _, _, basis, _ = self._space(d)
        return [coords[k] for k in basis]

    def project(self, vec, d):
        """Element given by ambient terms {(c, monomial): coeff} of degree d -> coordinates."""
        coords, index, red, basis, pos = self._space(d)
        F = self.field
        by_comp = {}
        for (c, m), a in vec.items():
            by_comp.setdefault(c, {})
            by_comp[c][m] = F.add(by_comp[c].get(m, F.zero), a)
        amb = {}
        for c, terms in by_comp.items():
            for m, a in self.R.normal(terms, d - self.twists[c]).items():
                amb[index[(c, m)]] = a
        v = red.reduce(amb)
        out = [F.zero] * len(basis)
        for k, a in v.items():
            out[pos[k]] = a
        return out

    def times_monomial(self, u, d, coords):
        """``u · v`` for v ∈ M_d given by coordinates."""
        e = d + wdeg(u, self.R.weights)
        F = self.field
        out = [F.zero] * self.dim(e)
        for lab, a in zip(self.basis_labels(d), coords):
            if not a:
                continue
            key = (lab, u, d)
            img = self._label_cache.get(key)
            if img is None:
                c, m = lab
                img = self.project({(c, _mono_add(m, u)): F.one}, e)
                self._label_cache[key] = img
            for k, b in enumerate(img):
                if b:
                    out[k] = F.add(out[k], F.mul(a, b))
        return out

    def action(self, j, d):
        """Matrix (rows = basis of M_d) of multiplication by variable j."""
        u = tuple(1 if k == j else 0 for k in range(self.ring.nvars))
        n = self.dim(d)
        F = self.field
        return [self.times_monomial(u, d, [F.one if k == i else F.zero for k in range(n)])
                for i in range(n)]

    def top_degree(self, max_degree, span=TOP_SEARCH_SPAN):
        """Largest degree with M_d ≠ 0 if M is certifiably bounded above, else None.

        M is generated in degrees ≤ max(twists), so ``maxw`` consecutive zero
        pieces above that force every higher piece to vanish.  The search
        stops ``span`` degrees above the top generator; not finding the
        certificate there is reported as "not bounded" (None).
        """
        if not self.twists:
            return -10 ** 9
        maxw = max(self.R.weights)
        top = None
        run = 0
        d = min(self.twists)
        stop = min(max_degree, max(self.twists) + span)
        while d <= stop:
            if self.dim(d):
                top, run = d, 0
            elif d > max(self.twists):
                run += 1
                if run >= maxw:
                    return top if top is not None else -10 ** 9
            d += 1
        return None


def truncate(M, lo, hi):
    t = TruncatedModule(M, lo, hi)
    for d in range(lo, hi + 1):
        t.dim(d)
    return t


# --------------------------------------------------------------------------
# degreewise free resolutions


@dataclass
class DegreewiseResolution:
    twists: list                # twists[j] = source degrees of F_j generators
    columns: list               # columns[j-1] = d_j columns {(row, monomial): coeff}
    complete_through: int       # all generators of degree ≤ this are present
    extras: dict = field(default_factory=dict)


def _free_space(R, twists, d):
    return [(l, m) for l, a in enumerate(twists) for m in R.basis(d - a)]


def _apply_map(R, columns, tgt_twists, label, d):
    """d(e_l · m) as {(row, monomial): coeff} in normal form, degree d."""
    l, m = label
    F = R.field
    by_row = {}
    for (row, u), c in columns[l].items():
        mu = _mono_add(u, m)
        by_row.setdefault(row, {})
        by_row[row][mu] = F.add(by_row[row].get(mu, F.zero), c)
    out = {}
    for row, terms in by_row.items():
        for mm, c in R.normal(terms, d - tgt_twists[row]).items():
            out[(row, mm)] = c
    return out


def _kernel_generators(R, columns, src_twists, tgt_twists, D):
    """Minimal homogeneous generators (degree ≤ D) of ker(⊕R(−src) -> ⊕R(−tgt))."""
    F = R.field
    gens, degs = [], []
    lo = min(src_twists) if src_twists else 0
    for d in range(lo, D + 1):
        src = _free_space(R, src_twists, d)
        if not src:
            continue
        tgt = _free_space(R, tgt_twists, d)
        tindex = {t: k for k, t in enumerate(tgt)}
        images = [_apply_map(R, columns, tgt_twists, lab, d) for lab in src]
        # rows: target coordinates; columns: source labels
        A = [[F.zero] * len(src) for _ in tgt]
        for j, img in enumerate(images):
            for t, c in img.items():
                A[tindex[t]][j] = c
        kernel = nullspace(A, F, len(src)) if tgt else \
            [[F.one if k == j else F.zero for k in range(len(src))] for j in range(len(src))]
        if not kernel:
            continue
        sindex = {t: k for k, t in enumerate(src)}
        span = []
        for g, s in zip(gens, degs):
            for u in monomials_of_degree(R.weights, d - s) if d >= s else []:
                span.append(_vector_times(R, g, u, src_twists, sindex, d))
        base = rank(span, F) if span else 0
        for v in kernel:
            trial = span + [v]
            r = rank(trial, F)
            if r > base:
                span, base = trial, r
                gens.append({src[k]: c for k, c in enumerate(v) if c})
                degs.append(d)
    return gens, degs


def _vector_times(R, g, u, twists, index, d):
    F = R.field
    out = [F.zero] * len(index)
    by_row = {}
    for (l, m), c in g.items():
        mu = _mono_add(m, u)
        by_row.setdefault(l, {})
        by_row[l][mu] = F.add(by_row[l].get(mu, F.zero), c)
    for l, terms in by_row.items():
        for m, c in R.normal(terms, d - twists[l]).items():
            out[index[(l, m)]] = c
    return out


def degreewise_resolution(N, length, D, pieces=None):
    """F_0..F_length of a graded free resolution of N, complete in degrees ≤ D."""
    R = pieces or RingPieces(N.ring)
    twists = [tuple(N.twists)]
    columns = []
    if length >= 1:
        cols = [dict(v) for v in N.cols]
        src = list(N.source_twists)
        # keep a degreewise-minimal subset of the given relations
        order = sorted(range(len(cols)), key=lambda k: src[k])
        kept, kept_deg = [], []
        for k in order:
            d = src[k]
            if d > D:
                continue
            tgt = _free_space(R, twists[0], d)
            index = {t: i for i, t in enumerate(tgt)}
            span = [_vector_times(R, g, u, twists[0], index, d)
                    for g, s in zip(kept, kept_deg)
                    for u in monomials_of_degree(R.weights, d - s)]
            v = _vector_times(R, cols[k], (0,) * N.ring.nvars, twists[0], index, d)
            if rank(span + [v], R.field) > (rank(span, R.field) if span else 0):
                kept.append(cols[k])
                kept_deg.append(d)
        columns.append(kept)
        twists.append(tuple(kept_deg))
    for j in range(2, length + 1):
        gens, degs = _kernel_generators(R, columns[-1], twists[-1], twists[-2], D)
        columns.append(gens)
        twists.append(tuple(degs))
    return DegreewiseResolution(twists, columns, D)


# --------------------------------------------------------------------------
# Ext by brute force


@dataclass
class OracleExt:
    dims: dict                  # (i, z) -> dim
    certified: list             # z values certified exact
    flags: list
    degree_bound: int

    def to_json(self):
        return {
            "dims": {f"{i}:{z}": v for (i, z), v in sorted(self.dims.items())},
            "certified": list(self.certified),
            "flags": list(self.flags),
            "degreeBound": self.degree_bound,
        }


def _hom_matrix(res, j, Mt, z):
    """Matrix of Hom(d_{j+1}, M)_z: rows = coords of Hom(F_j, M)_z."""
    F = Mt.field
    src_blocks = [(l, a, Mt.dim(z + a)) for l, a in enumerate(res.twists[j])]
    tgt_tw = res.twists[j + 1] if j + 1 < len(res.twists) else ()
    tgt_off, off = [], 0
    for a in tgt_tw:
        tgt_off.append(off)
        off += Mt.dim(z + a)
    ncols = off
    rows = []
    cols = res.columns[j] if j < len(res.columns) else []
    for l, a, dim in src_blocks:
        for k in range(dim):
            v = [F.zero] * dim
            v[k] = F.one
            row = [F.zero] * ncols
            for lp, col in enumerate(cols):
                for (r, u), c in col.items():
                    if r != l:
                        continue
                    img = Mt.times_monomial(u, z + a, v)
                    base = tgt_off[lp]
                    for t, b in enumerate(img):
                        if b:
                            row[base + t] = F.add(row[base + t], F.mul(c, b))
            rows.append(row)
    return rows, ncols


def _ext_dim(res, i, Mt, z):
    F = Mt.field
    rows, ncols = _hom_matrix(res, i, Mt, z)
    n_i = len(rows)
    if n_i == 0:
        return 0
    ker = n_i - (rank(rows, F) if ncols else 0)
    if i == 0:
        return ker
    prev, _ = _hom_matrix(res, i - 1, Mt, z)
    im = rank(prev, F) if prev and n_i else 0
    return ker - im


def ext_dims_bruteforce(N, M, i, window, limits=None):
    """dim_k Ext^i(N, M)_z for z in ``window`` by degreewise linear algebra.

    A value is *certified* when the truncated resolution provably contains
    every generator that can contribute:

    * M bounded above with top T: degree bound D covers z ≥ T − D;
    * polynomial ring, N of finite length with top T_N and a minimal
      presentation: F_j is complete once D ≥ T_N + (sum of the j largest
      weights), so every z is certified.

    Uncertified z are reported under the ``window-insufficient`` flag.
    """
    limits = limits or current_limits()
    if N.ring != M.ring:
        from .errors import RingMismatchError
        raise RingMismatchError("Ext arguments over different rings")
    zlo, zhi = window
    R = RingPieces(M.ring)
    Mt = TruncatedModule(M, pieces=R)
    Nt = TruncatedModule(N, pieces=R)
    T_M = Mt.top_degree(limits.max_degree)
    ring = M.ring
    candidates = []
    if T_M is not None:
        candidates.append(T_M - zlo)
    T_N = Nt.top_degree(limits.max_degree)
    zero = (0,) * ring.nvars
    minimal_pres = all(m != zero for v in N.cols for (_c, m) in v)
    full_bound = None
    if ring.is_polynomial_ring and T_N is not None and minimal_pres:
        ws = sorted(ring.weights, reverse=True)
        full_bound = T_N + sum(ws[: min(i + 1, len(ws))])
        candidates.append(full_bound)
    flags = []
    if candidates:
        D = min(candidates)
    else:
        D = max(max(N.twists, default=0) + 4, zhi + 4)
    if D > limits.max_degree:
        D = limits.max_degree
    res = degreewise_resolution(N, i + 1, D, R)
    certified = []
    dims = {}
    for z in range(zlo, zhi + 1):
        dims[(i, z)] = _ext_dim(res, i, Mt, z)
        ok = (full_bound is not None and D >= full_bound) or (T_M is not None and z >= T_M - D)
        if ok:
            certified.append(z)
    if len(certified) < zhi - zlo + 1:
        flags.append("window-insufficient")
    return OracleExt(dims, certified, flags, D)


# --------------------------------------------------------------------------
# rank over R/p by minors


RANK_SIZE_LIMIT = 6


def _det_poly(mat):
    """Laplace expansion along the first row (Polys)."""
    if len(mat) == 1:
        return mat[0][0]
    total = mat[0][0].ring.zero()
    for j, a in enumerate(mat[0]):
        if a:
            minor = [row[:j] + row[j + 1:] for row in mat[1:]]
            term = a * _det_poly(minor)
            total = total + term if j % 2 == 0 else total - term
    return total


def rank_over_domain_bruteforce(A, p):
    """Rank over Frac(R/p) of a matrix of Polys: largest nonvanishing minor."""
    from .groebner import groebner_basis

    rows = [list(r) for r in A]
    if not rows or not rows[0]:
        return 0
    m, n = len(rows), len(rows[0])
    if max(m, n) > RANK_SIZE_LIMIT:
        raise ResourceLimitError("rank_matrix_size", max(m, n), RANK_SIZE_LIMIT)
    ring = rows[0][0].ring
    amb = ring.ambient()
    gens = list(getattr(p, "generators", p))
    gb = groebner_basis([g.change_ring(amb) for g in gens]
                        + [r.change_ring(amb) for r in ring.relations], amb)
    rows = [[e.change_ring(amb) for e in r] for r in rows]
    for k in range(min(m, n), 0, -1):
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                minor = [[rows[a][b] for b in ci] for a in ri]
                if not gb.contains(_det_poly(minor)):
                    return k
    return 0
