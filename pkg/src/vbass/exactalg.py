"""Exact coefficient fields, weighted graded polynomial rings and polynomials.

Coefficients over QQ are :class:`fractions.Fraction`; over GF(p) they are
plain ints in ``range(p)``.  Polynomials keep a ``{exponent tuple: coeff}``
map with no zero entries.  Printing sorts terms by the ring's monomial order,
so output is deterministic.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from .errors import ParseError, RingMismatchError


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    """QQ (characteristic 0) or GF(p) for a prime p < 2**31."""

    __slots__ = ("characteristic",)

    def __init__(self, characteristic=0):
        characteristic = int(characteristic)
        if characteristic != 0 and not (_is_prime(characteristic) and characteristic < 2**31):
            raise ValueError(f"characteristic must be 0 or a prime < 2^31, got {characteristic}")
        self.characteristic = characteristic

    @property
    def p(self):
        return self.characteristic

    def __call__(self, value):
        p = self.characteristic
        if p:
            if isinstance(value, Fraction):
                return value.numerator * pow(value.denominator, p - 2, p) % p
            return int(value) % p
        if isinstance(value, Fraction):
            return value
        if isinstance(value, str):
            return Fraction(value)
        return Fraction(value)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def add(self, a, b):
        return (a + b) % self.characteristic if self.characteristic else a + b

    def sub(self, a, b):
        return (a - b) % self.characteristic if self.characteristic else a - b

    def mul(self, a, b):
        return (a * b) % self.characteristic if self.characteristic else a * b

    def neg(self, a):
        return (-a) % self.characteristic if self.characteristic else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(a, p - 2, p) if p else 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


QQ = Field(0)


# --------------------------------------------------------------------------
# monomials


def wdeg(exps, weights):
    return sum(e * w for e, w in zip(exps, weights))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """True if monomial ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def monomials_of_degree(weights, d):
    """All exponent tuples of weighted degree ``d`` (lex-descending)."""
    weights = tuple(weights)
    if d < 0:
        return ()
    if not weights:
        return ((),) if d == 0 else ()
    w, rest = weights[0], weights[1:]
    out = []
    for e in range(d // w, -1, -1):
        for tail in monomials_of_degree(rest, d - e * w):
            out.append((e,) + tail)
    return tuple(out)


def degrevlex_key(exps, weights):
    return (wdeg(exps, weights), tuple(-e for e in reversed(exps)))


class MonomialOrder:
    """Monomial order descriptor.

    ``kind`` is ``"degrevlex"`` (weighted degree, then reverse lex), ``"lex"``,
    or ``"elim"``: monomials with any of the first ``block`` variables beat all
    monomials without them, ties broken by weighted degrevlex.
    """

    __slots__ = ("kind", "weights", "block", "_cache")

    def __init__(self, kind="degrevlex", weights=(), block=0):
        if kind not in ("degrevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.weights = tuple(weights)
        self.block = block
        self._cache = {}

    @property
    def graded(self):
        return self.kind != "lex"

    def key(self, exps):
        k = self._cache.get(exps)
        if k is None:
            if self.kind == "degrevlex":
                k = degrevlex_key(exps, self.weights)
            elif self.kind == "lex":
                k = exps
            else:
                b = self.block
                k = (wdeg(exps[:b], self.weights[:b]),) + degrevlex_key(exps, self.weights)
            self._cache[exps] = k
        return k

    def descriptor(self):
        return (self.kind, self.weights, self.block)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.descriptor())

    def __repr__(self):
        if self.kind == "elim":
            return f"MonomialOrder('elim', block={self.block})"
        return f"MonomialOrder({self.kind!r})"


# --------------------------------------------------------------------------
# rings


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


class GradedRing:
    """A positively graded quotient ``k[x_1..x_n] / J`` with weights.

    ``relations`` may be strings (parsed in the ambient polynomial ring) or
    :class:`Poly` objects; each must be homogeneous.
    """

    def __init__(self, variables, weights=None, relations=(), field=QQ, order="degrevlex"):
        variables = tuple(variables)
        for v in variables:
            if not _IDENT.match(v):
                raise ValueError(f"bad variable name {v!r}")
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        weights = tuple(int(w) for w in (weights if weights is not None else [1] * len(variables)))
        if len(weights) != len(variables):
            raise ValueError("one weight per variable required")
        if any(w < 1 for w in weights):
            raise ValueError("weights must be positive")
        if not isinstance(field, Field):
            field = Field(field)
        self.field = field
        self.variables = variables
        self.weights = weights
        self.nvars = len(variables)
        self.order = MonomialOrder(order, weights) if isinstance(order, str) else order
        self._index = {v: i for i, v in enumerate(variables)}
        rels = []
        for r in relations:
            if isinstance(r, str):
                r = parse_poly(r, self, _check_ring=False)
            else:
                r = Poly(self, r.terms)
            if r.is_zero():
                continue
            if not r.is_homogeneous():
                raise ValueError(f"relation {r} is not homogeneous")
            rels.append(r)
        self.relations = tuple(rels)
        self._gb = None

    # identity is structural so that rings built twice from the same data agree
    def _sig(self):
        return (self.field, self.variables, self.weights,
                tuple(tuple(sorted(r.terms.items())) for r in self.relations))

    def __eq__(self, other):
        return isinstance(other, GradedRing) and self._sig() == other._sig()

    def __hash__(self):
        return hash((self.variables, self.weights))

    def __repr__(self):
        base = f"{self.field}[{','.join(self.variables)}]"
        if self.weights != (1,) * self.nvars:
            base += f" weights {list(self.weights)}"
        if self.relations:
            base += " / (" + ", ".join(str(r) for r in self.relations) + ")"
        return base

    @property
    def is_standard_graded(self):
        return all(w == 1 for w in self.weights)

    @property
    def is_polynomial_ring(self):
        return not self.relations

    def ambient(self):
        """The polynomial ring over the same variables (relations dropped)."""
        return GradedRing(self.variables, self.weights, (), self.field, self.order)

    def var_index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def gen(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self.var_index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.field(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def parse(self, text):
        return parse_poly(text, self)

    def monomial(self, exps, coeff=1):
        c = self.field(coeff)
        return Poly(self, {tuple(exps): c} if c else {})

    def relation_gb(self):
        """Reduced Groebner basis (list of term dicts) of the defining ideal."""
        if self._gb is None:
            from .groebner import ideal_gb_dicts
            self._gb = ideal_gb_dicts([r.terms for r in self.relations], self)
        return self._gb

    def hilbert_dim(self, d):
        """dim_k R_d, counted via standard monomials of the defining ideal."""
        if d < 0:
            return 0
        leads = [_lead_exps(g, self.order) for g in self.relation_gb()]
        return sum(1 for m in monomials_of_degree(self.weights, d)
                   if not any(mono_divides(l, m) for l in leads))

    def standard_monomials(self, d):
        leads = [_lead_exps(g, self.order) for g in self.relation_gb()]
        return [m for m in monomials_of_degree(self.weights, d)
                if not any(mono_divides(l, m) for l in leads)]


def _lead_exps(terms, order):
    return max(terms, key=order.key)


# --------------------------------------------------------------------------
# polynomials


class Poly:
    """Polynomial in a :class:`GradedRing`; immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        if terms is None:
            terms = {}
        self.terms = {m: c for m, c in terms.items() if c}

    # -- structure
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        w = self.ring.weights
        return {wdeg(m, w) for m in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    @property
    def homogeneous_degree(self):
        """Weighted degree if homogeneous and nonzero, else None."""
        ds = self.degrees()
        return next(iter(ds)) if len(ds) == 1 else None

    @property
    def degree(self):
        ds = self.degrees()
        return max(ds) if ds else None

    def is_constant(self):
        return all(not any(m) for m in self.terms)

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def lead_term(self, order=None):
        order = order or self.ring.order
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def sorted_terms(self, order=None):
        order = order or self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- arithmetic
    def _check(self, other):
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._check(other)
        F = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = F.add(out.get(m, F.zero), c)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Poly(self.ring, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        F = self.ring.field
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = F.add(out.get(m, F.zero), F.mul(c1, c2))
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c):
        F = self.ring.field
        c = F(c)
        return Poly(self.ring, {m: F.mul(v, c) for m, v in self.terms.items()})

    def monic(self):
        if not self.terms:
            return self
        _, c = self.lead_term()
        return self.scale(self.ring.field.inv(c))

    def evaluate(self, point):
        """Evaluate at a point given as a sequence of field elements."""
        F = self.ring.field
        total = F.zero
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = F.mul(v, F(x) ** e if not F.p else pow(int(F(x)), e, F.p))
            total = F.add(total, v)
        return total

    def substitute(self, images, target_ring):
        """Ring map sending variable i to ``images[i]`` (Polys in target_ring)."""
        out = target_ring.zero()
        for m, c in self.terms.items():
            t = target_ring.const(c)
            for img, e in zip(images, m):
                if e:
                    t = t * img ** e
            out = out + t
        return out

    def change_ring(self, ring, var_map=None):
        """Re-embed into ``ring``; var_map[i] is the target index of variable i."""
        n = ring.nvars
        var_map = var_map if var_map is not None else list(range(self.ring.nvars))
        out = {}
        for m, c in self.terms.items():
            e = [0] * n
            for i, k in enumerate(m):
                if k:
                    e[var_map[i]] += k
            e = tuple(e)
            out[e] = ring.field.add(out.get(e, ring.field.zero), ring.field(c))
        return Poly(ring, out)

    # -- comparison / display
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        return format_terms(self.sorted_terms(), self.ring.variables)

    def __repr__(self):
        return f"Poly({self})"


def format_coeff(c):
    return str(c)


def format_terms(items, names):
    if not items:
        return "0"
    parts = []
    for m, c in items:
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        neg = c < 0 if isinstance(c, Fraction) else False
        a = -c if neg else c
        if factors:
            body = "*".join(factors) if a == 1 else f"{format_coeff(a)}*" + "*".join(factors)
        else:
            body = format_coeff(a)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# --------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|\+|-))")


def _tokenize(text):
    pos = 0
    out = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", m.group(1), start))
        elif m.group(2):
            out.append(("var", m.group(2), start))
        else:
            out.append(("op", m.group(3), start))
        pos = m.end()
    out.append(("end", None, n))
    return out


def parse_poly(text, ring, _check_ring=True):
    """Parse ``expr := term (('+'|'-') term)*`` with
    ``term := [integer] ('*'? var ('^' posint)?)*``."""
    toks = _tokenize(text)
    F = ring.field
    i = 0
    terms = {}
    n = ring.nvars

    def peek():
        return toks[i]

    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    first = True
    while True:
        kind, val, pos = peek()
        if kind == "end":
            if first:
                raise ParseError("empty expression", pos)
            raise ParseError("expected a term", pos)
        coeff = Fraction(1)
        exps = [0] * n
        seen = False
        if kind == "num":
            coeff = Fraction(val)
            i += 1
            seen = True
        while True:
            kind, val, pos = peek()
            if kind == "op" and val == "*":
                if not seen:
                    raise ParseError("dangling '*'", pos)
                i += 1
                kind, val, pos = peek()
                if kind == "num":
                    coeff *= Fraction(val)
                    i += 1
                    continue
                if kind != "var":
                    raise ParseError("expected a variable after '*'", pos)
            if kind == "var":
                if val not in ring._index:
                    raise ParseError(f"unknown variable {val!r}", pos)
                i += 1
                e = 1
                if peek()[0] == "op" and peek()[1] == "^":
                    i += 1
                    k2, v2, p2 = peek()
                    if k2 != "num" or "/" in v2:
                        raise ParseError("expected a positive integer exponent", p2)
                    e = int(v2)
                    if e < 1:
                        raise ParseError("exponent must be positive", p2)
                    i += 1
                exps[ring._index[val]] += e
                seen = True
                continue
            break
        if not seen:
            raise ParseError("expected a term", pos)
        m = tuple(exps)
        c = F(sign * coeff)
        terms[m] = F.add(terms.get(m, F.zero), c)
        first = False
        kind, val, pos = peek()
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        raise ParseError(f"unexpected token {val!r}", pos)
    return Poly(ring, terms)


# --------------------------------------------------------------------------
# dense exact linear algebra (shared by every layer, including the oracle)


def rref(rows, field, ncols=None):
    """Reduced row echelon form.  Returns (rows, pivot_columns); input untouched."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0]) if ncols is None else ncols
    p = field.p
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for k in range(r, len(M)):
            if M[k][c]:
                piv = k
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        row = M[r]
        inv = field.inv(row[c])
        if p:
            row = [(v * inv) % p for v in row]
        else:
            row = [v * inv for v in row]
        M[r] = row
        for k in range(len(M)):
            if k != r:
                f = M[k][c]
                if f:
                    other = M[k]
                    if p:
                        M[k] = [(a - f * b) % p for a, b in zip(other, row)]
                    else:
                        M[k] = [a - f * b for a, b in zip(other, row)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows, field):
    return len(rref(rows, field)[1])


def nullspace(rows, field, ncols):
    """Basis of {v : rows * v = 0} as a list of vectors of length ncols."""
    R, piv = rref(rows, field, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for r, pc in zip(R, piv):
            v[pc] = field.neg(r[f])
        basis.append(v)
    return basis


def transpose(rows, ncols=None):
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*rows)]


def det_small(M, field):
    """Determinant by Gaussian elimination (field entries)."""
    n = len(M)
    A = [list(r) for r in M]
    d = field.one
    for c in range(n):
        piv = next((k for k in range(c, n) if A[k][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = field.neg(d)
        d = field.mul(d, A[c][c])
        inv = field.inv(A[c][c])
        for k in range(c + 1, n):
            f = field.mul(A[k][c], inv)
            if f:
                A[k] = [field.sub(a, field.mul(f, b)) for a, b in zip(A[k], A[c])]
    return d


def minors_indices(n, k):
    return list(combinations(range(n), k))


def gcd_list(values):
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
