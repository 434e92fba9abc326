"""Exact fields, gradings, polynomials and free modules.

Polynomials are dicts ``{exponent tuple: coefficient}``.  Elements of a free
module are dicts ``{(position, exponent tuple): coefficient}``; the engine
works on these raw dicts, and :class:`Polynomial` is a thin user-facing
wrapper.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from operator import add as _add

import gmpy2


class GradingError(ValueError):
    pass


class HomogeneityError(ValueError):
    pass


class ZeroModuleError(ValueError):
    pass


def _identity(x):
    return x


class Field:
    """The rationals (``characteristic=0``) or a prime field GF(p)."""

    def __init__(self, characteristic=0):
        characteristic = int(characteristic)
        if characteristic < 0 or characteristic == 1:
            raise ValueError("characteristic must be 0 or a prime")
        if characteristic and not gmpy2.is_prime(characteristic):
            raise ValueError(f"{characteristic} is not prime")
        self.characteristic = characteristic
        if characteristic:
            p = characteristic
            self.red = lambda x: x % p
        else:
            self.red = _identity
        self.zero = self(0)
        self.one = self(1)

    @property
    def name(self):
        return f"GF({self.characteristic})" if self.characteristic else "QQ"

    def __call__(self, x):
        p = self.characteristic
        if isinstance(x, str):
            x = gmpy2.mpq(x)
        if not p:
            return gmpy2.mpq(x)
        if isinstance(x, (Fraction, type(gmpy2.mpq(0)))):
            return int(x.numerator) * pow(int(x.denominator), -1, p) % p
        return int(x) % p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic:
            return pow(int(x), -1, self.characteristic)
        return gmpy2.mpq(1) / x

    def to_str(self, c):
        return str(c)

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return self.name


QQ = Field(0)


def GF(p=32003):
    return Field(p)


def _as_degree(d):
    if isinstance(d, (list, tuple)):
        return tuple(int(x) for x in d)
    return int(d)


@lru_cache(maxsize=None)
def _enumerate(h, ws):
    """All exponent tuples e with sum(e_i * ws_i) == h (ws positive)."""
    if h < 0:
        return ()
    if not ws:
        return ((),) if h == 0 else ()
    w = ws[0]
    if len(ws) == 1:
        return ((h // w,),) if h % w == 0 else ()
    out = []
    for e in range(h // w, -1, -1):
        for rest in _enumerate(h - e * w, ws[1:]):
            out.append((e,) + rest)
    return tuple(out)


def _find_heft(degs, bound=64):
    """Smallest integer functional positive on every variable degree."""
    rho = len(degs[0])
    for k in range(1, bound + 1):
        cands = [c for c in itertools.product(range(-k, k + 1), repeat=rho)
                 if max(abs(x) for x in c) == k]
        cands.sort(key=lambda c: (sum(abs(x) for x in c), [-x for x in c]))
        for c in cands:
            if all(sum(a * b for a, b in zip(c, d)) > 0 for d in degs):
                return c
    return None


class Grading:
    """Degrees of the variables of S = k[x_0..x_n].

    ``degrees`` is a sequence of positive integers (Z-grading) or of integer
    vectors (a class-group grading).  In the Z-graded case the variables are
    re-sorted so the weights ascend; ``perm[k]`` is the original index of the
    variable stored in slot ``k``.  Every grading carries a *heft*: an integer
    functional positive on all variable degrees, which drives degree-by-degree
    Groebner computations and the monomial order.
    """

    def __init__(self, degrees):
        degs = [_as_degree(d) for d in degrees]
        if not degs:
            raise GradingError("a grading needs at least one variable")
        if all(isinstance(d, tuple) and len(d) == 1 for d in degs):
            degs = [d[0] for d in degs]
        if all(isinstance(d, int) for d in degs):
            if any(d < 1 for d in degs):
                raise GradingError(f"weights must be positive integers, got {degs}")
            self.rho = 1
            self.perm = tuple(sorted(range(len(degs)), key=lambda i: (degs[i], i)))
            self.degrees = tuple(degs[i] for i in self.perm)
            self.heft = (1,)
            self.hweights = self.degrees
            self.zero = 0
        else:
            if not all(isinstance(d, tuple) for d in degs) or len({len(d) for d in degs}) != 1:
                raise GradingError("degree vectors must all have the same length")
            self.rho = len(degs[0])
            if any(not any(d) for d in degs):
                raise GradingError("a variable of degree zero makes graded pieces infinite")
            heft = _find_heft(degs)
            if heft is None:
                raise GradingError(f"grading {degs} is not pointed (no positive functional found)")
            self.perm = tuple(range(len(degs)))
            self.degrees = tuple(degs)
            self.heft = heft
            self.hweights = tuple(sum(a * b for a, b in zip(heft, d)) for d in degs)
            self.zero = (0,) * self.rho
        self.nvars = len(self.degrees)
        self.zero_exp = (0,) * self.nvars
        self._keys = {}
        self._monos = {}

    # -- degree arithmetic -------------------------------------------------
    def degree(self, exp):
        if len(exp) != self.nvars:
            raise ValueError(f"exponent {exp} has length {len(exp)}, expected {self.nvars}")
        if self.rho == 1:
            return sum(e * w for e, w in zip(exp, self.degrees))
        return tuple(sum(e * d[k] for e, d in zip(exp, self.degrees)) for k in range(self.rho))

    def hdeg(self, exp):
        return sum(e * w for e, w in zip(exp, self.hweights))

    def heft_of(self, a):
        if self.rho == 1:
            return a
        return sum(x * h for x, h in zip(a, self.heft))

    def add(self, a, b):
        if self.rho == 1:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        if self.rho == 1:
            return a - b
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        if self.rho == 1:
            return -a
        return tuple(-x for x in a)

    def scale(self, a, lam):
        if self.rho == 1:
            return a * lam
        return tuple(x * lam for x in a)

    def as_degree(self, a):
        a = _as_degree(a)
        if self.rho == 1:
            if isinstance(a, tuple):
                if len(a) != 1:
                    raise GradingError(f"degree {a} does not match a Z-grading")
                a = a[0]
            return a
        if not isinstance(a, tuple) or len(a) != self.rho:
            raise GradingError(f"degree {a} must be a vector of length {self.rho}")
        return a

    def sort_key(self, a):
        """Total order on degrees used to sort generator twists."""
        return (self.heft_of(a), a)

    def var_degree(self, i):
        return self.degrees[i]

    # -- monomial order ------------------------------------------------------
    def key(self, exp):
        """Sort key; ascending keys list monomials in *descending* order.

        Degree (heft) first, ties broken reverse-lexicographically.
        """
        k = self._keys.get(exp)
        if k is None:
            k = (-self.hdeg(exp), exp[::-1])
            self._keys[exp] = k
        return k

    def monomial_compare(self, m1, m2):
        """Return 1, 0 or -1 as m1 is greater than, equal to or less than m2."""
        k1, k2 = self.key(tuple(m1)), self.key(tuple(m2))
        if k1 == k2:
            return 0
        return 1 if k1 < k2 else -1

    # -- graded pieces -----------------------------------------------------
    def monomials_hdeg(self, h):
        return _enumerate(h, self.hweights)

    def monomials(self, a):
        """Exponents of all monomials of degree ``a``, in descending order."""
        res = self._monos.get(a)
        if res is None:
            if self.rho == 1:
                res = list(_enumerate(a, self.degrees)) if a >= 0 else []
            else:
                res = [m for m in _enumerate(self.heft_of(a), self.hweights)
                       if self.degree(m) == a]
            res.sort(key=self.key)
            res = tuple(res)
            self._monos[a] = res
        return res

    def graded_piece_dim(self, a):
        return len(self.monomials(self.as_degree(a)))

    # -- Koszul degree invariants (Z-graded only) ---------------------------
    def _require_z(self):
        if self.rho != 1:
            raise GradingError("this invariant is defined for Z-gradings only")

    def w_upper(self, i):
        """Sum of the i largest weights, with w^{-1} = -1; capped at i = n+1."""
        self._require_z()
        if i == -1:
            return -1
        if i < -1:
            raise ValueError("index below -1")
        i = min(i, self.nvars)
        return sum(self.degrees[self.nvars - i:]) if i else 0

    def w_lower(self, i):
        """Sum of the i smallest weights, with w_{-1} = -1; capped at i = n+1."""
        self._require_z()
        if i == -1:
            return -1
        if i < -1:
            raise ValueError("index below -1")
        return sum(self.degrees[:min(i, self.nvars)])

    def koszul_degree_bounds(self):
        """(w_0..w_{n+1}, w^0..w^{n+1})."""
        self._require_z()
        r = range(self.nvars + 1)
        return tuple(self.w_lower(i) for i in r), tuple(self.w_upper(i) for i in r)

    def sigma(self):
        self._require_z()
        return sum(d - 1 for d in self.degrees)

    def total_weight(self):
        self._require_z()
        return sum(self.degrees)

    def rescale(self, lam):
        self._require_z()
        return Grading([d * lam for d in self.degrees])

    def __eq__(self, other):
        return isinstance(other, Grading) and self.degrees == other.degrees

    def __hash__(self):
        return hash(self.degrees)

    def __repr__(self):
        return f"Grading({list(self.degrees)})"


def weighted_degree(exp, grading):
    return grading.degree(tuple(exp))


def koszul_degree_bounds(grading):
    return grading.koszul_degree_bounds()


def sigma(grading):
    return grading.sigma()


def graded_piece_dim(grading, a):
    return grading.graded_piece_dim(a)


def monomial_compare(m1, m2, grading):
    return grading.monomial_compare(m1, m2)


# -- raw polynomial / vector helpers ----------------------------------------

def mono_mul(a, b):
    return tuple(map(_add, a, b))


def mono_divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def vec_add(u, v, red, scale=1):
    """u + scale * v as a new dict."""
    out = dict(u)
    for t, c in v.items():
        x = out.get(t)
        if x is None:
            x = red(scale * c)
        else:
            x = red(x + scale * c)
        if x:
            out[t] = x
        else:
            out.pop(t, None)
    return out


def vec_scale(v, c, red):
    if not c:
        return {}
    return {t: red(c * x) for t, x in v.items()}


def vec_mul_mono(v, m):
    return {(p, mono_mul(e, m)): c for (p, e), c in v.items()}


def vec_mul_poly(v, poly, red):
    out = {}
    for m, a in poly.items():
        for (p, e), c in v.items():
            t = (p, mono_mul(e, m))
            x = out.get(t, 0) + a * c
            x = red(x)
            if x:
                out[t] = x
            else:
                out.pop(t, None)
    return out


def poly_mul(f, g, red):
    out = {}
    for m, a in f.items():
        for e, b in g.items():
            t = mono_mul(m, e)
            x = red(out.get(t, 0) + a * b)
            if x:
                out[t] = x
            else:
                out.pop(t, None)
    return out


def vec_entry(v, pos):
    return {e: c for (p, e), c in v.items() if p == pos}


def vec_reindex(v, mapping):
    """Move positions through ``mapping`` (dict old -> new); dropped if absent."""
    return {(mapping[p], e): c for (p, e), c in v.items() if p in mapping}


class Polynomial:
    """A polynomial in a :class:`Ring`, immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        red = ring.field.red
        self.terms = {}
        for e, c in (terms or {}).items():
            c = ring.field(c) if not isinstance(c, int) or ring.field.characteristic else c
            c = red(c)
            if c:
                self.terms[tuple(e)] = c

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other.terms
        c = self.ring.field(other)
        return {self.ring.grading.zero_exp: c} if c else {}

    def __add__(self, other):
        red = self.ring.field.red
        out = dict(self.terms)
        for e, c in self._coerce(other).items():
            x = red(out.get(e, 0) + c)
            if x:
                out[e] = x
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        red = self.ring.field.red
        return Polynomial._raw(self.ring, {e: red(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Polynomial._raw(self.ring, self._coerce(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return Polynomial._raw(self.ring, poly_mul(self.terms, self._coerce(other), self.ring.field.red))

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Polynomial._raw(self.ring, {self.ring.grading.zero_exp: self.ring.field.one})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_homogeneous(self):
        g = self.ring.grading
        return len({g.degree(e) for e in self.terms}) <= 1

    def degree(self):
        g = self.ring.grading
        degs = {g.degree(e) for e in self.terms}
        if len(degs) != 1:
            if not degs:
                raise ValueError("the zero polynomial has no degree")
            raise HomogeneityError(f"{self} is not homogeneous")
        return degs.pop()

    def lead_exponent(self):
        return min(self.terms, key=self.ring.grading.key)

    def __str__(self):
        return self.ring.format_poly(self.terms)

    def __repr__(self):
        return f"Polynomial({self})"


class Ring:
    """S = k[x_0..x_n] with a grading; variables are exposed in input order."""

    def __init__(self, degrees, field=QQ, names=None):
        self.grading = Grading(degrees)
        self.field = field
        n = self.grading.nvars
        if names is None:
            names = [f"x{i}" for i in range(n)]
        names = list(names)
        if len(names) != n or len(set(names)) != n:
            raise ValueError("need one distinct name per variable")
        self.names = tuple(names)
        self.slot = {self.grading.perm[k]: k for k in range(n)}
        self.internal_names = tuple(names[self.grading.perm[k]] for k in range(n))

    @property
    def nvars(self):
        return self.grading.nvars

    def var(self, which):
        i = self.names.index(which) if isinstance(which, str) else int(which)
        e = [0] * self.nvars
        e[self.slot[i]] = 1
        return Polynomial._raw(self, {tuple(e): self.field.one})

    @property
    def gens(self):
        return tuple(self.var(i) for i in range(self.nvars))

    def const(self, c):
        c = self.field(c)
        return Polynomial._raw(self, {self.grading.zero_exp: c} if c else {})

    def poly(self, terms):
        return Polynomial(self, terms)

    def format_mono(self, e):
        parts = []
        for k in range(self.nvars):
            if e[k] == 1:
                parts.append(self.internal_names[k])
            elif e[k] > 1:
                parts.append(f"{self.internal_names[k]}^{e[k]}")
        return "*".join(parts)

    def format_poly(self, terms):
        if not terms:
            return "0"
        out = []
        for e in sorted(terms, key=self.grading.key):
            c = terms[e]
            mono = self.format_mono(e)
            cs = str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def rescale(self, lam):
        """The same ring with every weight multiplied by ``lam``."""
        g = self.grading
        degs = [0] * self.nvars
        for k in range(self.nvars):
            degs[g.perm[k]] = g.degrees[k] * lam
        return Ring(degs, self.field, self.names)

    def __eq__(self, other):
        return (isinstance(other, Ring) and self.grading == other.grading
                and self.field == other.field and self.names == other.names)

    def __hash__(self):
        return hash((self.grading, self.field, self.names))

    def __repr__(self):
        g = self.grading
        orig = [None] * self.nvars
        for k in range(self.nvars):
            orig[g.perm[k]] = g.degrees[k]
        return f"Ring(degrees={orig}, field={self.field.name})"


class FreeModule:
    """The graded free module with generators in the given degrees.

    A generator of degree ``a`` spans a copy of S(-a).
    """

    def __init__(self, ring, degrees=()):
        self.ring = ring
        g = ring.grading
        self.degrees = tuple(g.as_degree(a) for a in degrees)
        self.hdegrees = tuple(g.heft_of(a) for a in self.degrees)

    @property
    def rank(self):
        return len(self.degrees)

    def term_degree(self, t):
        p, e = t
        return self.ring.grading.add(self.degrees[p], self.ring.grading.degree(e))

    def is_homogeneous(self, v):
        return len({self.term_degree(t) for t in v}) <= 1

    def element_degree(self, v):
        degs = {self.term_degree(t) for t in v}
        if len(degs) != 1:
            if not degs:
                raise ValueError("the zero vector has no degree")
            raise HomogeneityError("vector is not homogeneous")
        return degs.pop()

    def vector(self, entries):
        """Build a vector from a list of Polynomials (or coefficients)."""
        if len(entries) != self.rank:
            raise ValueError(f"expected {self.rank} entries, got {len(entries)}")
        out = {}
        for p, f in enumerate(entries):
            if not isinstance(f, Polynomial):
                f = self.ring.const(f)
            for e, c in f.terms.items():
                out[(p, e)] = c
        return out

    def basis_vector(self, p):
        return {(p, self.ring.grading.zero_exp): self.ring.field.one}

    def coordinates(self, v):
        return [Polynomial._raw(self.ring, vec_entry(v, p)) for p in range(self.rank)]

    def twist(self, a):
        """F(a): every generator degree drops by ``a``."""
        g = self.ring.grading
        a = g.as_degree(a)
        return FreeModule(self.ring, [g.sub(d, a) for d in self.degrees])

    def dual(self):
        g = self.ring.grading
        return FreeModule(self.ring, [g.neg(d) for d in self.degrees])

    def __eq__(self, other):
        return isinstance(other, FreeModule) and self.ring == other.ring and self.degrees == other.degrees

    def __hash__(self):
        return hash((self.ring, self.degrees))

    def __repr__(self):
        return f"FreeModule({list(self.degrees)})"


class ModuleMap:
    """A homogeneous map ``source -> target`` stored by columns."""

    def __init__(self, source, target, columns, check=True):
        self.source = source
        self.target = target
        self.columns = [dict(c) for c in columns]
        if len(self.columns) != source.rank:
            raise ValueError("one column per source generator is required")
        if check:
            for c, col in enumerate(self.columns):
                for t in col:
                    if t[0] >= target.rank:
                        raise ValueError("column entry outside the target module")
                if col and target.element_degree(col) != source.degrees[c]:
                    raise HomogeneityError(
                        f"column {c} has degree {target.element_degree(col)}, "
                        f"expected {source.degrees[c]}")

    @property
    def ring(self):
        return self.source.ring

    def entry(self, r, c):
        return Polynomial._raw(self.ring, vec_entry(self.columns[c], r))

    def __call__(self, v):
        red = self.ring.field.red
        out = {}
        for (p, e), c in v.items():
            out = vec_add(out, vec_mul_mono(self.columns[p], e), red, c)
        return out

    def compose(self, other):
        """self o other."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return ModuleMap(other.source, self.target, [self(col) for col in other.columns], check=False)

    def is_zero(self):
        return not any(self.columns)

    def rows(self):
        """Row r as a dict {(c, exp): coeff}."""
        rows = [{} for _ in range(self.target.rank)]
        for c, col in enumerate(self.columns):
            for (r, e), x in col.items():
                rows[r][(c, e)] = x
        return rows

    def transpose(self):
        """The dual map target^* -> source^*."""
        return ModuleMap(self.target.dual(), self.source.dual(), self.rows(), check=False)

    def __repr__(self):
        return f"ModuleMap({self.target.rank}x{self.source.rank})"
