"""Presented modules, free resolutions, Betti tables and Koszul homology."""

from __future__ import annotations

import itertools
from collections import Counter

from .core import (FreeModule, ModuleMap, Polynomial, ZeroModuleError, mono_divides,
                   mono_mul, vec_add, vec_mul_poly)
from .groebner import (SubmoduleBasis, groebner_basis, minimal_generators, normal_form,
                       syzygies)
from .linalg import rank


def _raw_poly(f):
    return f.terms if isinstance(f, Polynomial) else dict(f)


class PresentedModule:
    """M = F / <relations>, with F a graded free module.

    Generators are stored sorted by degree (heft, then degree vector) so
    that twists are reported canonically.
    """

    def __init__(self, free, relations=(), sort=True):
        ring = free.ring
        g = ring.grading
        if sort:
            order = sorted(range(free.rank), key=lambda p: (g.sort_key(free.degrees[p]), p))
            new = {old: k for k, old in enumerate(order)}
            free = FreeModule(ring, [free.degrees[p] for p in order])
            relations = [{(new[p], e): c for (p, e), c in r.items()} for r in relations]
        self.free = free
        self.relations = [dict(r) for r in relations if r]
        for r in self.relations:
            free.element_degree(r)
        self._gb = None
        self._res = None

    # -- constructors ----------------------------------------------------------
    @classmethod
    def free_module(cls, ring, degrees=(0,)):
        return cls(FreeModule(ring, degrees))

    @classmethod
    def quotient(cls, ring, polys, degree=None):
        """S(-degree) / (polys)."""
        g = ring.grading
        degree = g.zero if degree is None else g.as_degree(degree)
        F = FreeModule(ring, [degree])
        return cls(F, [{(0, e): c for e, c in _raw_poly(f).items()} for f in polys])

    @classmethod
    def ideal(cls, ring, polys):
        """The ideal generated by ``polys`` as a module, presented by its syzygies."""
        F = FreeModule(ring, [ring.grading.zero])
        gens = [{(0, e): c for e, c in _raw_poly(f).items()} for f in polys]
        gens = [v for v in gens if v]
        keep = minimal_generators(gens, F)
        gens = [gens[i] for i in keep]
        degs = [F.element_degree(v) for v in gens]
        syz = syzygies(gens, F, degs)
        return cls(syz.ambient, syz.generators)

    @classmethod
    def residue_field(cls, ring, degree=None):
        return cls.quotient(ring, ring.gens, degree)

    @classmethod
    def coker(cls, ring, target_degrees, columns):
        """Cokernel of a matrix given column by column as lists of polynomials."""
        F = FreeModule(ring, target_degrees)
        rels = []
        for col in columns:
            v = {}
            for p, f in enumerate(col):
                if not isinstance(f, Polynomial):
                    f = ring.const(f) if not isinstance(f, dict) else Polynomial(ring, f)
                for e, c in f.terms.items():
                    v[(p, e)] = c
            rels.append(v)
        return cls(F, rels)

    @classmethod
    def submodule_quotient(cls, ambient, gens, modulo=()):
        """(<gens> + <modulo>) / <modulo> inside the free module ``ambient``."""
        ring = ambient.ring
        gens = [dict(v) for v in gens if v]
        keep = minimal_generators(gens, ambient, modulo=[v for v in modulo if v])
        gens = [gens[i] for i in keep]
        r = len(gens)
        cols = gens + [dict(v) for v in modulo if v]
        degs = [ambient.element_degree(v) for v in cols]
        syz = syzygies(cols, ambient, degs)
        rels = [{t: c for t, c in s.items() if t[0] < r} for s in syz]
        return cls(FreeModule(ring, degs[:r]), rels)

    # -- basic data --------------------------------------------------------------
    @property
    def ring(self):
        return self.free.ring

    @property
    def grading(self):
        return self.free.ring.grading

    @property
    def field(self):
        return self.free.ring.field

    @property
    def presentation(self):
        g = self.grading
        src = FreeModule(self.ring, [self.free.element_degree(r) for r in self.relations])
        return ModuleMap(src, self.free, self.relations)

    def generator_degrees(self):
        return list(self.free.degrees)

    def gb(self):
        if self._gb is None:
            self._gb = groebner_basis(SubmoduleBasis(self.free, self.relations))
        return self._gb

    def normal_form(self, v):
        return normal_form(v, self.gb())

    def is_zero(self):
        return all(not self.normal_form(self.free.basis_vector(p)) for p in range(self.free.rank))

    def twist(self, a):
        """M(a)."""
        return PresentedModule(self.free.twist(a), self.relations, sort=False)

    def direct_sum(self, other):
        r = self.free.rank
        F = FreeModule(self.ring, self.free.degrees + other.free.degrees)
        rels = self.relations + [{(p + r, e): c for (p, e), c in v.items()} for v in other.relations]
        return PresentedModule(F, rels)

    def rescale(self, lam):
        """The same module over the ring with weights (and twists) times ``lam``."""
        ring = self.ring.rescale(lam)
        g = ring.grading
        F = FreeModule(ring, [g.scale(a, lam) for a in self.free.degrees])
        return PresentedModule(F, self.relations, sort=False)

    # -- graded pieces -------------------------------------------------------------
    def lead_terms(self):
        eng = self.gb().engine()
        out = {}
        for p, e in zip(eng.lpos, eng.lexp):
            out.setdefault(p, []).append(e)
        return out

    def basis(self, a):
        """Standard terms (position, exponent) spanning M_a."""
        g = self.grading
        a = g.as_degree(a)
        leads = self.lead_terms()
        out = []
        for p, d in enumerate(self.free.degrees):
            b = g.sub(a, d)
            if g.rho == 1 and b < 0:
                continue
            lp = leads.get(p, ())
            for m in g.monomials(b):
                if not any(mono_divides(l, m) for l in lp):
                    out.append((p, m))
        return out

    def hilbert_function(self, a):
        return len(self.basis(a))

    def resolution(self, max_length=None):
        if max_length is not None:
            return minimize(free_resolution(self, max_length))
        if self._res is None:
            self._res = minimize(free_resolution(self))
        return self._res

    def __repr__(self):
        return f"PresentedModule(generators={list(self.free.degrees)}, {len(self.relations)} relations)"


class ChainComplex:
    """F_0 <- F_1 <- ... <- F_l; ``maps[i-1]`` is the differential F_i -> F_{i-1}."""

    def __init__(self, modules, maps):
        self.modules = list(modules)
        self.maps = list(maps)
        if len(self.maps) != max(len(self.modules) - 1, 0):
            raise ValueError("need one differential between consecutive modules")

    @property
    def length(self):
        return len(self.modules) - 1

    @property
    def ring(self):
        return self.modules[0].ring

    def differential(self, i):
        return self.maps[i - 1]

    def twists(self):
        return [list(F.degrees) for F in self.modules]

    def check(self):
        """True when every composite of consecutive differentials vanishes."""
        for i in range(1, len(self.maps)):
            if not self.maps[i - 1].compose(self.maps[i]).is_zero():
                return False
        return True

    def is_minimal(self):
        zero = self.ring.grading.zero_exp
        return not any(t[1] == zero for d in self.maps for col in d.columns for t in col)

    def __repr__(self):
        return f"ChainComplex(ranks={[F.rank for F in self.modules]})"


def free_resolution(M, max_length=None):
    """A free resolution of M (minimal except possibly at d_1)."""
    ring = M.ring
    if max_length is None:
        max_length = ring.nvars + 1
    F0 = M.free
    rels = M.relations
    keep = minimal_generators(rels, F0)
    rels = [rels[i] for i in keep]
    modules = [F0]
    maps = []
    if max_length == 0 or not rels:
        return ChainComplex(modules, maps)
    F1 = FreeModule(ring, [F0.element_degree(r) for r in rels])
    maps.append(ModuleMap(F1, F0, rels, check=False))
    modules.append(F1)
    while len(maps) < max_length:
        d = maps[-1]
        ker = syzygies(d.columns, d.target, d.source.degrees)
        if not ker.generators:
            break
        Fi = ker.ambient
        Fn = FreeModule(ring, [Fi.element_degree(v) for v in ker.generators])
        maps.append(ModuleMap(Fn, Fi, ker.generators, check=False))
        modules.append(Fn)
    return ChainComplex(modules, maps)


def minimize(C):
    """Prune constant entries of the differentials.

    A unit u at row r, column c of d_i splits off S(-a) -> S(-a): column c of
    d_i and row r are removed after the Schur update
    col_c' -= (d[r][c'] / u) col_c, and with them row c of d_{i+1} and
    column r of d_{i-1}.  Pivots are taken lowest degree first.
    """
    if not C.maps:
        return C
    ring = C.ring
    g = ring.grading
    zero = g.zero_exp
    red, inv = ring.field.red, ring.field.inv
    degs = [list(F.degrees) for F in C.modules]
    cols = [[dict(col) for col in d.columns] for d in C.maps]
    alive = [[True] * len(d) for d in degs]
    while True:
        best = None
        for k, dk in enumerate(cols):
            for c, col in enumerate(dk):
                if not alive[k + 1][c]:
                    continue
                for (r, e) in col:
                    if e == zero:
                        key = (g.sort_key(degs[k + 1][c]), k, c, r)
                        if best is None or key < best:
                            best = key
        if best is None:
            break
        _, k, c, r = best
        dk = cols[k]
        colc = dk[c]
        uinv = inv(colc[(r, zero)])
        for c2, col2 in enumerate(dk):
            if c2 == c or not alive[k + 1][c2]:
                continue
            a = {e: red(x * uinv) for (p, e), x in col2.items() if p == r}
            if a:
                dk[c2] = vec_add(col2, vec_mul_poly(colc, a, red), red, -1)
        dk[c] = {}
        alive[k + 1][c] = False
        alive[k][r] = False
        if k + 1 < len(cols):
            cols[k + 1] = [{t: x for t, x in col.items() if t[0] != c} for col in cols[k + 1]]
        if k >= 1:
            cols[k - 1][r] = {}
    new_index = []
    modules = []
    for k, d in enumerate(degs):
        idx = {}
        for p, ok in enumerate(alive[k]):
            if ok:
                idx[p] = len(idx)
        new_index.append(idx)
        modules.append(FreeModule(ring, [d[p] for p in idx]))
    maps = []
    for k, dk in enumerate(cols):
        src, tgt = new_index[k + 1], new_index[k]
        new_cols = []
        for c in src:
            new_cols.append({(tgt[p], e): x for (p, e), x in dk[c].items() if p in tgt})
        maps.append(ModuleMap(modules[k + 1], modules[k], new_cols, check=False))
    while len(modules) > 1 and modules[-1].rank == 0:
        modules.pop()
        maps.pop()
    return ChainComplex(modules, maps)


class BettiTable:
    """Graded Betti numbers beta_{i,a}, stored as {(i, a): multiplicity}."""

    def __init__(self, entries, grading=None):
        self.entries = {k: v for k, v in entries.items() if v}
        self.grading = grading

    @classmethod
    def from_complex(cls, C):
        counts = Counter()
        for i, F in enumerate(C.modules):
            for a in F.degrees:
                counts[(i, a)] += 1
        return cls(dict(counts), C.ring.grading)

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __eq__(self, other):
        if isinstance(other, BettiTable):
            return self.entries == other.entries
        if isinstance(other, dict):
            return self.entries == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __iter__(self):
        return iter(sorted(self.entries.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))))

    def indices(self):
        return sorted({i for i, _ in self.entries})

    def degrees(self, i):
        return sorted({a for (j, a) in self.entries if j == i}, key=str if self.grading and self.grading.rho > 1 else None)

    def max_degree(self, i):
        ds = [a for (j, a) in self.entries if j == i]
        return max(ds) if ds else None

    def min_degree(self, i):
        ds = [a for (j, a) in self.entries if j == i]
        return min(ds) if ds else None

    @property
    def length(self):
        return max((i for i, _ in self.entries), default=-1)

    def total(self, i):
        return sum(v for (j, _), v in self.entries.items() if j == i)

    def format(self):
        """Rows indexed by a - i (Z-gradings), ``.`` for zero."""
        if not self.entries:
            return "0"
        if self.grading is not None and self.grading.rho > 1:
            lines = []
            for (i, a), m in sorted(self.entries.items()):
                lines.append(f"{i} {list(a)} {m}")
            return "\n".join(lines)
        cols = range(0, self.length + 1)
        rows = sorted({a - i for i, a in self.entries})
        rows = range(rows[0], rows[-1] + 1)
        labels = [f"{r}:" for r in rows]
        lw = max(len(s) for s in labels)
        cells = [[str(self.entries.get((i, r + i), ".")) for i in cols] for r in rows]
        widths = [max([len(str(i))] + [len(row[k]) for row in cells]) for k, i in enumerate(cols)]
        head = " " * lw + "".join(" " + str(i).rjust(w) for i, w in zip(cols, widths))
        lines = [head]
        for lab, row in zip(labels, cells):
            lines.append(lab.rjust(lw) + "".join(" " + s.rjust(w) for s, w in zip(row, widths)))
        return "\n".join(lines)

    def to_json(self, field_name):
        out = []
        for (i, a), m in sorted(self.entries.items()):
            deg = list(a) if isinstance(a, tuple) else [a]
            out.append({"i": i, "degree": deg, "mult": m})
        return {"field": field_name, "betti": out}

    @classmethod
    def from_json(cls, data, grading=None):
        entries = {}
        for item in data["betti"]:
            d = item["degree"]
            a = d[0] if len(d) == 1 else tuple(d)
            entries[(item["i"], a)] = item["mult"]
        return cls(entries, grading)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"BettiTable({self.entries})"


def betti_table(M):
    return BettiTable.from_complex(M.resolution())


def koszul_complex(ring):
    """The Koszul complex on all variables, with basis e_J for J in lex order."""
    g = ring.grading
    n = g.nvars
    subsets = [list(itertools.combinations(range(n), i)) for i in range(n + 1)]
    index = [{J: k for k, J in enumerate(sub)} for sub in subsets]

    def dJ(J):
        d = g.zero
        for j in J:
            d = g.add(d, g.degrees[j])
        return d

    modules = [FreeModule(ring, [dJ(J) for J in sub]) for sub in subsets]
    maps = []
    one = ring.field.one
    red = ring.field.red
    for i in range(1, n + 1):
        cols = []
        for J in subsets[i]:
            col = {}
            for pos, j in enumerate(J):
                rest = J[:pos] + J[pos + 1:]
                e = [0] * n
                e[j] = 1
                col[(index[i - 1][rest], tuple(e))] = red(one if pos % 2 == 0 else -one)
            cols.append(col)
        maps.append(ModuleMap(modules[i], modules[i - 1], cols, check=False))
    return ChainComplex(modules, maps)


def _mult_matrix_rows(M, src_basis, j):
    """Rows {target term: coeff} of multiplication by x_j on the given standard terms."""
    g = M.grading
    e = [0] * g.nvars
    e[j] = 1
    e = tuple(e)
    one = M.field.one
    eng = M.gb().engine()
    out = []
    for p, m in src_basis:
        out.append(eng.reduce({(p, mono_mul(m, e)): one}))
    return out


def tor_via_koszul(M, i, a):
    """dim_k H_i(M (x) K)_a by exact linear algebra in a single degree."""
    g = M.grading
    n = g.nvars
    a = g.as_degree(a)
    if i < 0 or i > n:
        return 0

    def chain(k):
        out = []
        for J in itertools.combinations(range(n), k):
            d = g.zero
            for j in J:
                d = g.add(d, g.degrees[j])
            for t in M.basis(g.sub(a, d)):
                out.append((J, t))
        return out

    def drank(k):
        # rank of H: C_k -> C_{k-1}
        if k < 1 or k > n:
            return 0
        src = chain(k)
        if not src:
            return 0
        tgt_index = {}
        for J, t in chain(k - 1):
            tgt_index[(J, t)] = len(tgt_index)
        red = M.field.red
        eng = M.gb().engine()
        rows = []
        for J, (p, m) in src:
            row = {}
            for pos, j in enumerate(J):
                rest = J[:pos] + J[pos + 1:]
                e = list(m)
                e[j] += 1
                nf = eng.reduce({(p, tuple(e)): M.field.one})
                s = 1 if pos % 2 == 0 else -1
                for t, c in nf.items():
                    col = tgt_index[(rest, t)]
                    x = red(row.get(col, 0) + s * c)
                    if x:
                        row[col] = x
                    else:
                        row.pop(col, None)
            rows.append(row)
        return rank(rows, M.field)

    dim = len(chain(i))
    if not dim:
        return 0
    return dim - drank(i) - drank(i + 1)


def projective_dimension(M):
    if M.is_zero():
        raise ZeroModuleError("projective dimension of the zero module")
    return M.resolution().length


def depth(M):
    """Auslander-Buchsbaum: depth = (n+1) - pd."""
    return M.ring.nvars - projective_dimension(M)


def hilbert_function(M, a):
    return M.hilbert_function(a)


def hilbert_numerator(M):
    """K(t) = sum (-1)^i beta_{i,j} t^(heft degree j), as {exponent: coefficient}."""
    g = M.grading
    out = Counter()
    for (i, a), m in betti_table(M).entries.items():
        out[g.heft_of(a)] += (-1) ** i * m
    return {k: v for k, v in out.items() if v}


def krull_dimension(M):
    """(n+1) minus the multiplicity of t = 1 as a root of the Hilbert numerator."""
    if M.is_zero():
        raise ZeroModuleError("dimension of the zero module")
    num = hilbert_numerator(M)
    lo = min(num)
    coeffs = [num.get(k, 0) for k in range(lo, max(num) + 1)]
    order = 0
    while True:
        if sum(coeffs) != 0:
            break
        # divide by (t - 1): synthetic division from the top
        q = []
        acc = 0
        for c in reversed(coeffs):
            acc = acc + c
            q.append(acc)
        q.pop()
        coeffs = list(reversed(q))
        order += 1
    return M.ring.nvars - order


def is_cohen_macaulay(M):
    return depth(M) == krull_dimension(M)
