"""Buchberger's algorithm for homogeneous submodules of graded free modules.

Terms of a free module are ordered position-over-term: a smaller position
index is larger, and within a position monomials compare by heft degree then
reverse-lexicographically.  All inputs are homogeneous, so the computation
proceeds degree by degree; this makes truncated bases, minimal generators and
minimal syzygies fall out of a single run.
"""

from __future__ import annotations

from collections import defaultdict
from heapq import heapify, heappop, heappush

from .core import (FreeModule, HomogeneityError, ModuleMap, mono_div, mono_divides,
                   mono_lcm, mono_mul, vec_add, vec_mul_mono, vec_scale)


class ResourceError(RuntimeError):
    """A configured computation ceiling was exceeded."""


DEFAULT_MAX_PAIRS = 2_000_000
MAX_SATURATION_STEPS = 64


class _Engine:
    def __init__(self, ring, twists_h, split=None, max_pairs=DEFAULT_MAX_PAIRS):
        g = ring.grading
        self.red = ring.field.red
        self.inv = ring.field.inv
        self.one = ring.field.one
        self.mkey = g.key
        self.hdeg = g.hdeg
        self.th = tuple(twists_h)
        self.split = split
        self.rank1 = len(self.th) == 1
        self.elems = []
        self.lpos = []
        self.lexp = []
        self.by_pos = defaultdict(list)
        self.pairs = defaultdict(list)
        self.pending = set()
        self.max_pairs = max_pairs
        self.npairs = 0
        self.tail_new = []
        self.survivors = []
        self._tk = {}

    def tkey(self, t):
        k = self._tk.get(t)
        if k is None:
            k = (t[0], self.mkey(t[1]))
            self._tk[t] = k
        return k

    def lead(self, v):
        return min(v, key=self.tkey)

    def find(self, pos, exp, exclude=-1):
        lexp = self.lexp
        for i in self.by_pos.get(pos, ()):
            if i != exclude and mono_divides(lexp[i], exp):
                return i
        return None

    def reduce(self, v, exclude=-1):
        """Full normal form of ``v`` modulo the current basis."""
        red = self.red
        tkey = self.tkey
        p = dict(v)
        heap = [(tkey(t), t) for t in p]
        heapify(heap)
        rem = {}
        while heap:
            t = heappop(heap)[1]
            c = p.pop(t, None)
            if c is None:
                continue
            pos, exp = t
            i = self.find(pos, exp, exclude)
            if i is None:
                rem[t] = c
                continue
            le = self.lexp[i]
            shift = mono_div(exp, le)
            for (q, e), gc in self.elems[i].items():
                if q == pos and e == le:
                    continue
                nt = (q, mono_mul(e, shift))
                old = p.get(nt)
                if old is None:
                    p[nt] = red(-c * gc)
                    heappush(heap, (tkey(nt), nt))
                else:
                    x = red(old - c * gc)
                    if x:
                        p[nt] = x
                    else:
                        del p[nt]
        return rem

    def load(self, v):
        t = self.lead(v)
        idx = len(self.elems)
        self.elems.append(v)
        self.lpos.append(t[0])
        self.lexp.append(t[1])
        self.by_pos[t[0]].append(idx)
        return idx

    def add(self, v):
        t = self.lead(v)
        c = v[t]
        if c != 1:
            v = vec_scale(v, self.inv(c), self.red)
        pos, le = t
        idx = len(self.elems)
        for j in self.by_pos.get(pos, ()):
            lj = self.lexp[j]
            if self.rank1 and not any(a and b for a, b in zip(le, lj)):
                continue
            d = self.hdeg(mono_lcm(le, lj)) + self.th[pos]
            self.pairs[d].append((j, idx))
            self.pending.add((j, idx))
        self.elems.append(v)
        self.lpos.append(pos)
        self.lexp.append(le)
        self.by_pos[pos].append(idx)
        return idx

    def _spair(self, j, i):
        self.pending.discard((j, i))
        pos = self.lpos[i]
        L = mono_lcm(self.lexp[i], self.lexp[j])
        pending = self.pending
        for k in self.by_pos[pos]:
            if k == i or k == j:
                continue
            if (mono_divides(self.lexp[k], L)
                    and (min(i, k), max(i, k)) not in pending
                    and (min(j, k), max(j, k)) not in pending):
                return None
        a = vec_mul_mono(self.elems[j], mono_div(L, self.lexp[j]))
        b = vec_mul_mono(self.elems[i], mono_div(L, self.lexp[i]))
        return vec_add(a, b, self.red, -1)

    def run(self, inputs, degree_limit=None):
        """Process ``inputs`` = [(vector, priority, heft degree)] degree by degree.

        At each degree, S-pairs come first (pairs whose lead lies below
        ``split`` before the others), then inputs in priority order.
        """
        inp = defaultdict(list)
        for idx, (v, prio, h) in enumerate(inputs):
            if v:
                inp[h].append((prio, idx, v))
        split = self.split
        while True:
            cands = [d for d, lst in self.pairs.items() if lst]
            cands.extend(inp)
            if not cands:
                break
            d = min(cands)
            if degree_limit is not None and d > degree_limit:
                break
            plist = self.pairs.pop(d, [])
            if split is not None:
                plist.sort(key=lambda p: (self.lpos[p[0]] < split, p))
            else:
                plist.sort()
            for j, i in plist:
                self.npairs += 1
                if self.npairs > self.max_pairs:
                    raise ResourceError(f"S-pair ceiling {self.max_pairs} exceeded")
                s = self._spair(j, i)
                if s is None:
                    continue
                r = self.reduce(s)
                if r:
                    k = self.add(r)
                    if split is not None and self.lpos[k] >= split and self.lpos[j] < split:
                        self.tail_new.append(k)
            for prio, idx, v in sorted(inp.pop(d, ()), key=lambda x: (x[0], x[1])):
                r = self.reduce(v)
                if r:
                    k = self.add(r)
                    self.survivors.append((idx, k))
                    if split is not None and self.lpos[k] >= split:
                        self.tail_new.append(k)
        return self

    def interreduce(self):
        for i, v in enumerate(self.elems):
            lt = (self.lpos[i], self.lexp[i])
            tail = {t: c for t, c in v.items() if t != lt}
            r = self.reduce(tail, exclude=i)
            r[lt] = self.one
            self.elems[i] = r

    def sorted_basis(self):
        order = sorted(range(len(self.elems)), key=lambda i: self.tkey((self.lpos[i], self.lexp[i])))
        return [self.elems[i] for i in order]


class SubmoduleBasis:
    """Homogeneous generators of a submodule of ``ambient``."""

    def __init__(self, ambient, generators, is_gb=False):
        self.ambient = ambient
        self.generators = [dict(g) for g in generators if g]
        self.is_gb = is_gb
        self._engine = None
        for g in self.generators:
            ambient.element_degree(g)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @property
    def ring(self):
        return self.ambient.ring

    def degrees(self):
        return [self.ambient.element_degree(g) for g in self.generators]

    def engine(self):
        if not self.is_gb:
            raise ValueError("normal forms need a Groebner basis")
        if self._engine is None:
            eng = _Engine(self.ring, self.ambient.hdegrees)
            for g in self.generators:
                eng.load(g)
            self._engine = eng
        return self._engine

    def leading_terms(self):
        eng = self.engine()
        return list(zip(eng.lpos, eng.lexp))

    def contains(self, v):
        return not normal_form(v, self)

    def __eq__(self, other):
        if not isinstance(other, SubmoduleBasis) or not (self.is_gb and other.is_gb):
            return NotImplemented
        return self.ambient == other.ambient and self.generators == other.generators

    def __repr__(self):
        return f"SubmoduleBasis({len(self.generators)} gens in rank {self.ambient.rank}, gb={self.is_gb})"


def _heft_inputs(ambient, gens, prio=1):
    g = ambient.ring.grading
    out = []
    for v in gens:
        if v:
            out.append((v, prio, g.heft_of(ambient.element_degree(v))))
    return out


def groebner_basis(b, degree_limit=None, max_pairs=DEFAULT_MAX_PAIRS):
    """Reduced Groebner basis of the submodule generated by ``b``."""
    if b.is_gb and degree_limit is None:
        return b
    eng = _Engine(b.ring, b.ambient.hdegrees, max_pairs=max_pairs)
    eng.run(_heft_inputs(b.ambient, b.generators), degree_limit)
    eng.interreduce()
    return SubmoduleBasis(b.ambient, eng.sorted_basis(), is_gb=degree_limit is None)


def normal_form(v, gb):
    if not gb.is_gb:
        raise ValueError("normal_form needs a Groebner basis")
    for t in v:
        if t[0] >= gb.ambient.rank:
            raise ValueError("vector does not live in the ambient module of the basis")
    return gb.engine().reduce(v)


def syzygies(generators, ambient, degrees=None, minimal=True, max_pairs=DEFAULT_MAX_PAIRS):
    """Syzygies of ``generators`` (vectors in ``ambient``).

    Returns a SubmoduleBasis of ``FreeModule(degrees)``, where ``degrees``
    are the generator degrees (required when some generator is zero).  With
    ``minimal`` the result is a minimal generating set; otherwise it is the
    full Groebner basis of the syzygy module read off the elimination.
    """
    ring = ambient.ring
    g = ring.grading
    if degrees is None:
        degrees = [ambient.element_degree(v) for v in generators]
    degrees = [g.as_degree(a) for a in degrees]
    for v, a in zip(generators, degrees):
        if v and ambient.element_degree(v) != a:
            raise HomogeneityError("generator degree does not match the declared degree")
    source = FreeModule(ring, degrees)
    r = ambient.rank
    zero = g.zero_exp
    aug = []
    for j, v in enumerate(generators):
        w = dict(v)
        w[(r + j, zero)] = ring.field.one
        aug.append((w, 1, g.heft_of(degrees[j])))
    eng = _Engine(ring, ambient.hdegrees + source.hdegrees, split=r, max_pairs=max_pairs)
    eng.run(aug)
    if minimal:
        idxs = eng.tail_new
    else:
        eng.interreduce()
        idxs = [k for k in range(len(eng.elems)) if eng.lpos[k] >= r]
    syz = [{(p - r, e): c for (p, e), c in eng.elems[k].items()} for k in idxs]
    syz.sort(key=lambda v: (g.heft_of(source.element_degree(v)), eng.tkey(eng.lead(v))))
    return SubmoduleBasis(source, syz, is_gb=False)


def kernel(f, minimal=True):
    """Generators of ker(f) as a submodule of ``f.source``."""
    return syzygies(f.columns, f.target, f.source.degrees, minimal=minimal)


def minimal_generators(generators, ambient, modulo=()):
    """Indices of a minimal generating subset of (<generators> + <modulo>) / <modulo>."""
    base = _heft_inputs(ambient, modulo, prio=0)
    gens = _heft_inputs(ambient, [v for v in generators], prio=1)
    nonzero = [i for i, v in enumerate(generators) if v]
    eng = _Engine(ambient.ring, ambient.hdegrees)
    eng.run(base + gens)
    offset = len(base)
    return sorted(nonzero[idx - offset] for idx, _ in eng.survivors if idx >= offset)


def colon(generators, ambient, ideal):
    """Generators of (N :_F I) for N = <generators> in F = ambient, I = <ideal>.

    ``ideal`` is a list of homogeneous polynomial dicts.  Computed as the
    kernel of F + N^s -> F^s, u -> (f_1 u, ..., f_s u).
    """
    ring = ambient.ring
    g = ring.grading
    red = ring.field.red
    r = ambient.rank
    ideal = [f for f in ideal if f]
    fdeg = [g.degree(next(iter(f))) for f in ideal]
    target_deg = [g.sub(a, d) for d in fdeg for a in ambient.degrees]
    target = FreeModule(ring, target_deg)
    cols, sdeg = [], []
    for p in range(r):
        col = {}
        for k, f in enumerate(ideal):
            for m, c in f.items():
                col[(k * r + p, m)] = red(c)
        cols.append(col)
        sdeg.append(ambient.degrees[p])
    for k, d in enumerate(fdeg):
        for n in generators:
            if not n:
                continue
            cols.append({(k * r + p, e): c for (p, e), c in n.items()})
            sdeg.append(g.sub(ambient.element_degree(n), d))
    ker = syzygies(cols, target, sdeg)
    out = []
    for v in ker:
        u = {t: c for t, c in v.items() if t[0] < r}
        if u:
            out.append(u)
    return SubmoduleBasis(ambient, out)


class TorsionResult:
    """H^0_I(M) = (0 :_M I^infinity) for M = F/N."""

    def __init__(self, generators, saturation, relations, steps):
        self.generators = generators
        self.saturation = saturation
        self.relations = relations
        self.steps = steps

    def is_zero(self):
        return not self.generators

    def __repr__(self):
        return f"TorsionResult({len(self.generators)} generators, stabilized after {self.steps} steps)"


def saturate(ambient, relations, ideal, max_steps=MAX_SATURATION_STEPS):
    """(N : I^infinity) with the number of colon steps until stabilization."""
    cur = groebner_basis(SubmoduleBasis(ambient, relations))
    for t in range(max_steps):
        nxt = groebner_basis(colon(cur.generators, ambient, ideal))
        if nxt.generators == cur.generators:
            return cur, t
        cur = nxt
    raise ResourceError(f"saturation did not stabilize within {max_steps} steps")


def torsion_submodule(M, ideal, max_steps=MAX_SATURATION_STEPS):
    """Generators of H^0_I(M) as elements of the free module presenting M."""
    ideal = [f.terms if hasattr(f, "terms") else f for f in ideal]
    relations = M.relations
    sat, steps = saturate(M.free, relations, ideal, max_steps)
    rel_gb = groebner_basis(SubmoduleBasis(M.free, relations))
    keep = minimal_generators(sat.generators, M.free, modulo=rel_gb.generators)
    gens = [sat.generators[i] for i in keep]
    return TorsionResult(gens, sat, rel_gb, steps)
