"""Simplicial projective fans, their Cox rings, primitive collections, the
functionals deg_I, and the Betti polytope checks over Cox rings."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .core import FreeModule, GradingError, ModuleMap, Ring, QQ
from .groebner import kernel, minimal_generators, torsion_submodule
from .linalg import (hermite_normal_form, integer_determinant, rank_dense,
                     smith_normal_form, solve_rational)
from .resolution import BettiTable, PresentedModule, betti_table


class FanError(ValueError):
    pass


class TruncationWindowError(RuntimeError):
    """The multigraded truncation did not stabilize within the window cap."""


def _rank_int(rows):
    return rank_dense([[Fraction(x) for x in r] for r in rows], QQ) if rows else 0


def _gcd_list(xs):
    g = 0
    for x in xs:
        g = math.gcd(g, int(x))
    return g


class FanData:
    """Rays (integer vectors in Z^m) and maximal cones (sets of ray indices)."""

    def __init__(self, rays, cones):
        self.rays = [tuple(int(x) for x in r) for r in rays]
        self.cones = [tuple(sorted(int(i) for i in c)) for c in cones]
        if not self.rays:
            raise FanError("a fan needs rays")
        self.dim = len(self.rays[0])
        if any(len(r) != self.dim for r in self.rays):
            raise FanError("rays must all have the same length")
        n = len(self.rays)
        for c in self.cones:
            if any(i < 0 or i >= n for i in c):
                raise FanError(f"cone {c} refers to a missing ray")
            if _rank_int([self.rays[i] for i in c]) != len(c):
                raise FanError(f"cone {c} is not simplicial")
        used = set(itertools.chain.from_iterable(self.cones))
        if used != set(range(n)):
            raise FanError(f"rays {sorted(set(range(n)) - used)} lie in no maximal cone")
        if _rank_int(self.rays) != self.dim:
            raise FanError("rays do not span the ambient space")
        self._check_intersections()

    @property
    def nrays(self):
        return len(self.rays)

    def cone_coordinates(self, cone, v):
        """Coefficients of v on the rays of a full-dimensional simplicial cone, or None."""
        rays = [self.rays[i] for i in cone]
        if len(rays) != self.dim:
            return None
        a = [[rays[j][k] for j in range(len(rays))] for k in range(self.dim)]
        return solve_rational(a, list(v))

    def containing_cone(self, v):
        for c in self.cones:
            coeff = self.cone_coordinates(c, v)
            if coeff is not None and all(x >= 0 for x in coeff):
                return c, coeff
        return None

    def _check_intersections(self):
        for s, t in itertools.combinations(self.cones, 2):
            if len(t) != self.dim:
                continue
            interior = [sum(self.rays[i][k] for i in s) for k in range(self.dim)]
            coeff = self.cone_coordinates(t, interior)
            if coeff is not None and all(x > 0 for x in coeff):
                raise FanError(f"cones {s} and {t} overlap in their interiors")
            for i in s:
                if i in t:
                    continue
                coeff = self.cone_coordinates(t, self.rays[i])
                if coeff is not None and all(x >= 0 for x in coeff):
                    raise FanError(f"ray {i} of cone {s} lies inside cone {t}")

    def in_some_cone(self, subset):
        s = set(subset)
        return any(s <= set(c) for c in self.cones)

    def __repr__(self):
        return f"FanData(rays={self.rays}, cones={self.cones})"


def primitive_collections(fan):
    """Minimal subsets of rays contained in no cone, sorted."""
    out = []
    n = fan.nrays
    for size in range(2, n + 1):
        for sub in itertools.combinations(range(n), size):
            if fan.in_some_cone(sub):
                continue
            if any(set(p) <= set(sub) for p in out):
                continue
            out.append(sub)
    return out


def irrelevant_ideal(fan):
    """Exponent vectors of the generators prod_{i not in sigma} x_i of B."""
    n = fan.nrays
    gens = []
    for c in fan.cones:
        e = tuple(0 if i in c else 1 for i in range(n))
        if e not in gens:
            gens.append(e)
    return gens


def minimal_primes_of_monomial_ideal(gens, n):
    """Minimal vertex covers: the minimal primes of a squarefree monomial ideal."""
    supports = [set(i for i, x in enumerate(e) if x) for e in gens]
    out = []
    for size in range(1, n + 1):
        for sub in itertools.combinations(range(n), size):
            s = set(sub)
            if all(s & sp for sp in supports) and not any(set(p) <= s for p in out):
                out.append(sub)
    return out


def deg_functional(fan, I):
    """Integer vector b with sum b_i u_i = 0, b > 0 on I and b <= 0 off I, gcd 1."""
    I = tuple(sorted(I))
    v = [sum(fan.rays[i][k] for i in I) for k in range(fan.dim)]
    found = fan.containing_cone(v)
    if found is None:
        raise FanError(f"the sum of the rays of {I} lies in no cone; is the fan complete?")
    cone, coeff = found
    b = [Fraction(1 if i in I else 0) for i in range(fan.nrays)]
    for i, c in zip(cone, coeff):
        b[i] -= Fraction(c)
    den = 1
    for x in b:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ib = [int(x * den) for x in b]
    g = _gcd_list(ib)
    ib = [x // g for x in ib]
    for k in range(fan.dim):
        if sum(ib[i] * fan.rays[i][k] for i in range(fan.nrays)) != 0:
            raise AssertionError("deg_I does not vanish on the rays")
    if any(ib[i] <= 0 for i in I) or any(ib[i] > 0 for i in range(fan.nrays) if i not in I):
        raise AssertionError(f"deg_I has the wrong signs: {ib}")
    return tuple(ib)


def _class_map_snf(fan):
    """Degree matrix (rho x (n+1)) from the Smith form of the ray matrix."""
    A = [list(r) for r in fan.rays]
    U, D, V = smith_normal_form(A)
    m = fan.dim
    for k in range(m):
        if D[k][k] != 1:
            raise GradingError(f"the class group has torsion (invariant factor {D[k][k]})")
    return [U[k] for k in range(m, fan.nrays)]


def _same_lattice(rows_a, rows_b):
    """Do the integer row spaces agree?"""
    return hermite_normal_form(rows_a) == hermite_normal_form(rows_b)


class CoxData:
    """Class-group grading of the Cox ring with B and the primitive collections."""

    def __init__(self, fan, field=QQ):
        self.fan = fan
        self.field = field
        snf_rows = _class_map_snf(fan)
        self.rho = len(snf_rows)
        if self.rho == 0:
            raise GradingError("the fan has no class group (affine space)")
        self.collections = primitive_collections(fan)
        self.b = {I: deg_functional(fan, I) for I in self.collections}
        self.degree_rows = self._choose_rows(snf_rows)
        self.degrees = [tuple(self.degree_rows[k][i] for k in range(self.rho))
                        for i in range(fan.nrays)]
        self.ring = Ring(self.degrees, field)
        self.irrelevant = irrelevant_ideal(fan)
        primes = minimal_primes_of_monomial_ideal(self.irrelevant, fan.nrays)
        if sorted(primes) != sorted(self.collections):
            raise AssertionError(f"minimal primes of B {primes} differ from the primitive "
                                 f"collections {self.collections}")
        self.functionals = {I: self._functional(self.b[I]) for I in self.collections}

    def _choose_rows(self, snf_rows):
        bs = [list(self.b[I]) for I in self.collections]
        if len(bs) == self.rho and _same_lattice(bs, snf_rows):
            return bs
        hnf = hermite_normal_form(snf_rows)
        return hnf

    def _functional(self, b):
        """lambda with lambda . deg(x_i) = b_i for all i."""
        rows = self.degree_rows
        n = self.fan.nrays
        for cols in itertools.combinations(range(n), self.rho):
            a = [[rows[k][c] for k in range(self.rho)] for c in cols]
            sol = solve_rational(a, [b[c] for c in cols])
            if sol is not None:
                if all(sum(sol[k] * rows[k][i] for k in range(self.rho)) == b[i] for i in range(n)):
                    if all(x.denominator == 1 for x in sol):
                        return tuple(int(x) for x in sol)
                    raise AssertionError("deg_I is not integral on the class group")
        raise AssertionError("could not express deg_I on the degree matrix")

    def irrelevant_polys(self):
        return [{e: self.field.one} for e in self.irrelevant]

    def w_I(self, I, j):
        return w_I_values(self.b[tuple(sorted(I))], I, j)


def class_group_grading(fan):
    return CoxData(fan).ring.grading


def w_I_values(b, I, j):
    vals = sorted((b[i] for i in I), reverse=True)
    if j < 0:
        raise ValueError("j must be nonnegative")
    return sum(vals[:min(j, len(vals))])


def w_I(cox, I, j):
    return cox.w_I(I, j)


def hirzebruch_fan(a=3):
    """Rays (1,0), (0,1), (-1,a), (0,-1) with the four two-dimensional cones."""
    return FanData([(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])


def projective_space_fan(n):
    rays = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    rays.insert(0, tuple(-1 for _ in range(n)))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return FanData(rays, cones)


def weighted_projective_fan(weights):
    """A simplicial fan of P(weights) in dimension len(weights) - 1.

    The rays span the kernel lattice relation sum d_i u_i = 0.
    """
    d = list(weights)
    n = len(d)
    # integer basis of {x : d . x = 0} gives the dual; rays are the columns
    # of a matrix whose rows span the kernel of x -> sum d_i x_i on Z^n
    U, D, V = smith_normal_form([[x] for x in d])
    if D[0][0] != 1:
        raise ValueError("weights must be well-formed (gcd 1)")
    rows = [U[k] for k in range(1, n)]
    rays = [tuple(rows[k][i] for k in range(n - 1)) for i in range(n)]
    cones = [tuple(j for j in range(n) if j != i) for i in range(n)]
    return FanData(rays, cones)


def product_fan(ns):
    """Fan of P^{n_1} x ... x P^{n_k}."""
    parts = [projective_space_fan(n) for n in ns]
    dim = sum(ns)
    rays, cones_parts, offset_r, offset_d = [], [], 0, 0
    for n, f in zip(ns, parts):
        idx = []
        for r in f.rays:
            v = [0] * dim
            v[offset_d:offset_d + n] = r
            rays.append(tuple(v))
            idx.append(offset_r + len(idx))
        cones_parts.append([tuple(idx[i] for i in c) for c in f.cones])
        offset_r += len(f.rays)
        offset_d += n
    cones = [tuple(sorted(itertools.chain.from_iterable(p))) for p in itertools.product(*cones_parts)]
    return FanData(rays, cones)


# -- Betti polytope -----------------------------------------------------------------

def effective_cone_facets(degrees):
    """Inequalities n . a >= 0 cutting out the cone spanned by ``degrees``."""
    rho = len(degrees[0])
    if rho == 1:
        return [(1,)]
    facets = set()
    for sub in itertools.combinations(degrees, rho - 1):
        if _rank_int(sub) != rho - 1:
            continue
        # integer normal to the hyperplane spanned by sub
        U, D, V = smith_normal_form([list(r) for r in sub])
        normal = [V[k][rho - 1] for k in range(rho)]
        g = _gcd_list(normal)
        normal = [x // g for x in normal]
        vals = [sum(a * b for a, b in zip(normal, d)) for d in degrees]
        if all(v >= 0 for v in vals):
            facets.add(tuple(normal))
        elif all(v <= 0 for v in vals):
            facets.add(tuple(-x for x in normal))
    return sorted(facets)


class BettiPolytope:
    """{a : lambda_I . a <= w_I^{i+1} - 1 for all I}, optionally cut by a + Eff lower bounds."""

    def __init__(self, i, upper, lower=()):
        self.i = i
        self.upper = list(upper)      # (normal, bound): normal . a <= bound
        self.lower = list(lower)      # (normal, bound): normal . a >= bound

    def contains(self, a):
        a = tuple(a)
        ok = all(sum(x * y for x, y in zip(nv, a)) <= b for nv, b in self.upper)
        return ok and all(sum(x * y for x, y in zip(nv, a)) >= b for nv, b in self.lower)

    def as_dict(self):
        return {"i": self.i,
                "upper": [{"normal": list(n), "bound": b, "strict_bound": b + 1} for n, b in self.upper],
                "lower": [{"normal": list(n), "bound": b} for n, b in self.lower]}


def betti_polytope(cox, i, generated_in=None):
    upper = [(cox.functionals[I], cox.w_I(I, i + 1) - 1) for I in cox.collections]
    lower = []
    if generated_in is not None:
        for nv in effective_cone_facets(cox.degrees):
            lower.append((nv, sum(x * y for x, y in zip(nv, generated_in))))
    return BettiPolytope(i, upper, lower)


class ContainmentReport:
    def __init__(self, ok, violations, polytopes, points, torsion_free, hypothesis):
        self.ok = ok
        self.violations = violations
        self.polytopes = polytopes
        self.points = points
        self.torsion_free = torsion_free
        self.hypothesis = hypothesis

    def as_dict(self):
        return {"ok": self.ok, "violations": self.violations,
                "polytopes": [p.as_dict() for p in self.polytopes],
                "points": [{"i": i, "degree": list(a), "mult": m} for (i, a), m in self.points],
                "H0_B_zero": self.torsion_free, "hypothesis": self.hypothesis}


def check_containment(M, cox, hypothesis_verified=False):
    """Every Betti degree (i, a) of M satisfies deg_I(a) < w_I^{i+1} for all I."""
    if M.grading != cox.ring.grading:
        raise GradingError("module grading does not match the Cox ring")
    tor = torsion_submodule(M, cox.irrelevant_polys())
    B = betti_table(M)
    violations = []
    for (i, a), m in B.entries.items():
        for I in cox.collections:
            val = sum(x * y for x, y in zip(cox.functionals[I], a))
            if val >= cox.w_I(I, i + 1):
                violations.append({"i": i, "degree": list(a), "collection": list(I),
                                   "deg_I": val, "bound": cox.w_I(I, i + 1)})
    polys = [betti_polytope(cox, i) for i in B.indices()]
    hyp = ("hypothesis verified by caller" if hypothesis_verified
           else "conclusion checked, hypothesis asserted by caller")
    points = sorted(B.entries.items())
    return ContainmentReport(not violations, violations, polys, points, tor.is_zero(), hyp)


# -- multigraded truncation ------------------------------------------------------------

def _geq(c, a):
    return all(x >= y for x, y in zip(c, a))


def _truncation_candidates(M, a, K):
    g = M.grading
    rho = g.rho
    out = []
    for p, dp in enumerate(M.free.degrees):
        base = tuple(x - y for x, y in zip(a, dp))
        for off in itertools.product(*[range(k + 1) for k in K]):
            c = tuple(x + o for x, o in zip(base, off))
            for m in g.monomials(c):
                redundant = False
                for i, e in enumerate(m):
                    if e and _geq(tuple(x - y for x, y in zip(c, g.degrees[i])), base):
                        redundant = True
                        break
                if not redundant:
                    out.append((p, m))
    return sorted(set(out))


def multigraded_truncate(M, a, max_doublings=3):
    """The submodule generated by all M_c with c >= a componentwise, twisted by a.

    Generators come from a finite window [a, a + K]; the window doubles until
    two consecutive windows give the same minimal generators.  This
    stabilization test is a heuristic, and the result records it.
    """
    g = M.grading
    a = g.as_degree(a)
    if g.rho == 1:
        from .regularity import truncate
        return truncate(M, a).twist(a)
    K = [sum(max(0, d[k]) for d in g.degrees) + 2 for k in range(g.rho)]
    F = M.free
    prev = None
    for step in range(max_doublings + 1):
        cands = _truncation_candidates(M, a, K)
        gens = [{t: M.field.one} for t in cands]
        keep = minimal_generators(gens, F, modulo=M.relations)
        cur = [cands[i] for i in keep]
        if prev is not None and cur == prev:
            T = PresentedModule.submodule_quotient(F, [{t: M.field.one} for t in cur], M.relations)
            out = T.twist(a)
            out.heuristic = True
            out.window = list(K)
            return out
        prev = cur
        K = [2 * k for k in K]
    raise TruncationWindowError(
        f"truncation at {a} did not stabilize; last window {K}, {len(prev)} generators")


# -- Tor against S_J and the subquotient check -------------------------------------

def _restrict_ring(ring, J):
    g = ring.grading
    degs = [g.degrees[j] for j in J]
    return Ring(degs, ring.field, [ring.internal_names[j] for j in J])


def tor_S_quotient(M, I):
    """Tor^S_l(M, S / (x_i : i in I)) for l = 0..pd, as modules over k[x_j : j not in I]."""
    ring = M.ring
    n = ring.nvars
    I = set(I)
    J = [j for j in range(n) if j not in I]
    if not J:
        raise ValueError("the complement of I is empty; use betti_table")
    RJ = _restrict_ring(ring, J)
    C = M.resolution()

    def project(v):
        out = {}
        for (p, e), c in v.items():
            if any(e[i] for i in I):
                continue
            out[(p, tuple(e[j] for j in J))] = c
        return out

    mods = [FreeModule(RJ, F.degrees) for F in C.modules]
    maps = [ModuleMap(mods[k + 1], mods[k], [project(col) for col in d.columns], check=False)
            for k, d in enumerate(C.maps)]
    out = []
    for l in range(len(mods)):
        if l >= 1:
            ker = kernel(maps[l - 1]).generators
        else:
            ker = [mods[0].basis_vector(p) for p in range(mods[0].rank)]
        image = maps[l].columns if l < len(maps) else []
        out.append(PresentedModule.submodule_quotient(mods[l], ker, [v for v in image if v]))
    return out


def lemma_technical_check(M, I):
    """beta_{j,a}(M) <= sum_{l <= j} sum_{K subset J, |K| = j - l} dim Tor_l(M, S_J)_{a - deg K}."""
    g = M.grading
    n = g.nvars
    I = tuple(sorted(I))
    J = [j for j in range(n) if j not in I]
    B = betti_table(M)
    if not J:
        return {"ok": True, "checked": len(B.entries), "violations": [], "note": "J empty"}
    tors = tor_S_quotient(M, I)
    violations = []
    rows = []
    for (j, a), lhs in sorted(B.entries.items()):
        rhs = 0
        for l in range(min(j, len(tors) - 1) + 1):
            for K in itertools.combinations(J, j - l):
                dK = g.zero
                for k in K:
                    dK = g.add(dK, g.degrees[k])
                rhs += tors[l].hilbert_function(g.sub(a, dK))
        rows.append({"j": j, "degree": a, "lhs": lhs, "rhs": rhs})
        if lhs > rhs:
            violations.append(rows[-1])
    return {"ok": not violations, "checked": len(rows), "violations": violations, "rows": rows}


def hirzebruch_example_module(cox, field=QQ):
    """N = S/(x_0 x_1) truncated at (2,3) and twisted by (2,3)."""
    ring = cox.ring
    n = ring.nvars
    e = [0] * n
    e[ring.slot[0]] += 1
    e[ring.slot[1]] += 1
    N = PresentedModule.quotient(ring, [{tuple(e): ring.field.one}])
    return multigraded_truncate(N, (2, 3))
