"""Local cohomology support, Koszul and weighted regularity, truncations,
and the verification harness for the Betti bounds (Z-gradings)."""

from __future__ import annotations

import itertools
import math
import random

from .core import FreeModule, Ring, ZeroModuleError, GF, QQ
from .groebner import ResourceError, kernel, torsion_submodule
from .linalg import rank
from .resolution import PresentedModule, betti_table, depth, krull_dimension

NEG_INF = float("-inf")


def _require_z(M):
    if M.grading.rho != 1:
        raise ValueError("this operation needs a Z-grading")


# -- Ext and local cohomology ---------------------------------------------------

def ext_modules(M):
    """[Ext^j(M, S) for j = 0..n+1] as presented modules, from the dual resolution."""
    C = M.resolution()
    ring = M.ring
    n1 = ring.nvars
    out = []
    for j in range(n1 + 1):
        if j > C.length:
            out.append(PresentedModule(FreeModule(ring, [])))
            continue
        Fj = C.modules[j].dual()
        if j < C.length:
            dT = C.maps[j].transpose()          # F_j^* -> F_{j+1}^*
            ker = kernel(dT).generators
        else:
            ker = [Fj.basis_vector(p) for p in range(Fj.rank)]
        image = C.maps[j - 1].transpose().columns if j >= 1 else []
        out.append(PresentedModule.submodule_quotient(Fj, ker, image))
    return out


def _ext_min_degree(E):
    if E.free.rank == 0:
        return None
    return min(E.free.degrees)


def _torsion_maxdeg(M):
    """Top degree of H^0_m(M) computed from the saturation of the relations."""
    g = M.grading
    tor = torsion_submodule(M, M.ring.gens)
    if tor.is_zero():
        return NEG_INF, tor
    sat = PresentedModule(M.free, tor.saturation.generators, sort=False)
    gens_deg = [M.free.element_degree(v) for v in tor.generators]
    lo = min(gens_deg)
    hi = max(gens_deg) + max(tor.steps - 1, 0) * max(g.degrees)
    best = NEG_INF
    for d in range(lo, hi + 1):
        if M.hilbert_function(d) != sat.hilbert_function(d):
            best = d
    return best, tor


class LocalCohomologySupport:
    """Top nonzero degree of H^i_m(M) for i = 0..n+1 (-inf when it vanishes)."""

    def __init__(self, maxdeg, torsion_maxdeg=None):
        self.maxdeg = list(maxdeg)
        self.torsion_maxdeg = torsion_maxdeg

    def __getitem__(self, i):
        return self.maxdeg[i]

    def nonzero_indices(self):
        return [i for i, d in enumerate(self.maxdeg) if d != NEG_INF]

    def consistent(self):
        return self.torsion_maxdeg is None or self.torsion_maxdeg == self.maxdeg[0]

    def __repr__(self):
        return f"LocalCohomologySupport({self.maxdeg})"


def local_cohomology_support(M, check_torsion=True):
    _require_z(M)
    cached = getattr(M, "_lcs", None)
    if cached is not None:
        return cached
    if M.is_zero():
        raise ZeroModuleError("local cohomology of the zero module")
    g = M.grading
    n1 = g.nvars
    w = g.w_upper(n1)
    exts = ext_modules(M)
    maxdeg = []
    for i in range(n1 + 1):
        d = _ext_min_degree(exts[n1 - i])
        maxdeg.append(NEG_INF if d is None else -w - d)
    tmax = _torsion_maxdeg(M)[0] if check_torsion else None
    res = LocalCohomologySupport(maxdeg, tmax)
    if not res.consistent():
        raise AssertionError(f"H^0 top degree disagrees: Ext gives {maxdeg[0]}, torsion gives {tmax}")
    M._lcs = res
    return res


def local_cohomology_maxdeg(M, i):
    return local_cohomology_support(M)[i]


class RegularityReport:
    """Koszul and weighted regularity with the cohomological index that binds each."""

    def __init__(self, koszul, weighted, koszul_witness, weighted_witness, support):
        self.koszul = koszul
        self.weighted = weighted
        self.koszul_witness = koszul_witness
        self.weighted_witness = weighted_witness
        self.support = support

    def as_dict(self):
        return {
            "koszul": self.koszul,
            "weighted": self.weighted,
            "koszul_witness": {"i": self.koszul_witness[0], "degree": self.koszul_witness[1]},
            "weighted_witness": {"i": self.weighted_witness[0], "degree": self.weighted_witness[1]},
            "local_cohomology_maxdeg": [None if d == NEG_INF else d for d in self.support.maxdeg],
        }

    def __repr__(self):
        return f"RegularityReport(koszul={self.koszul}, weighted={self.weighted})"


def regularity_report(M):
    lcs = local_cohomology_support(M)
    g = M.grading
    kbest = wbest = None
    for i in lcs.nonzero_indices():
        d = lcs[i]
        k = d + g.w_upper(i - 1) + 1
        wv = d + i
        if kbest is None or k > kbest[0]:
            kbest = (k, (i, d))
        if wbest is None or wv > wbest[0]:
            wbest = (wv, (i, d))
    return RegularityReport(kbest[0], wbest[0], kbest[1], wbest[1], lcs)


def koszul_regularity(M):
    return regularity_report(M).koszul


def weighted_regularity(M):
    return regularity_report(M).weighted


# -- verification harness ----------------------------------------------------

class VerificationReport:
    def __init__(self, name, ok, details=None, violations=None):
        self.name = name
        self.ok = ok
        self.details = details or {}
        self.violations = violations or []

    def as_dict(self):
        return {"check": self.name, "ok": self.ok, "details": self.details,
                "violations": self.violations}

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"VerificationReport({self.name}, ok={self.ok}, violations={self.violations})"


def verify_theorem_a(M):
    """beta_{i,j} = 0 for j >= r + w^{i+e} - w^{e-1}, r the Koszul regularity, e the depth."""
    g = M.grading
    r = koszul_regularity(M)
    e = depth(M)
    B = betti_table(M)
    thresholds, slack, violations = {}, {}, []
    for i in B.indices():
        t = r + g.w_upper(i + e) - g.w_upper(e - 1)
        thresholds[i] = t
        top = B.max_degree(i)
        slack[i] = t - top
        for a in B.degrees(i):
            if a >= t:
                violations.append({"i": i, "degree": a, "threshold": t})
    details = {"regularity": r, "depth": e, "thresholds": thresholds,
               "max_allowed": {i: t - 1 for i, t in thresholds.items()}, "slack": slack}
    return VerificationReport("theorem_a", not violations, details, violations)


def betti_koszul_bound(M, depth_value=None):
    """Least r with beta_{i,j} = 0 for all j >= r + w^{i+e} - w^{e-1}."""
    g = M.grading
    e = depth(M) if depth_value is None else depth_value
    B = betti_table(M)
    return max(a - g.w_upper(i + e) + g.w_upper(e - 1) for (i, a) in B.entries) + 1


def verify_theorem_b(M):
    """Converse direction(s): Cohen-Macaulay case and the general w_{i-1} statement."""
    g = M.grading
    B = betti_table(M)
    lcs = local_cohomology_support(M)
    violations = []
    r_b = max(a - g.w_upper(i + 1) for (i, a) in B.entries) + 1
    for i in range(g.nvars + 1):
        limit = r_b - g.w_lower(i - 1)
        if lcs[i] >= limit:
            violations.append({"part": "general", "i": i, "maxdeg": lcs[i], "limit": limit})
    cm = depth(M) == krull_dimension(M)
    details = {"betti_r_general": r_b, "cohen_macaulay": cm}
    if cm:
        r_a = betti_koszul_bound(M)
        kr = koszul_regularity(M)
        details.update({"betti_r_cm": r_a, "koszul_regularity": kr})
        if kr > r_a:
            violations.append({"part": "cohen_macaulay", "koszul_regularity": kr, "betti_r": r_a})
    return VerificationReport("theorem_b", not violations, details, violations)


def verify_symonds(M):
    """Weighted regularity equals the least r with beta_{i,j} = 0 for j > r + i + sigma."""
    g = M.grading
    s = g.sigma()
    B = betti_table(M)
    r_betti = max(a - i - s for (i, a) in B.entries)
    wr = weighted_regularity(M)
    violations = []
    if r_betti > wr:
        violations.append({"direction": "regular implies vanishing", "weighted": wr, "betti_r": r_betti})
    if r_betti < wr:
        violations.append({"direction": "vanishing implies regular", "weighted": wr, "betti_r": r_betti})
    return VerificationReport("symonds", not violations,
                              {"weighted_regularity": wr, "betti_r": r_betti, "sigma": s}, violations)


def verify_cor16(M):
    """First syzygies (relations) sit in degrees < r + w^2, for modules of
    positive depth (such as coordinate rings of closed subvarieties)."""
    g = M.grading
    r = koszul_regularity(M)
    if depth(M) == 0:
        return VerificationReport("cor16", True, {"regularity": r, "applicable": False})
    B = betti_table(M)
    bound = r + g.w_upper(2)
    bad = [{"degree": a} for a in B.degrees(1) if a >= bound]
    return VerificationReport("cor16", not bad, {"regularity": r, "bound": bound}, bad)


def verify_betti_window(B, grading):
    """Every beta_{i,j} != 0 satisfies w_i <= j < w^{i+1}."""
    bad = []
    for (i, a) in B.entries:
        if not (grading.w_lower(i) <= a < grading.w_upper(i + 1)):
            bad.append({"i": i, "degree": a})
    return bad


def verify_cor17(M, r=None):
    g = M.grading
    if r is None:
        r = min_koszul_zero_regular_truncation(M)
    T = truncate(M, r).twist(r)
    bad = verify_betti_window(betti_table(T), g)
    return VerificationReport("cor17", not bad, {"r": r}, bad)


# -- truncation ---------------------------------------------------------------------

def truncate(M, r):
    """M_{>=r} as a presented module (generated by M_r..M_{r+maxw-1} and any
    original generators of degree >= r + maxw)."""
    _require_z(M)
    g = M.grading
    F = M.free
    top = r + max(g.degrees) - 1
    gens = []
    for d in range(r, top + 1):
        for t in M.basis(d):
            gens.append({t: M.field.one})
    for p, a in enumerate(F.degrees):
        if a > top:
            gens.append(F.basis_vector(p))
    return PresentedModule.submodule_quotient(F, gens, M.relations)


def twist(M, a):
    return M.twist(a)


def predicted_truncation_support(M, r):
    """Top degrees of H^i_m(M_{>=r}(r)) from those of M.

    With Q = M / M_{>=r} of finite length, H^i is unchanged for i >= 2,
    H^0 keeps only its part in degrees >= r, and
    maxdeg H^1(M_{>=r}) = max(maxdeg H^1(M), max{d < r : (M / H^0 M)_d != 0}).
    """
    lcs = local_cohomology_support(M)
    info = _saturated_info(M)
    md = list(lcs.maxdeg)
    md[0] = md[0] if md[0] >= r else NEG_INF
    gap = info(r)
    md[1] = max(md[1], gap)
    return [d - r if d != NEG_INF else d for d in md]


def _saturated_info(M):
    """Function r -> max{d < r : (M / H^0 M)_d != 0} (or -inf)."""
    cached = getattr(M, "_satinfo", None)
    if cached is not None:
        return cached
    tor = torsion_submodule(M, M.ring.gens)
    Msat = PresentedModule(M.free, tor.saturation.generators, sort=False) if not tor.is_zero() else M
    lo = min(M.free.degrees) if M.free.rank else 0
    memo = {}

    def nonzero(d):
        if d not in memo:
            memo[d] = Msat.hilbert_function(d) > 0
        return memo[d]

    def info(r):
        for d in range(r - 1, lo - 1, -1):
            if nonzero(d):
                return d
        return NEG_INF

    M._satinfo = info
    return info


def predicted_truncation_regularity(M, r):
    """Koszul regularity of M_{>=r}(r) from the prediction; None when it is zero."""
    g = M.grading
    md = predicted_truncation_support(M, r)
    vals = [d + g.w_upper(i - 1) + 1 for i, d in enumerate(md) if d != NEG_INF]
    return max(vals) if vals else None


def min_koszul_zero_regular_truncation(M, ceiling=None, verify=False, positive_depth=True):
    """Least r >= min generator degree with M_{>=r}(r) Koszul 0-regular.

    With ``positive_depth`` (the default) the truncation must also have no
    m-torsion, so for a module of finite length the answer is one more than
    its top degree and the truncation is zero.  Without it, depth-zero
    truncations are accepted as soon as they are Koszul 0-regular.
    Candidates are scanned upward using the exact long-exact-sequence
    prediction of the truncation's local cohomology; with ``verify`` the
    answer (and r - 1 when it is a candidate) is recomputed directly.
    """
    _require_z(M)
    if M.is_zero():
        raise ZeroModuleError("truncation search on the zero module")
    g = M.grading
    lo = min(M.free.degrees)
    if ceiling is None:
        top0 = local_cohomology_support(M)[0]
        top0 = lo if top0 == NEG_INF else top0 + 1
        ceiling = max(lo, koszul_regularity(M), top0) + 10 * g.w_upper(g.nvars)

    def good(r):
        if positive_depth and predicted_truncation_support(M, r)[0] != NEG_INF:
            return False
        k = predicted_truncation_regularity(M, r)
        return k is None or k <= 0

    def direct(r):
        T = truncate(M, r).twist(r)
        if T.is_zero():
            return True
        lcs = local_cohomology_support(T)
        if positive_depth and lcs[0] != NEG_INF:
            return False
        return koszul_regularity(T) <= 0

    for r in range(lo, ceiling + 1):
        if good(r):
            if verify:
                if not direct(r):
                    raise AssertionError(f"prediction failed at r={r}")
                if r > lo and direct(r - 1):
                    raise AssertionError(f"r={r} is not minimal")
            return r
    raise ResourceError(f"no Koszul 0-regular truncation up to r={ceiling}")


# -- monomial quotients: fine-graded Tor -----------------------------------------------

def monomial_truncation_betti(ring, ideal_exps, r):
    """Betti numbers of ((S/I)_{>=r})(r) for a monomial ideal I, by Z^{n+1}-graded
    Koszul homology.  ``ideal_exps`` lists the exponent vectors (internal
    variable order) of the generators of I."""
    g = ring.grading
    n = g.nvars
    ws = g.degrees
    gens = [tuple(e) for e in ideal_exps]

    def inside(b):
        if any(x < 0 for x in b):
            return False
        if sum(x * w for x, w in zip(b, ws)) < r:
            return False
        for m in gens:
            if all(x >= y for x, y in zip(b, m)):
                return False
        return True

    box = []
    for k in range(n):
        L = -(-max(r, 0) // ws[k])
        for m in gens:
            L = max(L, m[k])
        box.append(L)
    subsets = [[J for J in itertools.combinations(range(n), i)] for i in range(n + 1)]
    field = QQ
    counts = {}
    for alpha in itertools.product(*[range(L + 1) for L in box]):
        supp = [k for k in range(n) if alpha[k] > 0]
        present = {}
        for i in range(len(supp) + 1):
            for J in itertools.combinations(supp, i):
                b = list(alpha)
                for j in J:
                    b[j] -= 1
                if inside(b):
                    present[J] = True
        if not present:
            continue
        if len(present) == 2 ** len(supp) and supp:
            continue
        deg = sum(x * w for x, w in zip(alpha, ws))
        by_size = {}
        for J in present:
            by_size.setdefault(len(J), []).append(J)

        def drank(i):
            src = by_size.get(i, [])
            tgt = {J: k for k, J in enumerate(by_size.get(i - 1, []))}
            if not src or not tgt:
                return 0
            rows = []
            for J in src:
                row = {}
                for pos, j in enumerate(J):
                    rest = J[:pos] + J[pos + 1:]
                    if rest in tgt:
                        row[tgt[rest]] = 1 if pos % 2 == 0 else -1
                rows.append(row)
            return rank(rows, field)

        for i, lst in by_size.items():
            h = len(lst) - drank(i) - drank(i + 1)
            if h:
                key = (i, deg - r)
                counts[key] = counts.get(key, 0) + h
    return counts


# -- random instances ---------------------------------------------------------------

def random_monomial_quotient(rng, max_vars=4, max_weight=6, max_gens=4, max_degree=20,
                             field=QQ):
    """S/I for a random monomial ideal I, returned with its generator exponents."""
    n = rng.randint(1, max_vars)
    weights = [rng.randint(1, max_weight) for _ in range(n)]
    ring = Ring(weights, field)
    g = ring.grading
    ngens = rng.randint(1, max_gens)
    exps = []
    for _ in range(ngens):
        target = rng.randint(1, max_degree)
        e = [0] * n
        deg = 0
        while True:
            choices = [k for k in range(n) if deg + g.degrees[k] <= target]
            if not choices:
                break
            k = rng.choice(choices)
            e[k] += 1
            deg += g.degrees[k]
            if deg >= target or rng.random() < 0.15:
                break
        if deg == 0:
            e[rng.randrange(n)] = 1
        exps.append(tuple(e))
    polys = [{e: field.one} for e in exps]
    return PresentedModule.quotient(ring, polys), exps


def random_homogeneous_quotient(rng, max_vars=3, max_weight=4, max_gens=3, max_degree=8,
                                field=QQ, max_terms=3):
    """S/I with I generated by random homogeneous polynomials (small coefficients)."""
    n = rng.randint(1, max_vars)
    weights = [rng.randint(1, max_weight) for _ in range(n)]
    ring = Ring(weights, field)
    g = ring.grading
    polys = []
    for _ in range(rng.randint(1, max_gens)):
        for _attempt in range(20):
            d = rng.randint(1, max_degree)
            monos = list(g.monomials(d))
            if monos:
                break
        else:
            continue
        chosen = rng.sample(monos, min(len(monos), rng.randint(1, max_terms)))
        polys.append({m: field(rng.choice([1, -1, 2, 3, -2])) for m in chosen})
    if not polys:
        polys.append({g.monomials(g.degrees[0])[0]: field.one})
    return PresentedModule.quotient(ring, polys)
