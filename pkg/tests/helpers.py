"""Small independent oracles shared by the test modules."""

import random

from koszulreg.core import QQ, poly_mul
from koszulreg.linalg import rank


def ideal_piece_rank(ring, polys, d):
    """dim_k (I)_d by spanning all monomial multiples; no Groebner bases involved."""
    g = ring.grading
    rows = []
    for f in polys:
        if not f:
            continue
        df = g.degree(next(iter(f)))
        for m in g.monomials(d - df) if d - df >= 0 else ():
            rows.append({e: c for e, c in poly_mul(f, {m: ring.field.one}, ring.field.red).items()})
    return rank(rows, ring.field)


def random_homogeneous(rng, ring, d, terms=3, field=QQ):
    monos = list(ring.grading.monomials(d))
    if not monos:
        return {}
    out = {}
    for m in rng.sample(monos, min(terms, len(monos))):
        c = field(rng.randint(-3, 3))
        if c:
            out[m] = c
    return out


def seeded(seed):
    return random.Random(seed)
