"""The bigraded exterior algebra with its dual omega_E, and the BGG
differential module R(M) on a finite window of degrees.

Exterior monomials e_J are encoded by bitmasks (bit i set when e_i is a
factor, factors in increasing order).  Sign table for the products used
here, with J written in increasing order:

    e_J * e_i  = (-1)^{#{j in J : j > i}} e_{J + i}      (i not in J)
    e_i . phi_J = (-1)^{#{j in J : j > i}} phi_{J - i}   (i in J)

where phi_J is the dual basis of omega_E = Hom_k(E, k) and
(e . phi)(x) = phi(x e).
"""

from __future__ import annotations

from .core import GradingError
from .linalg import rank


class WindowError(ValueError):
    """A query too close to the edge of a truncated degree window."""


def _bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _sign_after(mask, i):
    """(-1)^{number of set bits of ``mask`` above bit i}."""
    return -1 if bin(mask >> (i + 1)).count("1") % 2 else 1


class ExteriorAlgebra:
    """E = Lambda(e_0..e_n) with deg e_i = (-deg x_i; -1)."""

    def __init__(self, grading):
        if grading.rho != 1:
            raise GradingError("the exterior algebra here is built for Z-gradings")
        self.grading = grading
        self.n1 = grading.nvars
        self.size = 1 << self.n1

    def basis(self):
        return list(range(self.size))

    def bidegree(self, mask):
        return (-sum(self.grading.degrees[i] for i in _bits(mask)), -bin(mask).count("1"))

    def multiply(self, a, b):
        """e_a * e_b as (sign, mask), or (0, None) when it vanishes."""
        if a & b:
            return 0, None
        sign = 1
        for i in _bits(b):
            sign *= _sign_after(a, i)
            a |= 1 << i
        return sign, a

    def dimension(self):
        return self.size


class OmegaE:
    """omega_E = Hom_k(E, k), with phi_J dual to e_J in bidegree (d_J; |J|)."""

    def __init__(self, grading):
        self.E = ExteriorAlgebra(grading)
        self.grading = grading

    def basis(self):
        return self.E.basis()

    def bidegree(self, mask):
        a, j = self.E.bidegree(mask)
        return (-a, -j)

    def generator_bidegree(self):
        return self.bidegree(self.E.size - 1)

    def socle_bidegree(self):
        return self.bidegree(0)

    def act(self, i, mask):
        """e_i . phi_J as (sign, mask) or (0, None)."""
        if not (mask >> i) & 1:
            return 0, None
        return _sign_after(mask, i), mask & ~(1 << i)

    def dimension(self):
        return self.E.size


def omega_E(grading):
    return OmegaE(grading)


class DifferentialModuleWindow:
    """R(M) = sum over a in [lo, hi] of M_a (x) omega_E(-a; 0).

    The piece in bidegree (c; j) is spanned by m (x) phi_J with |J| = j and
    m running through a basis of M_{c - d_J}, for c - d_J in the window.
    """

    def __init__(self, M, lo, hi):
        g = M.grading
        if g.rho != 1:
            raise GradingError("R(M) windows are built for Z-gradings")
        self.M = M
        self.lo, self.hi = int(lo), int(hi)
        self.omega = OmegaE(g)
        self.margin = g.w_upper(g.nvars)
        self._basis = {}
        self._eng = M.gb().engine()

    def reliable(self, c):
        return self.lo <= c - self.margin and c + self.margin <= self.hi

    def layer(self, c, j):
        key = (c, j)
        if key not in self._basis:
            g = self.M.grading
            out = []
            for mask in self.omega.basis():
                if bin(mask).count("1") != j:
                    continue
                a = c - sum(g.degrees[i] for i in _bits(mask))
                if self.lo <= a <= self.hi:
                    for t in self.M.basis(a):
                        out.append((mask, t))
            self._basis[key] = out
        return self._basis[key]

    def layer_dimension(self, c, j):
        return len(self.layer(c, j))

    def differential_rows(self, c, j):
        """Rows (one per basis element of the (c; j) piece) of the map to (c; j-1)."""
        M = self.M
        red = M.field.red
        tgt = {b: k for k, b in enumerate(self.layer(c, j - 1))}
        rows = []
        for mask, (p, m) in self.layer(c, j):
            row = {}
            for i in _bits(mask):
                s, rest = self.omega.act(i, mask)
                e = list(m)
                e[i] += 1
                for t, x in self._eng.reduce({(p, tuple(e)): M.field.one}).items():
                    k = tgt.get((rest, t))
                    if k is None:
                        continue
                    v = red(row.get(k, 0) + s * x)
                    if v:
                        row[k] = v
                    else:
                        row.pop(k, None)
            rows.append(row)
        return rows

    def square_zero(self, c, j):
        """Check d o d = 0 from (c; j) to (c; j-2)."""
        red = self.M.field.red
        first = self.differential_rows(c, j)
        second = self.differential_rows(c, j - 1)
        for row in first:
            acc = {}
            for k, x in row.items():
                for l, y in second[k].items():
                    acc[l] = red(acc.get(l, 0) + x * y)
            if any(acc.values()):
                return False
        return True

    def homology(self, c, j):
        if not self.reliable(c):
            raise WindowError(
                f"degree {c} needs the window to cover [{c - self.margin}, {c + self.margin}], "
                f"have [{self.lo}, {self.hi}]")
        if j < 0 or j > self.M.grading.nvars:
            return 0
        dim = self.layer_dimension(c, j)
        if not dim:
            return 0
        r_out = rank(self.differential_rows(c, j), self.M.field) if j >= 1 else 0
        r_in = rank(self.differential_rows(c, j + 1), self.M.field)
        return dim - r_out - r_in


def bgg_R(M, window):
    lo, hi = window
    return DifferentialModuleWindow(M, lo, hi)


def dm_homology(D, a, j):
    return D.homology(a, j)
