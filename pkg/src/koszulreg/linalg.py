"""Sparse exact linear algebra over a :class:`~koszulreg.core.Field`.

Rows are dicts ``{column: value}``; zero entries are never stored.
"""

from fractions import Fraction


def _eliminate(row, pivots, red):
    """Reduce ``row`` in place against ``pivots``; return its leading column or None."""
    while row:
        col = min(row)
        piv = pivots.get(col)
        if piv is None:
            return col
        f = row[col]
        for k, v in piv.items():
            x = red(row.get(k, 0) - f * v)
            if x:
                row[k] = x
            else:
                row.pop(k, None)
    return None


def rank(rows, field):
    red, inv = field.red, field.inv
    pivots = {}
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        col = _eliminate(row, pivots, red)
        if col is not None:
            s = inv(row[col])
            pivots[col] = {k: red(v * s) for k, v in row.items()}
    return len(pivots)


def rank_dense(matrix, field):
    return rank([{j: v for j, v in enumerate(r) if v} for r in matrix], field)


def solve_rational(a, b):
    """Solve the square system a x = b over Q; None if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def integer_determinant(a):
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return int(det)


def smith_normal_form(a):
    """Return (U, D, V) with U * a * V == D diagonal, U and V unimodular.

    Diagonal entries are non-negative and each divides the next.
    """
    rows, cols = len(a), len(a[0]) if a else 0
    D = [list(map(int, r)) for r in a]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):
        D[dst] = [x + f * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for M in (D, V):
            for r in M:
                r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(D[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility of the remaining block
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if D[i][j] % D[t][t]), None)
                if bad is not None:
                    add_row(bad[0], t, 1)
                    done = False
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def hermite_normal_form(rows):
    """Row-style Hermite normal form of an integer matrix (zero rows dropped)."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out = []
    r0 = 0
    for c in range(ncols):
        piv_rows = [i for i in range(r0, len(m)) if m[i][c]]
        if not piv_rows:
            continue
        while True:
            piv_rows = [i for i in range(r0, len(m)) if m[i][c]]
            i = min(piv_rows, key=lambda i: abs(m[i][c]))
            m[r0], m[i] = m[i], m[r0]
            others = [i for i in range(r0 + 1, len(m)) if m[i][c]]
            if not others:
                break
            for i in others:
                q = m[i][c] // m[r0][c]
                m[i] = [x - q * y for x, y in zip(m[i], m[r0])]
        if m[r0][c] < 0:
            m[r0] = [-x for x in m[r0]]
        for i in range(r0):
            q = m[i][c] // m[r0][c]
            m[i] = [x - q * y for x, y in zip(m[i], m[r0])]
        r0 += 1
        if r0 == len(m):
            break
    return [r for r in m if any(r)]
