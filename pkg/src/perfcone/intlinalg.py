"""Exact integer and rational linear algebra helpers.

Matrices are lists (or tuples) of rows; vectors are sequences. Everything
runs on Python ints and fractions.Fraction. No floats.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive_vector(v: Sequence[int]) -> tuple[int, ...]:
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def sign_normalize(v: Sequence[int]) -> tuple[int, ...]:
    """Representative of {v, -v} whose first nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(-y for y in v) if x < 0 else tuple(v)
    return tuple(v)


def flatten_rank1(v: Sequence[int]) -> tuple[int, ...]:
    """Upper triangle of v v^t, row major; length g(g+1)/2.

    Linear coordinates on symmetric matrices; injective, so spans and
    determinant signs computed here match the matrix-space ones.
    """
    g = len(v)
    out = []
    for i in range(g):
        vi = v[i]
        for j in range(i, g):
            out.append(vi * v[j])
    return tuple(out)


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(row) for row in zip(*m)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def _frac_rows(rows: Iterable[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def rank_rows(rows: Sequence[Sequence]) -> int:
    """Rank over Q; accepts int or Fraction entries."""
    m = _frac_rows(rows)
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        for i in range(rank + 1, len(m)):
            if m[i][col]:
                f = m[i][col] * inv
                mi, mr = m[i], m[rank]
                for j in range(col, ncols):
                    mi[j] -= f * mr[j]
        rank += 1
        if rank == len(m):
            break
    return rank


def pivot_columns(rows: Sequence[Sequence]) -> list[int]:
    """Leftmost pivot column indices of the row space."""
    m = _frac_rows(rows)
    if not m:
        return []
    ncols = len(m[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        for i in range(r + 1, len(m)):
            if m[i][col]:
                f = m[i][col] * inv
                mi, mr = m[i], m[r]
                for j in range(col, ncols):
                    mi[j] -= f * mr[j]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return pivots


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free rank of an integer matrix.

    Pivot row chosen by smallest nonzero magnitude to keep entries small.
    """
    m = [list(map(int, row)) for row in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = 1
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            x = m[i][col]
            if x and (piv is None or abs(x) < abs(m[piv][col])):
                piv = i
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        for i in range(r + 1, nrows):
            mi, mr = m[i], m[r]
            xic = mi[col]
            for j in range(col, ncols):
                mi[j] = (mi[j] * p - xic * mr[j]) // prev
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for col in range(n):
        piv = None
        for i in range(col, n):
            x = a[i][col]
            if x and (piv is None or abs(x) < abs(a[piv][col])):
                piv = i
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        for i in range(col + 1, n):
            ai, ac = a[i], a[col]
            xic = ai[col]
            for j in range(col, n):
                ai[j] = (ai[j] * p - xic * ac[j]) // prev
        prev = p
    return sign * a[n - 1][n - 1]


def det_sign(m: Sequence[Sequence]) -> int:
    """Sign (-1, 0, +1) of the determinant; int or Fraction entries."""
    a = _frac_rows(m)
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        if p < 0:
            sign = -sign
        inv = 1 / p
        for i in range(col + 1, n):
            if a[i][col]:
                f = a[i][col] * inv
                ai, ac = a[i], a[col]
                for j in range(col, n):
                    ai[j] -= f * ac[j]
    return sign


def frac_inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse over Q via Gauss-Jordan; raises on singular input."""
    a = _frac_rows(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("inverse needs a square matrix")
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        f = 1 / a[col][col]
        a[col] = [x * f for x in a[col]]
        inv[col] = [x * f for x in inv[col]]
        for i in range(n):
            if i != col and a[i][col]:
                g = a[i][col]
                a[i] = [x - g * y for x, y in zip(a[i], a[col])]
                inv[i] = [x - g * y for x, y in zip(inv[i], inv[col])]
    return inv


def solve_frac(m: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One solution of m x = rhs over Q, or None if inconsistent."""
    a = _frac_rows(m)
    b = [Fraction(x) for x in rhs]
    if not a:
        return [] if not any(b) else None
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        b[r], b[piv] = b[piv], b[r]
        f = 1 / a[r][col]
        a[r] = [x * f for x in a[r]]
        b[r] *= f
        for i in range(nrows):
            if i != r and a[i][col]:
                g2 = a[i][col]
                a[i] = [x - g2 * y for x, y in zip(a[i], a[r])]
                b[i] -= g2 * b[r]
        pivots.append(col)
        r += 1
    for i in range(r, nrows):
        if b[i]:
            return None
    x = [Fraction(0)] * ncols
    for k, col in enumerate(pivots):
        x[col] = b[k]
    return x


def kernel_basis(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0} over Q."""
    m = _frac_rows(rows)
    if not m:
        return []
    ncols = len(m[0])
    nrows = len(m)
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        f = 1 / m[r][col]
        m[r] = [x * f for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][col]:
                g2 = m[i][col]
                m[i] = [x - g2 * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for k, pc in enumerate(pivots):
            vec[pc] = -m[k][fc]
        basis.append(vec)
    return basis


def integer_kernel_vector(rows: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """A primitive integer kernel vector when the kernel is 1-dimensional."""
    basis = kernel_basis(rows)
    if len(basis) != 1:
        return None
    vec = basis[0]
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive_vector([int(x * den) for x in vec])


def snf_left(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Diagonalize m over Z; return (U, D, rank) with D = U m V for some
    untracked unimodular V. Nonzero diagonal entries sit in positions
    0..rank-1. No divisibility chaining (not needed by callers)."""
    a = [list(map(int, row)) for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    u = identity_matrix(nrows)
    t = 0
    while t < nrows and t < ncols:
        piv = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                x = a[i][j]
                if x and (piv is None or abs(x) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        while True:
            i, j = piv
            if i != t:
                a[t], a[i] = a[i], a[t]
                u[t], u[i] = u[i], u[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
            p = a[t][t]
            for i in range(t + 1, nrows):
                q = a[i][t] // p
                if q:
                    ai, at = a[i], a[t]
                    for k in range(ncols):
                        ai[k] -= q * at[k]
                    ui, ut = u[i], u[t]
                    for k in range(nrows):
                        ui[k] -= q * ut[k]
            for j in range(t + 1, ncols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
            if all(a[i][t] == 0 for i in range(t + 1, nrows)) and all(
                a[t][j] == 0 for j in range(t + 1, ncols)
            ):
                t += 1
                break
            piv = None
            for i in range(t, nrows):
                for j in range(t, ncols):
                    x = a[i][j]
                    if x and (piv is None or abs(x) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
    rank = sum(1 for k in range(min(nrows, ncols)) if a[k][k] != 0)
    return u, a, rank


def unimodular_inverse(m: Sequence[Sequence[int]]) -> list[list[int]]:
    inv = frac_inverse(m)
    out = []
    for row in inv:
        irow = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            irow.append(int(x))
        out.append(irow)
    return out


def adjugate_int(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """adj(m) with adj(m) m = det(m) I, for invertible integer m."""
    d = det_int(m)
    if d == 0:
        raise ValueError("adjugate of a singular matrix is not needed here")
    inv = frac_inverse(m)
    out = []
    for row in inv:
        irow = []
        for x in row:
            y = x * d
            if y.denominator != 1:
                raise AssertionError("adjugate arithmetic went inexact")
            irow.append(int(y))
        out.append(irow)
    return out


def ldlt(entries: Sequence[Sequence[Fraction]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Q = U^T D U with U unit upper triangular, D positive diagonal.

    Raises ValueError when Q is not positive definite.
    """
    g = len(entries)
    d = [Fraction(0)] * g
    u = [[Fraction(0)] * g for _ in range(g)]
    for i in range(g):
        u[i][i] = Fraction(1)
    for i in range(g):
        acc = Fraction(entries[i][i])
        for k in range(i):
            acc -= d[k] * u[k][i] * u[k][i]
        if acc <= 0:
            raise ValueError("form is not positive definite")
        d[i] = acc
        for j in range(i + 1, g):
            s = Fraction(entries[i][j])
            for k in range(i):
                s -= d[k] * u[k][i] * u[k][j]
            u[i][j] = s / d[i]
    return d, u


def classify_symmetric(entries: Sequence[Sequence]) -> str:
    """One of 'positive-definite', 'rational-kernel-psd', 'other'.

    Exact symmetric (congruence) elimination. For rational psd matrices
    the kernel is the rational nullspace, so psd alone settles the
    middle class.
    """
    g = len(entries)
    a = [[Fraction(entries[i][j]) for j in range(g)] for i in range(g)]
    live = list(range(g))
    pivots = 0
    while live:
        neg = any(a[i][i] < 0 for i in live)
        if neg:
            return "other"
        pos = [i for i in live if a[i][i] > 0]
        if not pos:
            if all(a[i][j] == 0 for i in live for j in live):
                return "rational-kernel-psd"
            # zero diagonal with a nonzero off-diagonal entry: indefinite
            return "other"
        p = pos[0]
        ap = a[p]
        pp = ap[p]
        live.remove(p)
        for i in live:
            if a[i][p]:
                f = a[i][p] / pp
                ai = a[i]
                for j in live:
                    ai[j] -= f * ap[j]
        pivots += 1
    return "positive-definite" if pivots == g else "rational-kernel-psd"
