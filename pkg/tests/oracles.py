"""Small independent reimplementations used to check the package.

Everything here is deliberately naive: dense sympy linear algebra, box
enumeration, and literal definitions.  Nothing imports from perfcone.
"""

from fractions import Fraction
from itertools import combinations, product
from math import isqrt

from sympy import Matrix, Rational, gcd


def rank_oracle(rows):
    if not rows:
        return 0
    return Matrix([[Rational(x) for x in row] for row in rows]).rank()


def short_vectors_box(entries):
    """All nonzero minimizers of a positive definite form, one per +- pair.

    Box bound: Q(x) <= m implies x_i^2 <= m * (Q^-1)_ii, refined once the
    running minimum drops.  Returns (minimum, sorted tuple of vectors).
    """
    g = len(entries)
    q = Matrix([[Rational(x) for x in row] for row in entries])
    qinv = q.inv()

    def value(x):
        v = Matrix(g, 1, list(x))
        return (v.T * q * v)[0, 0]

    best = min(q[i, i] for i in range(g))

    def box(m):
        return [isqrt(int(m * qinv[i, i])) for i in range(g)]

    bounds = box(best)
    for x in product(*[range(-b, b + 1) for b in bounds]):
        if any(x) and value(x) < best:
            best = value(x)
    bounds = box(best)
    found = set()
    for x in product(*[range(-b, b + 1) for b in bounds]):
        if any(x) and value(x) == best:
            lead = next(c for c in x if c)
            found.add(x if lead > 0 else tuple(-c for c in x))
    return Fraction(best.p, best.q), tuple(sorted(found))


def facets_bruteforce(vectors):
    """Facet generator-index sets of cone(vectors), by hyperplane search.

    For every generator subset of rank d-1, take the normal orthogonal
    to it inside the span of all vectors (unique up to scale there) and
    keep its zero set when every generator lands weakly on one side and
    at least one lands strictly.  d is the dimension of the cone.
    """
    if not vectors:
        return set()
    span = Matrix([list(v) for v in vectors])
    d = span.rank()
    facets = set()
    for subset in combinations(range(len(vectors)), d - 1):
        sub = Matrix([list(vectors[i]) for i in subset])
        if sub.rank() != d - 1:
            continue
        normal = _complement_normal(sub, span)
        if normal is None:
            continue
        vals = [(Matrix([list(v)]) * normal)[0, 0] for v in vectors]
        if not any(vals):
            continue
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            facets.add(frozenset(i for i, v in enumerate(vals) if v == 0))
    return facets


def _complement_normal(sub, span):
    """A nonzero vector in the row space of span orthogonal to the rows
    of sub.  Parametrized as span.T * k with sub * span.T * k = 0."""
    for k in (sub * span.T).nullspace():
        cand = span.T * k
        if any(x != 0 for x in cand):
            return cand
    return None


def coloop_oracle(vectors, index):
    """Literal basis-extension test via invariant factors.

    v is a lattice coloop of S iff appending v raises the rank and the
    gcd of (r+1)-minors of [others | v] equals the gcd of r-minors of
    others, r = rank(others).
    """
    g = len(vectors[index])
    others = [vectors[i] for i in range(len(vectors)) if i != index]
    v = vectors[index]
    m = Matrix([list(w) for w in others]).T if others else Matrix(g, 0, [])
    mv = m.row_join(Matrix(g, 1, list(v)))
    r = m.rank()
    if mv.rank() != r + 1:
        return False
    return _minor_gcd(mv, r + 1) == _minor_gcd(m, r)


def _minor_gcd(m, k):
    if k == 0:
        return 1
    vals = []
    for rows in combinations(range(m.rows), k):
        for cols in combinations(range(m.cols), k):
            d = m[rows, cols].det()
            if d:
                vals.append(abs(d))
    out = 0
    for v in vals:
        out = gcd(out, v)
    return out


def homology_dims_oracle(matrices, dims):
    """dim H_n from dense sympy ranks; matrices[n] maps degree n to n-1."""
    out = {}
    for n, dim in dims.items():
        r_n = Matrix(matrices[n]).rank() if matrices.get(n) else 0
        r_up = Matrix(matrices[n + 1]).rank() if matrices.get(n + 1) else 0
        out[n] = dim - r_n - r_up
    return out
