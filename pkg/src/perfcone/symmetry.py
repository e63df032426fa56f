"""GL_g(Z)-equivalence of cones, automorphisms, orientations, orbits.

Equivalence search runs on full-rank cones; boundary cones are reduced
first and the witness matrix is lifted back. The pruning invariant is the
Gram matrix G_ij = v_i^t T^{-1} v_j with T = sum of v v^t: a matrix
mapping generators to +-generators permutes G up to row/column signs, so
|G| profiles must match.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .cone import (
    PerfectCone,
    format_cone,
    pad,
    parse_cone,
    reduce as cone_reduce,
    spanning_subset,
)
from .intlinalg import (
    det_int,
    det_sign,
    flatten_rank1,
    frac_inverse,
    identity_matrix,
    mat_mul,
    mat_vec,
    pivot_columns,
    rank_rows,
    sign_normalize,
    unimodular_inverse,
)


@dataclass(frozen=True)
class ConeTransform:
    matrix: tuple[tuple[int, ...], ...]
    source: PerfectCone
    target: PerfectCone
    perm: tuple[int, ...]

    def check(self) -> bool:
        a = [list(row) for row in self.matrix]
        if det_int(a) not in (1, -1):
            return False
        seen = set()
        for i, v in enumerate(self.source.generators):
            w = sign_normalize(mat_vec(a, v))
            j = self.perm[i]
            if j in seen or self.target.generators[j] != w:
                return False
            seen.add(j)
        return len(seen) == len(self.target.generators)

    def inverse(self) -> "ConeTransform":
        inv = unimodular_inverse([list(r) for r in self.matrix])
        back = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            back[j] = i
        return ConeTransform(
            tuple(tuple(r) for r in inv), self.target, self.source, tuple(back)
        )


def _identity_transform(c: PerfectCone) -> ConeTransform:
    return ConeTransform(
        tuple(tuple(row) for row in identity_matrix(c.g)),
        c,
        c,
        tuple(range(len(c.generators))),
    )


@lru_cache(maxsize=None)
def _gram(c: PerfectCone) -> tuple[tuple[Fraction, ...], ...]:
    g = c.g
    t = [[0] * g for _ in range(g)]
    for v in c.generators:
        for i in range(g):
            if v[i]:
                for j in range(g):
                    t[i][j] += v[i] * v[j]
    tinv = frac_inverse(t)
    rows = []
    for v in c.generators:
        tv = mat_vec(tinv, v)
        rows.append(tuple(sum(w[k] * tv[k] for k in range(g)) for w in c.generators))
    return tuple(rows)


def _profiles(gram) -> list[tuple]:
    n = len(gram)
    out = []
    for i in range(n):
        off = sorted(abs(gram[i][j]) for j in range(n) if j != i)
        out.append((gram[i][i], tuple(off)))
    return out


def _assignment_order(c: PerfectCone, cand: list[tuple[int, ...]]) -> tuple[list[int], int]:
    """Static DFS order: rank-increasing generators first (rarest profile
    wins ties), so the assigned prefix determines the matrix early.
    Returns (order, prefix_len)."""
    n = len(c.generators)
    remaining = sorted(range(n), key=lambda i: (len(cand[i]), i))
    order: list[int] = []
    current: list[Sequence[int]] = []
    r = 0
    while remaining and r < c.rank:
        pick = None
        for i in remaining:
            rows = current + [c.generators[i]]
            if rank_rows(rows) > r:
                pick = i
                break
        if pick is None:
            break
        remaining.remove(pick)
        order.append(pick)
        current.append(c.generators[pick])
        r += 1
    prefix_len = len(order)
    order.extend(remaining)
    return order, prefix_len


class _Stop(Exception):
    pass


def _full_rank_maps(c1: PerfectCone, c2: PerfectCone, on_found) -> None:
    """Enumerate matrices A in GL_g(Z) with A . c1 = c2 (as +- pairs).

    Calls on_found(a_matrix, perm, det) for every realization; on_found
    may raise _Stop to end the search. Both cones must be full rank with
    equal ambient g.
    """
    g = c1.g
    n = len(c1.generators)
    if len(c2.generators) != n or c1.dim != c2.dim:
        return
    if n == 0:
        on_found(tuple(tuple(r) for r in identity_matrix(g)), (), 1)
        return
    g1 = _gram(c1)
    g2 = _gram(c2)
    prof1 = _profiles(g1)
    prof2 = _profiles(g2)
    if Counter(prof1) != Counter(prof2):
        return
    cand = [
        tuple(j for j in range(n) if prof2[j] == prof1[i]) for i in range(n)
    ]
    if any(not cs for cs in cand):
        return
    order, prefix_len = _assignment_order(c1, cand)
    if prefix_len < g:
        raise AssertionError("full-rank cone without a spanning prefix")
    prefix = order[:prefix_len]
    vmat = [[c1.generators[i][k] for i in prefix] for k in range(g)]
    vinv = frac_inverse(vmat)
    target_index = {v: j for j, v in enumerate(c2.generators)}
    assign: dict[int, int] = {}
    used = [False] * n

    def realize():
        # signs on the prefix, up to a global flip accounted in the dets
        eps: dict[int, int] = {}
        comps: list[int] = []
        root_of: dict[int, int] = {}
        for a in prefix:
            if a in eps:
                continue
            comps.append(a)
            eps[a] = 1
            root_of[a] = a
            stack = [a]
            while stack:
                x = stack.pop()
                for y in prefix:
                    if g1[x][y] == 0 or x == y:
                        continue
                    rel = 1 if (g2[assign[x]][assign[y]] > 0) == (g1[x][y] > 0) else -1
                    want = eps[x] * rel
                    if y in eps:
                        if eps[y] != want:
                            return
                    else:
                        eps[y] = want
                        root_of[y] = a
                        stack.append(y)
        for mask in range(1 << (len(comps) - 1)):
            flip = {comps[0]: 1}
            for b, root in enumerate(comps[1:]):
                flip[root] = -1 if (mask >> b) & 1 else 1
            total: dict[int, int] = {}
            for a in prefix:
                total[a] = eps[a] * flip[root_of[a]]
            wmat = [
                [total[i] * c2.generators[assign[i]][k] for i in prefix]
                for k in range(g)
            ]
            amat = mat_mul(wmat, vinv)
            ok = True
            aint = []
            for row in amat:
                irow = []
                for x in row:
                    fx = Fraction(x)
                    if fx.denominator != 1:
                        ok = False
                        break
                    irow.append(int(fx))
                if not ok:
                    break
                aint.append(irow)
            if not ok:
                continue
            d = det_int(aint)
            if d not in (1, -1):
                continue
            perm = []
            hit = set()
            for v in c1.generators:
                w = sign_normalize(mat_vec(aint, v))
                j = target_index.get(w)
                if j is None or j in hit:
                    perm = None
                    break
                hit.add(j)
                perm.append(j)
            if perm is None:
                continue
            on_found(tuple(tuple(r) for r in aint), tuple(perm), d)

    def dfs(pos: int):
        if pos == prefix_len:
            realize()
            return
        i = order[pos]
        for j in cand[i]:
            if used[j]:
                continue
            good = True
            for i2, j2 in assign.items():
                if abs(g2[j][j2]) != abs(g1[i][i2]):
                    good = False
                    break
            if not good:
                continue
            assign[i] = j
            used[j] = True
            dfs(pos + 1)
            del assign[i]
            used[j] = False

    try:
        dfs(0)
    except _Stop:
        pass


def _lift_block(a_red: Sequence[Sequence[int]], u1, u2, g: int, r: int):
    """U2^{-1} diag(a_red, I) U1, the ambient witness for reduced cones."""
    block = identity_matrix(g)
    for i in range(r):
        for j in range(r):
            block[i][j] = a_red[i][j]
    u2inv = unimodular_inverse(u2)
    return mat_mul(mat_mul(u2inv, block), u1)


def _transform_from_matrix(a, c1: PerfectCone, c2: PerfectCone) -> ConeTransform | None:
    perm = []
    hit = set()
    index = {v: j for j, v in enumerate(c2.generators)}
    for v in c1.generators:
        w = sign_normalize(mat_vec(a, v))
        j = index.get(w)
        if j is None or j in hit:
            return None
        hit.add(j)
        perm.append(j)
    return ConeTransform(tuple(tuple(int(x) for x in row) for row in a), c1, c2, tuple(perm))


def equivalent(c1: PerfectCone, c2: PerfectCone) -> ConeTransform | None:
    """A witness transform in GL_g(Z), or None."""
    if c1.g != c2.g:
        raise ValueError("cones live in different ambient dimensions")
    if c1.is_zero() and c2.is_zero():
        return _identity_transform(c1)
    if c1.is_zero() or c2.is_zero():
        return None
    if (c1.rank, c1.dim, len(c1.generators)) != (c2.rank, c2.dim, len(c2.generators)):
        return None
    g = c1.g
    if c1.rank < g:
        r = c1.rank
        red1, u1 = cone_reduce(c1)
        red2, u2 = cone_reduce(c2)
        inner = equivalent(red1, red2)
        if inner is None:
            return None
        a = _lift_block([list(row) for row in inner.matrix], u1, u2, g, r)
        t = _transform_from_matrix(a, c1, c2)
        if t is None:
            raise AssertionError("lifted transform failed to map the cone")
        return t
    found: list[ConeTransform] = []

    def on_found(a, perm, det):
        found.append(ConeTransform(a, c1, c2, perm))
        raise _Stop

    _full_rank_maps(c1, c2, on_found)
    return found[0] if found else None


def _collect_maps(c: PerfectCone) -> dict[tuple[int, ...], tuple[tuple, set[int]]]:
    """All distinct induced ray permutations of a full-rank cone with a
    witness matrix and the set of witness determinants (global flips
    -A included via (-1)^g det)."""
    out: dict[tuple[int, ...], tuple[tuple, set[int]]] = {}
    flip = 1 if c.g % 2 == 0 else -1

    def on_found(a, perm, det):
        if perm in out:
            out[perm][1].update({det, flip * det})
        else:
            out[perm] = (a, {det, flip * det})

    _full_rank_maps(c, c, on_found)
    return out


def automorphisms(c: PerfectCone) -> list[ConeTransform]:
    """Finite group of induced ray permutations, one witness matrix each.

    Boundary cones delegate to their reduction; witnesses are lifted back
    to the ambient dimension.
    """
    if c.is_zero():
        return [_identity_transform(c)]
    if c.rank < c.g:
        red, u = cone_reduce(c)
        local = {}
        for i, v in enumerate(c.generators):
            w = sign_normalize(tuple(mat_vec(u, v)[: c.rank]))
            local[i] = red.generators.index(w)
        inv_local = {v: k for k, v in local.items()}
        maps = _collect_maps(red)
        out = []
        for perm_red, (a_red, _dets) in sorted(maps.items()):
            a = _lift_block([list(r) for r in a_red], u, u, c.g, c.rank)
            perm = tuple(inv_local[perm_red[local[i]]] for i in range(len(c.generators)))
            out.append(ConeTransform(tuple(tuple(int(x) for x in row) for row in a), c, c, perm))
        return out
    maps = _collect_maps(c)
    return [
        ConeTransform(a, c, c, perm) for perm, (a, _dets) in sorted(maps.items())
    ]


def stabilizer_has_reflection(c: PerfectCone) -> bool:
    """True iff some GL_g(Z) stabilizer element has determinant -1,
    i.e. the GL-orbit of the cone equals its SL-orbit.

    Boundary cones always qualify: a block stabilizer [[A', P], [0, M]]
    fixing the reduced core leaves det M free, so both signs occur.
    """
    if c.is_zero() or c.rank < c.g:
        return True
    dets: set[int] = set()

    def on_found(a, perm, det):
        flip = 1 if c.g % 2 == 0 else -1
        dets.update({det, flip * det})
        if -1 in dets:
            raise _Stop

    _full_rank_maps(c, c, on_found)
    return -1 in dets


@lru_cache(maxsize=None)
def span_coordinates(c: PerfectCone, ref: tuple[int, ...]) -> tuple[tuple[Fraction, ...], ...]:
    """Coordinates of every generator form in the basis indexed by ref."""
    flat = [flatten_rank1(v) for v in c.generators]
    piv = pivot_columns(flat)
    mat = [[flat[s][j] for j in piv] for s in ref]
    minv = frac_inverse(mat)
    rows = []
    for f in flat:
        proj = [f[j] for j in piv]
        rows.append(
            tuple(
                sum(proj[k] * minv[k][t] for k in range(len(piv)))
                for t in range(len(ref))
            )
        )
    return tuple(rows)


def orientation_sign(c: PerfectCone, t: ConeTransform) -> int:
    """Determinant sign of the induced map on span{v v^t}."""
    if t.source != c or t.target != c:
        raise ValueError("orientation sign needs an automorphism of c")
    if c.is_zero():
        return 1
    ref = spanning_subset(c)
    coords = span_coordinates(c, ref)
    rows = [coords[t.perm[s]] for s in ref]
    s = det_sign(rows)
    if s == 0:
        raise AssertionError("automorphism degenerated on the span")
    return s


@lru_cache(maxsize=None)
def is_alternating(c: PerfectCone) -> bool:
    """True iff every automorphism preserves orientation on the span."""
    if c.is_zero():
        return True
    if c.rank < c.g:
        return is_alternating(cone_reduce(c)[0])
    ref = spanning_subset(c)
    coords = span_coordinates(c, ref)
    seen: set[tuple[int, ...]] = set()
    verdict = [True]

    def on_found(a, perm, det):
        if perm in seen:
            return
        seen.add(perm)
        rows = [coords[perm[s]] for s in ref]
        if det_sign(rows) < 0:
            verdict[0] = False
            raise _Stop

    _full_rank_maps(c, c, on_found)
    return verdict[0]


def random_unimodular(g: int, rng: random.Random, steps: int | None = None) -> list[list[int]]:
    m = identity_matrix(g)
    if g == 0:
        return m
    for _ in range(steps if steps is not None else 3 * g + 2):
        op = rng.randrange(3)
        i = rng.randrange(g)
        j = rng.randrange(g)
        if op == 0 and i != j:
            m[i], m[j] = m[j], m[i]
        elif op == 1:
            m[i] = [-x for x in m[i]]
        elif op == 2 and i != j:
            k = rng.choice((-2, -1, 1, 2))
            m[i] = [x + k * y for x, y in zip(m[i], m[j])]
    return m


def conjugate_cone(c: PerfectCone, h: Sequence[Sequence[int]]) -> PerfectCone:
    return PerfectCone(c.g, [mat_vec(h, v) for v in c.generators])


@dataclass
class Orbit:
    id: str
    rep: PerfectCone
    rank: int
    dim: int
    alternating: bool
    ref_orientation: tuple[int, ...]
    fingerprint: tuple
    facets: list[tuple[frozenset, str, tuple[int, ...]]] = field(default_factory=list)
    matroidal: bool = False
    coloop_count: int | None = None


class OrbitRegistry:
    """Deduplicated GL_g(Z)-orbits with canonical representatives.

    Orbit ids are `r<rank>d<dim>n<seq>`; boundary orbits keep the id they
    were assigned when first discovered at their own rank, so the same
    stratum carries one name through every ambient dimension.
    """

    def __init__(self, g: int):
        self.g = g
        self.orbits: list[Orbit] = []
        self.by_id: dict[str, Orbit] = {}
        self._buckets: dict[tuple, list[Orbit]] = {}
        self._counters: dict[tuple[int, int], int] = {}

    def fingerprint(self, c: PerfectCone) -> tuple:
        if c.is_zero():
            return ("zero",)
        core = c if c.rank == c.g else cone_reduce(c)[0]
        gram = _gram(core)
        n = len(core.generators)
        multi = sorted(abs(gram[i][j]) for i in range(n) for j in range(i, n))
        return (c.rank, c.dim, n, tuple(multi))

    def locate(self, c: PerfectCone) -> tuple[Orbit, ConeTransform] | None:
        fp = self.fingerprint(c)
        for orbit in self._buckets.get(fp, []):
            t = equivalent(c, orbit.rep)
            if t is not None:
                return orbit, t
        return None

    def _new_id(self, rank: int, dim: int) -> str:
        seq = self._counters.get((rank, dim), 0)
        self._counters[(rank, dim)] = seq + 1
        return f"r{rank}d{dim}n{seq}"

    def _insert(self, orbit: Orbit):
        self.orbits.append(orbit)
        self.by_id[orbit.id] = orbit
        self._buckets.setdefault(orbit.fingerprint, []).append(orbit)

    def add(self, c: PerfectCone, rng: random.Random | None = None) -> tuple[Orbit, ConeTransform, bool]:
        loc = self.locate(c)
        if loc is not None:
            return loc[0], loc[1], False
        if rng is None:
            rep = c
            t = _identity_transform(c)
            ref_order = None
        else:
            h = random_unimodular(c.g, rng)
            rep = conjugate_cone(c, h)
            t = _transform_from_matrix(h, c, rep)
            if t is None:
                raise AssertionError("conjugation failed to map the cone")
            ref_order = list(range(len(rep.generators)))
            rng.shuffle(ref_order)
        orbit = Orbit(
            id=self._new_id(c.rank, c.dim),
            rep=rep,
            rank=c.rank,
            dim=c.dim,
            alternating=is_alternating(rep),
            ref_orientation=spanning_subset(rep, ref_order),
            fingerprint=self.fingerprint(rep),
        )
        self._insert(orbit)
        return orbit, t, True

    def add_seed(self, orbit: Orbit):
        if orbit.id in self.by_id:
            raise ValueError(f"duplicate orbit id {orbit.id}")
        self._insert(orbit)

    def seed_counter(self, orbit_id: str):
        """Keep the id counters ahead of externally assigned ids."""
        body = orbit_id[1:]
        rank_s, rest = body.split("d", 1)
        dim_s, seq_s = rest.split("n", 1)
        key = (int(rank_s), int(dim_s))
        self._counters[key] = max(self._counters.get(key, 0), int(seq_s) + 1)


def classify_orbits(cones: Iterable[PerfectCone], rng: random.Random | None = None) -> OrbitRegistry:
    cones = list(cones)
    if not cones:
        raise ValueError("no cones to classify")
    g = cones[0].g
    if any(c.g != g for c in cones):
        raise ValueError("cones must share the ambient dimension")
    reg = OrbitRegistry(g)
    for c in cones:
        reg.add(c, rng)
    return reg


def format_registry(reg: OrbitRegistry) -> str:
    lines = [f"# orbit registry g={reg.g}"]
    for orbit in reg.orbits:
        lines.append(format_cone(orbit.rep).rstrip("\n"))
        lines.append(f"alt={1 if orbit.alternating else 0} rank={orbit.rank}")
        lines.append("orient " + " ".join(str(i) for i in orbit.ref_orientation))
    return "\n".join(lines) + "\n"


def parse_registry(text: str) -> OrbitRegistry:
    lines = text.splitlines()
    i = 0
    reg = None
    while i < len(lines):
        line = lines[i].strip()
        if not line or line.startswith("#"):
            i += 1
            continue
        c, i = parse_cone(lines, i)
        if reg is None:
            reg = OrbitRegistry(c.g)
        flags = lines[i].split()
        i += 1
        alt = None
        rank = None
        for tok in flags:
            if tok.startswith("alt="):
                alt = tok[4:] == "1"
            elif tok.startswith("rank="):
                rank = int(tok[5:])
        if alt is None or rank is None:
            raise ValueError(f"line {i}: malformed orbit flags")
        orient_parts = lines[i].split()
        i += 1
        if not orient_parts or orient_parts[0] != "orient":
            raise ValueError(f"line {i}: expected an orient line")
        ref = tuple(int(x) for x in orient_parts[1:])
        orbit = Orbit(
            id=reg._new_id(rank, c.dim),
            rep=c,
            rank=rank,
            dim=c.dim,
            alternating=alt,
            ref_orientation=ref,
            fingerprint=reg.fingerprint(c),
        )
        reg.add_seed(orbit)
    if reg is None:
        raise ValueError("registry text held no orbits")
    return reg
