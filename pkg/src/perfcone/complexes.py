"""Orbit registry pipeline and the chain complexes built on it.

The registry for ambient g is seeded with the padded registry of g-1, so
boundary orbits keep their identity across ambient dimensions; top-cone
face enumeration then only ever discovers full-rank orbits. Padding a
representative changes neither its facet combinatorics nor any span
coordinate, so inherited facet records stay valid verbatim.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .cone import PerfectCone, facet_index_sets, pad, spanning_subset
from .intlinalg import det_sign
from .matroid import (
    all_simple_graphs,
    graphic_cone,
    m_star_k33,
    r_10,
    tu_cone,
    zg_coloop_indices,
)
from .quadform import QuadraticForm, cone_of_form, load_bundled_catalog
from .symmetry import Orbit, OrbitRegistry, span_coordinates


def build_registry(
    g: int,
    catalog_for: Callable[[int], list[QuadraticForm]] | None = None,
    seed: int | None = None,
) -> OrbitRegistry:
    """Classify every face of every catalog cone for ambients 1..g.

    seed=None gives the canonical run (first-seen representatives);
    an integer seed conjugates new representatives by random unimodular
    matrices and shuffles choice orders, for invariance testing.
    """
    if catalog_for is None:
        catalog_for = load_bundled_catalog
    reg = OrbitRegistry(g)
    if g == 0:
        zero = PerfectCone(0, [])
        reg.add_seed(
            Orbit(
                id=reg._new_id(0, 0),
                rep=zero,
                rank=0,
                dim=0,
                alternating=True,
                ref_orientation=(),
                fingerprint=reg.fingerprint(zero),
            )
        )
        return reg
    rng = random.Random(seed) if seed is not None else None
    prev = build_registry(g - 1, catalog_for, seed)
    for orb in prev.orbits:
        rep = pad(orb.rep, g)
        reg.add_seed(
            Orbit(
                id=orb.id,
                rep=rep,
                rank=orb.rank,
                dim=orb.dim,
                alternating=orb.alternating,
                ref_orientation=orb.ref_orientation,
                fingerprint=reg.fingerprint(rep),
                facets=list(orb.facets),
            )
        )
        reg.seed_counter(orb.id)
    queue: list[Orbit] = []
    for form in catalog_for(g):
        top = cone_of_form(form)
        if top.g != g:
            raise ValueError(f"catalog form {form.name} has ambient {top.g}, not {g}")
        orbit, _t, created = reg.add(top, rng)
        if created:
            queue.append(orbit)
    while queue:
        _record_facets(reg, queue.pop(), rng, queue)
    return reg


def _record_facets(
    reg: OrbitRegistry, orbit: Orbit, rng: random.Random | None, queue: list[Orbit]
) -> None:
    rep = orbit.rep
    sets = [sorted(s) for s in facet_index_sets(rep)]
    if rng is None:
        sets.sort()
    else:
        rng.shuffle(sets)
    for s in sets:
        face = rep.subcone(s)
        if face.rank < reg.g:
            loc = reg.locate(face)
            if loc is None:
                raise AssertionError(
                    "boundary facet missing from the padded seeds; "
                    "the lower catalog is incomplete"
                )
            target, t = loc
        else:
            target, t, created = reg.add(face, rng)
            if created:
                queue.append(target)
        orbit.facets.append((frozenset(s), target.id, t.perm))


def annotate_coloops(reg: OrbitRegistry) -> None:
    for orb in reg.orbits:
        if orb.coloop_count is None:
            orb.coloop_count = len(zg_coloop_indices(orb.rep.generators))


def annotate_matroidal(reg: OrbitRegistry) -> None:
    """Flag orbits whose cone comes from a regular matroid.

    Sources: all graphs on g+1 vertices, plus the two desk-scale
    non-graphic regular fixtures when their rank fits. Faces of flagged
    orbits are flagged transitively (column deletion keeps regularity).
    """
    g = reg.g
    if g + 1 > 7:
        raise ValueError("matroidal annotation is desk-scale: needs g <= 6")
    sources = [graphic_cone(gr) for gr in all_simple_graphs(g + 1)]
    if g >= 4:
        sources.append(tu_cone(m_star_k33(), g))
    if g >= 5:
        sources.append(tu_cone(r_10(), g))
    flagged: set[str] = set()
    for cone in sources:
        loc = reg.locate(cone)
        if loc is None:
            raise AssertionError("matroidal source cone missing from the registry")
        flagged.add(loc[0].id)
    stack = list(flagged)
    while stack:
        oid = stack.pop()
        for _s, tid, _tau in reg.by_id[oid].facets:
            if tid not in flagged:
                flagged.add(tid)
                stack.append(tid)
    for orb in reg.orbits:
        orb.matroidal = orb.id in flagged


def _det_sign_square(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 1
    return det_sign(rows)


def _facet_signs(orbit: Orbit, reg: OrbitRegistry) -> list[int]:
    """eta for each recorded facet whose target orbit is alternating
    (0 placeholder otherwise); cached on the orbit."""
    cached = getattr(orbit, "_facet_signs", None)
    if cached is not None:
        return cached
    rep = orbit.rep
    xs = span_coordinates(rep, orbit.ref_orientation)
    n = len(rep.generators)
    signs: list[int] = []
    for index_set, tid, tau in orbit.facets:
        target = reg.by_id[tid]
        if not target.alternating:
            signs.append(0)
            continue
        idx = sorted(index_set)
        u = min(i for i in range(n) if i not in index_set)
        face = rep.subcone(idx)
        local_span = spanning_subset(face)
        rows = [xs[u]] + [xs[idx[b]] for b in local_span]
        s1 = _det_sign_square(rows)
        xt = span_coordinates(target.rep, target.ref_orientation)
        rows_t = [xt[tau[b]] for b in local_span]
        s2 = _det_sign_square(rows_t)
        if s1 == 0 or s2 == 0:
            raise AssertionError("facet orientation degenerated")
        signs.append(s1 * s2)
    orbit._facet_signs = signs
    return signs


def differential_entry(target: Orbit, source: Orbit, reg: OrbitRegistry) -> int:
    """Sum of transported facet orientations over facets of the source
    representative equivalent to the target orbit."""
    if not (source.alternating and target.alternating):
        raise ValueError("differential entries need alternating orbits")
    signs = _facet_signs(source, reg)
    total = 0
    for (_s, tid, _tau), sgn in zip(source.facets, signs):
        if tid == target.id:
            total += sgn
    return total


@dataclass
class ChainComplexQ:
    label: str
    g: int
    basis: dict[int, list[str]]
    diff: dict[int, dict[tuple[int, int], int]]

    def degrees(self) -> range:
        return range(-1, self.g * (self.g + 1) // 2)

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, []))

    def matrix(self, n: int) -> list[list[int]]:
        """Dense boundary matrix of degree n, shape dim(n-1) x dim(n)."""
        rows, cols = self.dim(n - 1), self.dim(n)
        out = [[0] * cols for _ in range(rows)]
        for (r, c), v in self.diff.get(n, {}).items():
            out[r][c] = v
        return out


def _build_by_predicate(
    label: str, reg: OrbitRegistry, keep: Callable[[Orbit], bool], closed: bool
) -> ChainComplexQ:
    g = reg.g
    dmax = g * (g + 1) // 2
    basis: dict[int, list[str]] = {n: [] for n in range(-1, dmax)}
    pos: dict[str, tuple[int, int]] = {}
    for orb in reg.orbits:
        if orb.alternating and keep(orb):
            n = orb.dim - 1
            pos[orb.id] = (n, len(basis[n]))
            basis[n].append(orb.id)
    diff: dict[int, dict[tuple[int, int], int]] = {n: {} for n in range(0, dmax)}
    for orb in reg.orbits:
        if orb.id not in pos:
            continue
        n, col = pos[orb.id]
        if n < 0:
            continue
        signs = _facet_signs(orb, reg)
        acc: dict[int, int] = {}
        for (_s, tid, _tau), sgn in zip(orb.facets, signs):
            if sgn == 0:
                continue
            if tid not in pos:
                if closed:
                    raise AssertionError(
                        f"{label} is not closed under facets: "
                        f"{orb.id} has facet {tid} outside the basis"
                    )
                continue
            row = pos[tid][1]
            acc[row] = acc.get(row, 0) + sgn
        for row, val in acc.items():
            if val:
                diff[n][(row, col)] = val
    return ChainComplexQ(label, g, basis, diff)


def build_perfect_complex(g: int, reg: OrbitRegistry) -> ChainComplexQ:
    if reg.g != g:
        raise ValueError("registry ambient mismatch")
    return _build_by_predicate("P", reg, lambda o: True, closed=True)


def build_voronoi_complex(g: int, reg: OrbitRegistry) -> ChainComplexQ:
    """Quotient of P killing boundary (rank < g) generators."""
    if reg.g != g:
        raise ValueError("registry ambient mismatch")
    return _build_by_predicate("V", reg, lambda o: o.rank == g, closed=False)


def build_inflation_complex(g: int, reg: OrbitRegistry) -> ChainComplexQ:
    if reg.g != g:
        raise ValueError("registry ambient mismatch")
    annotate_coloops(reg)
    return _build_by_predicate(
        "I", reg, lambda o: o.rank < g or (o.coloop_count or 0) >= 1, closed=True
    )


def build_matroid_complexes(g: int, reg: OrbitRegistry) -> tuple[ChainComplexQ, ChainComplexQ]:
    if reg.g != g:
        raise ValueError("registry ambient mismatch")
    annotate_coloops(reg)
    annotate_matroidal(reg)
    r_cx = _build_by_predicate("R", reg, lambda o: o.matroidal, closed=True)
    c_cx = _build_by_predicate(
        "C",
        reg,
        lambda o: o.matroidal and (o.rank < g or (o.coloop_count or 0) >= 1),
        closed=True,
    )
    return r_cx, c_cx


BUILDERS = {
    "P": lambda g, reg: build_perfect_complex(g, reg),
    "V": lambda g, reg: build_voronoi_complex(g, reg),
    "I": lambda g, reg: build_inflation_complex(g, reg),
    "R": lambda g, reg: build_matroid_complexes(g, reg)[0],
    "C": lambda g, reg: build_matroid_complexes(g, reg)[1],
}


@dataclass
class ComplexTriple:
    g: int
    inclusion: dict[int, list[tuple[int, int]]]
    projection: dict[int, list[tuple[int, int]]]


def _compose(sparse_a: dict, sparse_b: dict) -> dict:
    """Entries of A.B for {(row, col): val} sparse maps."""
    by_row_b: dict[int, list[tuple[int, int]]] = {}
    for (r, c), v in sparse_b.items():
        by_row_b.setdefault(r, []).append((c, v))
    out: dict[tuple[int, int], int] = {}
    for (r, c), v in sparse_a.items():
        for c2, v2 in by_row_b.get(c, []):
            key = (r, c2)
            out[key] = out.get(key, 0) + v * v2
    return {k: v for k, v in out.items() if v}


def exact_triple(
    g: int, p_prev: ChainComplexQ, p_cur: ChainComplexQ, v_cur: ChainComplexQ
) -> ComplexTriple:
    """Degreewise basis injection and projection; raises on any degree
    where exactness or commutation fails."""
    if p_cur.g != g or v_cur.g != g or p_prev.g != g - 1:
        raise ValueError("triple needs P(g-1), P(g), V(g)")
    inclusion: dict[int, list[tuple[int, int]]] = {}
    projection: dict[int, list[tuple[int, int]]] = {}
    dmax = g * (g + 1) // 2
    for n in range(-1, dmax):
        prev_ids = p_prev.basis.get(n, [])
        cur_ids = p_cur.basis.get(n, [])
        v_ids = v_cur.basis.get(n, [])
        if len(cur_ids) != len(prev_ids) + len(v_ids):
            raise ValueError(
                f"exactness fails at degree {n}: "
                f"{len(cur_ids)} != {len(prev_ids)} + {len(v_ids)}"
            )
        cur_pos = {oid: k for k, oid in enumerate(cur_ids)}
        if set(prev_ids) & set(v_ids):
            raise ValueError(f"degree {n}: boundary and interior bases overlap")
        for oid in prev_ids + v_ids:
            if oid not in cur_pos:
                raise ValueError(f"degree {n}: orbit {oid} missing from P({g})")
        inclusion[n] = [(cur_pos[oid], k) for k, oid in enumerate(prev_ids)]
        projection[n] = [(k, cur_pos[oid]) for k, oid in enumerate(v_ids)]
    for n in range(0, dmax):
        inc_n = {(r, c): 1 for r, c in inclusion[n]}
        inc_prev = {(r, c): 1 for r, c in inclusion[n - 1]}
        left = _compose(p_cur.diff.get(n, {}), inc_n)
        right = _compose(inc_prev, p_prev.diff.get(n, {}))
        if left != right:
            raise ValueError(f"inclusion square fails to commute at degree {n}")
        proj_n = {(r, c): 1 for r, c in projection[n]}
        proj_prev = {(r, c): 1 for r, c in projection[n - 1]}
        left = _compose(v_cur.diff.get(n, {}), proj_n)
        right = _compose(proj_prev, p_cur.diff.get(n, {}))
        if left != right:
            raise ValueError(f"projection square fails to commute at degree {n}")
    return ComplexTriple(g, inclusion, projection)


def format_complex(cx: ChainComplexQ) -> str:
    lines = [f"complex {cx.label} g={cx.g}"]
    for n in cx.degrees():
        ids = cx.basis.get(n, [])
        head = f"deg {n} dim {len(ids)}"
        lines.append(head + (" " + " ".join(ids) if ids else ""))
    for n in sorted(cx.diff):
        for r, c in sorted(cx.diff[n]):
            lines.append(f"d {n} {r} {c} {cx.diff[n][(r, c)]}")
    return "\n".join(lines) + "\n"


def parse_complex(text: str) -> ChainComplexQ:
    lines = text.splitlines()
    label = None
    g = None
    basis: dict[int, list[str]] = {}
    diff: dict[int, dict[tuple[int, int], int]] = {}
    for ln, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "complex":
            if len(parts) != 3 or not parts[2].startswith("g="):
                raise ValueError(f"line {ln}: malformed complex header")
            label = parts[1]
            g = int(parts[2][2:])
        elif parts[0] == "deg":
            if label is None:
                raise ValueError(f"line {ln}: deg before complex header")
            n = int(parts[1])
            if parts[2] != "dim":
                raise ValueError(f"line {ln}: expected `deg <n> dim <d>`")
            d = int(parts[3])
            ids = parts[4:]
            if len(ids) != d:
                raise ValueError(f"line {ln}: dim {d} but {len(ids)} ids")
            basis[n] = ids
        elif parts[0] == "d":
            if len(parts) != 5:
                raise ValueError(f"line {ln}: expected `d <n> <row> <col> <int>`")
            n, r, c, v = (int(x) for x in parts[1:])
            diff.setdefault(n, {})[(r, c)] = v
        else:
            raise ValueError(f"line {ln}: unrecognized directive {parts[0]!r}")
    if label is None or g is None:
        raise ValueError("complex text held no header")
    dmax = g * (g + 1) // 2
    for n in range(-1, dmax):
        basis.setdefault(n, [])
    for n in range(0, dmax):
        diff.setdefault(n, {})
    return ChainComplexQ(label, g, basis, diff)
