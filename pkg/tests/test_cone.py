import random

import pytest
from hypothesis import given, settings, strategies as st

from perfcone.cone import (
    PerfectCone,
    dimension,
    faces,
    facet_index_sets,
    format_cone,
    is_boundary,
    pad,
    parse_cone,
    rank,
    reduce,
    spanning_subset,
)
from perfcone.intlinalg import det_int
from perfcone.matroid import graphic_cone, complete_graph
from perfcone.quadform import cone_of_form, load_bundled_catalog, principal_form
from perfcone.symmetry import conjugate_cone, equivalent, random_unimodular

from oracles import facets_bruteforce, rank_oracle


def _flat(v):
    g = len(v)
    return tuple(v[i] * v[j] for i in range(g) for j in range(g))


def test_constructor_rejects_bad_generators():
    with pytest.raises(ValueError):
        PerfectCone(2, [(2, 0)])
    with pytest.raises(ValueError):
        PerfectCone(2, [(1, 0), (-1, 0)])
    with pytest.raises(ValueError):
        PerfectCone(2, [(1, 0, 0)])
    with pytest.raises(ValueError):
        PerfectCone(-1, [])


def test_rank_and_dimension_examples():
    prin2 = cone_of_form(principal_form(2))
    assert rank(prin2) == 2 and dimension(prin2) == 3
    zero = PerfectCone(2, [])
    assert rank(zero) == 0 and dimension(zero) == 0
    d4 = cone_of_form(load_bundled_catalog(4)[1])
    assert rank(d4) == 4 and dimension(d4) == 10


def test_is_boundary():
    prin2 = cone_of_form(principal_form(2))
    assert not is_boundary(prin2)
    assert not is_boundary(PerfectCone(2, [(1, 0), (0, 1)]))
    assert is_boundary(PerfectCone(2, [(1, 0)]))
    assert is_boundary(PerfectCone(1, []))


def test_simplicial_face_counts():
    c = cone_of_form(principal_form(2))
    by_dim = faces(c)
    assert {d: len(fs) for d, fs in by_dim.items()} == {0: 1, 1: 3, 2: 3, 3: 1}


def test_face_lattice_euler_characteristic():
    cones = [
        cone_of_form(principal_form(2)),
        cone_of_form(principal_form(3)),
        graphic_cone(complete_graph(4)).subcone(range(5)),
    ]
    for c in cones:
        total = sum((-1) ** d * len(fs) for d, fs in faces(c).items())
        assert total == 0


def test_face_of_face_is_face():
    c = cone_of_form(principal_form(2))
    for f in faces(c)[2]:
        sub = f.cone
        for ff in faces(sub)[1]:
            gens = set(ff.cone.generators)
            assert any(
                gens == set(other.cone.generators) for other in faces(c)[1]
            )


def test_facets_match_bruteforce_oracle():
    cones = [
        cone_of_form(principal_form(2)),
        cone_of_form(principal_form(3)),
        graphic_cone(complete_graph(4)).subcone(range(5)),
    ]
    for c in cones:
        mine = set(facet_index_sets(c))
        oracle = facets_bruteforce([_flat(v) for v in c.generators])
        assert mine == oracle


def test_d4_cone_facets_against_oracle():
    # non-simplicial: 12 generators, dimension 10
    c = cone_of_form(load_bundled_catalog(4)[1])
    mine = set(facet_index_sets(c))
    assert len(mine) == 64
    assert all(len(f) == 9 for f in mine)
    assert mine == facets_bruteforce([_flat(v) for v in c.generators])


def test_reduce_examples():
    padded = pad(cone_of_form(principal_form(2)), 3)
    red, transform = reduce(padded)
    assert red.g == 2
    assert equivalent(red, cone_of_form(principal_form(2))) is not None
    assert abs(det_int(transform)) == 1

    ray = PerfectCone(2, [(1, 0)])
    red, _ = reduce(ray)
    assert red.g == 1 and red.generators == ((1,),)

    with pytest.raises(ValueError):
        reduce(cone_of_form(principal_form(2)))


@settings(max_examples=25)
@given(st.integers(min_value=0, max_value=10**6), st.sampled_from([1, 2]))
def test_reduce_after_pad_recovers_cone(seed, gsrc):
    base = cone_of_form(principal_form(gsrc))
    big = pad(base, gsrc + 1 + seed % 2)
    moved = conjugate_cone(big, random_unimodular(big.g, random.Random(seed)))
    red, _ = reduce(moved)
    assert red.g == base.g
    assert equivalent(red, base) is not None


def test_rank_against_oracle():
    for g in (2, 3, 4):
        c = cone_of_form(principal_form(g))
        assert rank(c) == rank_oracle(c.generators)
        assert dimension(c) == rank_oracle([_flat(v) for v in c.generators])


def test_face_monotonicity():
    c = cone_of_form(principal_form(3))
    for d, fs in faces(c).items():
        for f in fs:
            assert rank(f.cone) <= rank(c)
            if d < c.dim:
                assert f.cone.dim < c.dim


def test_spanning_subset_spans():
    c = cone_of_form(principal_form(2))
    idx = spanning_subset(c)
    assert idx == (0, 1, 2)
    sub = [_flat(c.generators[i]) for i in idx]
    assert rank_oracle(sub) == c.dim


def test_cone_file_roundtrip():
    c = cone_of_form(principal_form(3))
    text = format_cone(c)
    assert text.splitlines()[0] == "cone g=3 n=6"
    parsed, consumed = parse_cone(text.splitlines())
    assert parsed == c
    assert consumed == 7


def test_parse_cone_errors():
    with pytest.raises(ValueError) as err:
        parse_cone(["cone g=2 n=1", "1 x"])
    assert "line" in str(err.value)
    with pytest.raises(ValueError):
        parse_cone(["cone g=2", "1 0"])
