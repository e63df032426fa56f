import random

import pytest
from hypothesis import given, settings, strategies as st

from perfcone.cone import PerfectCone, faces
from perfcone.intlinalg import det_int, mat_mul
from perfcone.matroid import complete_graph, graphic_cone
from perfcone.quadform import cone_of_form, load_bundled_catalog, principal_form
from perfcone.symmetry import (
    ConeTransform,
    automorphisms,
    classify_orbits,
    conjugate_cone,
    equivalent,
    format_registry,
    is_alternating,
    orientation_sign,
    parse_registry,
    random_unimodular,
    stabilizer_has_reflection,
)

COORD2 = PerfectCone(2, [(1, 0), (0, 1)])


def _pool(seed):
    rng = random.Random(seed)
    base = [
        cone_of_form(principal_form(2)),
        COORD2,
        PerfectCone(2, [(1, 0)]),
        cone_of_form(principal_form(3)),
        PerfectCone(3, [(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)]),
    ]
    return rng.choice(base), rng


def test_self_equivalence_is_identity_like():
    c = cone_of_form(principal_form(2))
    t = equivalent(c, c)
    assert t is not None
    assert t.check()
    assert t.perm == tuple(range(len(c.generators)))


def test_faces_of_principal_g2_pairwise_equivalent():
    c = cone_of_form(principal_form(2))
    two_dim = [f.cone for f in faces(c)[2]]
    assert len(two_dim) == 3
    for a in two_dim:
        for b in two_dim:
            t = equivalent(a, b)
            assert t is not None and t.check()


def test_principal4_and_d4_not_equivalent():
    prin = cone_of_form(principal_form(4))
    d4 = cone_of_form(load_bundled_catalog(4)[1])
    assert equivalent(prin, d4) is None
    assert equivalent(d4, prin) is None


def test_ambient_mismatch_rejected():
    with pytest.raises(ValueError):
        equivalent(cone_of_form(principal_form(2)), cone_of_form(principal_form(3)))


def test_transform_inverse_round_trips():
    c1 = cone_of_form(principal_form(2))
    c2 = conjugate_cone(c1, [[1, 1], [0, 1]])
    t = equivalent(c1, c2)
    assert t is not None and t.check()
    back = t.inverse()
    assert back.check()
    assert back.source == c2 and back.target == c1


@settings(max_examples=30)
@given(st.integers(min_value=0, max_value=10**6))
def test_equivalence_relation_on_conjugates(seed):
    c, rng = _pool(seed)
    h1 = random_unimodular(c.g, rng)
    h2 = random_unimodular(c.g, rng)
    c1 = conjugate_cone(c, h1)
    c2 = conjugate_cone(c, h2)
    t12 = equivalent(c1, c2)
    t21 = equivalent(c2, c1)
    assert t12 is not None and t12.check()
    assert t21 is not None and t21.check()


def test_automorphism_group_of_principal_g3():
    auts = automorphisms(cone_of_form(principal_form(3)))
    assert len(auts) == 24
    perms = {t.perm for t in auts}
    assert len(perms) == 24
    assert all(t.check() for t in auts)


def test_single_ray_automorphisms():
    auts = automorphisms(PerfectCone(2, [(1, 0)]))
    assert [t.perm for t in auts] == [(0,)]


def test_coordinate_swap_is_orientation_reversing():
    auts = automorphisms(COORD2)
    swap = [t for t in auts if t.perm == (1, 0)]
    assert swap
    assert orientation_sign(COORD2, swap[0]) == -1
    ident = [t for t in auts if t.perm == (0, 1)][0]
    assert orientation_sign(COORD2, ident) == 1


def test_principal_g3_automorphisms_all_positive():
    c = cone_of_form(principal_form(3))
    assert all(orientation_sign(c, t) == 1 for t in automorphisms(c))


def test_orientation_sign_is_homomorphism():
    c = cone_of_form(principal_form(2))
    auts = automorphisms(c)
    by_perm = {t.perm: t for t in auts}
    for s in auts:
        for t in auts:
            prod_perm = tuple(t.perm[s.perm[i]] for i in range(len(s.perm)))
            prod = ConeTransform(
                matrix=tuple(tuple(r) for r in mat_mul(t.matrix, s.matrix)),
                source=c,
                target=c,
                perm=prod_perm,
            )
            assert prod.check()
            assert orientation_sign(c, prod) == orientation_sign(
                c, s
            ) * orientation_sign(c, t)


def test_orientation_sign_rejects_foreign_transform():
    c = cone_of_form(principal_form(2))
    t = automorphisms(COORD2)[0]
    with pytest.raises(ValueError):
        orientation_sign(c, t)


def test_alternating_examples():
    assert not is_alternating(cone_of_form(principal_form(2)))
    assert is_alternating(cone_of_form(principal_form(3)))
    assert is_alternating(PerfectCone(2, []))
    assert is_alternating(PerfectCone(2, [(1, 0)]))
    # two distinct lattice coloops force a sign-reversing swap
    assert not is_alternating(COORD2)
    assert not is_alternating(PerfectCone(3, [(1, 0, 0), (0, 1, 0)]))


@settings(max_examples=30)
@given(st.integers(min_value=0, max_value=10**6))
def test_alternating_is_a_class_function(seed):
    c, rng = _pool(seed)
    h = random_unimodular(c.g, rng)
    assert is_alternating(c) == is_alternating(conjugate_cone(c, h))


def test_stabilizer_reflections():
    assert stabilizer_has_reflection(COORD2)
    assert stabilizer_has_reflection(cone_of_form(principal_form(2)))
    assert stabilizer_has_reflection(PerfectCone(2, [(1, 0)]))
    assert stabilizer_has_reflection(PerfectCone(3, []))


def test_automorphism_witnesses_are_unimodular():
    for c in (COORD2, cone_of_form(principal_form(2))):
        for t in automorphisms(c):
            assert abs(det_int([list(r) for r in t.matrix])) == 1


def test_classify_orbits_of_principal_g2_faces():
    c = cone_of_form(principal_form(2))
    all_faces = [f.cone for fs in faces(c).values() for f in fs]
    reg = classify_orbits(all_faces)
    assert len(reg.orbits) == 4
    dims = sorted(o.dim for o in reg.orbits)
    assert dims == [0, 1, 2, 3]
    for o in reg.orbits:
        assert o.alternating == (o.dim <= 1)


def test_classify_orbits_gl_equals_sl_for_g4_tops(reg4):
    top = [o for o in reg4.orbits if o.rank == 4]
    assert top
    assert all(stabilizer_has_reflection(o.rep) for o in top)


def test_locate_maps_every_member_to_one_orbit():
    c = cone_of_form(principal_form(3))
    reg = classify_orbits([f.cone for fs in faces(c).values() for f in fs])
    rng = random.Random(7)
    for o in reg.orbits:
        moved = conjugate_cone(o.rep, random_unimodular(3, rng))
        hit = reg.locate(moved)
        assert hit is not None
        orbit, transform = hit
        assert orbit.id == o.id
        assert transform.check()


def test_registry_roundtrip(reg3):
    text = format_registry(reg3)
    back = parse_registry(text)
    assert len(back.orbits) == len(reg3.orbits)
    for a, b in zip(reg3.orbits, back.orbits):
        assert a.id == b.id
        assert a.rep == b.rep
        assert a.alternating == b.alternating
        assert a.ref_orientation == b.ref_orientation
