import pytest
from hypothesis import given
from hypothesis import strategies as st

from brinkmann.decision import Found, Refuted
from brinkmann.linear import (
    AffineMap1D,
    LinearPart,
    PairSolutionSet,
    SemilinearSet1D,
    UnsupportedDimension,
    affine_orbit_decide,
    brute_force_orbit,
    orbit_decide,
    orbit_is_finite,
    orbit_solutions,
    pair_intersect_nonempty,
    pair_membership,
    scalar_geometric_decide,
    sl_intersect,
    sl_min,
)


def test_orbit_examples():
    assert orbit_decide(((2, 0), (0, 3)), (1, 1), (8, 27)) == Found(3)
    assert orbit_decide(((1, 0), (0, 1)), (4, -2), (4, -2)) == Found(0)
    assert isinstance(orbit_decide(((2, 0), (0, 3)), (1, 1), (8, 9)), Refuted)


def test_orbit_rejects_large_dimension():
    with pytest.raises(UnsupportedDimension):
        orbit_decide(((1, 0, 0), (0, 1, 0), (0, 0, 1)), (1, 1, 1), (1, 1, 1))


def test_affine_examples():
    assert affine_orbit_decide(AffineMap1D(1, 1), 0, 5) == Found(5)
    assert affine_orbit_decide(AffineMap1D(2, 1), 1, 15) == Found(3)
    assert isinstance(affine_orbit_decide(AffineMap1D(2, 0), 3, 5), Refuted)


def test_scalar_geometric_examples():
    assert scalar_geometric_decide(2, 3, 12) == Found(3)
    assert scalar_geometric_decide(1, 5, 5) == Found(1)
    assert isinstance(scalar_geometric_decide(2, 3, 7), Refuted)


def test_semilinear_examples():
    a = SemilinearSet1D.progression(2, 3)
    b = SemilinearSet1D.progression(5, 6)
    assert sl_intersect(a, b) == SemilinearSet1D.progression(5, 6)
    assert sl_intersect(SemilinearSet1D.progression(0, 2), SemilinearSet1D.progression(1, 2)).is_empty()
    assert sl_min(a) == 2
    s1 = PairSolutionSet(linear=(LinearPart((1, 1)),))
    s2 = PairSolutionSet(linear=(LinearPart((2, 2), 2),))
    assert pair_intersect_nonempty(s1, s2) == (2, 2)
    assert pair_membership((4, 6), s2) and not pair_membership((4, 5), s2)


def test_periodic_and_finite_orbits():
    rotation = ((0, 1), (-1, 0))
    assert orbit_solutions(rotation, (1, 0), (-1, 0)) == SemilinearSet1D.progression(2, 4)
    assert orbit_is_finite(rotation, (1, 2))
    assert not orbit_is_finite(((1, 1), (0, 1)), (1, 1))
    assert orbit_is_finite(((1, 1), (0, 1)), (0, 1))


entries = st.integers(-4, 4)
matrices = st.tuples(st.tuples(entries, entries), st.tuples(entries, entries))
vectors = st.tuples(st.integers(-9, 9), st.integers(-9, 9))


@given(matrices, vectors, st.integers(0, 12))
def test_orbit_points_are_found(M, v0, k):
    target = v0
    for _ in range(k):
        target = (target[0] * M[0][0] + target[1] * M[1][0], target[0] * M[0][1] + target[1] * M[1][1])
    d = orbit_decide(M, v0, target)
    assert isinstance(d, Found) and d.witness == brute_force_orbit(M, v0, target, k)


@given(matrices, vectors, vectors)
def test_orbit_agrees_with_iteration(M, v0, target):
    d = orbit_decide(M, v0, target)
    bf = brute_force_orbit(M, v0, target, 300)
    if isinstance(d, Found):
        assert bf == d.witness or (bf is None and d.witness > 300)
    else:
        assert bf is None


@given(st.integers(-3, 3), st.integers(-5, 5), st.integers(-5, 5), st.integers(-40, 40))
def test_affine_agrees_with_iteration(m, o, a0, target):
    theta = AffineMap1D(m, o)
    seen, c = None, a0
    for k in range(200):
        if c == target:
            seen = k
            break
        c = theta(c)
    d = affine_orbit_decide(theta, a0, target)
    assert (d.witness if isinstance(d, Found) else None) == seen


progressions = st.lists(st.tuples(st.integers(0, 30), st.integers(0, 12)), max_size=3)


@given(progressions, progressions)
def test_intersection_by_enumeration(pa, pb):
    a, b = SemilinearSet1D.of(pa), SemilinearSet1D.of(pb)
    both = sl_intersect(a, b)
    for k in range(400):
        assert (k in both) == (k in a and k in b)
