from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qtrace import roots
from qtrace.errors import InvalidInput
from qtrace.roots import RootSystem, TorusAtom

A1, A2, B2, G2 = (RootSystem.of_type(t) for t in ("A1", "A2", "B2", "G2"))
F = Fraction


@pytest.mark.parametrize(
    "tag,order,det",
    [("A1", 2, 2), ("A2", 6, 3), ("A3", 24, 4), ("B2", 8, 2), ("C3", 48, 2), ("B4", 384, 2), ("D4", 192, 4), ("G2", 12, 1)],
)
def test_weyl_group_orders(tag, order, det):
    R = RootSystem.of_type(tag)
    W = roots.weyl_group(R)
    assert len(W) == order
    assert abs(R.determinant) == det
    divisors, points = roots.center_group(R)
    assert len(points) == det
    prod = 1
    for d in divisors:
        prod *= d
    assert prod == det


def test_d4_center_is_klein_four():
    assert roots.elementary_divisors(RootSystem.of_type("D4")) == [2, 2]


def test_cartan_validation():
    with pytest.raises(InvalidInput):
        RootSystem(((2, -1), (0, 2)))
    with pytest.raises(InvalidInput):
        RootSystem(((2, -2), (-2, 2)))  # affine A1
    with pytest.raises(InvalidInput):
        RootSystem(((2, 1), (1, 2)))
    with pytest.raises(InvalidInput):
        RootSystem.of_type("E6")
    assert RootSystem.from_json({"cartan": [[2, -1], [-1, 2]]}).cartan == A2.cartan


def test_examples():
    assert roots.dominant_rep(A1, (-3,)) == (3,)
    assert roots.dominant_rep(A2, (-1, 2)) in roots.orbit(A2, (-1, 2))
    assert roots.saturated_set(A1, (2,)) == {(-2,), (0,), (2,)}
    assert roots.saturated_set(A1, (1,)) == {(-1,), (1,)}
    assert roots.saturated_set(G2, (0, 0)) == {(0, 0)}
    assert roots.in_root_lattice(A1, (2,)) and not roots.in_root_lattice(A1, (1,))
    assert roots.in_root_lattice(A2, (1, 1))
    assert roots.center_points(A1) == [(F(0),), (F(1, 2),)]
    assert roots.elementary_divisors(G2) == []


systems = st.sampled_from([A1, A2, B2, G2, RootSystem.of_type("A3"), RootSystem.of_type("C3")])


@given(systems, st.data())
def test_saturated_set_properties(R, data):
    omega = tuple(data.draw(st.lists(st.integers(0, 3 if R.rank <= 2 else 1), min_size=R.rank, max_size=R.rank)))
    sat = roots.saturated_set(R, omega)
    assert sat == roots.saturated_closure(R, omega)
    assert omega in sat
    for w in sat:
        assert roots.in_root_lattice(R, tuple(a - b for a, b in zip(omega, w)))
        for i in range(R.rank):
            assert R.reflect(i, w) in sat
        # omega is the unique maximal element: omega - w is a non-negative root combination
        assert all(k >= 0 for k in roots.root_coordinates(R, tuple(a - b for a, b in zip(omega, w))))


@given(systems, st.data())
def test_dominant_rep(R, data):
    lam = tuple(data.draw(st.lists(st.integers(-4, 4), min_size=R.rank, max_size=R.rank)))
    d = roots.dominant_rep(R, lam)
    assert all(x >= 0 for x in d)
    assert d in roots.orbit(R, lam)
    assert roots.coset_label(R, d) == roots.coset_label(R, lam)


@given(systems)
def test_weyl_group_is_a_group_preserving_cosets(R):
    W = roots.weyl_group(R)
    keys = {tuple(map(tuple, w.tolist())) for w in W}
    rng = random.Random(0)
    for _ in range(10):
        a, b = rng.choice(W), rng.choice(W)
        assert tuple(map(tuple, (a @ b).tolist())) in keys


def test_lemma_examples():
    for R, radius, comps in ((A1, 3, 2), (A2, 2, 3), (G2, 2, 1), (A1, 4, 2), (A2, 3, 3), (B2, 3, 2)):
        rec = roots.lemma_equiv_check(R, radius)
        assert rec.verdict, rec.failures
        assert rec.computed_values["components"] == comps


@pytest.mark.parametrize("R", [A1, A2, B2, G2])
def test_lemma_holds_without_slack(R):
    rec = roots.lemma_equiv_check(R, 2, slack=0, max_slack=0)
    assert rec.verdict, rec.failures


def test_condition_ii_examples():
    atom = lambda *x: [TorusAtom(tuple(F(v) for v in x), 1)]
    assert roots.condition_ii_check(A2, atom(0, 0))
    assert roots.condition_ii_check(A1, atom(F(1, 2)))
    assert not roots.condition_ii_check(A1, atom(F(1, 4)))
    assert roots.center_support_check(A1, atom(F(1, 2)))
    assert not roots.center_support_check(A1, atom(F(1, 3)))
    with pytest.raises(InvalidInput):
        roots.condition_ii_check(A1, [TorusAtom((F(0),), F(1, 2))])
    with pytest.raises(InvalidInput):
        TorusAtom((0.5,), 1)


@pytest.mark.parametrize("R", [A1, A2, B2])
def test_condition_ii_matches_center_support(R):
    rng = random.Random(7)
    for _ in range(50):
        atoms = roots.random_atomic_measure(R, rng)
        assert roots.condition_ii_check(R, atoms, 3) == roots.center_support_check(R, atoms)


def test_torus_atom_json():
    a = TorusAtom.from_json({"x": ["1/2", "0"], "p": "1"})
    assert a.to_json() == {"x": ["1/2", "0"], "p": "1"}


@pytest.mark.parametrize("c", [-2, -1, F(-1, 2), 0, F(1, 2), 1, 2])
def test_suq2_grid(c):
    assert roots.suq2_psd(c, 6) == (abs(c) <= 1)
    assert roots.suq2_psd(float(c), 6) == (abs(c) <= 1)


def test_suq2_examples():
    assert roots.suq2_psd(1, 10) and roots.suq2_psd(-1, 10)
    assert not roots.suq2_psd(F(3, 2), 2)
    with pytest.raises(InvalidInput):
        roots.suq2_psd(0, 51)


@given(st.fractions(-3, 3, max_denominator=7))
def test_suq2_monotone(c):
    seen_false = False
    for m in range(1, 9):
        ok = roots.suq2_psd(c, m)
        assert not (seen_false and ok)
        seen_false |= not ok
        if m >= 2:
            assert ok == (abs(c) <= 1)
