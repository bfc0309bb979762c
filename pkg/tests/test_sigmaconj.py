import sys
import os

# ensure local package is importable when running tests from workspace root
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from adlvlab.affineweyl import affine_weyl
from adlvlab.elements import parse_element
from adlvlab.errors import MalformedElement, SearchBudgetExceeded
from adlvlab.rootdata import load_preset
from adlvlab.sigmaconj import (
    ReductionStep,
    b_class_of,
    class_key,
    conjugacy_invariant,
    enumerate_b_g_mu,
    is_straight,
    newton_kottwitz,
    reduce_to_minimal,
    sigma_average,
    tilde_closure,
)

PGL2 = affine_weyl(load_preset("A1"))
SL2 = affine_weyl(load_preset("A1sc"))


def test_reduction_of_the_golden_element():
    w = parse_element(PGL2, "t[-2] * w[1]")
    w_min, path = reduce_to_minimal(PGL2, w, PGL2.frobenius)
    assert w_min == PGL2.simple(0)
    assert path == [ReductionStep(1, "length_dropping")]


def test_reduction_respects_the_budget():
    w = parse_element(PGL2, "t[-2] * w[1]")
    assert reduce_to_minimal(PGL2, w, PGL2.frobenius, budget=1)[0] == PGL2.simple(0)
    with pytest.raises(SearchBudgetExceeded):
        tilde_closure(PGL2, PGL2.translation((2,)), PGL2.frobenius, budget=1)


@pytest.mark.parametrize("preset,max_length", [("A2", 8), ("C2", 8), ("G2", 6)])
def test_minimal_length_does_not_depend_on_the_traversal(preset, max_length):
    group = affine_weyl(load_preset(preset))
    frob = group.frobenius
    for layer in group.elements_up_to(max_length):
        for w in layer:
            expected = group.length(reduce_to_minimal(group, w, frob)[0])
            for seed in range(5):
                w_min, _ = reduce_to_minimal(group, w, frob, rng=random.Random(seed))
                assert group.length(w_min) == expected


def test_newton_and_kottwitz_points():
    frob = PGL2.frobenius
    nk = newton_kottwitz(PGL2, PGL2.translation((2,)), frob)
    assert nk.newton == (2,)
    assert nk.kappa == (0,)
    tau = newton_kottwitz(PGL2, PGL2.omega_elements[1], frob)
    assert tau.newton == (0,)
    assert tau.kappa == (1,)
    assert tau.kappa0 == 1
    assert newton_kottwitz(PGL2, PGL2.translation((-2,)), frob).newton == (2,)


def test_sigma_average_in_a_twisted_group():
    datum = load_preset("2A3")
    P = datum.frobenius_matrix
    lam = (1, 0, 0)
    avg = sigma_average(datum, lam)
    image = tuple(sum(P[i][k] * lam[k] for k in range(3)) for i in range(3))
    assert avg == tuple((Fraction(a) + b) / 2 for a, b in zip(lam, image))


def test_straight_elements():
    frob = PGL2.frobenius
    assert is_straight(PGL2, PGL2.translation((2,)), frob)
    assert is_straight(PGL2, PGL2.omega_elements[1], frob)
    assert not is_straight(PGL2, PGL2.simple(0), frob)


def test_conjclass_keys_separate_s0_and_s1_in_sl2():
    frob = SL2.frobenius
    k0 = class_key(SL2, SL2.simple(0), frob, "conjclass")
    k1 = class_key(SL2, SL2.simple(1), frob, "conjclass")
    assert k0 != k1
    assert conjugacy_invariant(SL2, SL2.simple(0), frob) != conjugacy_invariant(SL2, SL2.simple(1), frob)


def test_omega_conjugates_share_a_class_in_pgl2():
    frob = PGL2.frobenius
    assert class_key(PGL2, PGL2.simple(0), frob, "conjclass") == class_key(PGL2, PGL2.simple(1), frob, "conjclass")
    assert class_key(PGL2, PGL2.simple(0), frob) == class_key(PGL2, PGL2.simple(1), frob)
    assert class_key(PGL2, PGL2.simple(0), frob).rep == PGL2.simple(1)


def test_tilde_closure_of_a_translation():
    closure = tilde_closure(PGL2, PGL2.translation((2,)), PGL2.frobenius)
    assert closure == [PGL2.translation((-2,)), PGL2.translation((2,))]


def test_unknown_level():
    with pytest.raises(MalformedElement):
        class_key(PGL2, PGL2.identity, PGL2.frobenius, "orbit")


def test_b_g_mu_for_pgl2():
    frob = PGL2.frobenius
    classes = enumerate_b_g_mu(PGL2, (2,), frob)
    assert [c.basic for c in classes] == [False, True]
    assert classes[0].newton == (2,)
    assert classes[0].rep == PGL2.translation((-2,))
    assert classes[1].rep == PGL2.identity
    assert all(c.kappa == (0,) for c in classes)


def test_b_g_mu_for_a_minuscule_coweight():
    frob = PGL2.frobenius
    classes = enumerate_b_g_mu(PGL2, (1,), frob)
    assert len(classes) == 2
    assert sum(c.basic for c in classes) == 1
    basic = next(c for c in classes if c.basic)
    assert basic.kappa == (1,)
    assert basic.rep == PGL2.omega_elements[1]


def test_b_g_mu_for_pgl3():
    group = affine_weyl(load_preset("A2"))
    classes = enumerate_b_g_mu(group, (1, 1), group.frobenius)
    assert len(classes) == 4
    assert sum(c.basic for c in classes) == 1
    assert classes[0].newton == (1, 1)
    assert {c.newton for c in classes} == {
        (1, 1),
        (0, Fraction(3, 2)),
        (Fraction(3, 2), 0),
        (0, 0),
    }
    minuscule = enumerate_b_g_mu(group, (1, 0), group.frobenius)
    assert len(minuscule) == 3
    assert {c.newton for c in minuscule} == {(1, 0), (0, Fraction(1, 2)), (0, 0)}
    assert sum(c.basic for c in minuscule) == 1


def test_non_dominant_mu_is_rejected():
    with pytest.raises(MalformedElement):
        enumerate_b_g_mu(PGL2, (-1,), PGL2.frobenius)


def test_b_class_of_an_element():
    b = b_class_of(PGL2, PGL2.translation((2,)), PGL2.frobenius)
    assert not b.basic
    assert b.rep == PGL2.translation((-2,))
    assert b_class_of(PGL2, PGL2.simple(0), PGL2.frobenius).basic


def _words(preset):
    group = affine_weyl(load_preset(preset))
    return st.lists(st.sampled_from(group.labels), max_size=5)


@settings(deadline=None, max_examples=30)
@given(st.sampled_from(["A2", "2A2", "2A3"]), st.data())
def test_invariants_are_conjugation_invariant(preset, data):
    group = affine_weyl(load_preset(preset))
    frob = group.frobenius
    w = group.from_labels(data.draw(_words(preset)))
    x = group.from_labels(data.draw(_words(preset)))
    y = group.conjugate(x, w, frob)
    assert conjugacy_invariant(group, y, frob) == conjugacy_invariant(group, w, frob)
    assert newton_kottwitz(group, y, frob).bg_key == newton_kottwitz(group, w, frob).bg_key


def test_omega_twisted_frame_has_a_periodic_identity():
    group = affine_weyl(load_preset("PGL2tw"))
    frob = group.frobenius
    nk = newton_kottwitz(group, group.identity, frob)
    assert nk.newton == (0,)
    assert nk.kappa == (0,)
    assert nk.period == 2
