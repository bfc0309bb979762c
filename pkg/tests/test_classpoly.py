import sys
import os

# ensure local package is importable when running tests from workspace root
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import random

import pytest
from hypothesis import given, settings, strategies as st

from adlvlab.affineweyl import affine_weyl
from adlvlab.classpoly import (
    NON_BASIC_DEFERRED,
    Minimal,
    OrbitDescriptor,
    QMinusOnePoly,
    ReductionEngine,
    Shift,
    Split,
    TICElement,
    class_polynomials,
    class_polynomials_by_conjclass,
    dl_reduction_step,
    iwahori_dimension,
    minimal_class_data,
    sigma_top,
)
from adlvlab.elements import parse_element
from adlvlab.parahoric import ParahoricDescriptor
from adlvlab.rootdata import load_preset
from adlvlab.sigmaconj import SigmaClassKey, class_key, enumerate_b_g_mu, reduce_to_minimal

PGL2 = affine_weyl(load_preset("A1"))
GOLDEN = "t[-2] * w[1]"


def tilde(rep):
    return SigmaClassKey("tilde_class", rep)


def test_golden_reduction_step():
    w = parse_element(PGL2, GOLDEN)
    step = dl_reduction_step(PGL2, w, PGL2.frobenius)
    assert step == Split(1, w, PGL2.translation((2,)), PGL2.simple(0))
    assert dl_reduction_step(PGL2, PGL2.simple(0), PGL2.frobenius) == Minimal(PGL2.simple(0))


def test_golden_class_polynomials():
    w = parse_element(PGL2, GOLDEN)
    table = class_polynomials(PGL2, w, PGL2.frobenius)
    assert table == {
        tilde(PGL2.simple(1)): QMinusOnePoly((1, 1)),
        tilde(PGL2.translation((-2,))): QMinusOnePoly((0, 1)),
    }


def test_minimal_elements_have_trivial_polynomials():
    for w in (PGL2.simple(0), PGL2.translation((2,)), PGL2.omega_elements[1]):
        table = class_polynomials(PGL2, w, PGL2.frobenius)
        assert list(table.values()) == [QMinusOnePoly.one()]
        assert list(table) == [class_key(PGL2, w, PGL2.frobenius)]


def test_conjclass_level_sums_tilde_classes():
    w = parse_element(PGL2, GOLDEN)
    table = class_polynomials_by_conjclass(PGL2, w, PGL2.frobenius)
    assert {k.level for k in table} == {"conjclass"}
    assert sorted(p.coeffs for p in table.values()) == [(0, 1), (1, 1)]


@pytest.mark.parametrize("preset,max_length", [("A2", 4), ("2A2", 3), ("C2", 3)])
def test_reduction_steps_move_lengths_correctly(preset, max_length):
    group = affine_weyl(load_preset(preset))
    frob = group.frobenius
    for layer in group.elements_up_to(max_length):
        for w in layer:
            step = dl_reduction_step(group, w, frob)
            n = group.length(w)
            if isinstance(step, Split):
                assert group.length(step.sw) == n - 1
                assert group.length(step.sws) == n - 2
            elif isinstance(step, Shift):
                assert group.length(step.w) == n
            else:
                assert group.length(reduce_to_minimal(group, w, frob)[0]) == n


@pytest.mark.parametrize("preset,max_length", [("A1", 5), ("2A2", 3)])
def test_class_polynomials_do_not_depend_on_the_path(preset, max_length):
    group = affine_weyl(load_preset(preset))
    frob = group.frobenius
    for layer in group.elements_up_to(max_length):
        for w in layer:
            expected = class_polynomials(group, w, frob)
            for seed in range(3):
                assert class_polynomials(group, w, frob, rng=random.Random(seed)) == expected


@pytest.mark.parametrize("preset,max_length", [("A2", 8), ("C2", 8), ("G2", 6)])
def test_shuffled_engines_agree_with_the_shared_engine(preset, max_length):
    group = affine_weyl(load_preset(preset))
    frob = group.frobenius
    elements = [w for layer in group.elements_up_to(max_length) for w in layer]
    expected = {w: class_polynomials(group, w, frob) for w in elements}
    for seed in range(5):
        engine = ReductionEngine(group, frob, rng=random.Random(seed))
        for w in elements:
            assert engine.polynomials(w) == expected[w]


def test_polynomials_reject_negative_coefficients():
    with pytest.raises(ValueError):
        QMinusOnePoly((1, -1))
    assert QMinusOnePoly((1, 0, 0)).coeffs == (1,)
    assert QMinusOnePoly((1,)).times_q() == QMinusOnePoly((1, 1))
    assert QMinusOnePoly((1, 1)).evaluate(2) == 2
    assert QMinusOnePoly((0, 1)).times_q_minus_one().degree == 2


def _orbit(k):
    return OrbitDescriptor(tilde(PGL2.simple(1)), ParahoricDescriptor((k,), PGL2.frobenius))


@settings(deadline=None, max_examples=50)
@given(
    st.lists(st.tuples(st.integers(min_value=0, max_value=1), st.integers(min_value=0, max_value=3)), max_size=4),
    st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=3),
)
def test_tic_algebra(parts, coeffs):
    elements = [TICElement((_orbit(k),), d) for k, d in parts]
    total = TICElement.zero()
    for e in elements:
        total = total + e
    reversed_total = TICElement.zero()
    for e in reversed(elements):
        reversed_total = reversed_total + e
    assert total == reversed_total
    if elements:
        top = max(d for _, d in parts)
        assert total.dim == top
        assert len(total.orbits) == sum(1 for _, d in parts if d == top)
    else:
        assert total.is_empty
    poly = QMinusOnePoly(tuple(coeffs))
    acted = total.act(poly)
    if poly.is_zero or total.is_empty:
        assert acted.is_empty
    else:
        assert acted.dim == total.dim + poly.degree
        assert len(acted.orbits) == len(total.orbits) * poly.leading


def test_sigma_top_of_the_golden_element():
    w = parse_element(PGL2, GOLDEN)
    ordinary, basic = enumerate_b_g_mu(PGL2, (2,), PGL2.frobenius)
    tic = sigma_top(PGL2, w, basic, PGL2.frobenius)
    assert tic.dim == 2
    assert [o.stabilizer.K for o in tic.orbits] == [(0,)]
    assert iwahori_dimension(PGL2, w, ordinary, PGL2.frobenius) == 1
    other = enumerate_b_g_mu(PGL2, (1,), PGL2.frobenius)
    assert all(iwahori_dimension(PGL2, w, b, PGL2.frobenius) is None for b in other)


def test_minimal_class_data():
    frob = PGL2.frobenius
    tau = PGL2.omega_elements[1]
    data = minimal_class_data(PGL2, class_key(PGL2, tau, frob), frob)
    assert data.dim == 0
    assert data.tau == tau
    assert data.orbit.stabilizer == ParahoricDescriptor((), PGL2.twisted_frame(frob, tau))
    ordinary = minimal_class_data(PGL2, class_key(PGL2, PGL2.translation((2,)), frob), frob)
    assert ordinary.dim == 0
    assert ordinary.orbit.stabilizer == NON_BASIC_DEFERRED
    s1 = minimal_class_data(PGL2, class_key(PGL2, PGL2.simple(1), frob), frob)
    assert s1.dim == 1
    assert s1.orbit.stabilizer.K == (0,)
