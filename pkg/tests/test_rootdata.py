import sys
import os

# ensure local package is importable when running tests from workspace root
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import json

import pytest
from hypothesis import given, settings, strategies as st

from adlvlab.affineweyl import affine_weyl
from adlvlab.errors import (
    FrobeniusNotBasePreserving,
    InconsistentCartan,
    LatticeNotBetweenQandP,
    MalformedDocument,
)
from adlvlab.rootdata import (
    cartan_matrix,
    dominance_leq,
    dominant_coweights,
    dominant_rep,
    group_from_dict,
    levi_dominant,
    load_group,
    load_preset,
    parse_type_label,
    preset_names,
    resolve_group,
    rho_pairing,
)


def test_c2_cartan_convention():
    assert cartan_matrix("C", 2) == ((2, -2), (-1, 2))
    assert load_preset("C2").cartan == ((2, -2), (-1, 2))


def test_type_labels():
    assert parse_type_label("C_2") == ("C", 2)
    assert parse_type_label("d4") == ("D", 4)
    for bad in ("D3", "G3", "E9", "X2", "A0"):
        with pytest.raises(InconsistentCartan):
            parse_type_label(bad)


@pytest.mark.parametrize(
    "preset,positive,weyl,omega",
    [
        ("A1", 1, 2, 2),
        ("A1sc", 1, 2, 1),
        ("A2", 3, 6, 3),
        ("C2", 4, 8, 2),
        ("G2", 6, 12, 1),
        ("2A3", 6, 24, 1),
        ("3D4", 12, 192, 1),
    ],
)
def test_preset_shapes(preset, positive, weyl, omega):
    datum = load_preset(preset)
    assert len(datum.positive_roots) == positive
    assert len(datum.weyl) == weyl
    assert len(datum.fundamental_group) == omega
    assert datum.fundamental_group[0] == tuple(0 for _ in range(datum.rank))


def test_every_preset_loads():
    names = preset_names()
    assert {"A1", "A2", "C2", "2A3", "3D4", "PGL2tw"} <= set(names)
    for name in names:
        assert resolve_group(name).rank >= 1


def test_frobenius_of_twisted_presets():
    assert load_preset("A2").is_split
    assert load_preset("2A3").frobenius_order == 2
    assert load_preset("3D4").frobenius_order == 3
    assert not load_preset("PGL2tw").is_split


def test_coroots_in_adjoint_coordinates():
    datum = load_preset("A2")
    assert datum.simple_coroots == ((2, -1), (-1, 2))
    assert datum.two_rho == (2, 2)
    assert rho_pairing(datum, (1, 1)) == 2


def test_malformed_documents():
    with pytest.raises(MalformedDocument):
        load_group("not json")
    with pytest.raises(MalformedDocument):
        group_from_dict({"components": []})
    with pytest.raises(InconsistentCartan):
        group_from_dict({"components": [{"type": "C2", "cartan": [[2, -1], [-2, 2]]}]})
    with pytest.raises(MalformedDocument):
        resolve_group("no-such-preset")


def test_lattice_must_sit_between_q_and_p():
    with pytest.raises(LatticeNotBetweenQandP):
        group_from_dict({"components": [{"type": "A1", "lattice": [[4]]}]})
    with pytest.raises(LatticeNotBetweenQandP):
        group_from_dict({"components": [{"type": "A2", "lattice": [[1, 0], [0, 0]]}]})


def test_frobenius_must_preserve_the_base():
    with pytest.raises(FrobeniusNotBasePreserving):
        group_from_dict({"components": [{"type": "A2"}], "frobenius": {"diagram_perm": [1, 0, 2]}})
    with pytest.raises(FrobeniusNotBasePreserving):
        group_from_dict({"components": [{"type": "B2"}], "frobenius": {"diagram_perm": [0, 2, 1]}})
    with pytest.raises(MalformedDocument):
        group_from_dict({"components": [{"type": "A1", "lattice": "simply_connected"}], "frobenius": {"omega_twist": 1}})


def test_fingerprint_is_canonical_json():
    datum = load_preset("2A3")
    payload = json.loads(datum.fingerprint)
    assert payload["diagram_perm"] == [0, 3, 2, 1]
    assert load_preset("2A3").fingerprint == datum.fingerprint
    assert load_preset("2A2").fingerprint != datum.fingerprint


def test_dominance_order():
    datum = load_preset("A1")
    assert dominance_leq(datum, (0,), (2,))
    assert dominance_leq(datum, (-2,), (2,))
    assert not dominance_leq(datum, (2,), (0,))


def test_dominant_coweights():
    assert dominant_coweights(load_preset("A1"), 4) == [(0,), (1,), (2,), (3,), (4,)]
    assert dominant_coweights(load_preset("A1sc"), 4) == [(0,), (1,), (2,)]
    assert dominant_coweights(load_preset("A2"), 4) == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]


@settings(deadline=None, max_examples=60)
@given(
    st.sampled_from(["A2", "C2", "G2", "2A3"]),
    st.lists(st.integers(min_value=-4, max_value=4), min_size=3, max_size=3),
)
def test_chamber_walk_lands_in_the_orbit(preset, coords):
    datum = load_preset(preset)
    lam = tuple(coords[: datum.rank])
    dom, u = dominant_rep(datum, lam)
    assert datum.is_dominant(dom)
    assert tuple(datum.weyl.act(u, lam)) == tuple(dom)
    orbit = {tuple(datum.weyl.act(v, lam)) for v in datum.weyl.elements}
    assert [x for x in orbit if datum.is_dominant(x)] == [tuple(dom)]


@pytest.mark.parametrize("preset", ["A2", "C2"])
def test_dominance_is_a_partial_order_on_dominant_coweights(preset):
    datum = load_preset(preset)
    grid = dominant_coweights(datum, 8)
    for a in grid:
        assert dominance_leq(datum, a, a)
        assert dominant_rep(datum, a)[0] == a
        for b in grid:
            if a != b and dominance_leq(datum, a, b):
                assert not dominance_leq(datum, b, a)
            for c in grid:
                if dominance_leq(datum, a, b) and dominance_leq(datum, b, c):
                    assert dominance_leq(datum, a, c)


def test_rho_pairing_matches_translation_length():
    for preset in ("A1", "A2", "C2", "G2"):
        group = affine_weyl(load_preset(preset))
        for mu in dominant_coweights(group.datum, 8):
            assert group.length(group.translation(mu)) == 2 * rho_pairing(group.datum, mu)


def test_levi_dominance_only_looks_at_the_levi():
    datum = load_preset("A2")
    assert levi_dominant(datum, (0,), (1, -1))
    assert not levi_dominant(datum, (1,), (1, -1))
    assert not levi_dominant(datum, (0, 1), (1, -1))
    assert levi_dominant(datum, (), (-3, -3))
