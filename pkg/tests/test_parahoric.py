import sys
import os

# ensure local package is importable when running tests from workspace root
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from fractions import Fraction

import pytest

from adlvlab.affineweyl import affine_weyl
from adlvlab.errors import InfiniteType
from adlvlab.parahoric import (
    ParahoricDescriptor,
    candidate_parahorics,
    fixed_directions,
    inverse_volume_average,
    is_very_special_parahoric,
    relative_diagram,
    verify_prop36,
    vertex_flags,
    very_special_parahorics,
    volume_and_logvolume,
)
from adlvlab.rootdata import load_preset


def group_of(name):
    return affine_weyl(load_preset(name))


def very_special_sets(name):
    group = group_of(name)
    return [k.K for k in very_special_parahorics(group, group.frobenius)]


def test_relative_diagram_of_unitary_a3():
    group = group_of("2A3")
    diagram = relative_diagram(group, group.frobenius)
    assert diagram.vertices == ((0,), (1, 3), (2,))
    assert diagram.d == (1, 2, 1)
    assert diagram.edges == frozenset({(0, 1), (1, 2)})
    assert diagram.components == ((0, 1, 2),)
    flags = vertex_flags(group, diagram)
    assert [flags[v].special for v in range(3)] == [True, False, True]
    assert [flags[v].very_special for v in range(3)] == [True, False, True]


def test_triality_has_one_special_vertex():
    group = group_of("3D4")
    diagram = relative_diagram(group, group.frobenius)
    assert diagram.vertices == ((0,), (1, 3, 4), (2,))
    flags = vertex_flags(group, diagram)
    assert [flags[v].special for v in range(3)] == [True, False, False]


def test_middle_vertex_of_c2_is_not_special():
    group = group_of("C2")
    flags = vertex_flags(group, relative_diagram(group, group.frobenius))
    assert [flags[v].special for v in range(3)] == [True, False, True]


@pytest.mark.parametrize(
    "preset,expected",
    [
        ("A1", [(0,), (1,)]),
        ("C2", [(0, 1), (1, 2)]),
        ("2A2", [(1, 2)]),
        ("2A3", [(0, 1, 3), (1, 2, 3)]),
        ("3D4", [(1, 2, 3, 4)]),
    ],
)
def test_very_special_parahorics(preset, expected):
    assert sorted(very_special_sets(preset)) == expected


def test_unstable_and_non_special_sets_are_rejected():
    twisted = group_of("2A3")
    assert not is_very_special_parahoric(twisted, ParahoricDescriptor((1,), twisted.frobenius))
    c2 = group_of("C2")
    assert not is_very_special_parahoric(c2, ParahoricDescriptor((0, 2), c2.frobenius))
    assert not is_very_special_parahoric(c2, ParahoricDescriptor((0, 1, 2), c2.frobenius))


def test_omega_twist_leaves_only_the_iwahori():
    group = group_of("PGL2tw")
    frob = group.frobenius
    assert relative_diagram(group, frob).vertices == ()
    assert candidate_parahorics(group, frob) == [ParahoricDescriptor((), frob)]
    assert very_special_sets("PGL2tw") == [()]


def test_omega_twisted_c2_has_a_rank_one_relative_diagram():
    group = group_of("C2tw")
    frob = group.frobenius
    assert len(fixed_directions(group, frob)) == 1
    diagram = relative_diagram(group, frob)
    assert diagram.vertices == ((0, 2), (1,))
    assert diagram.d == (2, 1)
    flags = vertex_flags(group, diagram)
    assert [flags[v].special for v in range(2)] == [True, True]
    assert [flags[v].very_special for v in range(2)] == [False, True]
    assert very_special_sets("C2tw") == [(0, 2)]
    vol = volume_and_logvolume(group, ParahoricDescriptor((0, 2), frob))
    assert vol.coeffs == (1, 0, 1)
    assert vol.logvol == 2
    assert verify_prop36(group, frob).ok


def test_split_frames_keep_the_whole_apartment():
    for name in ["A2", "C2", "G2"]:
        group = group_of(name)
        assert len(fixed_directions(group, group.frobenius)) == group.datum.rank


def test_volumes():
    pgl2 = group_of("A1")
    vol = volume_and_logvolume(pgl2, ParahoricDescriptor((0,), pgl2.frobenius))
    assert vol.coeffs == (1, 1)
    assert vol.logvol == 1
    assert vol.evaluate(2) == 3
    pgl3 = group_of("A2")
    vol = volume_and_logvolume(pgl3, ParahoricDescriptor((1, 2), pgl3.frobenius))
    assert vol.coeffs == (1, 2, 2, 1)
    assert vol.logvol == 3
    unitary = group_of("2A3")
    vol = volume_and_logvolume(unitary, ParahoricDescriptor((1, 2, 3), unitary.frobenius))
    assert sum(vol.coeffs) == 8
    assert vol.logvol == 6
    with pytest.raises(InfiniteType):
        volume_and_logvolume(pgl2, ParahoricDescriptor((0, 1), pgl2.frobenius))


def test_inverse_volume_average():
    group = group_of("A1")
    frob = group.frobenius
    iwahori = ParahoricDescriptor((), frob)
    vertex = ParahoricDescriptor((0,), frob)
    assert inverse_volume_average(group, [vertex, vertex], 2) == Fraction(1, 3)
    assert inverse_volume_average(group, [iwahori, vertex], 2) == Fraction(2, 3)
    assert inverse_volume_average(group, [], 2) == 0


@pytest.mark.parametrize("preset", ["A1", "A1sc", "A2", "C2", "G2", "2A2", "2A3", "3D4", "PGL2tw", "C2tw"])
def test_very_special_parahorics_maximise_volume(preset):
    group = group_of(preset)
    report = verify_prop36(group, group.frobenius)
    assert report.ok, report.violations
    flagged = [e.K for e in report.entries if e.very_special]
    assert flagged == very_special_sets(preset)
    for entry in report.entries:
        assert set(entry.argmax_flags) == {"logvol", "q=2", "q=3", "q=5"}
        assert all(flag == entry.very_special for flag in entry.argmax_flags.values())


def _relative_word_lengths(group, K, frob):
    """BFS over the subgroup generated by the longest elements of the orbits in ``K``."""
    gens = [group.longest_parabolic(o) for o in group.label_orbits(frob, K)]
    weights = [group.length(g) for g in gens]
    reached = {group.identity: 0}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, d in zip(gens, weights):
                y = group.multiply(x, g)
                if y not in reached:
                    reached[y] = reached[x] + d
                    nxt.append(y)
        frontier = nxt
    return reached


@pytest.mark.parametrize(
    "preset,K",
    [("2A3", (1, 2, 3)), ("2A3", (0, 1, 3)), ("2A2", (1, 2)), ("3D4", (1, 2, 3, 4)), ("C2", (0, 1))],
)
def test_lengths_add_along_relative_words(preset, K):
    group = group_of(preset)
    frob = group.frobenius
    reached = _relative_word_lengths(group, K, frob)
    for x, total in reached.items():
        assert group.length(x) == total
    vol = volume_and_logvolume(group, ParahoricDescriptor(K, frob))
    assert len(reached) == sum(vol.coeffs)
