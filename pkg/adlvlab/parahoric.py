"""Parahoric combinatorics of a Frobenius-twisted Iwahori-Weyl group.

Vertices of the relative local Dynkin diagram are the Frobenius orbits of
affine labels generating a finite group.  A standard parahoric is described
by a Frobenius-stable finite-type set of labels.
"""
from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .affineweyl import AffineElt, AffineWeylGroup, FrobeniusAction
from .errors import InfiniteType
from .lattice import Vector, fixed_space_basis, mat_mul
from .rootdata import FiniteWeylElt

_logger = logging.getLogger(__name__)

__all__ = [
    "ParahoricDescriptor",
    "RelativeDiagram",
    "VertexFlags",
    "Volume",
    "Prop36Entry",
    "Prop36Report",
    "relative_diagram",
    "vertex_flags",
    "fixed_directions",
    "volume_and_logvolume",
    "is_very_special_parahoric",
    "very_special_parahorics",
    "candidate_parahorics",
    "verify_prop36",
    "inverse_volume_average",
]


@dataclass(frozen=True)
class ParahoricDescriptor:
    """Frobenius-stable finite-type label set ``K`` in the frame ``frob``."""

    K: Tuple[int, ...]
    frob: FrobeniusAction

    @classmethod
    def of(cls, labels: Iterable[int], frob: FrobeniusAction) -> "ParahoricDescriptor":
        return cls(tuple(sorted(set(labels))), frob)


@dataclass(frozen=True)
class RelativeDiagram:
    frob: FrobeniusAction
    vertices: Tuple[Tuple[int, ...], ...]
    d: Tuple[int, ...]
    edges: FrozenSet[Tuple[int, int]]
    components: Tuple[Tuple[int, ...], ...]
    longest: Tuple[AffineElt, ...] = field(compare=False, repr=False)

    def component_of(self, vertex: int) -> int:
        return next(c for c, comp in enumerate(self.components) if vertex in comp)


@dataclass(frozen=True)
class VertexFlags:
    special: bool
    very_special: bool


@dataclass(frozen=True)
class Volume:
    """``vol = sum coeffs[k] q^k`` over Frobenius-fixed elements of ``W_K``."""

    coeffs: Tuple[int, ...]
    logvol: int

    def evaluate(self, q: int) -> int:
        return sum(c * q**k for k, c in enumerate(self.coeffs))


@dataclass
class Prop36Entry:
    K: Tuple[int, ...]
    vol_coeffs: Tuple[int, ...]
    logvol: int
    very_special: bool
    argmax_flags: Dict[str, bool]

    def as_dict(self) -> Dict[str, object]:
        return {
            "K": list(self.K),
            "vol_coeffs": list(self.vol_coeffs),
            "logvol": self.logvol,
            "very_special": self.very_special,
            "argmax_flags": dict(self.argmax_flags),
        }


@dataclass
class Prop36Report:
    entries: List[Prop36Entry]
    violations: List[str]

    @property
    def ok(self) -> bool:
        return not self.violations


_DIAGRAMS: Dict[Tuple[AffineWeylGroup, FrobeniusAction], RelativeDiagram] = {}


def relative_diagram(group: AffineWeylGroup, frob: FrobeniusAction) -> RelativeDiagram:
    """Vertices, ``d``-values, edges and connected components of the relative diagram."""
    hit = _DIAGRAMS.get((group, frob))
    if hit is not None:
        return hit
    orbits = [o for o in group.label_orbits(frob) if group.is_finite_type(o)]
    longest = tuple(group.longest_parabolic(o) for o in orbits)
    d = tuple(group.length(w) for w in longest)
    edges = set()
    for i, j in combinations(range(len(orbits)), 2):
        if group.multiply(longest[i], longest[j]) != group.multiply(longest[j], longest[i]):
            edges.add((i, j))
    components = _components(len(orbits), edges)
    diagram = RelativeDiagram(frob, tuple(orbits), d, frozenset(edges), components, longest)
    _logger.debug("relative diagram: vertices %s, d %s, edges %s", orbits, d, sorted(edges))
    _DIAGRAMS[(group, frob)] = diagram
    return diagram


def _components(n: int, edges: Iterable[Tuple[int, int]]) -> Tuple[Tuple[int, ...], ...]:
    adjacency: Dict[int, set] = {v: set() for v in range(n)}
    for i, j in edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    seen: set = set()
    out = []
    for start in range(n):
        if start in seen:
            continue
        comp, queue = [], deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            comp.append(v)
            for nxt in adjacency[v]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        out.append(tuple(sorted(comp)))
    return tuple(out)


def fixed_directions(group: AffineWeylGroup, frob: FrobeniusAction) -> List[Vector]:
    """Basis of the directions of the Frobenius-fixed apartment."""
    return fixed_space_basis(mat_mul(group.weyl.matrix(frob.twist.u), frob.linear))


def _generated_order(group: AffineWeylGroup, gens: Sequence[FiniteWeylElt], basis: Sequence[Vector]) -> int:
    """Order of the group generated by ``gens`` acting on the span of ``basis``."""
    weyl = group.weyl

    def image(u: FiniteWeylElt) -> Tuple[tuple, ...]:
        return tuple(weyl.act(u, b) for b in basis)

    seen = {image(weyl.identity)}
    queue = deque([weyl.identity])
    while queue:
        u = queue.popleft()
        for g in gens:
            v = weyl.mul(u, g)
            key = image(v)
            if key not in seen:
                seen.add(key)
                queue.append(v)
    return len(seen)


def vertex_flags(group: AffineWeylGroup, diagram: RelativeDiagram) -> Dict[int, VertexFlags]:
    """Special: the other vertices of the component still generate the full finite image.

    Linear parts are restricted to the Frobenius-fixed apartment.
    """
    basis = fixed_directions(group, diagram.frob)
    special: Dict[int, bool] = {}
    for comp in diagram.components:
        linear = {v: diagram.longest[v].u for v in comp}
        full = _generated_order(group, list(linear.values()), basis)
        for v in comp:
            others = [linear[x] for x in comp if x != v]
            special[v] = _generated_order(group, others, basis) == full
    flags: Dict[int, VertexFlags] = {}
    for comp in diagram.components:
        special_d = [diagram.d[v] for v in comp if special[v]]
        floor = min(special_d) if special_d else None
        for v in comp:
            flags[v] = VertexFlags(special[v], special[v] and diagram.d[v] == floor)
    return flags


def volume_and_logvolume(group: AffineWeylGroup, parahoric: ParahoricDescriptor) -> Volume:
    """Poincare polynomial of the Frobenius-fixed part of ``W_K`` and the length of ``w_K``."""
    if not group.is_finite_type(parahoric.K):
        raise InfiniteType(f"K = {list(parahoric.K)} is not of finite type")
    elements = group.parabolic_elements(parahoric.K)
    lengths = Counter(
        group.length(w) for w in elements if group.frobenius_apply(parahoric.frob, w) == w
    )
    top = max(lengths) if lengths else 0
    coeffs = tuple(lengths.get(k, 0) for k in range(top + 1))
    return Volume(coeffs, group.length(elements[-1]))


def _is_admissible(group: AffineWeylGroup, parahoric: ParahoricDescriptor) -> bool:
    perm = group.label_permutation(parahoric.frob)
    chosen = set(parahoric.K)
    return group.is_finite_type(chosen) and all(perm[s] in chosen for s in chosen)


def is_very_special_parahoric(group: AffineWeylGroup, parahoric: ParahoricDescriptor) -> bool:
    """Each diagram component keeps exactly one vertex outside ``K``, and it is very special."""
    if not _is_admissible(group, parahoric):
        return False
    diagram = relative_diagram(group, parahoric.frob)
    flags = vertex_flags(group, diagram)
    chosen = set(parahoric.K)
    for comp in diagram.components:
        outside = [v for v in comp if not set(diagram.vertices[v]) <= chosen]
        if len(outside) != 1 or not flags[outside[0]].very_special:
            return False
    return True


def candidate_parahorics(group: AffineWeylGroup, frob: FrobeniusAction) -> List[ParahoricDescriptor]:
    """All Frobenius-stable finite-type unions of vertex orbits."""
    diagram = relative_diagram(group, frob)
    out = []
    n = len(diagram.vertices)
    for size in range(n + 1):
        for chosen in combinations(range(n), size):
            labels = [s for v in chosen for s in diagram.vertices[v]]
            if group.is_finite_type(labels):
                out.append(ParahoricDescriptor.of(labels, frob))
    return out


def very_special_parahorics(group: AffineWeylGroup, frob: FrobeniusAction) -> List[ParahoricDescriptor]:
    return [k for k in candidate_parahorics(group, frob) if is_very_special_parahoric(group, k)]


def verify_prop36(group: AffineWeylGroup, frob: FrobeniusAction, q_values: Sequence[int] = (2, 3, 5)) -> Prop36Report:
    """Compare very special parahorics with the volume and log-volume maximisers."""
    candidates = candidate_parahorics(group, frob)
    volumes = {k: volume_and_logvolume(group, k) for k in candidates}
    very = {k for k in candidates if is_very_special_parahoric(group, k)}

    def argmax(score) -> FrozenSet[ParahoricDescriptor]:
        best = max(score(k) for k in candidates)
        return frozenset(k for k in candidates if score(k) == best)

    maxima = {"logvol": argmax(lambda k: volumes[k].logvol)}
    for q in q_values:
        maxima[f"q={q}"] = argmax(lambda k, q=q: volumes[k].evaluate(q))
    violations = [
        f"very special set differs from argmax of {name}" for name, chosen in maxima.items() if chosen != very
    ]
    entries = [
        Prop36Entry(
            K=k.K,
            vol_coeffs=volumes[k].coeffs,
            logvol=volumes[k].logvol,
            very_special=k in very,
            argmax_flags={name: k in chosen for name, chosen in maxima.items()},
        )
        for k in candidates
    ]
    for message in violations:
        _logger.warning(message)
    return Prop36Report(entries, violations)


def inverse_volume_average(group: AffineWeylGroup, stabilizers: Sequence[ParahoricDescriptor], q: int) -> Fraction:
    """``N^-1 sum 1/vol(K_i)`` evaluated at ``q``."""
    if not stabilizers:
        return Fraction(0)
    total = sum(Fraction(1, volume_and_logvolume(group, k).evaluate(q)) for k in stabilizers)
    return total / len(stabilizers)
