"""Root data, coweight lattice and the finite Weyl group.

Every lattice element is stored in the fixed basis of the coweight lattice
``Lambda`` declared by the group-datum file.  Roots live in the dual basis, so
``<lam, alpha> = dot(lam, root.vec)``.  Cartan matrices follow the convention
``A[i][j] = <alpha_i^vee, alpha_j>`` with Bourbaki numbering.
"""
from __future__ import annotations

import json
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    FrobeniusNotBasePreserving,
    InconsistentCartan,
    LatticeNotBetweenQandP,
    MalformedDocument,
    SearchBudgetExceeded,
    SingularBasis,
)
from .lattice import (
    Matrix,
    RatMatrix,
    Vector,
    block_diagonal,
    dot,
    echelon_basis,
    identity,
    is_integral,
    mat_mul,
    mat_vec,
    matrix_order,
    rational_inverse,
    reduce_mod,
    to_int_matrix,
    transpose,
    vec_add,
    vec_sub,
)

_logger = logging.getLogger(__name__)

Coweight = Tuple[int, ...]
CoweightRat = Tuple[Fraction, ...]
LatticeTag = Union[str, Tuple[Tuple[int, ...], ...]]

PRESET_DIR = Path(__file__).resolve().parent / "presets"
WEYL_GROUP_LIMIT = 200_000

__all__ = [
    "Coweight",
    "CoweightRat",
    "ComponentSpec",
    "Root",
    "FiniteWeylElt",
    "FiniteWeylGroup",
    "GroupDatum",
    "cartan_matrix",
    "parse_type_label",
    "load_group",
    "group_from_dict",
    "load_preset",
    "preset_names",
    "resolve_group",
    "dominance_leq",
    "dominant_rep",
    "levi_dominant",
    "dominant_coweights",
    "rho_pairing",
]

_TYPE_RE = re.compile(r"^\s*([A-Ga-g])\s*_?\s*(\d+)\s*$")


def parse_type_label(label: str) -> Tuple[str, int]:
    """Split ``"C2"`` or ``"C_2"`` into ``("C", 2)``, validating the rank."""
    match = _TYPE_RE.match(str(label))
    if not match:
        raise InconsistentCartan(f"unrecognised Cartan type {label!r}")
    letter, rank = match.group(1).upper(), int(match.group(2))
    minimum = {"A": 1, "B": 2, "C": 2, "D": 4, "E": 6, "F": 4, "G": 2}[letter]
    if rank < minimum or (letter == "E" and rank > 8) or (letter in "FG" and rank != minimum):
        raise InconsistentCartan(f"type {letter}{rank} does not exist")
    return letter, rank


def cartan_matrix(letter: str, rank: int) -> Matrix:
    """Cartan matrix of an irreducible type, ``A[i][j] = <alpha_i^vee, alpha_j>``."""
    n = rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i: int, j: int) -> None:
        a[i][j] = a[j][i] = -1

    if letter in "ABCFG":
        for i in range(n - 1):
            bond(i, i + 1)
    if letter == "B":
        a[n - 1][n - 2] = -2
    elif letter == "C":
        a[n - 2][n - 1] = -2
    elif letter == "F":
        a[2][1] = -2
    elif letter == "G":
        a[0][1] = -3
    elif letter == "D":
        for i in range(n - 2):
            bond(i, i + 1)
        bond(n - 3, n - 1)
    elif letter == "E":
        bond(0, 2)
        bond(1, 3)
        for i in range(2, n - 1):
            bond(i, i + 1)
    return tuple(tuple(row) for row in a)


@dataclass(frozen=True)
class ComponentSpec:
    """One irreducible factor of the root datum."""

    letter: str
    rank: int
    lattice: LatticeTag = "adjoint"

    @property
    def label(self) -> str:
        return f"{self.letter}{self.rank}"


@dataclass(frozen=True)
class Root:
    """A root together with its coroot, both in lattice coordinates."""

    index: int
    coeffs: Tuple[int, ...]
    vec: Tuple[int, ...]
    covec: Tuple[int, ...]
    component: int

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    @property
    def positive(self) -> bool:
        return self.height > 0


@dataclass(frozen=True, order=True)
class FiniteWeylElt:
    """Element of the finite Weyl group.

    ``perm[i]`` is the index (into ``GroupDatum.roots``) of the image of the
    i-th simple root; ``word`` is the reduced word in 1-based finite labels.
    """

    perm: Tuple[int, ...]
    word: Tuple[int, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.word)


class FiniteWeylGroup:
    """The finite Weyl group of a root datum, enumerated once and tabulated."""

    def __init__(self, datum: "GroupDatum", limit: int = WEYL_GROUP_LIMIT) -> None:
        self.datum = datum
        n = datum.rank
        C = datum.simple_coroots
        R = datum.simple_roots
        self._simple_mats: List[Matrix] = [
            tuple(
                tuple((1 if a == b else 0) - C[i][a] * R[i][b] for b in range(n))
                for a in range(n)
            )
            for i in range(n)
        ]
        self._by_perm: Dict[Tuple[int, ...], FiniteWeylElt] = {}
        self._matrix: Dict[Tuple[int, ...], Matrix] = {}
        self._by_matrix: Dict[Matrix, Tuple[int, ...]] = {}
        self._length: Dict[Tuple[int, ...], int] = {}
        self._mul_cache: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], FiniteWeylElt] = {}
        self._enumerate(limit)

    def _perm_of(self, m: Matrix) -> Tuple[int, ...]:
        index = self.datum.coroot_index
        return tuple(index[mat_vec(m, c)] for c in self.datum.simple_coroots)

    def _enumerate(self, limit: int) -> None:
        """Breadth-first closure under right multiplication by simple reflections."""
        n = self.datum.rank
        start = identity(n)
        queue = deque([start])
        seen = {start}
        while queue:
            m = queue.popleft()
            perm = self._perm_of(m)
            self._matrix[perm] = m
            self._by_matrix[m] = perm
            for s in self._simple_mats:
                nxt = mat_mul(m, s)
                if nxt not in seen:
                    if len(seen) >= limit:
                        raise SearchBudgetExceeded("finite Weyl group enumeration", limit)
                    seen.add(nxt)
                    queue.append(nxt)
        positives = [r.covec for r in self.datum.positive_roots]
        neg = self.datum.negative_coroot_set
        for perm, m in self._matrix.items():
            self._length[perm] = sum(1 for c in positives if mat_vec(m, c) in neg)
        words: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
        n_pos = len(positives)
        for perm in sorted(self._matrix, key=lambda p: self._length[p]):
            descent = next((i for i, r in enumerate(perm) if r >= n_pos), None)
            if descent is None:
                words[perm] = ()
                continue
            shorter = self._by_matrix[mat_mul(self._matrix[perm], self._simple_mats[descent])]
            words[perm] = words[shorter] + (descent + 1,)
        for perm in self._matrix:
            self._by_perm[perm] = FiniteWeylElt(perm, words[perm])
        _logger.debug("finite Weyl group of %s has %d elements", self.datum.name, len(self._by_perm))

    # -- basic access

    @cached_property
    def elements(self) -> Tuple[FiniteWeylElt, ...]:
        return tuple(sorted(self._by_perm.values(), key=lambda u: (len(u.word), u.perm)))

    @cached_property
    def identity(self) -> FiniteWeylElt:
        return self._by_perm[self._perm_of(identity(self.datum.rank))]

    def __len__(self) -> int:
        return len(self._by_perm)

    def simple(self, i: int) -> FiniteWeylElt:
        """Simple reflection for the 0-based finite index ``i``."""
        return self._by_perm[self._perm_of(self._simple_mats[i])]

    def matrix(self, u: FiniteWeylElt) -> Matrix:
        return self._matrix[u.perm]

    def from_matrix(self, m: Sequence[Sequence[int]]) -> FiniteWeylElt:
        key = tuple(tuple(int(x) for x in row) for row in m)
        try:
            return self._by_perm[self._by_matrix[key]]
        except KeyError as exc:
            raise ValueError("matrix is not in the finite Weyl group") from exc

    def canonical(self, u: FiniteWeylElt) -> FiniteWeylElt:
        return self._by_perm[u.perm]

    def length(self, u: FiniteWeylElt) -> int:
        return self._length[u.perm]

    def mul(self, u: FiniteWeylElt, v: FiniteWeylElt) -> FiniteWeylElt:
        key = (u.perm, v.perm)
        hit = self._mul_cache.get(key)
        if hit is None:
            hit = self._by_perm[self._by_matrix[mat_mul(self._matrix[u.perm], self._matrix[v.perm])]]
            self._mul_cache[key] = hit
        return hit

    def inv(self, u: FiniteWeylElt) -> FiniteWeylElt:
        return self._by_perm[self._by_matrix[self._inverse_matrix(u)]]

    def _inverse_matrix(self, u: FiniteWeylElt) -> Matrix:
        m = self._matrix[u.perm]
        return to_int_matrix(rational_inverse(m))

    def act(self, u: FiniteWeylElt, lam: Sequence) -> tuple:
        return mat_vec(self._matrix[u.perm], lam)

    def sends_positive_to_negative(self, u: FiniteWeylElt, root: Root) -> bool:
        return mat_vec(self._matrix[u.perm], root.covec) in self.datum.negative_coroot_set

    def from_word(self, word: Iterable[int]) -> FiniteWeylElt:
        """Product of 1-based finite simple reflections."""
        u = self.identity
        for i in word:
            u = self.mul(u, self.simple(i - 1))
        return u

    def subgroup(self, indices: Iterable[int]) -> List[FiniteWeylElt]:
        """Elements of the standard parabolic subgroup on 0-based ``indices``."""
        gens = [self.simple(i) for i in sorted(set(indices))]
        seen = {self.identity.perm: self.identity}
        queue = deque([self.identity])
        while queue:
            u = queue.popleft()
            for s in gens:
                v = self.mul(u, s)
                if v.perm not in seen:
                    seen[v.perm] = v
                    queue.append(v)
        return sorted(seen.values(), key=lambda u: (self.length(u), u.perm))

    def longest(self, indices: Optional[Iterable[int]] = None) -> FiniteWeylElt:
        pool = self.elements if indices is None else self.subgroup(indices)
        return max(pool, key=lambda u: (self.length(u), u.perm))


@dataclass(frozen=True)
class GroupDatum:
    """Validated root datum with a Frobenius diagram action.

    ``lattice_basis`` holds the basis of ``Lambda`` as rows in fundamental
    coweight coordinates.  ``diagram_perm`` is indexed by affine labels:
    finite simple reflections carry labels ``1..n``; the affine node of
    component 0 is ``0`` and that of component ``c > 0`` is ``n + c``.
    """

    name: str
    components: Tuple[ComponentSpec, ...]
    cartan: Matrix
    lattice_basis: Matrix
    diagram_perm: Tuple[int, ...]
    omega_twist: Optional[int] = None
    source: str = field(default="", compare=False, repr=False)

    # -- shape

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @cached_property
    def component_offsets(self) -> Tuple[int, ...]:
        out, offset = [], 0
        for comp in self.components:
            out.append(offset)
            offset += comp.rank
        return tuple(out)

    def component_of_index(self, i: int) -> int:
        """Component of the 0-based finite index ``i``."""
        for c, off in enumerate(self.component_offsets):
            if off <= i < off + self.components[c].rank:
                return c
        raise IndexError(i)

    @cached_property
    def affine_labels(self) -> Tuple[int, ...]:
        n = self.rank
        return tuple(0 if c == 0 else n + c for c in range(len(self.components)))

    @cached_property
    def all_labels(self) -> Tuple[int, ...]:
        return tuple(sorted(set(range(1, self.rank + 1)) | set(self.affine_labels)))

    def label_component(self, label: int) -> int:
        if label in self.affine_labels:
            return self.affine_labels.index(label)
        return self.component_of_index(label - 1)

    def is_affine_label(self, label: int) -> bool:
        return label in self.affine_labels

    @cached_property
    def fingerprint(self) -> str:
        """Canonical JSON of the defining data, used for cache file names."""
        payload = {
            "components": [[c.label, c.lattice if isinstance(c.lattice, str) else [list(r) for r in c.lattice]] for c in self.components],
            "basis": [list(r) for r in self.lattice_basis],
            "diagram_perm": list(self.diagram_perm),
            "omega_twist": self.omega_twist,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    # -- lattice data

    @cached_property
    def simple_roots(self) -> Matrix:
        return transpose(self.lattice_basis)

    @cached_property
    def simple_coroots(self) -> Matrix:
        inv = rational_inverse(self.lattice_basis)
        coroots = mat_mul(self.cartan, inv)
        if not all(is_integral(row) for row in coroots):
            raise LatticeNotBetweenQandP(f"{self.name}: coroot lattice is not contained in Lambda")
        return to_int_matrix(coroots)

    @cached_property
    def coroot_inverse(self) -> RatMatrix:
        try:
            return rational_inverse(self.simple_coroots)
        except ZeroDivisionError as exc:
            raise SingularBasis(f"{self.name}: simple coroots are not a basis") from exc

    # -- roots

    @cached_property
    def roots(self) -> Tuple[Root, ...]:
        """Positive roots ordered by height, then the negatives in the same order."""
        n = self.rank
        A = self.cartan
        pairs = {}
        queue = deque()
        for i in range(n):
            e = tuple(1 if k == i else 0 for k in range(n))
            pairs[e] = e
            queue.append(e)
        while queue:
            c = queue.popleft()
            d = pairs[c]
            for j in range(n):
                pc = sum(c[k] * A[j][k] for k in range(n))
                pd = sum(d[k] * A[k][j] for k in range(n))
                c2 = tuple(x - (pc if k == j else 0) for k, x in enumerate(c))
                d2 = tuple(x - (pd if k == j else 0) for k, x in enumerate(d))
                if c2 not in pairs:
                    pairs[c2] = d2
                    queue.append(c2)
        positive = sorted((c for c in pairs if sum(c) > 0), key=lambda c: (sum(c), c))
        ordered = positive + [tuple(-x for x in c) for c in positive]
        R, C = self.simple_roots, self.simple_coroots
        out = []
        for idx, c in enumerate(ordered):
            d = pairs[c]
            vec = tuple(sum(c[j] * R[j][k] for j in range(n)) for k in range(n))
            covec = tuple(sum(d[j] * C[j][k] for j in range(n)) for k in range(n))
            comp = self.component_of_index(next(j for j, x in enumerate(c) if x))
            out.append(Root(idx, c, vec, covec, comp))
        return tuple(out)

    @cached_property
    def positive_roots(self) -> Tuple[Root, ...]:
        return tuple(r for r in self.roots if r.positive)

    @cached_property
    def coroot_index(self) -> Dict[Tuple[int, ...], int]:
        return {r.covec: r.index for r in self.roots}

    @cached_property
    def negative_coroot_set(self) -> FrozenSet[Tuple[int, ...]]:
        return frozenset(r.covec for r in self.roots if not r.positive)

    @cached_property
    def two_rho(self) -> Tuple[int, ...]:
        total = tuple(0 for _ in range(self.rank))
        for r in self.positive_roots:
            total = vec_add(total, r.vec)
        return total

    @cached_property
    def highest_roots(self) -> Tuple[Root, ...]:
        out = []
        for c in range(len(self.components)):
            pool = [r for r in self.positive_roots if r.component == c]
            out.append(max(pool, key=lambda r: (r.height, r.coeffs)))
        return tuple(out)

    def pairing(self, lam: Sequence, root: Root) -> Any:
        return dot(lam, root.vec)

    def simple_pairings(self, lam: Sequence) -> tuple:
        return tuple(dot(lam, row) for row in self.simple_roots)

    def is_dominant(self, lam: Sequence) -> bool:
        return all(x >= 0 for x in self.simple_pairings(lam))

    def coroot_coordinates(self, lam: Sequence) -> Tuple[Fraction, ...]:
        """Coefficients ``c`` with ``lam = sum_i c_i alpha_i^vee``."""
        inv = self.coroot_inverse
        n = self.rank
        return tuple(sum(Fraction(lam[i]) * inv[i][j] for i in range(n)) for j in range(n))

    def minuscule_indices(self, component: int) -> Tuple[int, ...]:
        theta = self.highest_roots[component]
        return tuple(j for j, x in enumerate(theta.coeffs) if x == 1 and self.component_of_index(j) == component)

    def fundamental_coweight(self, i: int) -> CoweightRat:
        """``omega_i^vee`` in lattice coordinates (rational in general)."""
        inv = rational_inverse(self.lattice_basis)
        # omega coordinates e_i map to Lambda coordinates B^{-T} e_i
        return tuple(inv[i][k] for k in range(self.rank))

    # -- Weyl group and Frobenius

    @cached_property
    def weyl(self) -> FiniteWeylGroup:
        return FiniteWeylGroup(self)

    @cached_property
    def frobenius_matrix(self) -> Matrix:
        """Linear part ``P`` of the Frobenius, acting on lattice coordinates."""
        n = self.rank
        perm = [self.diagram_perm[i + 1] - 1 for i in range(n)]
        pi = [[0] * n for _ in range(n)]
        for i, j in enumerate(perm):
            pi[j][i] = 1
        bt = transpose(self.lattice_basis)
        inv_bt = transpose(rational_inverse(self.lattice_basis))
        p = mat_mul(mat_mul(inv_bt, pi), bt)
        if not all(is_integral(row) for row in p):
            raise FrobeniusNotBasePreserving(f"{self.name}: diagram automorphism does not preserve Lambda")
        return to_int_matrix(p)

    @cached_property
    def frobenius_order(self) -> int:
        return matrix_order(self.frobenius_matrix)

    @property
    def is_split(self) -> bool:
        return all(self.diagram_perm[k] == k for k in self.all_labels) and self.omega_twist is None

    # -- lattice classes

    @cached_property
    def _coroot_echelon(self) -> List[Vector]:
        return echelon_basis(self.simple_coroots, self.rank)

    @cached_property
    def _coinvariant_echelon(self) -> List[Vector]:
        n = self.rank
        P = self.frobenius_matrix
        gens = list(self.simple_coroots)
        for k in range(n):
            gens.append(tuple((1 if i == k else 0) - P[i][k] for i in range(n)))
        return echelon_basis(gens, n)

    def lattice_class(self, lam: Sequence[int]) -> Coweight:
        """Canonical representative of ``lam`` modulo the coroot lattice."""
        return reduce_mod(lam, self._coroot_echelon)

    def coinvariant_class(self, lam: Sequence[int]) -> Coweight:
        """Canonical representative of ``lam`` modulo ``Q^vee + (1 - P) Lambda``."""
        return reduce_mod(lam, self._coinvariant_echelon)

    @cached_property
    def fundamental_group(self) -> Tuple[Coweight, ...]:
        """Canonical representatives of ``Lambda / Q^vee``, zero first."""
        pivots: Dict[int, int] = {}
        for row in self._coroot_echelon:
            p = next(i for i, x in enumerate(row) if x)
            pivots[p] = row[p]
        ranges = [range(pivots.get(i, 1)) for i in range(self.rank)]
        return tuple(sorted({self.lattice_class(v) for v in product(*ranges)}))


# ---------------------------------------------------------------------------
# Loading


def _component_basis(spec: ComponentSpec, cartan: Matrix) -> Matrix:
    if spec.lattice == "adjoint":
        return identity(spec.rank)
    if spec.lattice == "simply_connected":
        return cartan
    rows = spec.lattice
    if len(rows) != spec.rank or any(len(r) != spec.rank for r in rows):
        raise MalformedDocument(f"lattice basis for {spec.label} must be {spec.rank}x{spec.rank}")
    return tuple(tuple(int(x) for x in r) for r in rows)


def _parse_lattice(value: Any) -> LatticeTag:
    if value is None:
        return "adjoint"
    if isinstance(value, str):
        if value not in ("adjoint", "simply_connected"):
            raise MalformedDocument(f"unknown lattice tag {value!r}")
        return value
    if isinstance(value, list) and all(isinstance(r, list) for r in value):
        if not all(isinstance(x, int) and not isinstance(x, bool) for r in value for x in r):
            raise LatticeNotBetweenQandP("explicit lattice basis must be integral in coweight coordinates")
        return tuple(tuple(r) for r in value)
    raise MalformedDocument(f"lattice must be a tag or a basis matrix, got {value!r}")


def group_from_dict(data: Mapping[str, Any], source: str = "") -> GroupDatum:
    """Validate a decoded group-datum document and build the datum."""
    if not isinstance(data, Mapping):
        raise MalformedDocument("group datum must be a JSON object")
    comps_raw = data.get("components")
    if not isinstance(comps_raw, list) or not comps_raw:
        raise MalformedDocument("group datum needs a non-empty 'components' list")
    components: List[ComponentSpec] = []
    blocks: List[Matrix] = []
    bases: List[Matrix] = []
    for raw in comps_raw:
        if not isinstance(raw, Mapping) or "type" not in raw:
            raise MalformedDocument(f"component entry {raw!r} lacks a 'type'")
        letter, rank = parse_type_label(raw["type"])
        spec = ComponentSpec(letter, rank, _parse_lattice(raw.get("lattice")))
        cartan = cartan_matrix(letter, rank)
        declared = raw.get("cartan")
        if declared is not None and tuple(tuple(r) for r in declared) != cartan:
            raise InconsistentCartan(f"declared Cartan matrix does not match type {spec.label}")
        components.append(spec)
        blocks.append(cartan)
        bases.append(_component_basis(spec, cartan))
    cartan = block_diagonal(blocks)
    basis = block_diagonal(bases)
    n = len(cartan)
    k = len(components)
    try:
        rational_inverse(basis)
    except ZeroDivisionError as exc:
        raise LatticeNotBetweenQandP("lattice basis is singular") from exc

    frob = data.get("frobenius") or {}
    if not isinstance(frob, Mapping):
        raise MalformedDocument("'frobenius' must be an object")
    perm_raw = frob.get("diagram_perm")
    labels = list(range(n + k))
    if perm_raw is None:
        perm = tuple(labels)
    else:
        if not isinstance(perm_raw, list) or sorted(perm_raw) != labels:
            raise FrobeniusNotBasePreserving(f"diagram_perm must permute 0..{n + k - 1}")
        perm = tuple(int(x) for x in perm_raw)
    twist = frob.get("omega_twist")
    if twist is not None and (not isinstance(twist, int) or isinstance(twist, bool)):
        raise MalformedDocument("omega_twist must be an integer index or null")

    datum = GroupDatum(
        name=str(data.get("name") or "+".join(c.label for c in components)),
        components=tuple(components),
        cartan=cartan,
        lattice_basis=basis,
        diagram_perm=perm,
        omega_twist=twist,
        source=source,
    )
    _validate_frobenius(datum)
    datum.simple_coroots  # raises LatticeNotBetweenQandP
    datum.frobenius_matrix  # raises FrobeniusNotBasePreserving
    if twist is not None and not 0 <= twist < len(datum.fundamental_group):
        raise MalformedDocument(f"omega_twist {twist} out of range for |Omega| = {len(datum.fundamental_group)}")
    _logger.debug("loaded group %s (rank %d, %d components)", datum.name, n, k)
    return datum


def _validate_frobenius(datum: GroupDatum) -> None:
    """Check that the diagram permutation is a Dynkin automorphism."""
    n = datum.rank
    perm = datum.diagram_perm
    affine = set(datum.affine_labels)
    for label in datum.all_labels:
        if (label in affine) != (perm[label] in affine):
            raise FrobeniusNotBasePreserving("diagram_perm must map affine nodes to affine nodes")
    A = datum.cartan
    for i in range(n):
        for j in range(n):
            if A[perm[i + 1] - 1][perm[j + 1] - 1] != A[i][j]:
                raise FrobeniusNotBasePreserving("diagram_perm does not preserve the Cartan matrix")
    for label in datum.affine_labels:
        c = datum.label_component(label)
        first = datum.component_offsets[c] + 1
        if datum.label_component(perm[label]) != datum.label_component(perm[first]):
            raise FrobeniusNotBasePreserving("affine node moved to a different component than its finite nodes")


def load_group(document: str) -> GroupDatum:
    """Parse group-datum JSON text."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"group datum is not valid JSON: {exc}") from exc
    return group_from_dict(data, source=document)


def preset_names() -> List[str]:
    return sorted(p.stem for p in PRESET_DIR.glob("*.json"))


def load_preset(name: str) -> GroupDatum:
    path = PRESET_DIR / f"{name}.json"
    if not path.is_file():
        raise MalformedDocument(f"unknown preset {name!r}; choose from {', '.join(preset_names())}")
    return load_group(path.read_text(encoding="utf-8"))


def resolve_group(spec: str) -> GroupDatum:
    """Load ``spec`` as a preset name or a path to a group-datum file."""
    if spec in preset_names():
        return load_preset(spec)
    path = Path(spec)
    if not path.is_file():
        raise MalformedDocument(f"{spec!r} is neither a preset nor a readable file")
    return load_group(path.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Dominance and rho


def dominance_leq(datum: GroupDatum, lam: Sequence, lam2: Sequence) -> bool:
    """True iff ``lam2 - lam`` is a non-negative rational sum of simple coroots."""
    coords = datum.coroot_coordinates(vec_sub(lam2, lam))
    return all(c >= 0 for c in coords)


def levi_dominant(datum: GroupDatum, levi: Iterable[int], lam: Sequence) -> bool:
    """Dominance for the Levi on the 0-based simple indices ``levi``."""
    pairings = datum.simple_pairings(lam)
    return all(pairings[j] >= 0 for j in levi)


def dominant_rep(datum: GroupDatum, lam: Sequence) -> Tuple[tuple, FiniteWeylElt]:
    """Chamber walk to the dominant chamber; returns ``(lam_dom, u)`` with ``u(lam) = lam_dom``."""
    weyl = datum.weyl
    u = weyl.identity
    current = tuple(lam)
    while True:
        pairings = datum.simple_pairings(current)
        i = next((k for k, x in enumerate(pairings) if x < 0), None)
        if i is None:
            return current, u
        s = weyl.simple(i)
        current = weyl.act(s, current)
        u = weyl.mul(s, u)


def rho_pairing(datum: GroupDatum, lam: Sequence) -> Fraction:
    """``<lam, rho>`` as an exact rational."""
    return Fraction(dot(lam, datum.two_rho)) / 2


def dominant_coweights(datum: GroupDatum, max_length: int) -> List[Coweight]:
    """Dominant ``mu`` in ``Lambda`` with ``<mu, 2 rho> <= max_length``, shortest first."""
    fundamentals = [datum.fundamental_coweight(i) for i in range(datum.rank)]
    weights = [Fraction(dot(w, datum.two_rho)) for w in fundamentals]
    out = set()

    def extend(i: int, budget: Fraction, coeffs: List[int]) -> None:
        if i == datum.rank:
            mu = tuple(sum(Fraction(c) * w[k] for c, w in zip(coeffs, fundamentals)) for k in range(datum.rank))
            if is_integral(mu):
                out.add(tuple(int(x) for x in mu))
            return
        m = 0
        while m * weights[i] <= budget:
            extend(i + 1, budget - m * weights[i], coeffs + [m])
            m += 1

    extend(0, Fraction(max_length), [])
    return sorted(out, key=lambda mu: (dot(mu, datum.two_rho), mu))
