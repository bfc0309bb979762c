"""Extended affine Weyl group ``Lambda x| W_0`` with Frobenius action.

An element ``t^lam u`` is stored as :class:`AffineElt` ``(lam, u)``.  Simple
reflections are addressed by affine labels (see :class:`GroupDatum`).
"""
from __future__ import annotations

import logging
import threading
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import CrossCheckMismatch, InfiniteType
from .lattice import Matrix, mat_mul, mat_vec, rational_inverse, to_int_matrix, vec_add
from .rootdata import Coweight, FiniteWeylElt, GroupDatum, Root, dominant_rep

_logger = logging.getLogger(__name__)

__all__ = [
    "AffineElt",
    "FrobeniusAction",
    "AffineWeylGroup",
    "affine_weyl",
]


@dataclass(frozen=True)
class AffineElt:
    """``t^lam u`` with ``lam`` in lattice coordinates."""

    lam: Coweight
    u: FiniteWeylElt

    @property
    def key(self) -> Tuple[Coweight, Tuple[int, ...]]:
        return self.lam, self.u.perm


@dataclass(frozen=True)
class FrobeniusAction:
    """``w -> twist * delta(w) * twist^-1`` where ``delta`` extends ``linear``."""

    linear: Matrix
    twist: AffineElt


@lru_cache(maxsize=None)
def affine_weyl(datum: GroupDatum) -> "AffineWeylGroup":
    """Shared :class:`AffineWeylGroup` instance for ``datum``."""
    return AffineWeylGroup(datum)


class AffineWeylGroup:
    """Arithmetic, lengths and Frobenius data of the Iwahori-Weyl group."""

    def __init__(self, datum: GroupDatum) -> None:
        self.datum = datum
        self.weyl = datum.weyl
        self.zero: Coweight = tuple(0 for _ in range(datum.rank))
        self.identity = AffineElt(self.zero, self.weyl.identity)
        self._flags: Dict[Tuple[int, ...], Tuple[bool, ...]] = {}
        self._length: Dict[AffineElt, int] = {}
        self._label_perm: Dict[FrobeniusAction, Dict[int, int]] = {}
        self._inverses: Dict[Matrix, Matrix] = {}
        self._layers: List[List[AffineElt]] = []
        self._layer_lock = threading.Lock()
        self._simple = self._build_simple_reflections()

    # -- construction

    def translation(self, lam: Sequence[int]) -> AffineElt:
        return AffineElt(tuple(int(x) for x in lam), self.weyl.identity)

    def finite(self, u: FiniteWeylElt) -> AffineElt:
        return AffineElt(self.zero, self.weyl.canonical(u))

    def reflection_matrix(self, root: Root) -> Matrix:
        n = self.datum.rank
        return tuple(
            tuple((1 if a == b else 0) - root.covec[a] * root.vec[b] for b in range(n)) for a in range(n)
        )

    def _build_simple_reflections(self) -> Dict[int, AffineElt]:
        out: Dict[int, AffineElt] = {}
        for i in range(self.datum.rank):
            out[i + 1] = self.finite(self.weyl.simple(i))
        for c, label in enumerate(self.datum.affine_labels):
            theta = self.datum.highest_roots[c]
            s_theta = self.weyl.from_matrix(self.reflection_matrix(theta))
            out[label] = AffineElt(theta.covec, s_theta)
        return out

    @property
    def labels(self) -> Tuple[int, ...]:
        return self.datum.all_labels

    def simple(self, label: int) -> AffineElt:
        return self._simple[label]

    # -- group law

    def multiply(self, x: AffineElt, y: AffineElt) -> AffineElt:
        lam = vec_add(x.lam, self.weyl.act(x.u, y.lam))
        return AffineElt(lam, self.weyl.mul(x.u, y.u))

    def product(self, elts: Iterable[AffineElt]) -> AffineElt:
        out = self.identity
        for w in elts:
            out = self.multiply(out, w)
        return out

    def invert(self, x: AffineElt) -> AffineElt:
        u_inv = self.weyl.inv(x.u)
        lam = tuple(-a for a in self.weyl.act(u_inv, x.lam))
        return AffineElt(lam, u_inv)

    def conjugate(self, x: AffineElt, w: AffineElt, frob: Optional[FrobeniusAction] = None) -> AffineElt:
        """``x w F(x)^-1`` (plain conjugation when ``frob`` is None)."""
        right = x if frob is None else self.frobenius_apply(frob, x)
        return self.multiply(self.multiply(x, w), self.invert(right))

    def from_labels(self, labels: Iterable[int], omega: Optional[AffineElt] = None) -> AffineElt:
        out = omega if omega is not None else self.identity
        for label in labels:
            out = self.multiply(out, self.simple(label))
        return out

    def is_translation(self, w: AffineElt) -> bool:
        return w.u == self.weyl.identity

    # -- length

    def _inversion_flags(self, u: FiniteWeylElt) -> Tuple[bool, ...]:
        """For each positive root, whether ``u^-1`` sends it negative."""
        flags = self._flags.get(u.perm)
        if flags is None:
            u_inv = self.weyl.inv(u)
            flags = tuple(self.weyl.sends_positive_to_negative(u_inv, r) for r in self.datum.positive_roots)
            self._flags[u.perm] = flags
        return flags

    def length(self, w: AffineElt) -> int:
        cached = self._length.get(w)
        if cached is not None:
            return cached
        total = 0
        for root, flag in zip(self.datum.positive_roots, self._inversion_flags(w.u)):
            p = self.datum.pairing(w.lam, root)
            total += abs(p - 1) if flag else abs(p)
        self._length[w] = total
        return total

    def sort_key(self, w: AffineElt) -> Tuple[int, Coweight, Tuple[int, ...]]:
        return self.length(w), w.lam, w.u.perm

    def right_descents(self, w: AffineElt) -> List[int]:
        n = self.length(w)
        return [s for s in self.labels if self.length(self.multiply(w, self.simple(s))) < n]

    def left_descents(self, w: AffineElt) -> List[int]:
        n = self.length(w)
        return [s for s in self.labels if self.length(self.multiply(self.simple(s), w)) < n]

    def reduced_word(self, w: AffineElt) -> Tuple[AffineElt, Tuple[int, ...]]:
        """``(tau, word)`` with ``w = tau * s_word[0] * ...``, ``tau`` of length zero."""
        word: List[int] = []
        current = w
        while True:
            descents = self.right_descents(current)
            if not descents:
                return current, tuple(reversed(word))
            s = descents[0]
            word.append(s)
            current = self.multiply(current, self.simple(s))

    # -- Omega

    def omega_of(self, lam: Sequence[int]) -> AffineElt:
        """The length-zero element in the coset of ``t^lam`` modulo the affine Weyl group."""
        current = self.translation(lam)
        while True:
            descents = self.left_descents(current)
            if not descents:
                return current
            current = self.multiply(self.simple(descents[0]), current)

    @cached_property
    def omega_elements(self) -> Tuple[AffineElt, ...]:
        """Length-zero elements, indexed like ``GroupDatum.fundamental_group``."""
        return tuple(self.omega_of(rep) for rep in self.datum.fundamental_group)

    def omega_index(self, w: AffineElt) -> int:
        """Index in :attr:`omega_elements` of the Omega component of ``w``."""
        return self.datum.fundamental_group.index(self.datum.lattice_class(w.lam))

    def omega_part(self, w: AffineElt) -> AffineElt:
        return self.omega_elements[self.omega_index(w)]

    def is_in_affine_weyl(self, w: AffineElt) -> bool:
        return self.omega_index(w) == 0

    # -- Frobenius

    @property
    def frobenius(self) -> FrobeniusAction:
        """Frame of the group datum: diagram action twisted by the declared Omega element."""
        twist = self.datum.omega_twist
        tau = self.identity if twist is None else self.omega_elements[twist]
        return FrobeniusAction(self.datum.frobenius_matrix, tau)

    def twisted_frame(self, frob: FrobeniusAction, tau: AffineElt) -> FrobeniusAction:
        """``Ad(tau) o F``, the Frobenius of the twisted centraliser frame."""
        return FrobeniusAction(frob.linear, self.multiply(tau, frob.twist))

    def _linear_inverse(self, linear: Matrix) -> Matrix:
        inv = self._inverses.get(linear)
        if inv is None:
            inv = to_int_matrix(rational_inverse(linear))
            self._inverses[linear] = inv
        return inv

    def diagram_apply(self, linear: Matrix, w: AffineElt) -> AffineElt:
        lam = mat_vec(linear, w.lam)
        m = mat_mul(mat_mul(linear, self.weyl.matrix(w.u)), self._linear_inverse(linear))
        return AffineElt(lam, self.weyl.from_matrix(m))

    def frobenius_apply(self, frob: FrobeniusAction, w: AffineElt) -> AffineElt:
        delta = self.diagram_apply(frob.linear, w)
        if frob.twist == self.identity:
            return delta
        return self.multiply(self.multiply(frob.twist, delta), self.invert(frob.twist))

    def label_permutation(self, frob: FrobeniusAction) -> Dict[int, int]:
        """Permutation of the affine labels induced by ``frob``."""
        perm = self._label_perm.get(frob)
        if perm is None:
            lookup = {self._simple[s]: s for s in self.labels}
            perm = {s: lookup[self.frobenius_apply(frob, self._simple[s])] for s in self.labels}
            self._label_perm[frob] = perm
        return perm

    def label_orbits(self, frob: FrobeniusAction, labels: Optional[Iterable[int]] = None) -> List[Tuple[int, ...]]:
        perm = self.label_permutation(frob)
        pool = set(self.labels if labels is None else labels)
        out: List[Tuple[int, ...]] = []
        while pool:
            start = min(pool)
            orbit, s = [], start
            while s not in orbit:
                orbit.append(s)
                s = perm[s]
            pool -= set(orbit)
            out.append(tuple(sorted(orbit)))
        return sorted(out)

    # -- decomposition

    def im_decompose(self, w: AffineElt) -> Tuple[AffineElt, Coweight, AffineElt]:
        """``w = x t^mu y`` with ``t^mu y`` minimal in its left ``W_0``-coset."""
        mu, _ = dominant_rep(self.datum, w.lam)
        mu = tuple(int(a) for a in mu)
        t_mu = self.translation(mu)
        for x in self.weyl.elements:
            if tuple(self.weyl.act(x, mu)) != w.lam:
                continue
            y = self.finite(self.weyl.mul(self.weyl.inv(x), w.u))
            tail = self.multiply(t_mu, y)
            n = self.length(tail)
            if all(self.length(self.multiply(self.simple(i + 1), tail)) > n for i in range(self.datum.rank)):
                x_elt = self.finite(x)
                if self.length(w) != self.length(x_elt) + self.length(t_mu) - self.length(y):
                    raise CrossCheckMismatch(f"length identity fails for decomposition of {w}")
                return x_elt, mu, y
        raise CrossCheckMismatch(f"no minimal coset decomposition found for {w}")

    # -- enumeration

    def elements_up_to(self, max_length: int) -> List[List[AffineElt]]:
        """All elements of length ``<= max_length``, layered by length."""
        with self._layer_lock:
            layers = self._layers
            if not layers:
                layers.append(sorted(self.omega_elements, key=lambda w: w.key))
            for k in range(len(layers) - 1, max_length):
                nxt = set()
                for w in layers[k]:
                    for s in self.labels:
                        v = self.multiply(w, self.simple(s))
                        if self.length(v) == k + 1:
                            nxt.add(v)
                layers.append(sorted(nxt, key=lambda w: w.key))
                _logger.debug("length %d layer has %d elements", k + 1, len(nxt))
        return [list(layer) for layer in layers[: max_length + 1]]

    def layer(self, length: int) -> List[AffineElt]:
        return self.elements_up_to(length)[length]

    # -- parabolic subgroups

    def component_labels(self, component: int) -> FrozenSet[int]:
        off = self.datum.component_offsets[component]
        rank = self.datum.components[component].rank
        return frozenset(range(off + 1, off + rank + 1)) | {self.datum.affine_labels[component]}

    def is_finite_type(self, labels: Iterable[int]) -> bool:
        """A subset generates a finite group iff it misses a node in every affine component."""
        chosen = set(labels)
        return all(not self.component_labels(c) <= chosen for c in range(len(self.datum.components)))

    def parabolic_elements(self, labels: Iterable[int]) -> List[AffineElt]:
        """Elements of the standard parabolic subgroup ``W_K``, sorted by length."""
        chosen = sorted(set(labels))
        if not self.is_finite_type(chosen):
            raise InfiniteType(f"labels {chosen} generate an infinite group")
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            w = queue.popleft()
            for s in chosen:
                v = self.multiply(w, self.simple(s))
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return sorted(seen, key=self.sort_key)

    def longest_parabolic(self, labels: Iterable[int]) -> AffineElt:
        return self.parabolic_elements(labels)[-1]

    # -- twisted Coxeter machinery

    def support(self, w: AffineElt) -> FrozenSet[int]:
        _, word = self.reduced_word(w)
        return frozenset(word)

    def twisted_support(self, w: AffineElt, perm: Dict[int, int]) -> FrozenSet[int]:
        """Smallest ``perm``-stable set of labels containing the support of ``w``."""
        out = set(self.support(w))
        frontier = list(out)
        while frontier:
            s = perm[frontier.pop()]
            if s not in out:
                out.add(s)
                frontier.append(s)
        return frozenset(out)

    def is_twisted_coxeter(self, w: AffineElt, labels: Iterable[int], perm: Dict[int, int]) -> bool:
        """True iff ``w`` is a product of one simple reflection from each ``perm``-orbit of ``labels``."""
        chosen = set(labels)
        tau, word = self.reduced_word(w)
        if tau != self.identity or not set(word) <= chosen:
            return False
        orbits = []
        pool = set(chosen)
        while pool:
            s = min(pool)
            orbit = {s}
            t = perm[s]
            while t != s:
                orbit.add(t)
                t = perm[t]
            pool -= orbit
            orbits.append(orbit)
        return len(word) == len(orbits) and all(len(orbit & set(word)) == 1 for orbit in orbits)
