"""Sigma-twisted conjugacy in the Iwahori-Weyl group.

A Frobenius ``F`` realises ``sigma`` as conjugation by an affine map ``g`` of the
apartment, so the twisted class of ``w`` is the ordinary conjugacy class of the
affine map ``w g``.  Newton points, exact class invariants and the enumeration
of ``B(G, mu)`` are all read off that map.
"""
from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .affineweyl import AffineElt, AffineWeylGroup, FrobeniusAction
from .errors import CrossCheckMismatch, MalformedElement, SearchBudgetExceeded
from .lattice import Matrix, echelon_basis, identity, mat_mul, mat_vec, matrix_order, reduce_mod, vec_add
from .rootdata import Coweight, CoweightRat, GroupDatum, dominance_leq, dominant_rep

_logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2_000_000
LEVELS = ("conjclass", "tilde_class")

__all__ = [
    "DEFAULT_BUDGET",
    "LEVELS",
    "NewtonKottwitz",
    "SigmaClassKey",
    "ReductionStep",
    "BClass",
    "affine_map",
    "newton_kottwitz",
    "sigma_average",
    "is_central",
    "is_straight",
    "twisted_shift",
    "reduce_to_minimal",
    "tilde_closure",
    "conjugacy_invariant",
    "class_key",
    "b_class_of",
    "enumerate_b_g_mu",
]


@dataclass(frozen=True)
class NewtonKottwitz:
    """Newton point and Kottwitz data of an element.

    ``newton`` is dominant; ``translation / period`` is the raw Newton vector.
    ``kappa0`` indexes the Omega component and ``kappa`` is the canonical
    representative of the Frobenius coinvariant class.
    """

    newton: CoweightRat
    kappa0: int
    kappa: Coweight
    period: int
    translation: Coweight

    @property
    def bg_key(self) -> Tuple[CoweightRat, Coweight]:
        return self.newton, self.kappa


@dataclass(frozen=True)
class SigmaClassKey:
    level: str
    rep: AffineElt


@dataclass(frozen=True)
class ReductionStep:
    label: int
    kind: str


@dataclass(frozen=True)
class BClass:
    """A class of ``B(G)`` with its straight representative's conjugacy key."""

    key: SigmaClassKey
    newton: CoweightRat
    kappa: Coweight
    basic: bool

    @property
    def rep(self) -> AffineElt:
        return self.key.rep

    @property
    def bg_key(self) -> Tuple[CoweightRat, Coweight]:
        return self.newton, self.kappa


class _Memo(dict):
    """Write-once memo; concurrent writers store identical values."""

    def __init__(self, func):
        dict.__init__(self)
        self._func = func

    def __missing__(self, key):
        value = self._func(*key)
        self[key] = value
        return value


# ---------------------------------------------------------------------------
# Newton and Kottwitz data


def affine_map(group: AffineWeylGroup, w: AffineElt, frob: FrobeniusAction) -> Tuple[Matrix, Coweight]:
    """Linear and translation part of ``w g`` where ``F = Ad(g)``."""
    weyl = group.weyl
    tau = frob.twist
    u_w = weyl.matrix(w.u)
    linear = mat_mul(mat_mul(u_w, weyl.matrix(tau.u)), frob.linear)
    shift = vec_add(w.lam, mat_vec(u_w, tau.lam))
    return linear, shift


def _newton_kottwitz(group: AffineWeylGroup, w: AffineElt, frob: FrobeniusAction) -> NewtonKottwitz:
    datum = group.datum
    linear, shift = affine_map(group, w, frob)
    n = matrix_order(linear)
    total = tuple(0 for _ in shift)
    power = identity(datum.rank)
    for _ in range(n):
        total = vec_add(total, mat_vec(power, shift))
        power = mat_mul(power, linear)
    raw = tuple(Fraction(x, n) for x in total)
    newton, _ = dominant_rep(datum, raw)
    return NewtonKottwitz(
        newton=newton,
        kappa0=group.omega_index(w),
        kappa=datum.coinvariant_class(w.lam),
        period=n,
        translation=total,
    )


_NEWTON = _Memo(_newton_kottwitz)


def newton_kottwitz(group: AffineWeylGroup, w: AffineElt, frob: FrobeniusAction) -> NewtonKottwitz:
    return _NEWTON[group, w, frob]


def sigma_average(datum: GroupDatum, lam: Sequence) -> CoweightRat:
    """Average of the orbit of ``lam`` under the Frobenius linear part."""
    k = datum.frobenius_order
    total = tuple(Fraction(0) for _ in lam)
    current = tuple(lam)
    for _ in range(k):
        total = vec_add(total, current)
        current = mat_vec(datum.frobenius_matrix, current)
    return tuple(Fraction(x) / k for x in total)


def is_central(datum: GroupDatum, nu: Sequence) -> bool:
    return all(x == 0 for x in datum.simple_pairings(nu))


def is_straight(group: AffineWeylGroup, w: AffineElt, frob: FrobeniusAction) -> bool:
    nk = newton_kottwitz(group, w, frob)
    return group.length(w) == _two_rho_pairing(group.datum, nk.newton)


def _two_rho_pairing(datum: GroupDatum, nu: Sequence) -> Fraction:
    return Fraction(sum(Fraction(x) * y for x, y in zip(nu, datum.two_rho)))


# ---------------------------------------------------------------------------
# Cyclic shifts and minimal length elements


def twisted_shift(group: AffineWeylGroup, w: AffineElt, label: int, frob: FrobeniusAction) -> AffineElt:
    """``s w F(s)`` for the simple reflection ``s`` with the given label."""
    image = group.label_permutation(frob)[label]
    return group.multiply(group.multiply(group.simple(label), w), group.simple(image))


def _labels(group: AffineWeylGroup, rng: Optional[random.Random]) -> List[int]:
    labels = list(group.labels)
    if rng is not None:
        rng.shuffle(labels)
    return labels


def _trace(parents: Dict[AffineElt, Optional[Tuple[AffineElt, int]]], node: AffineElt) -> List[ReductionStep]:
    steps: List[ReductionStep] = []
    while parents[node] is not None:
        node, label = parents[node]
        steps.append(ReductionStep(label, "length_preserving"))
    return list(reversed(steps))


def reduce_to_minimal(
    group: AffineWeylGroup,
    w: AffineElt,
    frob: FrobeniusAction,
    budget: int = DEFAULT_BUDGET,
    rng: Optional[random.Random] = None,
) -> Tuple[AffineElt, List[ReductionStep]]:
    """Follow cyclic shifts until the class minimum length is reached.

    Each phase searches the length-preserving shift class of the current
    element breadth first and jumps as soon as some shift lowers the length.
    """
    path: List[ReductionStep] = []
    current = w
    visited = 0
    while True:
        n = group.length(current)
        parents: Dict[AffineElt, Optional[Tuple[AffineElt, int]]] = {current: None}
        queue = deque([current])
        drop = None
        while queue and drop is None:
            x = queue.popleft()
            for s in _labels(group, rng):
                y = twisted_shift(group, x, s, frob)
                length = group.length(y)
                if length < n:
                    drop = (x, s, y)
                    break
                if length == n and y not in parents:
                    visited += 1
                    if visited > budget:
                        raise SearchBudgetExceeded("minimal length reduction", budget)
                    parents[y] = (x, s)
                    queue.append(y)
        if drop is None:
            return current, path
        x, s, y = drop
        path.extend(_trace(parents, x))
        path.append(ReductionStep(s, "length_dropping"))
        current = y


def tilde_closure(
    group: AffineWeylGroup,
    w: AffineElt,
    frob: FrobeniusAction,
    budget: int = DEFAULT_BUDGET,
    with_omega: bool = True,
) -> List[AffineElt]:
    """Length-preserving shift closure of ``w``, optionally with Omega-twisted conjugates."""
    n = group.length(w)
    seen = {w}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        moves = [twisted_shift(group, x, s, frob) for s in group.labels]
        if with_omega:
            moves.extend(group.conjugate(tau, x, frob) for tau in group.omega_elements)
        for y in moves:
            if y not in seen and group.length(y) == n:
                if len(seen) >= budget:
                    raise SearchBudgetExceeded("tilde closure", budget)
                seen.add(y)
                queue.append(y)
    return sorted(seen, key=group.sort_key)


# ---------------------------------------------------------------------------
# Exact invariants and class keys


def _canonical_linear(group: AffineWeylGroup, linear: Matrix) -> Tuple[Matrix, Tuple]:
    weyl = group.weyl
    best: Optional[Matrix] = None
    conjugators: List = []
    for v in weyl.elements:
        m = weyl.matrix(v)
        conj = mat_mul(mat_mul(m, linear), weyl.matrix(weyl.inv(v)))
        if best is None or conj < best:
            best, conjugators = conj, [v]
        elif conj == best:
            conjugators.append(v)
    n = group.datum.rank
    gens = [tuple((1 if i == k else 0) - best[i][k] for i in range(n)) for k in range(n)]
    return best, (tuple(conjugators), echelon_basis(gens, n))


_CANONICAL_LINEAR = _Memo(_canonical_linear)


def conjugacy_invariant(group: AffineWeylGroup, w: AffineElt, frob: FrobeniusAction) -> Tuple[Matrix, Coweight]:
    """Complete invariant of the sigma-conjugacy class of ``w``.

    The class of ``w`` is the conjugacy class of the affine map ``w g``;
    conjugating by ``t^mu v`` moves the linear part to ``v A v^-1`` and the
    translation part by ``(1 - A) mu``.
    """
    linear, shift = affine_map(group, w, frob)
    canonical, (conjugators, basis) = _CANONICAL_LINEAR[group, linear]
    weyl = group.weyl
    best = min(reduce_mod(weyl.act(v, shift), basis) for v in conjugators)
    return canonical, best


def _conjclass_key(group: AffineWeylGroup, w: AffineElt, frob: FrobeniusAction, budget: int) -> SigmaClassKey:
    target = conjugacy_invariant(group, w, frob)
    w_min, _ = reduce_to_minimal(group, w, frob, budget)
    for x in group.layer(group.length(w_min)):
        if conjugacy_invariant(group, x, frob) == target:
            return SigmaClassKey("conjclass", x)
    raise CrossCheckMismatch(f"no minimal element found for the class of {w}")


def _tilde_key(group: AffineWeylGroup, w: AffineElt, frob: FrobeniusAction, budget: int) -> SigmaClassKey:
    w_min, _ = reduce_to_minimal(group, w, frob, budget)
    closure = tilde_closure(group, w_min, frob, budget)
    return SigmaClassKey("tilde_class", closure[0])


_KEYS: Dict[Tuple, SigmaClassKey] = {}


def class_key(
    group: AffineWeylGroup,
    w: AffineElt,
    frob: FrobeniusAction,
    level: str = "tilde_class",
    budget: int = DEFAULT_BUDGET,
) -> SigmaClassKey:
    """Canonical key of the class of ``w`` at the given level."""
    if level not in LEVELS:
        raise MalformedElement(f"unknown class level {level!r}")
    memo_key = (group, frob, level, w)
    hit = _KEYS.get(memo_key)
    if hit is not None:
        return hit
    if level == "conjclass":
        key = _conjclass_key(group, w, frob, budget)
    else:
        key = _tilde_key(group, w, frob, budget)
    _KEYS[memo_key] = key
    return key


def b_class_of(group: AffineWeylGroup, w: AffineElt, frob: FrobeniusAction, budget: int = DEFAULT_BUDGET) -> BClass:
    nk = newton_kottwitz(group, w, frob)
    key = class_key(group, w, frob, "conjclass", budget)
    return BClass(key, nk.newton, nk.kappa, is_central(group.datum, nk.newton))


def enumerate_b_g_mu(
    group: AffineWeylGroup,
    mu: Sequence[int],
    frob: FrobeniusAction,
    budget: int = DEFAULT_BUDGET,
) -> List[BClass]:
    """Classes of ``B(G, mu)`` through their straight representatives, most generic first."""
    datum = group.datum
    mu = tuple(int(x) for x in mu)
    if not datum.is_dominant(mu):
        raise MalformedElement(f"{list(mu)} is not dominant")
    bound = group.length(group.translation(mu))
    mu_diamond = sigma_average(datum, mu)
    mu_natural = datum.coinvariant_class(mu)
    classes: Dict[SigmaClassKey, BClass] = {}
    by_invariant: Dict[Tuple[CoweightRat, Coweight], SigmaClassKey] = {}
    for layer in group.elements_up_to(bound):
        for w in layer:
            nk = newton_kottwitz(group, w, frob)
            if nk.kappa != mu_natural:
                continue
            if group.length(w) != _two_rho_pairing(datum, nk.newton):
                continue
            if not dominance_leq(datum, nk.newton, mu_diamond):
                continue
            key = class_key(group, w, frob, "conjclass", budget)
            previous = by_invariant.setdefault(nk.bg_key, key)
            if previous != key:
                raise CrossCheckMismatch(
                    f"straight classes {previous.rep} and {key.rep} share Newton and Kottwitz data"
                )
            if key not in classes:
                classes[key] = BClass(key, nk.newton, nk.kappa, is_central(datum, nk.newton))
    out = sorted(
        classes.values(),
        key=lambda b: (-_two_rho_pairing(datum, b.newton), group.sort_key(b.rep)),
    )
    _logger.debug("B(G, %s) has %d classes", list(mu), len(out))
    return out
