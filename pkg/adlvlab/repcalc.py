"""Representations of the dual group: weights, branching and component counts.

Characters of the dual group are elements of ``Lambda``; its roots are the
coroots of the root datum and its coroots are the roots.  All arithmetic is
exact.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .affineweyl import AffineWeylGroup, FrobeniusAction
from .errors import ConventionUnverified, UnsupportedFrame
from .lattice import dot, echelon_basis, reduce_mod, vec_add, vec_sub
from .rootdata import Coweight, CoweightRat, GroupDatum, dominance_leq, dominant_rep, levi_dominant
from .sigmaconj import BClass, newton_kottwitz, sigma_average

_logger = logging.getLogger(__name__)

__all__ = [
    "WeightTable",
    "weight_table",
    "weight_multiplicity",
    "weyl_dimension",
    "branching_multiplicity",
    "newton_levi",
    "levi_class",
    "kottwitz_levi",
    "lambda_b",
    "chen_zhu_count",
    "check_calibration",
    "require_quasi_split",
]


@dataclass(frozen=True)
class WeightTable:
    highest: Coweight
    mult: Dict[Coweight, int]

    @property
    def dimension(self) -> int:
        return sum(self.mult.values())

    def __getitem__(self, lam: Sequence[int]) -> int:
        return self.mult.get(tuple(lam), 0)


def require_quasi_split(datum: GroupDatum) -> None:
    if datum.omega_twist is not None:
        raise UnsupportedFrame(f"{datum.name}: operation needs a frame without an Omega twist")


def _rho_hat(datum: GroupDatum) -> CoweightRat:
    total = tuple(Fraction(0) for _ in range(datum.rank))
    for r in datum.positive_roots:
        total = vec_add(total, r.covec)
    return tuple(x / 2 for x in total)


def _form(datum: GroupDatum, x: Sequence, y: Sequence) -> Fraction:
    """Weyl-invariant form ``sum_{alpha > 0} <x, alpha><y, alpha>``."""
    return sum(
        (Fraction(dot(x, r.vec)) * Fraction(dot(y, r.vec)) for r in datum.positive_roots),
        Fraction(0),
    )


def _dominant_weights(datum: GroupDatum, mu: Coweight) -> List[Coweight]:
    """Dominant weights below ``mu``, reached by subtracting positive coroots."""
    seen = {mu}
    queue = deque([mu])
    while queue:
        lam = queue.popleft()
        for r in datum.positive_roots:
            nxt = vec_sub(lam, r.covec)
            if nxt not in seen and datum.is_dominant(nxt):
                seen.add(nxt)
                queue.append(nxt)
    return sorted(seen, key=lambda lam: (sum(datum.coroot_coordinates(vec_sub(mu, lam))), lam))


@lru_cache(maxsize=None)
def weight_table(datum: GroupDatum, mu: Coweight) -> WeightTable:
    """Freudenthal recursion over dominant weights, extended by Weyl symmetry."""
    mu = tuple(int(x) for x in mu)
    if not datum.is_dominant(mu):
        raise ValueError(f"{list(mu)} is not dominant")
    rho = _rho_hat(datum)
    top = _form(datum, vec_add(mu, rho), vec_add(mu, rho))
    dominant: Dict[Coweight, int] = {}

    def lookup(lam: Sequence) -> int:
        rep, _ = dominant_rep(datum, lam)
        return dominant.get(tuple(int(x) for x in rep), 0)

    for lam in _dominant_weights(datum, mu):
        if lam == mu:
            dominant[lam] = 1
            continue
        total = Fraction(0)
        for r in datum.positive_roots:
            k = 1
            while True:
                shifted = tuple(a + k * b for a, b in zip(lam, r.covec))
                if not _below_orbit(datum, shifted, mu):
                    break
                m = lookup(shifted)
                if m:
                    total += m * _form(datum, shifted, r.covec)
                k += 1
        denominator = top - _form(datum, vec_add(lam, rho), vec_add(lam, rho))
        value = 2 * total / denominator
        if value.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity {value} at {lam}")
        if value:
            dominant[lam] = int(value)
    mult: Dict[Coweight, int] = {}
    weyl = datum.weyl
    for lam, m in dominant.items():
        for u in weyl.elements:
            mult[tuple(weyl.act(u, lam))] = m
    _logger.debug("weight table of %s: %d weights", list(mu), len(mult))
    return WeightTable(mu, mult)


def _below_orbit(datum: GroupDatum, lam: Sequence, mu: Coweight) -> bool:
    rep, _ = dominant_rep(datum, lam)
    return dominance_leq(datum, rep, mu)


def weight_multiplicity(datum: GroupDatum, mu: Sequence[int], lam: Sequence[int]) -> int:
    return weight_table(datum, tuple(int(x) for x in mu))[lam]


def weyl_dimension(datum: GroupDatum, mu: Sequence[int]) -> int:
    rho = _rho_hat(datum)
    value = Fraction(1)
    for r in datum.positive_roots:
        value *= Fraction(dot(vec_add(mu, rho), r.vec)) / Fraction(dot(rho, r.vec))
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral Weyl dimension {value} for {list(mu)}")
    return int(value)


def _levi_rho(datum: GroupDatum, levi: Iterable[int]) -> CoweightRat:
    chosen = set(levi)
    total = tuple(Fraction(0) for _ in range(datum.rank))
    for r in datum.positive_roots:
        if all(c == 0 or j in chosen for j, c in enumerate(r.coeffs)):
            total = vec_add(total, r.covec)
    return tuple(x / 2 for x in total)


def branching_multiplicity(datum: GroupDatum, mu: Sequence[int], lam: Sequence[int], levi: Iterable[int]) -> int:
    """Multiplicity of the Levi representation of highest weight ``lam`` in ``V_mu``.

    ``levi`` lists 0-based finite indices.  Alternating sum over the Levi Weyl group.
    """
    levi = tuple(sorted(set(levi)))
    table = weight_table(datum, tuple(int(x) for x in mu))
    weyl = datum.weyl
    rho_m = _levi_rho(datum, levi)
    total = 0
    for u in weyl.subgroup(levi):
        shift = vec_sub(rho_m, weyl.act(u, rho_m))
        weight = tuple(int(a + b) for a, b in zip(lam, shift))
        sign = -1 if weyl.length(u) % 2 else 1
        total += sign * table[weight]
    if total < 0:
        raise ArithmeticError(f"negative branching multiplicity for {list(lam)}")
    return total


# ---------------------------------------------------------------------------
# Levi data of a B(G) class


def newton_levi(datum: GroupDatum, newton: Sequence) -> Tuple[int, ...]:
    """0-based simple indices orthogonal to the Newton point."""
    return tuple(i for i, x in enumerate(datum.simple_pairings(newton)) if x == 0)


def levi_class(datum: GroupDatum, levi: Iterable[int], lam: Sequence[int]) -> Coweight:
    """Canonical representative of ``lam`` in ``Lambda / (Q_J^vee + (1 - P) Lambda)``."""
    n = datum.rank
    P = datum.frobenius_matrix
    gens = [datum.simple_coroots[j] for j in levi]
    gens += [tuple((1 if i == k else 0) - P[i][k] for i in range(n)) for k in range(n)]
    return reduce_mod(lam, echelon_basis(gens, n))


def kottwitz_levi(
    group: AffineWeylGroup, b_class: BClass, frob: FrobeniusAction
) -> Tuple[Tuple[int, ...], Coweight]:
    """Newton centralizer ``J`` and ``kappa_M(b)``.

    The representative is conjugated so its Newton vector is dominant; its
    finite part then lies in ``W_J``.
    """
    datum = group.datum
    w = b_class.rep
    nk = newton_kottwitz(group, w, frob)
    raw = tuple(Fraction(x, nk.period) for x in nk.translation)
    _, x = dominant_rep(datum, raw)
    x_elt = group.finite(x)
    y = group.conjugate(x_elt, w, frob)
    levi = newton_levi(datum, b_class.newton)
    return levi, levi_class(datum, levi, y.lam)


def lambda_b(group: AffineWeylGroup, mu: Sequence[int], b_class: BClass, frob: FrobeniusAction) -> Optional[CoweightRat]:
    """Image of ``lambda_b`` in the Frobenius-averaged weight space.

    ``lambda_b`` is the Levi-minimal lift of ``kappa_M(b)``.  Candidates are
    the averages of the weights of ``V_mu`` in that class whose average is
    Levi-dominant.  Returns ``None`` when ``V_mu`` has no such weight.
    """
    datum = group.datum
    require_quasi_split(datum)
    levi, kappa_m = kottwitz_levi(group, b_class, frob)
    table = weight_table(datum, tuple(int(x) for x in mu))
    averages = sorted(
        {sigma_average(datum, lam) for lam in table.mult if levi_class(datum, levi, lam) == kappa_m}
    )
    averages = [a for a in averages if levi_dominant(datum, levi, a)]
    if not averages:
        return None
    minimal = [
        a for a in averages if all(_levi_leq(datum, levi, a, other) for other in averages)
    ]
    if len(minimal) != 1:
        raise ConventionUnverified(f"no unique Levi-minimal lift among {len(averages)} candidates")
    return minimal[0]


def _levi_leq(datum: GroupDatum, levi: Sequence[int], a: Sequence, b: Sequence) -> bool:
    coords = datum.coroot_coordinates(vec_sub(b, a))
    chosen = set(levi)
    return all(c >= 0 and (c == 0 or j in chosen) for j, c in enumerate(coords))


def chen_zhu_count(group: AffineWeylGroup, mu: Sequence[int], b_class: BClass, frob: FrobeniusAction) -> int:
    """``dim V_mu(lambda_b)``: multiplicities summed over the fibre of ``lambda_b``."""
    datum = group.datum
    target = lambda_b(group, mu, b_class, frob)
    if target is None:
        return 0
    table = weight_table(datum, tuple(int(x) for x in mu))
    return sum(m for lam, m in table.mult.items() if sigma_average(datum, lam) == target)


def check_calibration(expected: int, observed: int, context: str) -> None:
    """Raise when the component count and the weight count disagree."""
    if expected != observed:
        _logger.warning("calibration failed for %s: weight count %d, components %d", context, expected, observed)
        raise ConventionUnverified(
            f"{context}: dim V_mu(lambda_b) = {expected} but the pipeline found {observed} orbits"
        )
