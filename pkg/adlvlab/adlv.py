"""Affine Deligne-Lusztig varieties in the affine Grassmannian.

``X_mu(b)`` is studied through its Iwahori-level cover: the class polynomials
of ``w0 t^mu`` give the dimension and, for basic ``b``, the ``J_b``-orbits of
top-dimensional components with their parahoric stabilizers.  Non-basic
classes recurse into the Levi subgroup centralizing the Newton point.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .affineweyl import AffineElt, AffineWeylGroup, FrobeniusAction, affine_weyl
from .classpoly import class_polynomials, sigma_top
from .elements import format_class_text, format_element
from .errors import CrossCheckMismatch, IdentityViolation, InfiniteType, MalformedElement, ParityViolation
from .lattice import fixed_space_dim
from .parahoric import (
    ParahoricDescriptor,
    is_very_special_parahoric,
    inverse_volume_average,
    very_special_parahorics,
    volume_and_logvolume,
)
from .repcalc import (
    branching_multiplicity,
    check_calibration,
    chen_zhu_count,
    kottwitz_levi,
    levi_class,
    require_quasi_split,
    weight_table,
)
from .rootdata import Coweight, CoweightRat, GroupDatum, cartan_matrix, group_from_dict, levi_dominant, rho_pairing
from .sigmaconj import (
    DEFAULT_BUDGET,
    BClass,
    affine_map,
    enumerate_b_g_mu,
    newton_kottwitz,
    reduce_to_minimal,
    sigma_average,
)

_logger = logging.getLogger(__name__)

__all__ = [
    "StabilizerRecord",
    "LeviDatum",
    "LeviFrame",
    "AdlvReport",
    "QCheck",
    "TheoremAReport",
    "CoxeterWitness",
    "mu_invariants",
    "nonempty_and_dimension",
    "defect",
    "levi_frame",
    "levi_targets",
    "top_components",
    "verify_theorem_a",
    "q_invariant",
    "pipeline_nonempty",
    "coxeter_witness",
    "rational_json",
    "report_to_dict",
]


@dataclass(frozen=True)
class StabilizerRecord:
    """Stabilizer type of one orbit of top components.

    ``levi`` lists the 1-based simple labels of the Levi the orbit was found
    in; ``K`` is written in that Levi's own labelling.
    """

    K: Tuple[int, ...]
    levi: Tuple[int, ...]
    very_special: bool
    descriptor: Optional[ParahoricDescriptor] = field(default=None, compare=False, repr=False)
    group: Optional[AffineWeylGroup] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class LeviDatum:
    levi: Tuple[int, ...]
    lam: Coweight
    multiplicity: int


@dataclass(frozen=True)
class LeviFrame:
    """Adjoint quotient of a standard Levi with the restricted Frobenius.

    ``order[a]`` is the 0-based simple index of ``G`` carried by index ``a``
    of the Levi datum; ``datum`` is ``None`` for a torus.
    """

    levi: Tuple[int, ...]
    order: Tuple[int, ...]
    datum: Optional[GroupDatum]

    def project(self, datum: GroupDatum, lam: Sequence[int]) -> Coweight:
        pairings = datum.simple_pairings(lam)
        return tuple(int(pairings[j]) for j in self.order)


@dataclass(frozen=True)
class QCheck:
    q: int
    Q: Fraction
    vol_very_special: int

    @property
    def product(self) -> Fraction:
        return self.Q * self.vol_very_special

    @property
    def holds(self) -> bool:
        return self.product == 1


@dataclass
class AdlvReport:
    mu: Coweight
    b: BClass
    nonempty: bool
    dim: Optional[int] = None
    defect: Optional[int] = None
    orbit_count: int = 0
    stabilizers: List[StabilizerRecord] = field(default_factory=list)
    levi: List[LeviDatum] = field(default_factory=list)
    q_check: List[QCheck] = field(default_factory=list)

    @property
    def all_very_special(self) -> bool:
        return all(s.very_special for s in self.stabilizers)

    @property
    def q_holds(self) -> bool:
        return all(c.holds for c in self.q_check)

    def frames(self) -> List[Tuple[AffineWeylGroup, FrobeniusAction]]:
        """Distinct ``(group, frame)`` pairs carrying the stabilizers."""
        out: List[Tuple[AffineWeylGroup, FrobeniusAction]] = []
        for s in self.stabilizers:
            if s.descriptor is None or s.group is None:
                continue
            pair = (s.group, s.descriptor.frob)
            if pair not in out:
                out.append(pair)
        return out


@dataclass
class TheoremAReport:
    mu: Coweight
    reports: List[AdlvReport]

    @property
    def ok(self) -> bool:
        return all(r.all_very_special for r in self.reports if r.nonempty)


@dataclass(frozen=True)
class CoxeterWitness:
    coxeter: AffineElt
    minimal: AffineElt
    K: Tuple[int, ...]
    is_coxeter: bool
    very_special: bool

    @property
    def ok(self) -> bool:
        return self.is_coxeter and self.very_special


# ---------------------------------------------------------------------------
# Invariants, dimension and defect


def mu_invariants(datum: GroupDatum, mu: Sequence[int]) -> Tuple[CoweightRat, Coweight]:
    """``(mu^diamond, mu^natural)``: Frobenius average and coinvariant class."""
    return sigma_average(datum, mu), datum.coinvariant_class(mu)


def _in_b_g_mu(group: AffineWeylGroup, mu: Coweight, b: BClass, frob: FrobeniusAction, budget: int) -> bool:
    return any(c.bg_key == b.bg_key for c in enumerate_b_g_mu(group, mu, frob, budget))


def defect(group: AffineWeylGroup, b: BClass, frob: FrobeniusAction) -> int:
    """``rank_F G - rank_F J_b`` as the drop in fixed-space dimension."""
    datum = group.datum
    linear, _ = affine_map(group, b.rep, frob)
    value = fixed_space_dim(datum.frobenius_matrix) - fixed_space_dim(linear)
    if b.basic:
        frame = group.twisted_frame(frob, group.omega_part(b.rep))
        finite = [s for s in group.labels if not datum.is_affine_label(s)]
        rank_g = len(group.label_orbits(frob, finite))
        special = very_special_parahorics(group, frame)
        if special:
            rank_jb = len(group.label_orbits(frame, special[0].K))
            if rank_g - rank_jb != value:
                raise CrossCheckMismatch(
                    f"defect {value} from fixed spaces but {rank_g - rank_jb} from relative ranks"
                )
    return value


def nonempty_and_dimension(
    group: AffineWeylGroup,
    mu: Sequence[int],
    b: BClass,
    frob: FrobeniusAction,
    budget: int = DEFAULT_BUDGET,
) -> Tuple[bool, Optional[int]]:
    """Non-emptiness through ``B(G, mu)`` and the closed dimension formula."""
    datum = group.datum
    mu = tuple(int(x) for x in mu)
    if not _in_b_g_mu(group, mu, b, frob, budget):
        return False, None
    value = rho_pairing(datum, tuple(Fraction(x) - y for x, y in zip(mu, b.newton))) - Fraction(
        defect(group, b, frob), 2
    )
    if value.denominator != 1 or value < 0:
        raise ParityViolation(f"dimension formula gives {value} for mu = {list(mu)}")
    return True, int(value)


# ---------------------------------------------------------------------------
# Levi subgroups


def _connected(levi: Sequence[int], cartan) -> List[List[int]]:
    pool = set(levi)
    out = []
    while pool:
        start = min(pool)
        comp, queue = [start], deque([start])
        pool.discard(start)
        while queue:
            i = queue.popleft()
            for j in sorted(pool):
                if cartan[i][j] != 0:
                    pool.discard(j)
                    comp.append(j)
                    queue.append(j)
        out.append(sorted(comp))
    return out


_TYPES = (("A", 1), ("B", 2), ("C", 3), ("D", 4), ("G", 2), ("F", 4), ("E", 6))


def _identify(comp: Sequence[int], cartan) -> Tuple[str, int, Tuple[int, ...]]:
    """Type letter, rank and the ordering of ``comp`` matching the standard Cartan matrix."""
    r = len(comp)
    for letter, low in _TYPES:
        if r < low or (letter in "GF" and r != low) or (letter == "E" and r > 8):
            continue
        target = cartan_matrix(letter, r)
        for order in permutations(comp):
            if all(cartan[order[a]][order[b]] == target[a][b] for a in range(r) for b in range(r)):
                return letter, r, order
    raise CrossCheckMismatch(f"sub-diagram on {list(comp)} matches no standard type")


def levi_frame(datum: GroupDatum, levi: Sequence[int]) -> LeviFrame:
    """Adjoint Levi datum on the 0-based simple indices ``levi``."""
    levi = tuple(sorted(levi))
    if not levi:
        return LeviFrame((), (), None)
    components, order = [], []
    for comp in _connected(levi, datum.cartan):
        letter, r, comp_order = _identify(comp, datum.cartan)
        components.append({"type": f"{letter}{r}", "lattice": "adjoint"})
        order.extend(comp_order)
    position = {g: a for a, g in enumerate(order)}
    n, k = len(order), len(components)
    offsets, start = [], 0
    for comp in components:
        offsets.append(start)
        start += int(comp["type"][1:])
    affine = [0] + [n + c for c in range(1, k)]
    perm = [0] * (n + k)
    for a, g in enumerate(order):
        image = datum.diagram_perm[g + 1] - 1
        if image not in position:
            raise CrossCheckMismatch("Frobenius does not preserve the Newton centralizer")
        perm[a + 1] = position[image] + 1
    for c in range(k):
        first = offsets[c] + 1
        target = perm[first] - 1
        tc = max(i for i, off in enumerate(offsets) if off <= target)
        perm[affine[c]] = affine[tc]
    data = {
        "name": f"{datum.name}|M{''.join(str(j + 1) for j in levi)}",
        "components": components,
        "frobenius": {"diagram_perm": perm, "omega_twist": None},
    }
    return LeviFrame(levi, tuple(order), group_from_dict(data))


def levi_targets(
    group: AffineWeylGroup, mu: Sequence[int], b: BClass, frob: FrobeniusAction
) -> List[LeviDatum]:
    """Levi-dominant weights ``lam`` of ``V_mu`` with ``kappa_M(lam) = kappa_M(b)`` and nonzero branching."""
    datum = group.datum
    require_quasi_split(datum)
    if b.basic:
        _logger.debug("basic class: no proper Levi reduction")
        return []
    mu = tuple(int(x) for x in mu)
    levi, kappa_m = kottwitz_levi(group, b, frob)
    out = []
    for lam in sorted(weight_table(datum, mu).mult):
        if not levi_dominant(datum, levi, lam) or levi_class(datum, levi, lam) != kappa_m:
            continue
        a = branching_multiplicity(datum, mu, lam, levi)
        if a:
            out.append(LeviDatum(tuple(j + 1 for j in levi), lam, a))
    return out


# ---------------------------------------------------------------------------
# Top components


def _w0_t_mu(group: AffineWeylGroup, mu: Coweight) -> AffineElt:
    return group.multiply(group.finite(group.weyl.longest()), group.translation(mu))


def _tic_dimension(group: AffineWeylGroup, mu: Coweight, b: BClass, frob: FrobeniusAction, budget: int):
    tic = sigma_top(group, _w0_t_mu(group, mu), b, frob, budget)
    if tic.is_empty:
        return tic, None
    return tic, tic.dim - group.weyl.length(group.weyl.longest())


def _basic_orbits(
    group: AffineWeylGroup, mu: Coweight, b: BClass, frob: FrobeniusAction, budget: int, levi_labels: Tuple[int, ...]
) -> List[StabilizerRecord]:
    tic, _ = _tic_dimension(group, mu, b, frob, budget)
    records = []
    for orbit in tic.orbits:
        desc = orbit.stabilizer
        records.append(
            StabilizerRecord(desc.K, levi_labels, is_very_special_parahoric(group, desc), desc, group)
        )
    check_calibration(chen_zhu_count(group, mu, b, frob), len(records), f"{group.datum.name} mu={list(mu)}")
    return records


def _basic_class(group: AffineWeylGroup, mu: Coweight, frob: FrobeniusAction, budget: int) -> BClass:
    return next(c for c in enumerate_b_g_mu(group, mu, frob, budget) if c.basic)


def _levi_orbits(frame: LeviFrame, lam_ad: Coweight, budget: int) -> List[StabilizerRecord]:
    labels = tuple(j + 1 for j in frame.levi)
    if frame.datum is None:
        return [StabilizerRecord((), labels, True)]
    group = affine_weyl(frame.datum)
    frob = group.frobenius
    b_m = _basic_class(group, lam_ad, frob, budget)
    return _basic_orbits(group, lam_ad, b_m, frob, budget, labels)


def top_components(
    group: AffineWeylGroup,
    mu: Sequence[int],
    b: BClass,
    frob: FrobeniusAction,
    budget: int = DEFAULT_BUDGET,
    q_values: Sequence[int] = (),
) -> AdlvReport:
    """Dimension, defect, orbit count and stabilizers of the top components of ``X_mu(b)``.

    For basic ``b`` the volume identity is recorded in ``q_check`` for each of ``q_values``.
    """
    datum = group.datum
    require_quasi_split(datum)
    mu = tuple(int(x) for x in mu)
    nonempty, dim = nonempty_and_dimension(group, mu, b, frob, budget)
    if not nonempty:
        return AdlvReport(mu, b, False)
    report = AdlvReport(mu, b, True, dim=dim, defect=defect(group, b, frob))
    _, tic_dim = _tic_dimension(group, mu, b, frob, budget)
    if tic_dim != dim:
        raise CrossCheckMismatch(f"class polynomials give dimension {tic_dim}, the formula {dim}")
    full = tuple(range(1, datum.rank + 1))
    if b.basic:
        report.stabilizers = _basic_orbits(group, mu, b, frob, budget, full)
        report.orbit_count = len(report.stabilizers)
        report.q_check = [_q_check(group, report, q) for q in q_values]
        return report
    report.levi = levi_targets(group, mu, b, frob)
    levi, _ = kottwitz_levi(group, b, frob)
    frame = levi_frame(datum, levi)
    for target in report.levi:
        lam_ad = frame.project(datum, target.lam)
        orbits = _levi_orbits(frame, lam_ad, budget)
        report.stabilizers.extend(orbits * target.multiplicity)
    report.orbit_count = chen_zhu_count(group, mu, b, frob)
    if report.orbit_count != len(report.stabilizers):
        raise CrossCheckMismatch(
            f"weight count {report.orbit_count} but the Levi reduction gives {len(report.stabilizers)}"
        )
    _logger.debug("mu=%s: %d orbits through %d Levi weights", list(mu), report.orbit_count, len(report.levi))
    return report


def verify_theorem_a(
    group: AffineWeylGroup,
    mu: Sequence[int],
    frob: FrobeniusAction,
    budget: int = DEFAULT_BUDGET,
    q_values: Sequence[int] = (),
) -> TheoremAReport:
    """Very-speciality of every top-component stabilizer over all of ``B(G, mu)``."""
    mu = tuple(int(x) for x in mu)
    reports = [
        top_components(group, mu, b, frob, budget, q_values) for b in enumerate_b_g_mu(group, mu, frob, budget)
    ]
    result = TheoremAReport(mu, reports)
    if not result.ok:
        _logger.warning("mu=%s: found a stabilizer that is not very special", list(mu))
    return result


def _q_check(group: AffineWeylGroup, report: AdlvReport, q: int) -> QCheck:
    stabilizers = [s.descriptor for s in report.stabilizers]
    if not stabilizers:
        raise MalformedElement(f"X_mu(b) is empty for mu = {list(report.mu)}")
    frame = stabilizers[0].frob
    special = very_special_parahorics(group, frame)
    if not special:
        raise IdentityViolation(f"mu={list(report.mu)}: the frame of J_b has no very special parahoric")
    vol = volume_and_logvolume(group, special[0]).evaluate(q)
    return QCheck(q, inverse_volume_average(group, stabilizers, q), vol)


def q_invariant(
    group: AffineWeylGroup,
    mu: Sequence[int],
    b: BClass,
    frob: FrobeniusAction,
    q: int,
    budget: int = DEFAULT_BUDGET,
) -> QCheck:
    """Average inverse stabilizer volume against a very special parahoric volume."""
    if not b.basic:
        raise MalformedElement("the volume identity is stated for basic classes")
    report = top_components(group, mu, b, frob, budget)
    check = _q_check(group, report, q)
    if not check.holds:
        raise IdentityViolation(f"Q * vol = {check.product} at q = {q}")
    return check


def pipeline_nonempty(
    group: AffineWeylGroup,
    mu: Sequence[int],
    b: BClass,
    frob: FrobeniusAction,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Non-emptiness read off class polynomials over the double coset ``W0 t^mu W0``."""
    mu = tuple(int(x) for x in mu)
    weyl = group.weyl
    t_mu = group.translation(mu)
    seen = set()
    start = _w0_t_mu(group, mu)
    candidates = [start] + [
        group.product([group.finite(x), t_mu, group.finite(y)]) for x, y in product(weyl.elements, repeat=2)
    ]
    for w in candidates:
        if w in seen:
            continue
        seen.add(w)
        if group.im_decompose(w)[1] != mu:
            raise CrossCheckMismatch(f"{w} is not in the double coset of {list(mu)}")
        for key in class_polynomials(group, w, frob, budget):
            if newton_kottwitz(group, key.rep, frob).bg_key == b.bg_key:
                return True
    return False


def coxeter_witness(
    group: AffineWeylGroup, mu: Sequence[int], frob: FrobeniusAction, budget: int = DEFAULT_BUDGET
) -> Optional[CoxeterWitness]:
    """Reduce ``t^mu c`` for a twisted Coxeter element ``c`` of ``W0`` with ``t^mu c`` minimal in its coset.

    Returns ``None`` when no such ``c`` exists.
    """
    datum = group.datum
    mu = tuple(int(x) for x in mu)
    finite = [s for s in group.labels if not datum.is_affine_label(s)]
    orbits = group.label_orbits(frob, finite)
    t_mu = group.translation(mu)
    for reps in product(*orbits):
        for order in permutations(reps):
            c = group.product(group.simple(s) for s in order)
            x = group.multiply(t_mu, c)
            if set(group.left_descents(x)) & set(finite):
                continue
            w_min, _ = reduce_to_minimal(group, x, frob, budget)
            tau = group.omega_part(w_min)
            core = group.multiply(w_min, group.invert(tau))
            frame = group.twisted_frame(frob, tau)
            perm = group.label_permutation(frame)
            K = tuple(sorted(group.twisted_support(core, perm)))
            if not group.is_finite_type(K):
                raise InfiniteType(f"support {list(K)} of the reduced element is not of finite type")
            return CoxeterWitness(
                coxeter=c,
                minimal=w_min,
                K=K,
                is_coxeter=group.is_twisted_coxeter(core, K, perm),
                very_special=is_very_special_parahoric(group, ParahoricDescriptor.of(K, frame)),
            )
    return None


# ---------------------------------------------------------------------------
# JSON rendering


def rational_json(x: Any) -> Any:
    """Integers stay integers; other rationals become ``{"num": .., "den": ..}``."""
    x = Fraction(x)
    if x.denominator == 1:
        return int(x)
    return {"num": x.numerator, "den": x.denominator}


def report_to_dict(group: AffineWeylGroup, report: AdlvReport) -> Dict[str, Any]:
    return {
        "mu": list(report.mu),
        "b": format_class_text(group, "conjclass", report.b.rep),
        "b_rep": format_element(group, report.b.rep),
        "newton": [rational_json(x) for x in report.b.newton],
        "kappa": list(report.b.kappa),
        "basic": report.b.basic,
        "nonempty": report.nonempty,
        "dim": report.dim,
        "defect": report.defect,
        "orbit_count": report.orbit_count,
        "stabilizers": [
            {"K": list(s.K), "levi": list(s.levi), "very_special": s.very_special} for s in report.stabilizers
        ],
        "all_very_special": report.all_very_special,
        "levi": [
            {"levi": list(d.levi), "lam": list(d.lam), "multiplicity": d.multiplicity} for d in report.levi
        ],
        "q_check": [
            {
                "q": c.q,
                "Q": rational_json(c.Q),
                "vol": c.vol_very_special,
                "product": rational_json(c.product),
                "holds": c.holds,
            }
            for c in report.q_check
        ],
    }
