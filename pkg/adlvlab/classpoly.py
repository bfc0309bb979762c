"""Deligne-Lusztig reduction: class polynomials and top-dimensional components.

Polynomials are stored in the basis ``(q - 1)^k`` with non-negative
coefficients.  The TIC monoid records the set of top-dimensional orbits of
an affine Deligne-Lusztig variety together with its dimension.
"""
from __future__ import annotations

import json
import logging
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .affineweyl import AffineElt, AffineWeylGroup, FrobeniusAction
from .cache import ClassPolyCache
from .elements import format_element, parse_element, split_class_key
from .errors import InfiniteSupport, ParityViolation, SearchBudgetExceeded
from .parahoric import ParahoricDescriptor
from .sigmaconj import (
    DEFAULT_BUDGET,
    BClass,
    SigmaClassKey,
    class_key,
    is_central,
    newton_kottwitz,
    tilde_closure,
    twisted_shift,
)

_logger = logging.getLogger(__name__)

__all__ = [
    "QMinusOnePoly",
    "Minimal",
    "Shift",
    "Split",
    "NonBasicDeferred",
    "NON_BASIC_DEFERRED",
    "OrbitDescriptor",
    "TICElement",
    "MinimalClassData",
    "ReductionEngine",
    "engine_for",
    "frobenius_fingerprint",
    "dl_reduction_step",
    "class_polynomials",
    "class_polynomials_by_conjclass",
    "minimal_class_data",
    "sigma_top",
    "iwahori_dimension",
]


@dataclass(frozen=True)
class QMinusOnePoly:
    """``sum coeffs[k] (q - 1)^k`` with non-negative integer coefficients."""

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coeffs)
        if any(c < 0 for c in coeffs):
            raise ValueError(f"negative (q-1)-coefficient in {coeffs}")
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def one(cls) -> "QMinusOnePoly":
        return cls((1,))

    def __add__(self, other: "QMinusOnePoly") -> "QMinusOnePoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return QMinusOnePoly(tuple(x + y for x, y in zip(a, b)))

    def times_q_minus_one(self) -> "QMinusOnePoly":
        return QMinusOnePoly((0,) + self.coeffs) if self.coeffs else self

    def times_q(self) -> "QMinusOnePoly":
        return self + self.times_q_minus_one()

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def evaluate(self, q: Union[int, Fraction]) -> Union[int, Fraction]:
        return sum(c * (q - 1) ** k for k, c in enumerate(self.coeffs))


PolyMap = Dict[SigmaClassKey, QMinusOnePoly]


@dataclass(frozen=True)
class Minimal:
    w: AffineElt


@dataclass(frozen=True)
class Shift:
    w: AffineElt


@dataclass(frozen=True)
class Split:
    """``s w' F(s)`` is two shorter than ``w'``."""

    s: int
    w: AffineElt
    sw: AffineElt
    sws: AffineElt


ReductionStep = Union[Minimal, Shift, Split]


@dataclass(frozen=True)
class NonBasicDeferred:
    """Stabilizer of a non-basic class, resolved by Levi reduction."""


NON_BASIC_DEFERRED = NonBasicDeferred()


@dataclass(frozen=True)
class OrbitDescriptor:
    host_class: SigmaClassKey
    stabilizer: Union[ParahoricDescriptor, NonBasicDeferred]

    @property
    def sort_key(self) -> tuple:
        rep = self.host_class.rep
        if isinstance(self.stabilizer, ParahoricDescriptor):
            return rep.key, (0, self.stabilizer.K)
        return rep.key, (1, ())


@dataclass(frozen=True)
class TICElement:
    """Top orbits with their dimension; ``dim`` is ``None`` for the empty element."""

    orbits: Tuple[OrbitDescriptor, ...] = ()
    dim: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "orbits", tuple(sorted(self.orbits, key=lambda o: o.sort_key)))

    @classmethod
    def zero(cls) -> "TICElement":
        return cls()

    @property
    def is_empty(self) -> bool:
        return self.dim is None

    def __add__(self, other: "TICElement") -> "TICElement":
        if other.is_empty:
            return self
        if self.is_empty or other.dim > self.dim:
            return other
        if self.dim > other.dim:
            return self
        return TICElement(self.orbits + other.orbits, self.dim)

    def shift(self, k: int = 1) -> "TICElement":
        """Multiplication by the k-th power of ``T = L - 1``."""
        return self if self.is_empty else TICElement(self.orbits, self.dim + k)

    def scale(self, count: int) -> "TICElement":
        if self.is_empty or count == 0:
            return TICElement()
        return TICElement(self.orbits * count, self.dim)

    def act(self, poly: QMinusOnePoly) -> "TICElement":
        """Action of a polynomial in ``T``: only the leading term survives."""
        if poly.is_zero:
            return TICElement()
        return self.scale(poly.leading).shift(poly.degree)


@dataclass(frozen=True)
class MinimalClassData:
    dim: int
    orbit: OrbitDescriptor
    tau: AffineElt


def frobenius_fingerprint(group: AffineWeylGroup, frob: FrobeniusAction) -> str:
    payload = {"linear": [list(r) for r in frob.linear], "twist": format_element(group, frob.twist)}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


class _PolyMemo(dict):
    def __init__(self, func):
        dict.__init__(self)
        self._func = func

    def __missing__(self, key):
        value = self._func(key)
        self[key] = value
        return value


class ReductionEngine:
    """Memoised reduction of elements to minimal classes for one frame.

    With ``rng`` set, the choice of reflections and of shift targets is
    randomised; each engine keeps its own memo so strategies never mix.
    """

    def __init__(
        self,
        group: AffineWeylGroup,
        frob: FrobeniusAction,
        budget: int = DEFAULT_BUDGET,
        rng: Optional[random.Random] = None,
        cache: Optional[ClassPolyCache] = None,
    ) -> None:
        self.group = group
        self.frob = frob
        self.budget = budget
        self.rng = rng
        self.cache = cache
        self._memo = _PolyMemo(self._compute)

    def _labels(self) -> List[int]:
        labels = list(self.group.labels)
        if self.rng is not None:
            self.rng.shuffle(labels)
        return labels

    def _split_label(self, w: AffineElt) -> Optional[int]:
        n = self.group.length(w)
        for s in self._labels():
            if self.group.length(twisted_shift(self.group, w, s, self.frob)) == n - 2:
                return s
        return None

    def step(self, w: AffineElt) -> ReductionStep:
        group, frob = self.group, self.frob
        s = self._split_label(w)
        if s is not None:
            sw = group.multiply(group.simple(s), w)
            return Split(s, w, sw, twisted_shift(group, w, s, frob))
        n = group.length(w)
        seen = {w}
        queue = deque([w])
        while queue:
            x = queue.popleft()
            for label in self._labels():
                y = twisted_shift(group, x, label, frob)
                if y in seen or group.length(y) != n:
                    continue
                if len(seen) >= self.budget:
                    raise SearchBudgetExceeded("length-preserving shift search", self.budget)
                if self._split_label(y) is not None:
                    return Shift(y)
                seen.add(y)
                queue.append(y)
        return Minimal(w)

    def polynomials(self, w: AffineElt) -> PolyMap:
        return self._memo[w]

    def _compute(self, w: AffineElt) -> PolyMap:
        if self.cache is not None:
            text = format_element(self.group, w)
            hit = self.cache.get(text)
            if hit is not None:
                _logger.debug("cache hit for %s", text)
                return self._decode(hit)
        result = self._reduce(w)
        if self.cache is not None:
            self.cache.put(format_element(self.group, w), self._encode(result))
        return result

    def _reduce(self, w: AffineElt) -> PolyMap:
        step = self.step(w)
        if isinstance(step, Minimal):
            return {class_key(self.group, w, self.frob, "tilde_class", self.budget): QMinusOnePoly.one()}
        if isinstance(step, Shift):
            return self.polynomials(step.w)
        _logger.debug("split %s at s%d", step.w, step.s)
        out: PolyMap = {}
        for key, poly in self.polynomials(step.sw).items():
            out[key] = out.get(key, QMinusOnePoly()) + poly.times_q_minus_one()
        for key, poly in self.polynomials(step.sws).items():
            out[key] = out.get(key, QMinusOnePoly()) + poly.times_q()
        return {k: v for k, v in out.items() if not v.is_zero}

    def _encode(self, table: PolyMap) -> Dict[str, Tuple[int, ...]]:
        return {"C:" + format_element(self.group, key.rep): poly.coeffs for key, poly in table.items()}

    def _decode(self, table: Dict[str, Tuple[int, ...]]) -> PolyMap:
        out: PolyMap = {}
        for text, coeffs in table.items():
            level, elt_text = split_class_key(text)
            rep = parse_element(self.group, elt_text)
            out[SigmaClassKey(level, rep)] = QMinusOnePoly(tuple(coeffs))
        return out


_ENGINES: Dict[Tuple[AffineWeylGroup, FrobeniusAction, int, Optional[Path]], ReductionEngine] = {}


def engine_for(
    group: AffineWeylGroup,
    frob: FrobeniusAction,
    budget: int = DEFAULT_BUDGET,
    cache_dir: Optional[Path] = None,
) -> ReductionEngine:
    """Deterministic shared engine per frame, budget and cache directory."""
    if cache_dir is not None:
        cache_dir = Path(cache_dir)
    key = (group, frob, budget, cache_dir)
    engine = _ENGINES.get(key)
    if engine is None:
        cache = None
        if cache_dir is not None:
            cache = ClassPolyCache.for_frame(cache_dir, group.datum.fingerprint, frobenius_fingerprint(group, frob))
        engine = ReductionEngine(group, frob, budget=budget, cache=cache)
        _ENGINES[key] = engine
    return engine


def dl_reduction_step(
    group: AffineWeylGroup, w: AffineElt, frob: FrobeniusAction, budget: int = DEFAULT_BUDGET
) -> ReductionStep:
    return engine_for(group, frob, budget).step(w)


def class_polynomials(
    group: AffineWeylGroup,
    w: AffineElt,
    frob: FrobeniusAction,
    budget: int = DEFAULT_BUDGET,
    rng: Optional[random.Random] = None,
) -> PolyMap:
    """``F_{w,C}`` for every tilde class ``C`` with a non-zero polynomial."""
    if rng is not None:
        return ReductionEngine(group, frob, budget=budget, rng=rng).polynomials(w)
    return engine_for(group, frob, budget).polynomials(w)


def class_polynomials_by_conjclass(
    group: AffineWeylGroup, w: AffineElt, frob: FrobeniusAction, budget: int = DEFAULT_BUDGET
) -> PolyMap:
    """``F_{w,O}``: tilde-class polynomials summed over each sigma-conjugacy class."""
    out: PolyMap = {}
    for key, poly in class_polynomials(group, w, frob, budget).items():
        conj = class_key(group, key.rep, frob, "conjclass", budget)
        out[conj] = out.get(conj, QMinusOnePoly()) + poly
    return out


def _stabilizer_candidates(
    group: AffineWeylGroup, rep: AffineElt, frob: FrobeniusAction, budget: int
) -> Iterable[Tuple[Tuple[int, ...], AffineElt, AffineElt, FrobeniusAction]]:
    for x in tilde_closure(group, rep, frob, budget):
        tau = group.omega_part(x)
        u = group.multiply(x, group.invert(tau))
        frame = group.twisted_frame(frob, tau)
        support = group.twisted_support(u, group.label_permutation(frame))
        if group.is_finite_type(support):
            yield tuple(sorted(support)), x, tau, frame


_CLASS_DATA: Dict[Tuple, MinimalClassData] = {}


def minimal_class_data(
    group: AffineWeylGroup, key: SigmaClassKey, frob: FrobeniusAction, budget: int = DEFAULT_BUDGET
) -> MinimalClassData:
    """Dimension of ``X_w(b)`` for minimal ``w`` and the stabilizer of its single top orbit."""
    memo_key = (group, frob, key)
    hit = _CLASS_DATA.get(memo_key)
    if hit is not None:
        return hit
    rep = key.rep
    datum = group.datum
    nk = newton_kottwitz(group, rep, frob)
    dim = Fraction(group.length(rep)) - sum(Fraction(x) * y for x, y in zip(nk.newton, datum.two_rho))
    if dim.denominator != 1 or dim < 0:
        raise ParityViolation(f"minimal class {rep} has dimension {dim}")
    if not is_central(datum, nk.newton):
        data = MinimalClassData(int(dim), OrbitDescriptor(key, NON_BASIC_DEFERRED), group.omega_part(rep))
    else:
        best = min(
            _stabilizer_candidates(group, rep, frob, budget),
            key=lambda c: (c[0], group.sort_key(c[1])),
            default=None,
        )
        if best is None:
            _logger.warning("no finite-type twisted support in the class of %s", rep)
            raise InfiniteSupport(f"twisted support of {rep} is not of finite type")
        support, _, tau, frame = best
        data = MinimalClassData(int(dim), OrbitDescriptor(key, ParahoricDescriptor(support, frame)), tau)
    _CLASS_DATA[memo_key] = data
    return data


def _matches(group: AffineWeylGroup, key: SigmaClassKey, frob: FrobeniusAction, b_class: BClass) -> bool:
    nk = newton_kottwitz(group, key.rep, frob)
    return nk.bg_key == b_class.bg_key


def sigma_top(
    group: AffineWeylGroup,
    w: AffineElt,
    b_class: BClass,
    frob: FrobeniusAction,
    budget: int = DEFAULT_BUDGET,
) -> TICElement:
    """Top-dimensional orbits of ``X_w(b)`` and their dimension."""
    total = TICElement()
    for key, poly in class_polynomials(group, w, frob, budget).items():
        if not _matches(group, key, frob, b_class):
            continue
        data = minimal_class_data(group, key, frob, budget)
        total = total + TICElement((data.orbit,), data.dim).act(poly)
    return total


def iwahori_dimension(
    group: AffineWeylGroup, w: AffineElt, b_class: BClass, frob: FrobeniusAction, budget: int = DEFAULT_BUDGET
) -> Optional[int]:
    """``dim X_w(b)``, or ``None`` when the variety is empty."""
    return sigma_top(group, w, b_class, frob, budget).dim
