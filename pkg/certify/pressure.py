"""
Partition functions, infimum-rule upper bounds, the certified two-sided
pressure estimator and the anytime upper sequence.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import count
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Tuple
import logging
import math
import threading

import gmpy2
from gmpy2 import mpfr

from .budget import Budget, resolve, setting
from .errors import DimensionMismatch, EmptySubshift, InvalidPotential, MissingGap, ResourceLimitExceeded, ShapeError
from .language import ExtendabilityParams, FullShift, LanguageProvider, extendable_set, provider_for
from .lattice import Shape, box, minkowski_sum, side_box
from .potential import (
    LocallyConstantPotential, PotentialOracle, add_constant, ergodic_sum, sup_norm, upper_regularization,
)
from .rigor import (
    DEFAULT_PRECISION, NEG_INF, DyadicInterval, iv_div, iv_exp_sum, iv_log, to_fraction, up,
)
from .strips import strip_partition_function
from .subshift import ForbiddenEnumeration, Pattern, SftSpec

logger = logging.getLogger(__name__)


class Method(Enum):
    BOX_SANDWICH = 'BoxSandwich'
    TRANSFER_MATRIX = 'TransferMatrix'
    PERRON_ROOT_1D = 'PerronRoot1D'
    UPPER_ONLY = 'UpperOnly'


@dataclass(frozen=True)
class CertifiedEstimate:
    """An enclosure of a pressure together with how it was obtained"""
    value: DyadicInterval
    method: Method
    params: Dict[str, Any] = field(default_factory=dict, hash=False)
    conditional_on: FrozenSet[str] = frozenset()

    def __post_init__(self):
        if self.method is Method.UPPER_ONLY and not self.value.is_upper_only:
            object.__setattr__(self, 'value', DyadicInterval.upper_only(self.value.hi, self.value.precision))

    @property
    def is_upper_only(self) -> bool:
        return self.value.is_upper_only

    def shifted(self, c: Fraction) -> 'CertifiedEstimate':
        """The same estimate for phi + c"""
        moved = self.value + DyadicInterval.point(c, self.value.precision)
        return CertifiedEstimate(moved, self.method, self.params, self.conditional_on)


@dataclass(frozen=True)
class UpperStep:
    position: int
    term: DyadicInterval
    best: mpfr
    meta: Tuple[Tuple[str, Any], ...]


class UpperSequence:
    """
    Append-only running minimum of upper bounds.

    Steps that could not be evaluated are kept as gaps and never emit a bound.
    """

    def __init__(self, columns: Tuple[str, ...]):
        self.columns = columns
        self._steps: List[UpperStep] = []
        self.gaps: List[Tuple[Tuple[str, Any], ...]] = []
        self._lock = threading.Lock()

    def append(self, term: DyadicInterval, **meta: Any) -> UpperStep:
        with self._lock:
            best = term.hi if not self._steps else min(self._steps[-1].best, term.hi)
            step = UpperStep(len(self._steps) + 1, term, best, tuple((c, meta.get(c)) for c in self.columns))
            self._steps.append(step)
            return step

    def skip(self, reason: str, **meta: Any) -> None:
        logger.warning(f"skipping upper-sequence step {meta}: {reason}")
        with self._lock:
            self.gaps.append(tuple((c, meta.get(c)) for c in self.columns))

    @property
    def steps(self) -> List[UpperStep]:
        with self._lock:
            return list(self._steps)

    def __len__(self) -> int:
        return len(self._steps)

    @property
    def best(self) -> mpfr:
        if not self._steps:
            raise ValueError("the sequence has no terms yet")
        return self._steps[-1].best

    def his(self) -> List[mpfr]:
        return [step.best for step in self.steps]


def _check(f: Shape, spec: SftSpec, p: LocallyConstantPotential) -> None:
    if not len(f):
        raise ShapeError("partition functions need a nonempty shape")
    if f.dim != spec.dim or p.dim != spec.dim:
        raise DimensionMismatch(f"shape ({f.dim}), spec ({spec.dim}) and potential ({p.dim}) dimensions differ")


def _sum_by_exponent(patterns: List[Pattern], f: Shape, p: LocallyConstantPotential,
                     precision: int, label: str) -> DyadicInterval:
    """Z from a pattern list on f + window, taking the max ergodic sum per restriction to f"""
    best: Dict[Tuple[int, ...], Fraction] = {}
    for u in patterns:
        key = tuple(u.at(s) for s in f.sites)
        value = ergodic_sum(p, u, f)
        if key not in best or value > best[key]:
            best[key] = value
    if not best:
        raise EmptySubshift(f"no admissible pattern on {label}")
    return iv_exp_sum(Counter(best.values()), precision)


def partition_function(f: Shape, spec: SftSpec, p: LocallyConstantPotential,
                       lang: Optional[LanguageProvider] = None, precision: int = DEFAULT_PRECISION,
                       budget: Optional[Budget] = None) -> DyadicInterval:
    """
    Z_f(p): the sum over language patterns w on f of exp of the largest
    ergodic sum among their extensions to f + window.
    """
    _check(f, spec, p)
    budget = resolve(budget)
    lang = lang or provider_for(spec, budget=budget)
    if p.is_single_site and lang.is_local:
        return strip_partition_function(f, spec.forbidden, len(spec.alphabet), p, f, precision, budget)
    thick = minkowski_sum(p.window, f)
    return _sum_by_exponent(lang.patterns(thick), f, p, precision, f"{len(f)} sites")


def recoded_partition_function(interior: Shape, spec: SftSpec, p: LocallyConstantPotential,
                               lang: LanguageProvider, precision: int = DEFAULT_PRECISION,
                               budget: Optional[Budget] = None) -> DyadicInterval:
    """
    The partition function of the higher-block recoding on interior: a sum over
    language patterns u on interior + R of exp(sum over g in interior of
    p(u | g + window)), R the bounding box of the window. No sup is taken.
    """
    _check(interior, spec, p)
    budget = resolve(budget)
    thick = minkowski_sum(interior, p.window.bounding_box().shape())
    if lang.is_local:
        return strip_partition_function(thick, spec.forbidden, len(spec.alphabet), p, interior, precision, budget)
    histogram: Counter = Counter()
    for u in lang.patterns(thick):
        histogram[ergodic_sum(p, u, interior)] += 1
    if not histogram:
        raise EmptySubshift(f"no admissible pattern on {len(thick)} sites")
    return iv_exp_sum(histogram, precision)


def per_site_log(z: DyadicInterval, size: int) -> DyadicInterval:
    return iv_div(iv_log(z), DyadicInterval.point(size, z.precision))


def upper_bound_from_shape(f: Shape, spec: SftSpec, p: LocallyConstantPotential,
                           lang: Optional[LanguageProvider] = None, precision: int = DEFAULT_PRECISION,
                           budget: Optional[Budget] = None) -> DyadicInterval:
    """|f|^-1 log Z_f(p); its upper end bounds the pressure from above"""
    return per_site_log(partition_function(f, spec, p, lang, precision, budget), len(f))


def modified_partition_function(f: Shape, params: ExtendabilityParams, enumeration: ForbiddenEnumeration,
                                pot: LocallyConstantPotential, precision: int = DEFAULT_PRECISION,
                                budget: Optional[Budget] = None,
                                cache: Optional[Dict] = None) -> DyadicInterval:
    """
    The (t, n)-modified partition function: the sum over extendable w on f of
    exp of the largest ergodic sum over extendable v on window + f with v|f = w.
    """
    if pot.dim != f.dim:
        raise DimensionMismatch(f"potential of dimension {pot.dim} on a {f.dim}-dimensional shape")
    thick = minkowski_sum(pot.window, f)
    key = (thick, params)
    if cache is not None and key in cache:
        patterns = cache[key]
    else:
        patterns = extendable_set(thick, params, enumeration, budget)
        if cache is not None:
            cache[key] = patterns
    return _sum_by_exponent(patterns, f, pot, precision, f"{len(f)} sites (t={params.t}, n={params.n})")


def recoding_gap(spec: SftSpec, p: LocallyConstantPotential, lang: LanguageProvider) -> int:
    """The gap of the recoded system: the source gap plus the window's extent"""
    if spec.is_full_shift or isinstance(lang, FullShift):
        source = 0
    elif spec.si_gap is not None:
        source = spec.si_gap
    elif not lang.exact:
        source = 0
    else:
        raise MissingGap("two-sided bounds need an asserted si_gap")
    return source + max(side - 1 for side in p.window.bounding_box().sides)


def _sandwich(interior: Shape, spec: SftSpec, pot: LocallyConstantPotential, lang: LanguageProvider,
              gap: int, precision: int, budget: Budget) -> Tuple[DyadicInterval, DyadicInterval, DyadicInterval]:
    """(log Z, lower enclosure, upper enclosure) on one interior box"""
    z = recoded_partition_function(interior, spec, pot, lang, precision, budget)
    log_z = iv_log(z)
    sides = interior.bounding_box().sides
    thick = 1
    for side in sides:
        thick *= side + 2 * gap
    upper = iv_div(log_z, DyadicInterval.point(len(interior), precision))
    if lang.exact:
        lower = iv_div(log_z, DyadicInterval.point(thick, precision))
    else:
        lower = DyadicInterval(NEG_INF, NEG_INF, precision)
    return log_z, lower, upper


def sandwich_bounds(spec: SftSpec, pot: LocallyConstantPotential, m: int,
                    lang: Optional[LanguageProvider] = None, precision: int = DEFAULT_PRECISION,
                    budget: Optional[Budget] = None) -> Tuple[DyadicInterval, DyadicInterval]:
    """
    For pot >= 0: lower.lo <= P <= upper.hi, from the recoded partition
    function of the interior [0, m-1]^d and the gap-thickened box around it.
    """
    if pot.min_value() < 0:
        raise InvalidPotential("sandwich bounds need a nonnegative potential; shift it first")
    if pot.dim != spec.dim:
        raise DimensionMismatch(f"potential of dimension {pot.dim} for a {spec.dim}-dimensional spec")
    budget = resolve(budget)
    lang = lang or provider_for(spec, budget=budget)
    gap = recoding_gap(spec, pot, lang)
    interior = side_box(m, spec.dim).shape()
    _, lower, upper = _sandwich(interior, spec, pot, lang, gap, precision, budget)
    logger.info(f"sandwich on side {m} with gap {gap}: {lower.lo} <= P <= {upper.hi}")
    return lower, upper


def eta_for(k: int, alphabet_size: int, window_size: int, shifted_norm: Fraction, precision: int) -> Fraction:
    """2^-k-1 / (3 log|A_R| + 3 |phi'| + 2^-k), with log|A_R| rounded up"""
    with up(precision):
        log_size = gmpy2.log(mpfr(alphabet_size))
    denominator = 3 * window_size * to_fraction(log_size) + 3 * shifted_norm + Fraction(1, 2 ** k)
    return Fraction(1, 2 ** (k + 1)) / denominator


def certified_pressure(spec: SftSpec, pot: LocallyConstantPotential, k: int,
                       lang: Optional[LanguageProvider] = None, precision: int = DEFAULT_PRECISION,
                       budget: Optional[Budget] = None) -> CertifiedEstimate:
    """
    Pressure to within 2^-k.

    The potential is shifted by its sup norm, eta and the guaranteed radius M
    are fixed up front, and centered interiors [-m, m]^d grow from m = 0
    until the best bracket seen is narrow enough. M bounds the search.
    """
    if k < 1:
        raise ValueError("precision index k must be positive")
    if pot.dim != spec.dim:
        raise DimensionMismatch(f"potential of dimension {pot.dim} for a {spec.dim}-dimensional spec")
    budget = resolve(budget)
    lang = lang or provider_for(spec, budget=budget)
    c = sup_norm(pot)
    shifted = add_constant(pot, c)
    gap = recoding_gap(spec, shifted, lang)
    d = spec.dim
    eta = eta_for(k, len(spec.alphabet), len(pot.window.bounding_box().shape()), sup_norm(shifted), precision)
    big_m = max(0, math.ceil(Fraction(d * gap) / eta) - gap)
    target = Fraction(1, 2 ** k)
    logger.info(f"certified pressure k={k}: eta={eta}, M={big_m}, gap={gap}, shift={c}")

    limit = big_m
    if not lang.exact:
        limit = min(big_m, int(setting('CERTIFY_DEFAULT_BOX_SIDE', 8)) // 2)

    best_lo, best_hi = NEG_INF, None
    radius = 0
    for radius in range(limit + 1):
        interior = box(radius, d).shape()
        try:
            log_z, lower, upper = _sandwich(interior, spec, shifted, lang, gap, precision, budget)
        except ResourceLimitExceeded as exc:
            if best_hi is not None and not lang.exact:
                logger.warning(f"budget reached at radius {radius}; keeping the upper bound from radius {radius - 1}")
                radius -= 1
                break
            raise ResourceLimitExceeded(exc.what, exc.projected, exc.limit,
                                        f"radius {radius} of the guaranteed radius {big_m}, "
                                        f"about |A|^{(2 * big_m + 1) ** d} patterns at M") from exc
        # the shifted potential is nonnegative, so (1 - eta) * lower never beats lower itself
        best_lo = max(best_lo, lower.lo)
        best_hi = upper.hi if best_hi is None else min(best_hi, upper.hi)
        logger.debug(f"radius {radius}: lower {lower.lo}, upper {upper.hi}")
        with up(precision):
            width = best_hi - best_lo
        if lang.exact and to_fraction(width) <= target:
            break
    else:
        if lang.exact:
            logger.warning(f"width target 2^-{k} not met by radius {big_m}; rounding slack remains")

    value = DyadicInterval(best_lo, best_hi, precision) - DyadicInterval.point(c, precision)
    method = Method.BOX_SANDWICH if lang.exact else Method.UPPER_ONLY
    params = {
        'k': k, 'eta': str(eta), 'M': big_m, 'radius': radius, 'gap': gap,
        'shift': str(c), 'precision': precision, 'provider': lang.kind,
    }
    logger.info(f"certified pressure stopped at radius {radius}: {value}")
    return CertifiedEstimate(value, method, params, lang.assertions)


def diagonal(arity: int = 4) -> Iterator[Tuple[int, ...]]:
    """Positive integer tuples by increasing total, lexicographic within a total"""
    for total in count(arity):
        yield from _compositions(total, arity)


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def pressure_upper_sequence(enumeration: ForbiddenEnumeration, oracle: PotentialOracle, steps: int,
                            precision: int = DEFAULT_PRECISION,
                            budget: Optional[Budget] = None) -> UpperSequence:
    """
    Running minimum of |F_n|^-1 log of the (t, s)-modified partition function
    of psi_k over the diagonal order of (n, k, t, s), F_n = [0, n-1]^d.
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    budget = resolve(budget)
    sequence = UpperSequence(('n', 'k', 't', 's'))
    cache: Dict = {}
    for n, k, t, s in diagonal(4):
        if len(sequence) + len(sequence.gaps) >= steps:
            break
        f = side_box(n, enumeration.dim).shape()
        try:
            psi = upper_regularization(oracle, k)
            z = modified_partition_function(f, ExtendabilityParams(t, s), enumeration, psi, precision, budget, cache)
            term = per_site_log(z, len(f))
        except EmptySubshift:
            term = DyadicInterval(NEG_INF, NEG_INF, precision)
        except ResourceLimitExceeded as exc:
            sequence.skip(str(exc), n=n, k=k, t=t, s=s)
            continue
        step = sequence.append(term, n=n, k=k, t=t, s=s)
        logger.debug(f"upper step {step.position} (n={n}, k={k}, t={t}, s={s}): {term.hi}, best {step.best}")
    return sequence


def entropy(spec: SftSpec, k: int, lang: Optional[LanguageProvider] = None,
            precision: int = DEFAULT_PRECISION, budget: Optional[Budget] = None) -> CertifiedEstimate:
    return certified_pressure(spec, LocallyConstantPotential.zero(spec.alphabet, spec.dim), k, lang, precision, budget)
