"""
Ground-state energy and entropy from pressure estimates at large inverse
temperature.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Optional
import logging
import math

import gmpy2
from gmpy2 import mpfr

from .budget import Budget, resolve
from .errors import ResourceLimitExceeded
from .language import LanguageProvider, provider_for
from .potential import LocallyConstantPotential, PotentialOracle, scale
from .pressure import CertifiedEstimate, UpperSequence, certified_pressure, pressure_upper_sequence
from .rigor import DEFAULT_PRECISION, DyadicInterval, NEG_INF, down, to_fraction, up
from .subshift import ForbiddenEnumeration, SftSpec
from .transfer import full_shift_pressure_2d, perron_pressure_1d

logger = logging.getLogger(__name__)

PressureFn = Callable[[LocallyConstantPotential, Fraction], CertifiedEstimate]
PressureUpperFn = Callable[[LocallyConstantPotential], mpfr]


@dataclass(frozen=True)
class EnergyEstimate:
    """An enclosure of sup over invariant measures of the integral of phi"""
    value: DyadicInterval
    beta_used: int
    epsilon: Fraction
    pressure: CertifiedEstimate

    @property
    def conditional_on(self) -> FrozenSet[str]:
        return self.pressure.conditional_on


def _log_size(alphabet_size: int, precision: int) -> DyadicInterval:
    with down(precision):
        lo = gmpy2.log(mpfr(alphabet_size))
    with up(precision):
        hi = gmpy2.log(mpfr(alphabet_size))
    return DyadicInterval(lo, hi, precision)


def beta_for(epsilon: Fraction, alphabet_size: int, precision: int = DEFAULT_PRECISION) -> int:
    """ceil(4 log|A| / epsilon), at least 1"""
    log_hi = to_fraction(_log_size(alphabet_size, precision).hi)
    return max(1, math.ceil(4 * log_hi / epsilon))


def ground_state_energy(pressure_fn: PressureFn, pot: LocallyConstantPotential, epsilon,
                        alphabet_size: int, precision: int = DEFAULT_PRECISION) -> EnergyEstimate:
    """
    With P enclosing P(beta phi) to width beta*epsilon/2, the energy lies in
    [P.lo/beta - 2 log|A|/beta, P.hi/beta], an interval of width <= epsilon.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    beta = beta_for(epsilon, alphabet_size, precision)
    logger.info(f"ground-state energy: epsilon={epsilon}, beta={beta}")
    try:
        estimate = pressure_fn(scale(pot, beta), beta * epsilon / 2)
    except ResourceLimitExceeded as exc:
        raise ResourceLimitExceeded(exc.what, exc.projected, exc.limit, f"pressure at beta={beta}") from exc
    beta_iv = DyadicInterval.point(beta, precision)
    if estimate.is_upper_only:
        value = DyadicInterval.upper_only((estimate.value / beta_iv).hi, precision)
    else:
        slack = _log_size(alphabet_size, precision) * 2 / beta_iv
        lower = estimate.value.lo
        low_end = (DyadicInterval(lower, lower, estimate.value.precision) / beta_iv - slack).lo
        value = DyadicInterval(low_end, (estimate.value / beta_iv).hi, precision)
    return EnergyEstimate(value, beta, epsilon, estimate)


def ground_state_energy_upper(pressure_upper_fn: PressureUpperFn, pot: LocallyConstantPotential,
                              steps: int, precision: int = DEFAULT_PRECISION) -> UpperSequence:
    """Running minimum of n^-1 times an upper bound on P(n phi), n = 1..steps"""
    sequence = UpperSequence(('n',))
    for n in range(1, steps + 1):
        try:
            hi = pressure_upper_fn(scale(pot, n))
        except ResourceLimitExceeded as exc:
            sequence.skip(str(exc), n=n)
            continue
        with up(precision):
            term_hi = mpfr(hi) / n
        sequence.append(DyadicInterval(NEG_INF, term_hi, precision), n=n)
    return sequence


def ground_state_entropy_upper(pressure_fn: PressureFn, pot: LocallyConstantPotential, steps: int,
                               alphabet_size: int, precision: int = DEFAULT_PRECISION) -> UpperSequence:
    """
    For beta = 1..steps: an upper bound on P(beta phi) minus beta times a
    certified lower bound on the energy, computed with epsilon
    2^-(ceil(log2 beta) + steps) so the amplified energy error stays below
    2^-steps.
    """
    sequence = UpperSequence(('beta',))
    energies: Dict[Fraction, EnergyEstimate] = {}
    target = Fraction(1, 2 ** steps)
    for beta in range(1, steps + 1):
        epsilon = Fraction(1, 2 ** ((beta - 1).bit_length() + steps))
        try:
            if epsilon not in energies:
                energies[epsilon] = ground_state_energy(pressure_fn, pot, epsilon, alphabet_size, precision)
            energy = energies[epsilon]
            pressure = pressure_fn(scale(pot, beta), target)
        except ResourceLimitExceeded as exc:
            sequence.skip(str(exc), beta=beta)
            continue
        if energy.value.is_upper_only:
            sequence.skip("no certified lower bound on the energy", beta=beta)
            continue
        with up(precision):
            term_hi = mpfr(pressure.value.hi) - beta * energy.value.lo
        step = sequence.append(DyadicInterval(NEG_INF, term_hi, precision), beta=beta)
        logger.debug(f"entropy upper beta={beta}: {term_hi}, best {step.best}")
    return sequence


def perron_backend(spec: SftSpec, precision: int = DEFAULT_PRECISION,
                   budget: Optional[Budget] = None) -> PressureFn:
    return lambda pot, width: perron_pressure_1d(spec, pot, width, precision, budget)


def _k_for(width: Fraction) -> int:
    """Smallest k >= 1 with 2^-k <= width"""
    k = 1
    while Fraction(1, 2 ** k) > width:
        k += 1
    return k


def box_backend(spec: SftSpec, lang: Optional[LanguageProvider] = None, precision: int = DEFAULT_PRECISION,
                budget: Optional[Budget] = None) -> PressureFn:
    budget = resolve(budget)
    lang = lang or provider_for(spec, budget=budget)
    return lambda pot, width: certified_pressure(spec, pot, _k_for(Fraction(width)), lang, precision, budget)


def transfer_backend(precision: int = DEFAULT_PRECISION, budget: Optional[Budget] = None) -> PressureFn:
    return lambda pot, width: full_shift_pressure_2d(pot, _k_for(Fraction(width)), precision, budget)


def upper_from(pressure_fn: PressureFn, width=Fraction(1, 2 ** 10)) -> PressureUpperFn:
    """Upper ends of a two-sided backend"""
    return lambda pot: pressure_fn(pot, width).value.hi


def enumeration_upper_backend(enumeration: ForbiddenEnumeration, steps: int,
                              precision: int = DEFAULT_PRECISION,
                              budget: Optional[Budget] = None) -> PressureUpperFn:
    """The best term of a truncated upper sequence for the exact oracle of the potential"""
    def upper(pot: LocallyConstantPotential) -> mpfr:
        sequence = pressure_upper_sequence(enumeration, PotentialOracle.exact(pot), steps, precision, budget)
        return sequence.best
    return upper
