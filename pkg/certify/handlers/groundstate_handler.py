"""
Ground State Handler
Handles zero-temperature energy and entropy runs
"""

from typing import Any, Dict, FrozenSet
import logging

from ..errors import ParseError, ResourceLimitExceeded
from ..formats import parse_enumeration, parse_rational
from ..groundstate import (
    PressureFn, box_backend, enumeration_upper_backend, ground_state_energy, ground_state_energy_upper,
    ground_state_entropy_upper, perron_backend, transfer_backend, upper_from,
)
from ..language import provider_for
from ..pressure import Method
from ..rigor import DyadicInterval, decimal_up, dyadic_form
from ..subshift import SftSpec
from ..utils import RunReport

logger = logging.getLogger(__name__)


class GroundStateHandler:
    """Handler for energy, energy_upper and entropy_upper"""

    def _assumptions(self, config, spec: SftSpec) -> FrozenSet[str]:
        if config.resolve_method(spec) == 'certified':
            return provider_for(spec, budget=config.budget()).assertions
        return frozenset()

    def _backend(self, config, spec: SftSpec) -> PressureFn:
        method = config.resolve_method(spec)
        budget = config.budget()
        if method == 'transfer' and spec.dim == 1:
            return perron_backend(spec, config.precision_bits, budget)
        if method == 'transfer':
            return transfer_backend(config.precision_bits, budget)
        return box_backend(spec, provider_for(spec, budget=budget), config.precision_bits, budget)

    def handle_energy(self, config) -> RunReport:
        """Two-sided energy enclosure of width epsilon"""
        spec = config.load_spec()
        pot = config.load_potential(spec, required=True)
        epsilon = parse_rational(config.epsilon)
        if epsilon <= 0:
            raise ParseError(f"epsilon must be positive, got {config.epsilon}")
        estimate = ground_state_energy(self._backend(config, spec), pot, epsilon, len(spec.alphabet),
                                       config.precision_bits)
        params = {'epsilon': str(epsilon), 'beta': estimate.beta_used, 'precision': config.precision_bits}
        params.update({f"pressure_{key}": value for key, value in estimate.pressure.params.items()})
        method = Method.UPPER_ONLY.value if estimate.value.is_upper_only else estimate.pressure.method.value
        return RunReport(config.command, method=method, value=estimate.value,
                         conditional_on=estimate.conditional_on, params=params)

    def handle_energy_upper(self, config) -> RunReport:
        """Running minimum of n^-1 P(n phi) from above"""
        if config.enumeration:
            enumeration = parse_enumeration(config.enumeration)
            spec = SftSpec.full_shift(enumeration.alphabet, enumeration.dim)
            upper_fn = enumeration_upper_backend(enumeration, config.inner_steps, config.precision_bits,
                                                 config.budget())
        else:
            spec = config.load_spec()
            upper_fn = upper_from(self._backend(config, spec))
        pot = config.load_potential(spec, required=True)
        sequence = ground_state_energy_upper(upper_fn, pot, config.steps, config.precision_bits)
        assumptions = frozenset() if config.enumeration else self._assumptions(config, spec)
        extra = {'inner_steps': config.inner_steps} if config.enumeration else {}
        return self._sequence_report(config, sequence, 'n', extra, assumptions)

    def handle_entropy_upper(self, config) -> RunReport:
        """Running minimum of P(beta phi) - beta E from above"""
        spec = config.load_spec()
        pot = config.load_potential(spec, required=True)
        sequence = ground_state_entropy_upper(self._backend(config, spec), pot, config.steps,
                                              len(spec.alphabet), config.precision_bits)
        return self._sequence_report(config, sequence, 'beta', {}, self._assumptions(config, spec))

    def _sequence_report(self, config, sequence, column: str, extra: Dict[str, Any],
                         assumptions: FrozenSet[str]) -> RunReport:
        if not len(sequence):
            budget = config.budget()
            raise ResourceLimitExceeded('patterns', budget.max_patterns + 1, budget.max_patterns,
                                        "no step of the sequence could be evaluated")
        report = RunReport(config.command, method=Method.UPPER_ONLY.value,
                           value=DyadicInterval.upper_only(sequence.best, config.precision_bits),
                           conditional_on=assumptions,
                           params={'steps': config.steps, 'skipped': len(sequence.gaps),
                                   'precision': config.precision_bits, **extra},
                           columns=('position', column, 'term_hi', 'best_hi', 'hi_dyadic'))
        for step in sequence.steps:
            report.add_row(position=step.position, term_hi=decimal_up(step.term.hi, 16),
                           best_hi=decimal_up(step.best, 16), hi_dyadic=dyadic_form(step.best),
                           **dict(step.meta))
        logger.info(f"{config.command}: best upper bound {sequence.best} after {len(sequence)} terms")
        return report
