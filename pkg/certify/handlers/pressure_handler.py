"""
Pressure Handler
Handles pressure, entropy, partition, upper-sequence and identity-audit runs
"""

from fractions import Fraction
from typing import Optional
import logging

from ..budget import setting
from ..errors import MethodUnavailable, ParseError, ResourceLimitExceeded
from ..formats import parse_enumeration, parse_potential
from ..language import provider_for
from ..lattice import parse_shape
from ..potential import LocallyConstantPotential, PotentialOracle, add_constant, sup_norm
from ..pressure import (
    CertifiedEstimate, Method, certified_pressure, partition_function, per_site_log, pressure_upper_sequence,
    recoding_gap, sandwich_bounds,
)
from ..rigor import DyadicInterval, decimal_down, decimal_up, dyadic_form
from ..subshift import SftSpec
from ..transfer import full_shift_pressure_2d, higher_block_recode, perron_pressure_1d, transfer_sum_identity_check
from ..utils import RunReport

logger = logging.getLogger(__name__)

SEQUENCE_COLUMNS = ('position', 'n', 'k', 't', 's', 'term_hi', 'best_hi', 'hi_dyadic')


class PressureHandler:
    """Handler for the two-sided and upper-only pressure commands"""

    def handle_pressure(self, config, potential: Optional[LocallyConstantPotential] = None) -> RunReport:
        """Certified pressure with the requested method"""
        spec = config.load_spec()
        pot = potential if potential is not None else config.load_potential(spec)
        budget = config.budget()
        method = config.resolve_method(spec)
        precision = config.precision_bits
        logger.info(f"{config.command}: method {method}, {spec.dim}D, |A|={len(spec.alphabet)}")

        if method == 'sandwich':
            estimate = self._sandwich(config, spec, pot)
        elif method == 'transfer' and spec.dim == 1:
            estimate = perron_pressure_1d(spec, pot, Fraction(1, 2 ** config.k), precision, budget)
        elif method == 'transfer':
            estimate = full_shift_pressure_2d(pot, config.k, precision, budget)
        else:
            lang = provider_for(spec, budget=budget)
            estimate = certified_pressure(spec, pot, config.k, lang, precision, budget)

        report = RunReport.from_estimate(config.command, estimate, precision=precision)
        if config.audit_identity:
            self._attach_audit(report, spec, pot, config)
        return report

    def handle_entropy(self, config) -> RunReport:
        spec = config.load_spec()
        return self.handle_pressure(config, LocallyConstantPotential.zero(spec.alphabet, spec.dim))

    def _sandwich(self, config, spec: SftSpec, pot: LocallyConstantPotential) -> CertifiedEstimate:
        """Both sandwich bounds on one box, for the potential shifted to be nonnegative"""
        budget = config.budget()
        side = config.box_side or int(setting('CERTIFY_DEFAULT_BOX_SIDE', 8))
        lang = provider_for(spec, budget=budget)
        c = sup_norm(pot)
        shifted = add_constant(pot, c)
        lower, upper = sandwich_bounds(spec, shifted, side, lang, config.precision_bits, budget)
        value = DyadicInterval(lower.lo, upper.hi, config.precision_bits) - c
        method = Method.BOX_SANDWICH if lang.exact else Method.UPPER_ONLY
        params = {'box_side': side, 'gap': recoding_gap(spec, shifted, lang), 'shift': str(c),
                  'provider': lang.kind}
        return CertifiedEstimate(value, method, params, lang.assertions)

    def _attach_audit(self, report: RunReport, spec: SftSpec, pot: LocallyConstantPotential, config) -> None:
        if spec.dim != 2 or not spec.is_full_shift:
            raise MethodUnavailable("the identity audit covers two-dimensional full shifts")
        rs = higher_block_recode(spec, pot, config.budget())
        lhs, rhs = transfer_sum_identity_check(rs, config.m, config.precision_bits, config.budget())
        report.params['identity_m'] = config.m
        report.params['identity_holds'] = str(lhs.intersects(rhs)).lower()
        if not lhs.intersects(rhs):
            report.status = 'identity_failed'

    def handle_partition(self, config) -> RunReport:
        """Z_F and its per-site logarithm on a shape literal"""
        if not config.shape:
            raise ParseError("partition needs --shape")
        spec = config.load_spec()
        pot = config.load_potential(spec)
        budget = config.budget()
        shape = parse_shape(config.shape, spec.dim)
        lang = provider_for(spec, budget=budget)
        z = partition_function(shape, spec, pot, lang, config.precision_bits, budget)
        per_site = per_site_log(z, len(shape))
        params = {
            'sites': len(shape),
            'Z_lo': decimal_down(z.lo, 16),
            'Z_hi': decimal_up(z.hi, 16),
            'Z_lo_dyadic': dyadic_form(z.lo),
            'Z_hi_dyadic': dyadic_form(z.hi),
            'provider': lang.kind,
            'precision': config.precision_bits,
        }
        method = 'PartitionFunction' if lang.exact else Method.UPPER_ONLY.value
        if not lang.exact:
            per_site = DyadicInterval.upper_only(per_site.hi, per_site.precision)
        return RunReport(config.command, method=method, value=per_site,
                         conditional_on=lang.assertions, params=params)

    def handle_pressure_upper(self, config) -> RunReport:
        """Anytime upper sequence for an X given by a forbidden list"""
        if not config.enumeration:
            raise ParseError("pressure_upper needs --enumeration")
        enumeration = parse_enumeration(config.enumeration)
        if config.potential:
            pot = parse_potential(config.potential)
            if pot.alphabet != enumeration.alphabet or pot.dim != enumeration.dim:
                raise ParseError("the potential's alphabet and dimension must match the enumeration's")
        else:
            pot = LocallyConstantPotential.zero(enumeration.alphabet, enumeration.dim)
        budget = config.budget()
        sequence = pressure_upper_sequence(enumeration, PotentialOracle.exact(pot), config.steps,
                                           config.precision_bits, budget)
        if not len(sequence):
            raise ResourceLimitExceeded('patterns', budget.max_patterns + 1, budget.max_patterns,
                                        "every step of the upper sequence exceeded the budget")
        report = RunReport(config.command, method=Method.UPPER_ONLY.value,
                           value=DyadicInterval.upper_only(sequence.best, config.precision_bits),
                           params={'steps': config.steps, 'skipped': len(sequence.gaps),
                                   'precision': config.precision_bits},
                           columns=SEQUENCE_COLUMNS)
        for step in sequence.steps:
            report.add_row(position=step.position, term_hi=decimal_up(step.term.hi, 16),
                           best_hi=decimal_up(step.best, 16), hi_dyadic=dyadic_form(step.best),
                           **dict(step.meta))
        return report

    def handle_audit_identity(self, config) -> RunReport:
        """Matrix-power sums against direct enumeration for M = 0..m"""
        spec = config.load_spec()
        if spec.dim != 2 or not spec.is_full_shift:
            raise MethodUnavailable("the identity audit covers two-dimensional full shifts")
        pot = config.load_potential(spec)
        budget = config.budget()
        rs = higher_block_recode(spec, pot, budget)
        report = RunReport(config.command, method='TransferIdentity',
                           params={'blocks': len(rs.blocks), 'precision': config.precision_bits},
                           columns=('M', 'matrix_lo', 'matrix_hi', 'direct_lo', 'direct_hi', 'intersects'))
        for m in range(config.m + 1):
            lhs, rhs = transfer_sum_identity_check(rs, m, config.precision_bits, budget)
            holds = lhs.intersects(rhs)
            report.add_row(M=m, matrix_lo=decimal_down(lhs.lo, 16), matrix_hi=decimal_up(lhs.hi, 16),
                           direct_lo=decimal_down(rhs.lo, 16), direct_hi=decimal_up(rhs.hi, 16),
                           intersects=str(holds).lower())
            if not holds:
                logger.error(f"transfer identity fails at M={m}: {lhs} vs {rhs}")
                report.status = 'identity_failed'
        return report
