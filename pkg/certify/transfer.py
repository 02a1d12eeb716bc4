"""
Higher-block recoding, column transfer matrices for two-dimensional full
shifts, and the one-dimensional Perron-root pressure engine.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Tuple
import logging
import math

from gmpy2 import mpfr

from .budget import Budget, resolve
from .errors import DimensionMismatch, EmptySubshift, PrecisionExhausted, ResourceLimitExceeded
from .lattice import Box, add_sites, box
from .potential import LocallyConstantPotential, add_constant, ergodic_sum, sup_norm
from .pressure import CertifiedEstimate, Method, eta_for
from .rigor import (
    DEFAULT_PRECISION, DyadicInterval, IntervalMatrix, down, iv_div, iv_exp, iv_exp_sum, iv_log,
    iv_matpow, iv_row_sum_bounds, iv_sub, refine_until, to_fraction, up,
)
from .subshift import Alphabet, Pattern, SftSpec, iter_locally_admissible

logger = logging.getLogger(__name__)

HORIZONTAL = 0
VERTICAL = 1
MAX_POWER = 1 << 12


@dataclass(frozen=True)
class RecodedSystem:
    """
    Blocks are the locally admissible patterns on the window box R. Block a
    at site g stands for x restricted to g + R; blocks a, b are adjacent
    along an axis when b, moved one step along it, agrees with a on the overlap.
    """
    source: SftSpec
    window: Box
    blocks: Tuple[Tuple[int, ...], ...]
    adjacency: Tuple[FrozenSet[Tuple[int, int]], ...]
    values: Tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return self.window.dim

    @property
    def radius(self) -> int:
        return max(self.window.sides) - 1

    @property
    def block_alphabet(self) -> Alphabet:
        return Alphabet(tuple(f"b{i}" for i in range(len(self.blocks))))

    def lift(self, i: int) -> Pattern:
        return Pattern(self.window.shape(), self.blocks[i])

    def successors(self, axis: int) -> List[List[int]]:
        following: List[List[int]] = [[] for _ in self.blocks]
        for a, b in sorted(self.adjacency[axis]):
            following[a].append(b)
        return following

    def as_sft_spec(self) -> SftSpec:
        """The nearest-neighbour SFT on block symbols"""
        forbidden = []
        for axis in range(self.dim):
            step = tuple(1 if i == axis else 0 for i in range(self.dim))
            origin = (0,) * self.dim
            for a, b in product(range(len(self.blocks)), repeat=2):
                if (a, b) not in self.adjacency[axis]:
                    forbidden.append(Pattern.from_mapping({origin: a, step: b}, self.dim))
        gap = None if self.source.si_gap is None else self.source.si_gap + self.radius
        return SftSpec(self.block_alphabet, self.dim, tuple(forbidden), gap)

    def single_site_potential(self) -> LocallyConstantPotential:
        return LocallyConstantPotential.single_site(self.block_alphabet, self.dim, dict(enumerate(self.values)))


def higher_block_recode(spec: SftSpec, pot: LocallyConstantPotential,
                        budget: Optional[Budget] = None) -> RecodedSystem:
    if pot.dim != spec.dim:
        raise DimensionMismatch(f"potential of dimension {pot.dim} for a {spec.dim}-dimensional spec")
    budget = resolve(budget)
    bounds = pot.window.bounding_box()
    sides = tuple(max(a, b) for a, b in zip(bounds.sides, spec.extents()))
    window = Box(bounds.lo, tuple(lo + side - 1 for lo, side in zip(bounds.lo, sides)))
    shape = window.shape()
    blocks = []
    for symbols in iter_locally_admissible(shape, spec.forbidden, len(spec.alphabet)):
        blocks.append(symbols)
        budget.check_patterns(len(blocks), f"block alphabet on a window of {len(shape)} sites")
    if not blocks:
        raise EmptySubshift("no admissible pattern on the recoding window")
    budget.check_matrix_dim(len(blocks), "block alphabet")

    window_positions = [shape.index(w) for w in pot.window.sites]
    values = tuple(pot.value(tuple(b[p] for p in window_positions)) for b in blocks)

    adjacency = []
    for axis in range(spec.dim):
        step = tuple(1 if i == axis else 0 for i in range(spec.dim))
        overlap = [(shape.index(s), shape.index(add_sites(s, step)))
                   for s in shape.sites if add_sites(s, step) in shape]
        left_key: Dict[Tuple[int, ...], List[int]] = {}
        for j, b in enumerate(blocks):
            left_key.setdefault(tuple(b[p] for p, _ in overlap), []).append(j)
        pairs = set()
        for i, a in enumerate(blocks):
            for j in left_key.get(tuple(a[q] for _, q in overlap), ()):
                pairs.add((i, j))
        adjacency.append(frozenset(pairs))
    logger.debug(f"recoded onto {len(blocks)} blocks of window {window}")
    return RecodedSystem(spec, window, tuple(blocks), tuple(adjacency), values)


def _columns(rs: RecodedSystem, height: int, budget: Budget) -> List[Tuple[int, ...]]:
    up_next = rs.successors(VERTICAL)
    columns: List[Tuple[int, ...]] = [(i,) for i in range(len(rs.blocks))]
    for _ in range(height - 1):
        grown = []
        for column in columns:
            for b in up_next[column[-1]]:
                grown.append(column + (b,))
                if len(grown) > budget.max_matrix_dim:
                    raise ResourceLimitExceeded('matrix dimension', len(grown), budget.max_matrix_dim,
                                                f"legal columns of height {height}, still growing")
        columns = grown
    return columns


def transfer_matrix_b(m_param: int, rs: RecodedSystem, precision: int = DEFAULT_PRECISION,
                      budget: Optional[Budget] = None) -> IntervalMatrix:
    """
    Columns are vertically legal stacks of 2M+1 blocks. B[a][b] is
    exp(sum of block values in a) when every a_i, b_i pair is horizontally
    adjacent, 0 otherwise.
    """
    if rs.dim != 2:
        raise DimensionMismatch("column transfer matrices are two-dimensional")
    if m_param < 0:
        raise ValueError("M must be nonnegative")
    budget = resolve(budget)
    columns = _columns(rs, 2 * m_param + 1, budget)
    index = {c: i for i, c in enumerate(columns)}
    right = rs.successors(HORIZONTAL)
    lo_rows, hi_rows = [], []
    weights: Dict[Fraction, DyadicInterval] = {}
    for column in columns:
        exponent = sum((rs.values[a] for a in column), Fraction(0))
        if exponent not in weights:
            weights[exponent] = iv_exp(exponent, precision)
        weight = weights[exponent]
        lo_row, hi_row = {}, {}
        for successor in product(*(right[a] for a in column)):
            j = index.get(successor)
            if j is not None:
                lo_row[j], hi_row[j] = weight.lo, weight.hi
        lo_rows.append(lo_row)
        hi_rows.append(hi_row)
    logger.debug(f"B({m_param}): {len(columns)} columns, {sum(len(r) for r in lo_rows)} nonzeros")
    return IntervalMatrix(len(columns), lo_rows, hi_rows, columns, precision)


def _power_total(matrix: IntervalMatrix, power: int) -> DyadicInterval:
    """1^T B^power 1 by repeated matrix-vector products"""
    lo = [mpfr(1)] * matrix.size
    hi = [mpfr(1)] * matrix.size
    for _ in range(power):
        lo, hi = matrix.matvec(lo, hi)
    with down(matrix.precision):
        total_lo = sum(lo, mpfr(0))
    with up(matrix.precision):
        total_hi = sum(hi, mpfr(0))
    return DyadicInterval(total_lo, total_hi, matrix.precision)


def full_shift_pressure_2d(pot: LocallyConstantPotential, k: int, precision: int = DEFAULT_PRECISION,
                           budget: Optional[Budget] = None) -> CertifiedEstimate:
    """
    Pressure of a locally constant potential on the full shift over Z^2 to
    within 2^-k, from 1^T B(m)^(2m+1) 1 for growing m.
    """
    if pot.dim != 2:
        raise DimensionMismatch("the transfer method handles two-dimensional full shifts")
    if k < 1:
        raise ValueError("precision index k must be positive")
    budget = resolve(budget)
    spec = SftSpec.full_shift(pot.alphabet, 2)
    c = sup_norm(pot)
    shifted = add_constant(pot, c)
    rs = higher_block_recode(spec, shifted, budget)
    gap = rs.radius
    height_extra = rs.window.sides[VERTICAL] - 1
    size = len(pot.alphabet)
    eta = eta_for(k, size, rs.window.size, sup_norm(shifted), precision)
    big_m = max(0, math.ceil(Fraction(2 * gap) / eta) - gap)
    target = Fraction(1, 2 ** k)
    logger.info(f"transfer pressure k={k}: {len(rs.blocks)} blocks, gap {gap}, eta={eta}, M={big_m}")

    best_lo = best_hi = None
    m = 0
    for m in range(big_m + 1):
        side = 2 * m + 1
        matrix = transfer_matrix_b(m, rs, precision, budget)
        total = _power_total(matrix, side)
        correction = DyadicInterval.point(size ** (side + height_extra), precision)
        log_z = iv_log(iv_div(total, correction))
        upper = iv_div(log_z, DyadicInterval.point(side * side, precision))
        lower = iv_div(log_z, DyadicInterval.point((side + 2 * gap) ** 2, precision))
        best_lo = lower.lo if best_lo is None else max(best_lo, lower.lo)
        best_hi = upper.hi if best_hi is None else min(best_hi, upper.hi)
        with up(precision):
            width = best_hi - best_lo
        logger.debug(f"transfer m={m}: {lower.lo} <= P <= {upper.hi}")
        if to_fraction(width) <= target:
            break
    value = iv_sub(DyadicInterval(best_lo, best_hi, precision), DyadicInterval.point(c, precision))
    params = {'k': k, 'eta': str(eta), 'M': big_m, 'm': m, 'gap': gap, 'shift': str(c),
              'blocks': len(rs.blocks), 'precision': precision}
    return CertifiedEstimate(value, Method.TRANSFER_MATRIX, params, frozenset())


def transfer_sum_identity_check(rs: RecodedSystem, m_param: int, precision: int = DEFAULT_PRECISION,
                                budget: Optional[Budget] = None) -> Tuple[DyadicInterval, DyadicInterval]:
    """
    (sum of the entries of B(M)^(2M+1), the same sum by direct enumeration of
    source patterns on ([-M, M+1] x [-M, M]) + R weighted over [-M, M]^2)
    """
    budget = resolve(budget)
    matrix = transfer_matrix_b(m_param, rs, precision, budget)
    lhs = iv_matpow(matrix, 2 * m_param + 1).total()

    region = Box(add_sites((-m_param, -m_param), rs.window.lo), add_sites((m_param + 1, m_param), rs.window.hi))
    weighted = box(m_param, 2).shape()
    shape = region.shape()
    size = len(rs.source.alphabet)
    budget.check_patterns(size ** len(shape), f"identity audit on {len(shape)} sites")
    pot = _block_potential(rs)
    histogram: Counter = Counter()
    for symbols in iter_locally_admissible(shape, rs.source.forbidden, size):
        histogram[ergodic_sum(pot, Pattern(shape, symbols), weighted)] += 1
    rhs = iv_exp_sum(histogram, precision)
    return lhs, rhs


def _block_potential(rs: RecodedSystem) -> LocallyConstantPotential:
    """The block values as a potential on the source alphabet with window R"""
    table = dict(zip(rs.blocks, rs.values))
    return LocallyConstantPotential.build(rs.source.alphabet, rs.window.shape(), table)


def _perron_matrix(rs: RecodedSystem, precision: int) -> IntervalMatrix:
    right = rs.successors(HORIZONTAL)
    lo_rows, hi_rows = [], []
    for a, value in enumerate(rs.values):
        weight = iv_exp(value, precision)
        lo_rows.append({b: weight.lo for b in right[a]})
        hi_rows.append({b: weight.hi for b in right[a]})
    return IntervalMatrix(len(rs.blocks), lo_rows, hi_rows, list(range(len(rs.blocks))), precision)


def perron_pressure_1d(spec: SftSpec, pot: LocallyConstantPotential, target_width,
                       precision: int = DEFAULT_PRECISION, budget: Optional[Budget] = None) -> CertifiedEstimate:
    """
    log of the Perron root of the weighted block transition matrix, with the
    power doubled until the enclosure is narrow enough and the precision
    doubled when rounding is what stands in the way.
    """
    if spec.dim != 1 or pot.dim != 1:
        raise DimensionMismatch("the Perron engine handles one-dimensional systems")
    budget = resolve(budget)
    rs = higher_block_recode(spec, pot, budget)
    target = Fraction(target_width)
    attempts: List[Tuple[DyadicInterval, int, bool]] = []

    def compute(p: int) -> DyadicInterval:
        matrix = _perron_matrix(rs, p)
        best: Optional[DyadicInterval] = None
        power = 1
        primitive = True
        while power <= MAX_POWER:
            bounds = iv_row_sum_bounds(matrix, power)
            primitive = bounds.primitive
            if bounds.value.hi == 0:
                raise EmptySubshift("the transition matrix is nilpotent")
            if bounds.value.lo > 0:
                current = iv_log(bounds.value)
            else:
                current = DyadicInterval.upper_only(iv_log(DyadicInterval(bounds.value.hi, bounds.value.hi, p)).hi, p)
            best = current if best is None else best.intersect(current)
            if not best.is_upper_only and to_fraction(best.width) <= target:
                break
            power *= 2
        attempts.append((best, min(power, MAX_POWER), primitive))
        return best

    method = Method.PERRON_ROOT_1D
    reason = None
    try:
        value = refine_until(compute, target, precision, max_precision=4 * precision)
    except PrecisionExhausted:
        best = attempts[-1][0]
        reason = (f"width {best.width} above {target} at power {attempts[-1][1]}"
                  f"{'' if attempts[-1][2] else ', transition structure not primitive'}")
        logger.warning(f"Perron enclosure downgraded to an upper bound: {reason}")
        value = DyadicInterval.upper_only(best.hi, best.precision)
        method = Method.UPPER_ONLY
    _, power, primitive = attempts[-1]
    params = {'power': power, 'blocks': len(rs.blocks), 'primitive': primitive,
              'precision': value.precision, 'target_width': str(target)}
    if reason is not None:
        params['downgraded'] = reason
    return CertifiedEstimate(value, method, params, frozenset())
