"""
Directed-rounded dyadic interval arithmetic on top of MPFR (gmpy2).

Lower endpoints are always computed under RoundDown and upper endpoints
under RoundUp, so every result encloses the exact real result.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import logging
import math

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import DimensionMismatch, IntervalDomainError, PrecisionExhausted

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 128
GUARD_BITS = 16
MAX_PRECISION = 8192

Rational = Union[int, Fraction]


def _ctx(precision: int, rounding):
    return gmpy2.context(
        precision=precision,
        round=rounding,
        emin=gmpy2.get_emin_min(),
        emax=gmpy2.get_emax_max(),
        subnormalize=False,
        trap_underflow=False,
        trap_overflow=False,
        trap_inexact=False,
        trap_invalid=False,
        trap_erange=False,
        trap_divzero=False,
    )


def down(precision: int):
    """Context for lower endpoints"""
    return _ctx(precision, gmpy2.RoundDown)


def up(precision: int):
    """Context for upper endpoints"""
    return _ctx(precision, gmpy2.RoundUp)


def _as_mpq(value) -> mpq:
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def to_fraction(value) -> Fraction:
    """Exact rational value of a finite mpfr"""
    if not gmpy2.is_finite(value):
        raise IntervalDomainError(f"{value} has no rational value")
    num, den = value.as_integer_ratio()
    return Fraction(int(num), int(den))


def round_down(value, precision: int) -> mpfr:
    exact = _as_mpq(value)
    with down(precision):
        result = mpfr(exact)
        if result > exact:
            result = gmpy2.next_below(result)
    return result


def round_up(value, precision: int) -> mpfr:
    exact = _as_mpq(value)
    with up(precision):
        result = mpfr(exact)
        if result < exact:
            result = gmpy2.next_above(result)
    return result


NEG_INF = mpfr('-inf')
MPFR = type(NEG_INF)


@dataclass(frozen=True)
class DyadicInterval:
    """[lo, hi] with binary floating endpoints of the given precision"""
    lo: mpfr
    hi: mpfr
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if gmpy2.is_nan(self.lo) or gmpy2.is_nan(self.hi):
            raise IntervalDomainError("interval endpoint is NaN")
        if self.lo > self.hi:
            raise IntervalDomainError(f"interval lower end {self.lo} above upper end {self.hi}")

    @classmethod
    def point(cls, value: Union[Rational, mpfr], precision: int = DEFAULT_PRECISION) -> 'DyadicInterval':
        if isinstance(value, DyadicInterval):
            return value
        if isinstance(value, float):
            value = Fraction(value)
        if isinstance(value, MPFR) and gmpy2.is_infinite(value):
            return cls(value, value, precision)
        return cls(round_down(value, precision), round_up(value, precision), precision)

    @classmethod
    def from_bounds(cls, lo: Rational, hi: Rational, precision: int = DEFAULT_PRECISION) -> 'DyadicInterval':
        return cls(round_down(lo, precision), round_up(hi, precision), precision)

    @classmethod
    def upper_only(cls, hi, precision: int = DEFAULT_PRECISION) -> 'DyadicInterval':
        if not isinstance(hi, MPFR):
            hi = round_up(hi, precision)
        return cls(NEG_INF, hi, precision)

    @property
    def is_upper_only(self) -> bool:
        return gmpy2.is_infinite(self.lo) and self.lo < 0

    @property
    def width(self) -> mpfr:
        with up(self.precision):
            return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return float((to_fraction(self.lo) + to_fraction(self.hi)) / 2)

    def contains(self, value) -> bool:
        if isinstance(value, DyadicInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        if isinstance(value, (int, Fraction, float)):
            value = _as_mpq(Fraction(value))
        return self.lo <= value <= self.hi

    def intersects(self, other: 'DyadicInterval') -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: 'DyadicInterval') -> 'DyadicInterval':
        if not self.intersects(other):
            raise IntervalDomainError(f"disjoint enclosures {self} and {other}")
        return DyadicInterval(max(self.lo, other.lo), min(self.hi, other.hi),
                              max(self.precision, other.precision))

    def __add__(self, other) -> 'DyadicInterval':
        return iv_add(self, _coerce(other, self.precision))

    __radd__ = __add__

    def __sub__(self, other) -> 'DyadicInterval':
        return iv_sub(self, _coerce(other, self.precision))

    def __rsub__(self, other) -> 'DyadicInterval':
        return iv_sub(_coerce(other, self.precision), self)

    def __neg__(self) -> 'DyadicInterval':
        return DyadicInterval(-self.hi, -self.lo, self.precision)

    def __mul__(self, other) -> 'DyadicInterval':
        return iv_mul(self, _coerce(other, self.precision))

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'DyadicInterval':
        return iv_div(self, _coerce(other, self.precision))

    def to_decimal(self, digits: int = 16) -> str:
        return f"{decimal_down(self.lo, digits)} ≤ x ≤ {decimal_up(self.hi, digits)}"

    def dyadic(self) -> str:
        return f"{dyadic_form(self.lo)} ≤ x ≤ {dyadic_form(self.hi)}"

    def __str__(self) -> str:
        return self.to_decimal()


def _coerce(value, precision: int) -> DyadicInterval:
    if isinstance(value, DyadicInterval):
        return value
    return DyadicInterval.point(value, precision)


def _precision(*intervals: DyadicInterval, precision: Optional[int] = None) -> int:
    return precision or max(iv.precision for iv in intervals)


def decimal_down(value, digits: int) -> str:
    if gmpy2.is_infinite(value):
        return '-inf' if value < 0 else 'inf'
    return _fixed(math.floor(to_fraction(value) * 10 ** digits), digits)


def decimal_up(value, digits: int) -> str:
    if gmpy2.is_infinite(value):
        return '-inf' if value < 0 else 'inf'
    return _fixed(math.ceil(to_fraction(value) * 10 ** digits), digits)


def _fixed(scaled: int, digits: int) -> str:
    sign = '-' if scaled < 0 else ''
    whole, frac = divmod(abs(scaled), 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def dyadic_form(value) -> str:
    """Exact `m*2^e` spelling of an endpoint"""
    if gmpy2.is_infinite(value):
        return '-inf' if value < 0 else 'inf'
    mantissa, exponent = value.as_mantissa_exp()
    return f"{int(mantissa)}*2^{int(exponent)}"


def parse_dyadic(text: str) -> mpfr:
    """Inverse of dyadic_form"""
    text = text.strip()
    if text in ('-inf', 'inf'):
        return mpfr(text)
    mantissa, exponent = text.split('*2^')
    mantissa, exponent = int(mantissa), int(exponent)
    bits = max(abs(mantissa).bit_length(), 2)
    with down(bits):
        return gmpy2.mul_2exp(mpfr(mantissa), exponent)


def iv_add(a: DyadicInterval, b: DyadicInterval, precision: Optional[int] = None) -> DyadicInterval:
    p = _precision(a, b, precision=precision)
    with down(p):
        lo = a.lo + b.lo
    with up(p):
        hi = a.hi + b.hi
    return DyadicInterval(lo, hi, p)


def iv_sub(a: DyadicInterval, b: DyadicInterval, precision: Optional[int] = None) -> DyadicInterval:
    p = _precision(a, b, precision=precision)
    with down(p):
        lo = a.lo - b.hi
    with up(p):
        hi = a.hi - b.lo
    return DyadicInterval(lo, hi, p)


def iv_sum(terms: Iterable[DyadicInterval], precision: int = DEFAULT_PRECISION) -> DyadicInterval:
    terms = list(terms)
    with down(precision):
        lo = mpfr(0)
        for term in terms:
            lo = lo + term.lo
    with up(precision):
        hi = mpfr(0)
        for term in terms:
            hi = hi + term.hi
    return DyadicInterval(lo, hi, precision)


def iv_mul(a: DyadicInterval, b: DyadicInterval, precision: Optional[int] = None) -> DyadicInterval:
    p = _precision(a, b, precision=precision)
    if a.lo >= 0 and b.lo >= 0:
        with down(p):
            lo = a.lo * b.lo
        with up(p):
            hi = a.hi * b.hi
        return DyadicInterval(lo, hi, p)
    pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)]
    with down(p):
        lows = [x * y for x, y in pairs]
    with up(p):
        highs = [x * y for x, y in pairs]
    if any(gmpy2.is_nan(v) for v in lows + highs):
        raise IntervalDomainError(f"product of {a} and {b} is undefined")
    return DyadicInterval(min(lows), max(highs), p)


def iv_div(a: DyadicInterval, b: DyadicInterval, precision: Optional[int] = None) -> DyadicInterval:
    if b.lo <= 0 <= b.hi:
        raise IntervalDomainError(f"division by an interval containing 0: {b}")
    p = _precision(a, b, precision=precision)
    pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)]
    with down(p):
        lows = [x / y for x, y in pairs]
    with up(p):
        highs = [x / y for x, y in pairs]
    if any(gmpy2.is_nan(v) for v in lows + highs):
        raise IntervalDomainError(f"quotient of {a} and {b} is undefined")
    return DyadicInterval(min(lows), max(highs), p)


def iv_exp(x: Union[Rational, DyadicInterval], precision: int = DEFAULT_PRECISION) -> DyadicInterval:
    """Enclosure of e^x; rational arguments are first enclosed with guard bits"""
    if not isinstance(x, DyadicInterval):
        x = DyadicInterval.point(x, precision + GUARD_BITS)
    with down(precision):
        lo = gmpy2.exp(x.lo)
    with up(precision):
        hi = gmpy2.exp(x.hi)
    if not gmpy2.is_finite(hi):
        raise PrecisionExhausted(f"exp overflowed the exponent range at {x.hi}")
    return DyadicInterval(lo, hi, precision)


def iv_exp_sum(histogram: Mapping[Rational, int], precision: int = DEFAULT_PRECISION) -> DyadicInterval:
    """Enclosure of the sum of count * e^exponent over an exact exponent histogram"""
    terms = [iv_mul(DyadicInterval.point(count, precision), iv_exp(exponent, precision))
             for exponent, count in sorted(histogram.items()) if count]
    return iv_sum(terms, precision)


def iv_log(x: DyadicInterval, precision: Optional[int] = None) -> DyadicInterval:
    if x.lo <= 0:
        raise IntervalDomainError(f"log of an interval with nonpositive lower end {x.lo}")
    p = precision or x.precision
    with down(p):
        lo = gmpy2.log(x.lo)
    with up(p):
        hi = gmpy2.log(x.hi)
    return DyadicInterval(lo, hi, p)


def iv_root(x: DyadicInterval, k: int, precision: Optional[int] = None) -> DyadicInterval:
    """k-th root of a nonnegative interval"""
    if x.lo < 0:
        raise IntervalDomainError(f"root of an interval with negative lower end {x.lo}")
    p = precision or x.precision
    with down(p):
        lo = gmpy2.rootn(x.lo, k)
    with up(p):
        hi = gmpy2.rootn(x.hi, k)
    return DyadicInterval(lo, hi, p)


def iv_ceil(x: DyadicInterval) -> int:
    """An integer n >= every point of x, tight when x does not straddle an integer"""
    return int(math.ceil(to_fraction(x.hi)))


def refine_until(compute: Callable[[int], DyadicInterval], target_width, precision: int = DEFAULT_PRECISION,
                 max_precision: int = MAX_PRECISION) -> DyadicInterval:
    """Re-run `compute` with doubled precision until its width meets the target"""
    target = _as_mpq(Fraction(target_width))
    p = precision
    while True:
        result = compute(p)
        if result.width <= target:
            return result
        if p >= max_precision:
            raise PrecisionExhausted(f"width {result.width} still above {target_width} at {p} bits")
        logger.debug(f"width {result.width} above target at {p} bits, retrying at {2 * p}")
        p *= 2


class IntervalMatrix:
    """
    Square matrix of intervals stored as sparse rows.

    lo_rows[i] and hi_rows[i] share their keys; a missing key is an exact zero.
    """

    def __init__(self, size: int, lo_rows: List[Dict[int, mpfr]], hi_rows: List[Dict[int, mpfr]],
                 labels: Optional[Sequence] = None, precision: int = DEFAULT_PRECISION):
        if size <= 0:
            raise DimensionMismatch("interval matrices must have positive dimension")
        if len(lo_rows) != size or len(hi_rows) != size:
            raise DimensionMismatch(f"expected {size} rows")
        self.size = size
        self.lo_rows = lo_rows
        self.hi_rows = hi_rows
        self.labels = list(labels) if labels is not None else list(range(size))
        self.precision = precision

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], labels: Optional[Sequence] = None,
                  precision: int = DEFAULT_PRECISION) -> 'IntervalMatrix':
        size = len(rows)
        lo_rows: List[Dict[int, mpfr]] = []
        hi_rows: List[Dict[int, mpfr]] = []
        for row in rows:
            if len(row) != size:
                raise DimensionMismatch("interval matrices must be square")
            lo_row, hi_row = {}, {}
            for j, value in enumerate(row):
                entry = _coerce(value, precision)
                if entry.lo == 0 and entry.hi == 0:
                    continue
                lo_row[j], hi_row[j] = entry.lo, entry.hi
            lo_rows.append(lo_row)
            hi_rows.append(hi_row)
        return cls(size, lo_rows, hi_rows, labels, precision)

    @classmethod
    def identity(cls, size: int, precision: int = DEFAULT_PRECISION) -> 'IntervalMatrix':
        one = mpfr(1)
        return cls(size, [{i: one} for i in range(size)], [{i: one} for i in range(size)],
                   precision=precision)

    def entry(self, i: int, j: int) -> DyadicInterval:
        if j not in self.lo_rows[i]:
            return DyadicInterval(mpfr(0), mpfr(0), self.precision)
        return DyadicInterval(self.lo_rows[i][j], self.hi_rows[i][j], self.precision)

    def dense(self) -> List[List[DyadicInterval]]:
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]

    @property
    def nonzeros(self) -> int:
        return sum(len(row) for row in self.lo_rows)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for row in self.lo_rows for v in row.values())

    def matvec(self, lo_vec: Sequence[mpfr], hi_vec: Sequence[mpfr]) -> Tuple[List[mpfr], List[mpfr]]:
        """m x for a nonnegative matrix and a nonnegative interval vector"""
        if len(lo_vec) != self.size:
            raise DimensionMismatch(f"vector of length {len(lo_vec)} for a {self.size}-square matrix")
        with down(self.precision):
            lo = [_row_dot(row, lo_vec) for row in self.lo_rows]
        with up(self.precision):
            hi = [_row_dot(row, hi_vec) for row in self.hi_rows]
        return lo, hi

    def row_sums(self) -> List[DyadicInterval]:
        ones = [mpfr(1)] * self.size
        lo, hi = self.matvec(ones, ones) if self.is_nonnegative() else self._signed_row_sums()
        return [DyadicInterval(a, b, self.precision) for a, b in zip(lo, hi)]

    def _signed_row_sums(self) -> Tuple[List[mpfr], List[mpfr]]:
        with down(self.precision):
            lo = [sum(row.values(), mpfr(0)) for row in self.lo_rows]
        with up(self.precision):
            hi = [sum(row.values(), mpfr(0)) for row in self.hi_rows]
        return lo, hi

    def total(self) -> DyadicInterval:
        return iv_sum(self.row_sums(), self.precision)

    def __matmul__(self, other: 'IntervalMatrix') -> 'IntervalMatrix':
        return iv_matmul(self, other)


def _row_dot(row: Dict[int, mpfr], vec: Sequence[mpfr]) -> mpfr:
    acc = mpfr(0)
    for j, value in row.items():
        acc = acc + value * vec[j]
    return acc


def iv_matmul(a: IntervalMatrix, b: IntervalMatrix) -> IntervalMatrix:
    if a.size != b.size:
        raise DimensionMismatch(f"cannot multiply {a.size}-square by {b.size}-square")
    p = max(a.precision, b.precision)
    if a.is_nonnegative() and b.is_nonnegative():
        with down(p):
            lo_rows = [_sparse_row_product(row, b.lo_rows) for row in a.lo_rows]
        with up(p):
            hi_rows = [_sparse_row_product(row, b.hi_rows) for row in a.hi_rows]
        for lo_row, hi_row in zip(lo_rows, hi_rows):
            for j in hi_row:
                lo_row.setdefault(j, mpfr(0))
        return IntervalMatrix(a.size, lo_rows, hi_rows, a.labels, p)
    rows = []
    for i in range(a.size):
        row = []
        for j in range(b.size):
            terms = [iv_mul(a.entry(i, k), b.entry(k, j), p) for k in a.lo_rows[i] if j in b.lo_rows[k]]
            row.append(iv_sum(terms, p))
        rows.append(row)
    return IntervalMatrix.from_rows(rows, a.labels, p)


def _sparse_row_product(row: Dict[int, mpfr], other_rows: List[Dict[int, mpfr]]) -> Dict[int, mpfr]:
    acc: Dict[int, mpfr] = {}
    for k, value in row.items():
        for j, other in other_rows[k].items():
            acc[j] = acc.get(j, mpfr(0)) + value * other
    return acc


def iv_matpow(m: IntervalMatrix, exponent: int) -> IntervalMatrix:
    """Binary exponentiation"""
    if exponent < 0:
        raise ValueError("matrix powers must be nonnegative")
    result = IntervalMatrix.identity(m.size, m.precision)
    base = m
    while exponent:
        if exponent & 1:
            result = iv_matmul(result, base)
        exponent >>= 1
        if exponent:
            base = iv_matmul(base, base)
    result.labels = list(m.labels)
    return result


@dataclass(frozen=True)
class SpectralBounds:
    """Enclosure of a spectral radius with the diagnostics that produced it"""
    value: DyadicInterval
    power: int
    primitive: bool
    upper_only: bool


def iv_row_sum_bounds(m: IntervalMatrix, k: int) -> SpectralBounds:
    """
    Enclose the spectral radius of a nonnegative matrix from m^k.

    The k-th roots of the extreme row sums of m^k bracket the radius; with
    x = m^k 1 the ratios (m x)_i / x_i bracket it too (the minimum over the
    support of x, the maximum only when x is positive). Both brackets are
    intersected.
    """
    if k < 1:
        raise ValueError("power must be positive")
    if not m.is_nonnegative():
        raise IntervalDomainError("row-sum bounds need a nonnegative matrix")
    p = m.precision
    sums = iv_matpow(m, k).row_sums()
    primitive = all(s.hi > 0 for s in sums)
    support = [i for i, s in enumerate(sums) if s.lo > 0]
    if not support:
        logger.warning(f"m^{k} vanishes; only the trivial upper bound is certified")
        return SpectralBounds(DyadicInterval.upper_only(0, p), k, False, True)
    if not primitive:
        logger.info(f"m^{k} has a zero row; the transition structure is not primitive")

    with down(p):
        root_lo = gmpy2.rootn(min(s.lo for s in sums), k)
    with up(p):
        root_hi = gmpy2.rootn(max(s.hi for s in sums), k)

    x_lo = [s.lo for s in sums]
    x_hi = [s.hi for s in sums]
    y_lo, y_hi = m.matvec(x_lo, x_hi)
    with down(p):
        ratio_lo = min(y_lo[i] / x_hi[i] for i in support)
    lo = max(root_lo, ratio_lo)
    hi = root_hi
    if len(support) == m.size:
        with up(p):
            ratio_hi = max(y_hi[i] / x_lo[i] for i in range(m.size))
        hi = min(hi, ratio_hi)
    return SpectralBounds(DyadicInterval(lo, hi, p), k, primitive, False)
