from django.test import SimpleTestCase
from fractions import Fraction
import math
import random

import gmpy2
from gmpy2 import mpfr

from certify.errors import IntervalDomainError, PrecisionExhausted
from certify.rigor import (
    DyadicInterval, IntervalMatrix, decimal_down, decimal_up, down, dyadic_form, iv_add, iv_div, iv_exp, iv_log,
    iv_matpow, iv_mul, iv_root, iv_row_sum_bounds, parse_dyadic, refine_until, to_fraction, up,
)

THIRD = Fraction(1, 3)


class DyadicIntervalTests(SimpleTestCase):
    def test_point_encloses_rational(self):
        """Test a rational that is not dyadic is bracketed tightly"""
        iv = DyadicInterval.point(THIRD, 64)
        self.assertTrue(iv.contains(THIRD))
        self.assertLess(iv.lo, iv.hi)
        self.assertLessEqual(to_fraction(iv.width), Fraction(1, 2 ** 60))

    def test_dyadic_point_is_exact(self):
        """Test dyadic rationals have zero width"""
        iv = DyadicInterval.point(Fraction(3, 8))
        self.assertEqual(iv.lo, iv.hi)

    def test_arithmetic_encloses(self):
        """Test sums, differences and products of enclosures"""
        third = DyadicInterval.point(THIRD, 53)
        total = third + third + third
        self.assertTrue(total.contains(1))
        self.assertTrue((total - 1).contains(0))
        self.assertTrue((third * 3).contains(1))
        self.assertTrue((-third).contains(-THIRD))

    def test_invalid_intervals(self):
        """Test reversed ends and undefined operations"""
        with self.assertRaises(IntervalDomainError):
            DyadicInterval(mpfr(1), mpfr(0))
        around_zero = DyadicInterval.from_bounds(-1, 1)
        with self.assertRaises(IntervalDomainError):
            iv_div(DyadicInterval.point(1), around_zero)
        with self.assertRaises(IntervalDomainError):
            iv_log(around_zero)
        with self.assertRaises(IntervalDomainError):
            iv_root(around_zero, 2)

    def test_upper_only(self):
        """Test upper-only intervals keep -inf below"""
        iv = DyadicInterval.upper_only(Fraction(1, 2))
        self.assertTrue(iv.is_upper_only)
        self.assertTrue(iv.contains(-10 ** 9))
        self.assertFalse(DyadicInterval.point(1).is_upper_only)

    def test_intersect(self):
        """Test overlapping and disjoint enclosures"""
        a = DyadicInterval.from_bounds(0, 2)
        b = DyadicInterval.from_bounds(1, 3)
        self.assertEqual(a.intersect(b), DyadicInterval.from_bounds(1, 2))
        with self.assertRaises(IntervalDomainError):
            a.intersect(DyadicInterval.from_bounds(5, 6))


class TranscendentalTests(SimpleTestCase):
    def test_exp_log(self):
        """Test exp and log enclose known values"""
        self.assertEqual(iv_exp(0).lo, 1)
        self.assertEqual(iv_exp(0).hi, 1)
        e = iv_exp(1)
        self.assertTrue(e.lo < mpfr('2.718281828459046') and e.hi > mpfr('2.718281828459045'))
        self.assertTrue(iv_log(e).contains(1))
        self.assertTrue(iv_log(DyadicInterval.point(1)).contains(0))

    def test_root(self):
        """Test square roots of perfect squares"""
        self.assertTrue(iv_root(DyadicInterval.point(9), 2).contains(3))


class FormattingTests(SimpleTestCase):
    def test_decimal_rounding(self):
        """Test decimal ends are rounded outward"""
        iv = DyadicInterval.point(THIRD)
        self.assertEqual(decimal_down(iv.lo, 4), '0.3333')
        self.assertEqual(decimal_up(iv.hi, 4), '0.3334')
        self.assertEqual(decimal_down(mpfr(-1.5), 1), '-1.5')
        self.assertEqual(decimal_up(mpfr('-inf'), 4), '-inf')

    def test_dyadic_form(self):
        """Test the exact m*2^e spelling and its inverse"""
        self.assertRegex(dyadic_form(mpfr(0.75)), r'^\d+\*2\^-\d+$')
        self.assertEqual(parse_dyadic(dyadic_form(mpfr(0.75))), mpfr(0.75))
        self.assertEqual(dyadic_form(mpfr('-inf')), '-inf')
        value = DyadicInterval.point(THIRD).hi
        self.assertEqual(parse_dyadic(dyadic_form(value)), value)


class IntervalMatrixTests(SimpleTestCase):
    def test_fibonacci_powers(self):
        """Test integer matrix powers are exact"""
        m = IntervalMatrix.from_rows([[1, 1], [1, 0]])
        p = iv_matpow(m, 5)
        self.assertEqual(p.entry(0, 0).lo, 8)
        self.assertEqual(p.entry(1, 1).hi, 3)
        self.assertEqual(p.total().lo, 21)

    def test_row_sum_bounds_bracket_golden_ratio(self):
        """Test the spectral radius enclosure of the Fibonacci matrix"""
        m = IntervalMatrix.from_rows([[1, 1], [1, 0]])
        bounds = iv_row_sum_bounds(m, 16)
        self.assertTrue(bounds.primitive)
        self.assertTrue(bounds.value.lo <= mpfr('1.6180339887498950'))
        self.assertTrue(bounds.value.hi >= mpfr('1.6180339887498948'))
        self.assertLess(to_fraction(bounds.value.width), Fraction(1, 10 ** 6))

    def test_nilpotent(self):
        """Test a vanishing power only gives the trivial upper bound"""
        m = IntervalMatrix.from_rows([[0, 1], [0, 0]])
        bounds = iv_row_sum_bounds(m, 2)
        self.assertTrue(bounds.upper_only)

    def test_refine_until(self):
        """Test precision doubling stops at the limit"""
        with self.assertRaises(PrecisionExhausted):
            refine_until(lambda p: DyadicInterval.from_bounds(0, 1, p), Fraction(1, 2), 64, max_precision=256)
        seen = []

        def compute(p):
            seen.append(p)
            return DyadicInterval.point(THIRD, p)

        refine_until(compute, Fraction(1, 2 ** 100), 64)
        self.assertEqual(seen, [64, 128])


REFERENCE_BITS = 600
SAMPLES_PER_OPERATION = 2000


class RandomizedSoundnessTests(SimpleTestCase):
    """Interval operations against exact rationals and 600-bit directed-rounding references"""

    def setUp(self):
        self.rng = random.Random(1729)

    def rational(self, bound=10 ** 6):
        return Fraction(self.rng.randint(-bound, bound), self.rng.randint(1, bound))

    def interval(self, positive=False):
        ends = (self.rational(), self.rational())
        if positive:
            ends = tuple(abs(e) + Fraction(1, 10 ** 6) for e in ends)
        return DyadicInterval.from_bounds(min(ends), max(ends), self.rng.choice((24, 53, 113)))

    def samples(self, a, b):
        return (a, b, a + (b - a) * Fraction(self.rng.randint(0, 1000), 1000))

    def check_binary(self, operation, exact, positive_right=False):
        for _ in range(SAMPLES_PER_OPERATION):
            a = self.interval()
            b = self.interval(positive=positive_right)
            if positive_right and self.rng.random() < 0.5:
                b = -b
            result = operation(a, b)
            for u in self.samples(to_fraction(a.lo), to_fraction(a.hi)):
                for v in self.samples(to_fraction(b.lo), to_fraction(b.hi)):
                    self.assertTrue(result.contains(exact(u, v)), f"{a} op {b} = {result} misses {exact(u, v)}")

    def test_add(self):
        """Test sums enclose every sampled exact sum"""
        self.check_binary(iv_add, lambda u, v: u + v)

    def test_mul(self):
        """Test products enclose every sampled exact product, signs mixed"""
        self.check_binary(iv_mul, lambda u, v: u * v)

    def test_div(self):
        """Test quotients by intervals away from zero"""
        self.check_binary(iv_div, lambda u, v: u / v, positive_right=True)

    def test_exp(self):
        """Test exp ends sit outside the 600-bit directed roundings of the true values"""
        for _ in range(SAMPLES_PER_OPERATION):
            lo = Fraction(self.rng.randint(-200000, 200000), 1000)
            p = self.rng.choice((24, 53, 113))
            x = DyadicInterval.from_bounds(lo, lo + Fraction(self.rng.randint(0, 1000), 1000), p)
            result = iv_exp(x, p)
            with down(REFERENCE_BITS):
                below = gmpy2.exp(x.lo)
            with up(REFERENCE_BITS):
                above = gmpy2.exp(x.hi)
            self.assertLessEqual(result.lo, below, f"exp {x}")
            self.assertGreaterEqual(result.hi, above, f"exp {x}")

    def test_log(self):
        """Test log ends sit outside the 600-bit directed roundings of the true values"""
        for _ in range(SAMPLES_PER_OPERATION):
            x = self.interval(positive=True)
            result = iv_log(x)
            with down(REFERENCE_BITS):
                below = gmpy2.log(x.lo)
            with up(REFERENCE_BITS):
                above = gmpy2.log(x.hi)
            self.assertLessEqual(result.lo, below, f"log {x}")
            self.assertGreaterEqual(result.hi, above, f"log {x}")


class PrecisionScalingTests(SimpleTestCase):
    def bits(self, interval):
        return -math.log2(float(to_fraction(interval.width)))

    def test_doubling_precision_squares_the_width(self):
        """Test doubling the working precision roughly doubles the bits of accuracy"""
        for p in (32, 64, 128):
            computations = (
                lambda q: iv_exp(THIRD, q),
                lambda q: iv_log(DyadicInterval.point(Fraction(10, 3), q)),
                lambda q: DyadicInterval.point(THIRD, q) * 7,
            )
            for compute in computations:
                coarse, fine = compute(p), compute(2 * p)
                self.assertTrue(coarse.intersects(fine))
                self.assertLess(fine.width, coarse.width)
                self.assertGreaterEqual(self.bits(fine), 2 * self.bits(coarse) - 8, f"p={p}: {coarse} vs {fine}")
