"""
Independent reference computations for the test suite. None of these go
through the strip contraction or the decision procedure.
"""

from collections import Counter
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product
from typing import Dict, Iterator, Sequence, Set, Tuple
import math

import numpy as np

from certify.lattice import Shape
from certify.rigor import to_fraction
from certify.subshift import Alphabet, Pattern, SftSpec

BINARY = Alphabet.of('01')

# Known values in nats, as decimal brackets
GOLDEN_MEAN_NATS = ('0.4812118250596034', '0.4812118250596035')
HARD_SQUARES_NATS = ('0.4074951012', '0.4074951013')
LOG_ONE_PLUS_E = ('1.31326168751822', '1.31326168751823')
LOG_2_NATS = ('0.6931471805599453', '0.6931471805599454')


def golden_mean() -> SftSpec:
    return SftSpec(BINARY, 1, (Pattern.word(BINARY, '11'),), 1)


def hard_squares() -> SftSpec:
    forbidden = (
        Pattern.from_mapping({(0, 0): 1, (1, 0): 1}),
        Pattern.from_mapping({(0, 0): 1, (0, 1): 1}),
    )
    return SftSpec(BINARY, 2, forbidden, 1)


def three_coloring() -> SftSpec:
    colors = Alphabet.of('012')
    forbidden = tuple(Pattern.word(colors, c + c) for c in '012')
    return SftSpec(colors, 1, forbidden, 1)


def dead_end() -> SftSpec:
    """b may never be followed by anything, so b never occurs in a configuration"""
    abc = Alphabet.of('abc')
    return SftSpec(abc, 1, tuple(Pattern.word(abc, 'b' + s) for s in 'abc'), 1)


def admissible_assignments(shape: Shape, forbidden: Sequence[Pattern], size: int) -> Iterator[Dict]:
    """Every size^|shape| assignment checked against every placement"""
    for symbols in product(range(size), repeat=len(shape)):
        assignment = dict(zip(shape.sites, symbols))
        if not any(_occurs(w, assignment, site) for w in forbidden for site in shape.sites):
            yield assignment


def brute_force_count(shape: Shape, spec: SftSpec) -> int:
    return sum(1 for _ in admissible_assignments(shape, spec.forbidden, len(spec.alphabet)))


def brute_force_extensions(f: Shape, thick: Shape, forbidden: Sequence[Pattern], size: int) -> Set[Tuple[int, ...]]:
    """Restrictions to f of the locally admissible assignments on thick"""
    return {tuple(a[s] for s in f.sites) for a in admissible_assignments(thick, forbidden, size)}


def brute_force_histogram(f: Shape, spec: SftSpec, pot) -> Counter:
    """
    Exponent histogram of Z_f(pot) over locally admissible patterns: the
    best sum over f of window values among the extensions of each restriction.
    """
    thick = Shape.of((tuple(a + b for a, b in zip(g, w)) for g in f.sites for w in pot.window.sites), f.dim)
    best = {}
    for a in admissible_assignments(thick, spec.forbidden, len(spec.alphabet)):
        total = sum(pot.value(tuple(a[tuple(x + y for x, y in zip(g, w))] for w in pot.window.sites))
                    for g in f.sites)
        key = tuple(a[s] for s in f.sites)
        if key not in best or total > best[key]:
            best[key] = total
    return Counter(best.values())


def random_sft(rng, dim: int, alphabet: Alphabet = BINARY, si_gap=None) -> SftSpec:
    """One to three forbidden patterns, each on two or three sites of a small box"""
    corner = [(i,) for i in range(3)] if dim == 1 else [(i, j) for i in range(2) for j in range(2)]
    forbidden = []
    for _ in range(rng.randint(1, 3)):
        sites = rng.sample(corner, rng.randint(2, 3))
        forbidden.append(Pattern.from_mapping({s: rng.randrange(len(alphabet)) for s in sites}, dim))
    return SftSpec(alphabet, dim, tuple(forbidden), si_gap)


def random_shape(rng, dim: int, size: int) -> Shape:
    region = [(i,) for i in range(6)] if dim == 1 else [(i, j) for i in range(3) for j in range(3)]
    return Shape.of(rng.sample(region, size), dim)


def _occurs(w: Pattern, assignment, site) -> bool:
    anchor = w.domain.sites[0]
    for s, symbol in zip(w.domain.sites, w.symbols):
        target = tuple(a + b - c for a, b, c in zip(s, site, anchor))
        if assignment.get(target) != symbol:
            return False
    return True


def golden_word_count(n: int) -> int:
    """Binary words of length n without 11: the Fibonacci number F(n+2)"""
    a, b = 1, 2
    for _ in range(n):
        a, b = b, a + b
    return a


def golden_ratio_bracket(n: int) -> Tuple[Fraction, Fraction]:
    """Consecutive count ratios, which fall on either side of the golden ratio"""
    r1 = Fraction(golden_word_count(n + 1), golden_word_count(n))
    r2 = Fraction(golden_word_count(n + 2), golden_word_count(n + 1))
    return min(r1, r2), max(r1, r2)


def hard_squares_strip_estimate(width: int) -> float:
    """log(lambda_{w+1} / lambda_w) from dense row transfer matrices"""
    def top_eigenvalue(w):
        rows = [r for r in product((0, 1), repeat=w) if not any(a and b for a, b in zip(r, r[1:]))]
        matrix = np.array([[0.0 if any(a and b for a, b in zip(r, s)) else 1.0 for s in rows] for r in rows])
        return float(np.linalg.eigvalsh(matrix)[-1])
    return math.log(top_eigenvalue(width + 1) / top_eigenvalue(width))


def in_language_by_periodic_extension(word: Sequence[int], spec: SftSpec, max_filler: int = 4) -> bool:
    """
    A 1D word is in the language when word + filler repeats into a
    configuration avoiding every forbidden word. Sufficient in general;
    also necessary for the small test systems used here.
    """
    forbidden = [w.symbols for w in spec.forbidden]
    for length in range(max_filler + 1):
        for filler in product(range(len(spec.alphabet)), repeat=length):
            cycle = tuple(word) + filler
            if not cycle:
                continue
            if not any(all(cycle[(i + j) % len(cycle)] == s for j, s in enumerate(w))
                       for w in forbidden for i in range(len(cycle))):
                return True
    return False


def assert_encloses(case, value, bracket):
    """The enclosure meets the decimal bracket around a known constant"""
    lo, hi = (Fraction(b) for b in bracket)
    if not value.is_upper_only:
        case.assertLessEqual(to_fraction(value.lo), hi)
    case.assertGreaterEqual(to_fraction(value.hi), lo)


def log_sum_exp_bracket(values: Sequence[Fraction], digits: int = 60) -> Tuple[Fraction, Fraction]:
    """log of the sum of e^v, from correctly rounded decimal exp and ln, widened by 10^-(digits - 10)"""
    with localcontext() as ctx:
        ctx.prec = digits
        total = sum((Decimal(v.numerator) / Decimal(v.denominator)).exp() for v in map(Fraction, values))
        center = Fraction(total.ln())
    slack = Fraction(1, 10 ** (digits - 10))
    return center - slack, center + slack
