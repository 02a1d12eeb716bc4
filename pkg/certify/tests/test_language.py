from django.test import SimpleTestCase
from itertools import product
from certify.budget import Budget
from certify.errors import MissingGap, OracleFailure, ResourceLimitExceeded, UndecidedLanguage
from certify.language import (
    ExactSI, ExtendabilityParams, FullShift, LocalOverapprox, UserOracle, Verdict, canonical_boxes, compatible,
    decide_globally_admissible, extendable_set, provider_for,
)
from certify.lattice import Shape, side_box
from certify.subshift import Pattern, SftSpec
from .oracles import (
    BINARY, dead_end, golden_mean, hard_squares, in_language_by_periodic_extension, three_coloring,
)


class CanonicalBoxTests(SimpleTestCase):
    def test_steps(self):
        """Test the box step is the larger of gap and reach, plus one"""
        self.assertEqual(canonical_boxes(golden_mean()).step, 2)
        self.assertEqual(canonical_boxes(dead_end()).step, 2)
        self.assertEqual(canonical_boxes(three_coloring()).step, 2)
        wide = SftSpec(BINARY, 1, golden_mean().forbidden, 3)
        self.assertEqual(canonical_boxes(wide).step, 4)

    def test_levels_and_annulus(self):
        """Test box levels and annuli"""
        boxes = canonical_boxes(golden_mean())
        self.assertEqual(boxes.level_of(Pattern.word(BINARY, '1').domain), 0)
        self.assertEqual(boxes.level_of(Pattern.word(BINARY, '101').domain), 1)
        self.assertEqual(boxes.annulus(1), ((-2,), (-1,), (1,), (2,)))

    def test_missing_gap(self):
        """Test deciding needs an asserted gap"""
        spec = SftSpec(BINARY, 1, golden_mean().forbidden)
        with self.assertRaises(MissingGap):
            canonical_boxes(spec)


class DecideTests(SimpleTestCase):
    def test_not_locally_admissible_is_out(self):
        """Test a forbidden occurrence answers OUT at level 0"""
        decision = decide_globally_admissible(Pattern.word(BINARY, '0110'), golden_mean(), 3)
        self.assertEqual((decision.verdict, decision.level), (Verdict.OUT, 0))

    def test_golden_mean_word_needs_room(self):
        """Test 101 is undecided with one level and in with two"""
        word = Pattern.word(BINARY, '101')
        undecided = decide_globally_admissible(word, golden_mean(), 1)
        self.assertEqual(undecided.verdict, Verdict.UNDECIDED)
        self.assertEqual(str(undecided), 'UNDECIDED(level=1)')
        decided = decide_globally_admissible(word, golden_mean(), 2)
        self.assertEqual((decided.verdict, decided.level), (Verdict.IN, 2))

    def test_dead_end_symbol_is_out(self):
        """Test a locally admissible symbol that no configuration contains"""
        spec = dead_end()
        b = Pattern.word(spec.alphabet, 'b')
        decision = decide_globally_admissible(b, spec, 3)
        self.assertEqual((decision.verdict, decision.level), (Verdict.OUT, 1))
        a = Pattern.word(spec.alphabet, 'a')
        self.assertEqual(decide_globally_admissible(a, spec, 3).verdict, Verdict.IN)

    def test_three_coloring_needs_two_levels(self):
        """Test a single color needs filler room on both sides"""
        spec = three_coloring()
        zero = Pattern.word(spec.alphabet, '0')
        self.assertEqual(decide_globally_admissible(zero, spec, 1).verdict, Verdict.UNDECIDED)
        decision = decide_globally_admissible(zero, spec, 2)
        self.assertEqual((decision.verdict, decision.level), (Verdict.IN, 2))

    def test_agrees_with_periodic_extension(self):
        """Test verdicts against periodic extensions for every word up to length 6"""
        for spec, longest in ((golden_mean(), 6), (dead_end(), 6), (three_coloring(), 3)):
            size = len(spec.alphabet)
            for length in range(1, longest + 1):
                for symbols in product(range(size), repeat=length):
                    word = Pattern(side_box(length, 1).shape(), symbols)
                    expected = in_language_by_periodic_extension(symbols, spec)
                    decision = decide_globally_admissible(word, spec, 3)
                    self.assertEqual(decision.verdict, Verdict.IN if expected else Verdict.OUT,
                                     f"{word.text(spec.alphabet)} in {spec.alphabet.symbols}")

    def test_sweep_budget(self):
        """Test a tiny budget refuses instead of guessing"""
        with self.assertRaises(ResourceLimitExceeded):
            decide_globally_admissible(Pattern.word(BINARY, '101'), golden_mean(), 2, Budget(max_patterns=3))


class CompatibleTests(SimpleTestCase):
    def test_trace_compatibility(self):
        """Test an inner pattern against the outer annulus"""
        spec = golden_mean()
        boxes = canonical_boxes(spec)
        inner = Pattern(boxes.shape(0), (1,))
        outer_ok = Pattern(boxes.shape(1), (0, 0, 0, 0, 0))
        outer_bad = Pattern(boxes.shape(1), (0, 1, 0, 0, 0))
        self.assertTrue(compatible(inner, outer_ok, spec))
        self.assertFalse(compatible(inner, outer_bad, spec))


class ExtendabilityTests(SimpleTestCase):
    def test_golden_mean_pairs(self):
        """Test the extendable words of length 2"""
        enumeration = golden_mean().enumeration()
        found = extendable_set(side_box(2, 1).shape(), ExtendabilityParams(3, 1), enumeration)
        self.assertEqual([w.text(BINARY) for w in found], ['00', '01', '10'])

    def test_dead_end_pruned_by_growth(self):
        """Test growth sets remove patterns that cannot be extended"""
        spec = dead_end()
        enumeration = spec.enumeration()
        origin = Shape.origin(1)
        narrow = extendable_set(origin, ExtendabilityParams(1, 3), enumeration)
        wide = extendable_set(origin, ExtendabilityParams(3, 3), enumeration)
        self.assertEqual(len(narrow), 3)
        self.assertEqual([w.text(spec.alphabet) for w in wide], ['a', 'c'])

    def test_antitone_and_contains_the_language(self):
        """Test larger t or n never adds a pattern and the language always survives"""
        for spec in (golden_mean(), dead_end()):
            enumeration = spec.enumeration()
            language = ExactSI(spec)
            for length in (1, 2, 3):
                f = side_box(length, 1).shape()
                globally = {p.symbols for p in language.patterns(f)}
                found = {}
                for t in range(1, 6):
                    for n in range(1, len(spec.forbidden) + 1):
                        found[t, n] = {p.symbols for p in extendable_set(f, ExtendabilityParams(t, n), enumeration)}
                        self.assertLessEqual(globally, found[t, n], f"t={t}, n={n}, length {length}")
                for (t, n), patterns in found.items():
                    for later in ((t + 1, n), (t, n + 1)):
                        if later in found:
                            self.assertLessEqual(found[later], patterns, f"{later} against {(t, n)}")

    def test_bad_params(self):
        """Test parameters must be positive"""
        with self.assertRaises(ValueError):
            ExtendabilityParams(0, 1)


class ProviderTests(SimpleTestCase):
    def test_provider_choice(self):
        """Test the strongest provider the spec supports is chosen"""
        self.assertIsInstance(provider_for(SftSpec.full_shift(BINARY, 1)), FullShift)
        exact = provider_for(hard_squares())
        self.assertIsInstance(exact, ExactSI)
        self.assertTrue(exact.is_local)
        self.assertEqual(exact.assertions, frozenset({'si_gap'}))
        loose = provider_for(SftSpec(BINARY, 1, golden_mean().forbidden))
        self.assertIsInstance(loose, LocalOverapprox)
        self.assertFalse(loose.exact)

    def test_exact_patterns_drop_dead_ends(self):
        """Test the exact language excludes symbols that never occur"""
        spec = dead_end()
        origin = Shape.origin(1)
        exact = [p.text(spec.alphabet) for p in provider_for(spec).patterns(origin)]
        loose = [p.text(spec.alphabet) for p in LocalOverapprox(spec).patterns(origin)]
        self.assertEqual(exact, ['a', 'c'])
        self.assertEqual(loose, ['a', 'b', 'c'])

    def test_undecided_membership_raises(self):
        """Test an undecided pattern is refused, never guessed"""
        spec = three_coloring()
        provider = ExactSI(spec, max_level=1)
        with self.assertRaises(UndecidedLanguage) as cm:
            provider.contains(Pattern.word(spec.alphabet, '0'))
        self.assertEqual(cm.exception.exit_code, 4)

    def test_user_oracle(self):
        """Test user oracles are trusted but type-checked"""
        spec = golden_mean()
        self.assertTrue(UserOracle(spec, lambda v: True).contains(Pattern.word(BINARY, '0')))
        self.assertEqual(UserOracle(spec, lambda v: True).assertions, frozenset({'user_oracle'}))
        with self.assertRaises(OracleFailure):
            UserOracle(spec, lambda v: 'yes').contains(Pattern.word(BINARY, '0'))
        with self.assertRaises(OracleFailure):
            UserOracle(spec, lambda v: 1 / 0).contains(Pattern.word(BINARY, '0'))

    def test_unknown_kind(self):
        """Test unknown provider names"""
        with self.assertRaises(ValueError):
            provider_for(golden_mean(), kind='guess')
