from django.test import SimpleTestCase
from fractions import Fraction
from certify.errors import ParseError
from certify.formats import (
    format_pattern, format_potential, format_sft, parse_enumeration, parse_pattern, parse_potential,
    parse_rational, parse_sft,
)
from certify.subshift import Pattern
from .oracles import BINARY, hard_squares

HARD_SQUARES = """# hard squares
dim 2
alphabet 0 1
forbidden
(0,0):1 (1,0):1
(0,0):1 (0,1):1
end
si_gap 1
"""

PAIR_POTENTIAL = """dim 1
alphabet 0 1
window (1) (0)
entry 1 0 : -1/2
default 1/3
"""


class RationalTests(SimpleTestCase):
    def test_parse(self):
        """Test integers and p/q"""
        self.assertEqual(parse_rational('-3/6'), Fraction(-1, 2))
        self.assertEqual(parse_rational(' 7 '), 7)

    def test_bad_rationals(self):
        """Test floats, empty text and zero denominators"""
        for text in ('0.5', '', '1/0', '1/-2', 'x'):
            with self.assertRaises(ParseError):
                parse_rational(text)


class SftFormatTests(SimpleTestCase):
    def test_parse_hard_squares(self):
        """Test the SFT file format"""
        spec = parse_sft(HARD_SQUARES)
        self.assertEqual(spec, hard_squares())
        self.assertEqual(spec.si_gap, 1)

    def test_round_trip(self):
        """Test formatting then parsing gives the same spec"""
        spec = parse_sft(HARD_SQUARES)
        self.assertEqual(parse_sft(format_sft(spec)), spec)

    def test_full_shift_without_gap(self):
        """Test a file with no forbidden block"""
        spec = parse_sft("dim 1\nalphabet a b c\n")
        self.assertTrue(spec.is_full_shift)
        self.assertIsNone(spec.si_gap)

    def test_errors_carry_line_numbers(self):
        """Test parse errors name the offending line"""
        cases = {
            "dim x\nalphabet 0 1\n": 'line 1:',
            "dim 1\nsymbols 0 1\n": 'line 2:',
            "dim 1\nalphabet 0 1\nforbidden\n(0):2\nend\n": 'line 4:',
            "dim 1\nalphabet 0 1\nforbidden\n(0,0):1\nend\n": 'line 4:',
            "dim 1\nalphabet 0 1\nforbidden\n(0):1 (0):0\nend\n": 'line 4:',
            "dim 1\nalphabet 0 1\nforbidden\n(0):1\n": 'line 4:',
            "dim 1\nalphabet 0 1\nsi_gap -1\n": 'line 3:',
            "dim 1\nalphabet 0 1\nsi_gap 1\nsi_gap 2\n": 'line 4:',
            "dim 1\nalphabet 0 1\n\n# comment\nbogus\n": 'line 5:',
        }
        for text, prefix in cases.items():
            with self.assertRaises(ParseError) as cm:
                parse_sft(text)
            self.assertTrue(str(cm.exception).startswith(prefix), f"{text!r}: {cm.exception}")

    def test_missing_header(self):
        """Test an empty file"""
        with self.assertRaises(ParseError):
            parse_sft("# nothing\n")

    def test_enumeration_file(self):
        """Test forbidden lists read as finite enumerations"""
        enumeration = parse_enumeration(HARD_SQUARES)
        self.assertTrue(enumeration.is_finite)
        self.assertEqual(len(enumeration.prefix(5)), 2)


class PotentialFormatTests(SimpleTestCase):
    def test_entries_follow_window_order(self):
        """Test entry tokens are read in the order the window lists its sites"""
        pot = parse_potential(PAIR_POTENTIAL)
        self.assertEqual(pot.window.sites, ((0,), (1,)))
        self.assertEqual(pot.value((0, 1)), Fraction(-1, 2))
        self.assertEqual(pot.value((1, 0)), Fraction(1, 3))
        self.assertEqual(pot.default, Fraction(1, 3))

    def test_round_trip(self):
        """Test formatting then parsing gives the same potential"""
        pot = parse_potential(PAIR_POTENTIAL)
        self.assertEqual(parse_potential(format_potential(pot)), pot)

    def test_errors(self):
        """Test malformed potentials"""
        cases = {
            "dim 1\nalphabet 0 1\n": None,
            "dim 1\nalphabet 0 1\nwindow (1)\n": None,
            "dim 1\nalphabet 0 1\nwindow (0) (0)\n": 'line 3:',
            "dim 1\nalphabet 0 1\nwindow (0)\nentry 1 1 : 2\n": 'line 4:',
            "dim 1\nalphabet 0 1\nwindow (0)\nentry 2 : 2\n": 'line 4:',
            "dim 1\nalphabet 0 1\nwindow (0)\nentry 1 : 0.5\n": 'line 4:',
            "dim 1\nalphabet 0 1\nwindow (0)\nentry 1 : 1\nentry 1 : 2\n": 'line 5:',
            "dim 1\nalphabet 0 1\nwindow (0)\ndefault 1\ndefault 2\n": 'line 5:',
        }
        for text, prefix in cases.items():
            with self.assertRaises(ParseError) as cm:
                parse_potential(text)
            if prefix:
                self.assertTrue(str(cm.exception).startswith(prefix), f"{text!r}: {cm.exception}")


class PatternFormatTests(SimpleTestCase):
    def test_parse_with_and_without_dim(self):
        """Test pattern files"""
        expected = Pattern.word(BINARY, '101')
        self.assertEqual(parse_pattern("dim 1\n(0):1 (1):0 (2):1\n", BINARY, 1), expected)
        self.assertEqual(parse_pattern("(2):1 (0):1 (1):0", BINARY, 1), expected)
        self.assertEqual(parse_pattern(format_pattern(expected, BINARY), BINARY, 1), expected)

    def test_errors(self):
        """Test wrong dimension and extra lines"""
        with self.assertRaises(ParseError):
            parse_pattern("dim 2\n(0):1\n", BINARY, 1)
        with self.assertRaises(ParseError):
            parse_pattern("(0):1\n(1):1\n", BINARY, 1)
        with self.assertRaises(ParseError):
            parse_pattern("(0,0):1\n", BINARY, 1)
