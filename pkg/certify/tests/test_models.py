from datetime import timedelta

from django.test import SimpleTestCase, TestCase
from django.utils import timezone

from certify.errors import MethodUnavailable, ParseError
from certify.models import CertificationRun, RunTerm
from certify.rigor import DyadicInterval
from certify.runner import CertificationRunner, RunConfig
from certify.utils import RunManager, RunReport, parse_report

GOLDEN_SFT = "dim 1\nalphabet 0 1\nforbidden\n(0):1 (1):1\nend\nsi_gap 1\n"


def sequence_report():
    report = RunReport('pressure_upper', method='UpperOnly',
                       value=DyadicInterval.upper_only(DyadicInterval.point(1).hi, 64),
                       columns=('position', 'term_hi', 'hi_dyadic'))
    report.add_row(position=1, term_hi='1.5', hi_dyadic='3*2^-1')
    report.add_row(position=2, term_hi='1.0', hi_dyadic='1*2^0')
    return report


class RunReportTests(SimpleTestCase):
    def test_render_and_parse(self):
        """Test the rendered header and body parse back"""
        report = RunReport('entropy', method='PerronRoot1D', value=DyadicInterval.point(1, 64),
                           conditional_on=frozenset({'si_gap'}), params={'precision': 64})
        header, rows = parse_report(report.render())
        self.assertEqual(header['command'], 'entropy')
        self.assertEqual(header['method'], 'PerronRoot1D')
        self.assertEqual(header['conditional_on'], 'si_gap')
        self.assertEqual(header['lo'], '1.' + '0' * 16)
        self.assertEqual(header['precision'], '64')
        self.assertEqual(rows, [])

    def test_body_rows(self):
        """Test the TSV body carries every added row"""
        header, rows = parse_report(sequence_report().render())
        self.assertEqual(header['method'], 'UpperOnly')
        self.assertEqual([row['position'] for row in rows], ['1', '2'])
        self.assertEqual(rows[1]['hi_dyadic'], '1*2^0')

    def test_failure(self):
        """Test a failure report names the exception on one line"""
        report = RunReport.failure('decide', ParseError("bad\npattern"))
        header, _ = parse_report(report.render())
        self.assertEqual(header['status'], 'error')
        self.assertNotIn('\n', header['error'])
        self.assertTrue(header['error'].startswith('ParseError'))

    def test_no_conditions(self):
        """Test unconditional values say so"""
        header, _ = parse_report(RunReport('entropy', value=DyadicInterval.point(0, 64)).render())
        self.assertEqual(header['conditional_on'], 'none')


class RunManagerTests(TestCase):
    def setUp(self):
        self.report = sequence_report()
        self.run = RunManager.record({'command': 'pressure_upper'}, self.report, 0)

    def test_record(self):
        """Test the run and its terms are stored"""
        self.assertEqual(self.run.command, 'pressure_upper')
        self.assertEqual(self.run.method, 'UpperOnly')
        self.assertEqual(list(self.run.terms.values_list('hi_dyadic', flat=True)), ['3*2^-1', '1*2^0'])
        self.assertNotIn('hi_dyadic', self.run.terms.first().columns)

    def test_identical(self):
        """Test the same report compares identical and a changed term does not"""
        self.assertTrue(RunManager.identical(self.run, sequence_report()))
        changed = sequence_report()
        changed.rows[1]['hi_dyadic'] = '1*2^1'
        self.assertFalse(RunManager.identical(self.run, changed))

    def test_assumptions(self):
        """Test the stored assumptions split into a list"""
        report = RunReport('entropy', value=DyadicInterval.point(0, 64),
                           conditional_on=frozenset({'si_gap', 'user_oracle'}))
        run = RunManager.record({}, report, 0)
        self.assertEqual(run.assumptions, ['si_gap', 'user_oracle'])
        self.assertEqual(self.run.assumptions, [])

    def test_cleanup_old_runs(self):
        """Test old runs go with their terms"""
        CertificationRun.objects.update(started_at=timezone.now() - timedelta(days=10))
        fresh = RunManager.record({}, RunReport('entropy'), 0)
        self.assertEqual(RunManager.cleanup_old_runs(5), (1, 2))
        self.assertEqual(list(CertificationRun.objects.all()), [fresh])
        self.assertFalse(RunTerm.objects.exists())


class RunConfigTests(SimpleTestCase):
    def test_unknown_command(self):
        """Test unknown commands are refused"""
        with self.assertRaises(ValueError):
            RunConfig(command='simulate')

    def test_unknown_method(self):
        """Test unknown methods are refused"""
        with self.assertRaises(MethodUnavailable):
            RunConfig(command='entropy', method='montecarlo')

    def test_positive_options(self):
        """Test nonpositive precision and steps are refused"""
        for options in ({'k': 0}, {'steps': 0}, {'box_side': 0}, {'m': -1}):
            with self.assertRaises(ValueError):
                RunConfig(command='pressure', **options)

    def test_dict_round_trip(self):
        """Test a config survives the ledger's JSON form and replays deterministically"""
        config = RunConfig(command='entropy', sft=GOLDEN_SFT, k=6, deterministic=False)
        data = config.to_dict()
        data['obsolete'] = 1
        replay = RunConfig.from_dict(data).replaying()
        self.assertEqual(replay.sft, GOLDEN_SFT)
        self.assertEqual(replay.k, 6)
        self.assertTrue(replay.deterministic)

    def test_default_methods(self):
        """Test one-dimensional specs default to transfer and others to the box method"""
        config = RunConfig(command='entropy', sft=GOLDEN_SFT)
        self.assertEqual(config.resolve_method(config.load_spec()), 'transfer')
        hard = RunConfig(command='entropy',
                         sft="dim 2\nalphabet 0 1\nforbidden\n(0,0):1 (1,0):1\nend\nsi_gap 1\n")
        self.assertEqual(hard.resolve_method(hard.load_spec()), 'certified')

    def test_sandwich_refused_for_ground_states(self):
        """Test ground-state commands need a width-targeted method"""
        config = RunConfig(command='energy', sft=GOLDEN_SFT, method='sandwich')
        with self.assertRaises(MethodUnavailable):
            config.resolve_method(config.load_spec())

    def test_potential_and_embedding_exclusive(self):
        """Test --potential and --embedding-of cannot both be given"""
        config = RunConfig(command='energy', sft=GOLDEN_SFT, embedding_of=GOLDEN_SFT,
                           potential="dim 1\nalphabet 0 1\nwindow (0)\ndefault 0\n")
        with self.assertRaises(ParseError):
            config.load_potential(config.load_spec())


class CertificationRunnerTests(SimpleTestCase):
    def setUp(self):
        self.runner = CertificationRunner()

    def test_ok_run(self):
        """Test a successful run exits 0 with a duration"""
        outcome = self.runner.run(RunConfig(command='entropy', sft=GOLDEN_SFT, k=6))
        self.assertTrue(outcome.ok)
        self.assertEqual(outcome.report.method, 'PerronRoot1D')
        self.assertIsNotNone(outcome.report.duration_seconds)

    def test_failure_maps_exit_code(self):
        """Test library errors become their exit codes"""
        outcome = self.runner.run(RunConfig(command='entropy', sft="dim 1\nalphabet\n"))
        self.assertEqual(outcome.exit_code, 2)
        self.assertEqual(outcome.report.status, 'error')

    def test_decide_needs_pattern(self):
        """Test decide without a pattern is a parse error"""
        outcome = self.runner.run(RunConfig(command='decide', sft=GOLDEN_SFT))
        self.assertEqual(outcome.exit_code, 2)
