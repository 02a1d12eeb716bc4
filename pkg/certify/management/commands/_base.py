from django.core.management.base import BaseCommand, CommandError
from certify.budget import setting
from certify.error_handlers import exit_code_for
from certify.errors import CertifyError
from certify.runner import CertificationRunner, RunConfig
from certify.utils import RunManager
import argparse
import logging

logger = logging.getLogger(__name__)

FILE_OPTIONS = ('sft', 'potential', 'pattern', 'enumeration', 'embedding_of')

# option dest -> RunConfig field
VALUE_OPTIONS = {
    'precision': 'k',
    'epsilon': 'epsilon',
    'steps': 'steps',
    'inner_steps': 'inner_steps',
    'method': 'method',
    'box_side': 'box_side',
    'm': 'm',
    'shape': 'shape',
    'audit_identity': 'audit_identity',
    'max_level': 'max_level',
    'precision_bits': 'precision_bits',
    'deterministic': 'deterministic',
    'max_patterns': 'max_patterns',
    'max_states': 'max_states',
    'max_matrix_dim': 'max_matrix_dim',
    'wall_clock_hint': 'wall_clock_hint',
}


def read_input(path, what):
    """Contents of an input file; unreadable files count as parse errors"""
    try:
        with open(path, encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        raise CommandError(f"cannot read {what} file {path}: {e}", returncode=2)


class CertifyCommand(BaseCommand):
    """Options shared by every certification command"""
    command_name = ''

    def add_arguments(self, parser):
        self.add_run_arguments(parser)
        parser.add_argument(
            '--precision-bits',
            type=int,
            default=int(setting('CERTIFY_PRECISION_BITS', 128)),
            help='Working precision of interval endpoints in bits'
        )
        parser.add_argument(
            '--deterministic',
            action=argparse.BooleanOptionalAction,
            default=bool(setting('CERTIFY_DETERMINISTIC', True)),
            help='Sequential canonical-order reductions (recorded with the run); --no-deterministic turns them off'
        )
        parser.add_argument('--no-record', action='store_true', help='Do not store the run in the ledger')
        parser.add_argument('--max-patterns', type=int, help='Override CERTIFY_MAX_PATTERNS')
        parser.add_argument('--max-states', type=int, help='Override CERTIFY_MAX_STATES')
        parser.add_argument('--max-matrix-dim', type=int, help='Override CERTIFY_MAX_MATRIX_DIM')
        parser.add_argument('--max-level', type=int, help='Override CERTIFY_MAX_LEVEL (language decisions)')
        parser.add_argument('--wall-clock-hint', type=int, help='Seconds; a longer run is logged, never stopped')

    def add_run_arguments(self, parser):
        pass

    def build_config(self, options):
        values = {}
        sources = {}
        for name in FILE_OPTIONS:
            path = options.get(name)
            if path:
                values[name] = read_input(path, name.replace('_', '-'))
                sources[name] = str(path)
        for option, field_name in VALUE_OPTIONS.items():
            if options.get(option) is not None:
                values[field_name] = options[option]
        try:
            return RunConfig(command=self.command_name, sources=sources, **values)
        except (CertifyError, ValueError) as e:
            raise CommandError(str(e), returncode=exit_code_for(e))

    def handle(self, *args, **options):
        config = self.build_config(options)
        self.execute_config(config, record=not options['no_record'])

    def execute_config(self, config, record=True):
        outcome = CertificationRunner().run(config)
        self.stdout.write(outcome.report.render(), ending='')
        if record:
            run = RunManager.record(config.to_dict(), outcome.report, outcome.exit_code)
            self.stderr.write(self.style.SUCCESS(f"run_id={run.run_id}"))
        if not outcome.ok:
            raise CommandError(
                outcome.report.error or f"{config.command} finished with status {outcome.report.status}",
                returncode=outcome.exit_code)
        return outcome
