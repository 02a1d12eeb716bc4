from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from certify.models import CertificationRun
from certify.runner import CertificationRunner, RunConfig
from certify.utils import RunManager


class Command(BaseCommand):
    help = 'Re-execute a recorded run deterministically and compare its certified ends bit for bit'

    def add_arguments(self, parser):
        parser.add_argument('--run-id', required=True, help='run_id printed when the run was recorded')
        parser.add_argument('--no-record', action='store_true', help='Do not store the rerun in the ledger')

    def handle(self, *args, **options):
        try:
            run = CertificationRun.objects.get(run_id=options['run_id'])
        except (CertificationRun.DoesNotExist, ValidationError, ValueError):
            raise CommandError(f"no recorded run {options['run_id']}")

        config = RunConfig.from_dict(run.parameters).replaying()
        outcome = CertificationRunner().run(config)
        self.stdout.write(outcome.report.render(), ending='')

        same = outcome.exit_code == run.exit_code and RunManager.identical(run, outcome.report)
        self.stdout.write(f"identical={'true' if same else 'false'}")
        if not options['no_record']:
            rerun = RunManager.record(config.to_dict(), outcome.report, outcome.exit_code)
            self.stderr.write(self.style.SUCCESS(f"run_id={rerun.run_id}"))
