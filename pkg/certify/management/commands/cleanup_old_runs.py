from django.core.management.base import BaseCommand
from certify.budget import setting
from certify.utils import RunManager


class Command(BaseCommand):
    help = 'Delete old certification runs from the ledger'

    def add_arguments(self, parser):
        parser.add_argument(
            '--days',
            type=int,
            default=int(setting('CERTIFY_RUN_RETENTION_DAYS', 30)),
            help='Delete runs older than specified days (default: CERTIFY_RUN_RETENTION_DAYS)'
        )

    def handle(self, *args, **options):
        days = options['days']
        run_count, term_count = RunManager.cleanup_old_runs(days)

        self.stdout.write(
            self.style.SUCCESS(
                f'Deleted {run_count} runs and {term_count} terms '
                f'older than {days} days'))
