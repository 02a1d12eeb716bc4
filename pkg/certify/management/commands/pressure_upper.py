from ._base import CertifyCommand


class Command(CertifyCommand):
    help = 'Anytime upper bounds on the pressure of a subshift given by forbidden patterns'
    command_name = 'pressure_upper'

    def add_run_arguments(self, parser):
        parser.add_argument('--enumeration', required=True, help='Forbidden-pattern list file')
        parser.add_argument('--potential', help='Potential file (default: zero potential)')
        parser.add_argument('--steps', type=int, help='Number of sequence steps (default: 20)')
