from ._base import CertifyCommand
from certify.runner import METHODS


class Command(CertifyCommand):
    help = 'Certify the pressure of a locally constant potential on an SFT'
    command_name = 'pressure'

    def add_run_arguments(self, parser):
        parser.add_argument('--sft', required=True, help='SFT file')
        parser.add_argument('--potential', help='Potential file (default: zero potential)')
        parser.add_argument(
            '--precision',
            type=int,
            help='Certify to within 2^-k (default: 10)'
        )
        parser.add_argument('--method', choices=METHODS, help='sandwich, certified or transfer')
        parser.add_argument('--box-side', type=int, help='Interior box side for the sandwich method')
        parser.add_argument('--audit-identity', action='store_true',
                            help='Also check the transfer sum identity (2D full shifts)')
        parser.add_argument('--m', type=int, help='Block radius for the identity audit (default: 0)')
