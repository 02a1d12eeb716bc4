from ._base import CertifyCommand


class Command(CertifyCommand):
    help = 'Check the transfer-matrix sum identity against direct enumeration'
    command_name = 'audit_identity'

    def add_run_arguments(self, parser):
        parser.add_argument('--potential', required=True, help='Potential file on a 2D full shift')
        parser.add_argument('--m', type=int, help='Check block radii 0..m (default: 0)')
