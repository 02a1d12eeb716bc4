from ._base import CertifyCommand
from certify.runner import METHODS


class Command(CertifyCommand):
    help = 'Certify the topological entropy of an SFT'
    command_name = 'entropy'

    def add_run_arguments(self, parser):
        parser.add_argument('--sft', required=True, help='SFT file')
        parser.add_argument('--precision', type=int, help='Certify to within 2^-k (default: 10)')
        parser.add_argument('--method', choices=METHODS, help='sandwich, certified or transfer')
        parser.add_argument('--box-side', type=int, help='Interior box side for the sandwich method')
