from ._base import CertifyCommand
from certify.runner import METHODS


class Command(CertifyCommand):
    help = 'Upper sequence for the ground-state entropy'
    command_name = 'entropy_upper'

    def add_run_arguments(self, parser):
        parser.add_argument('--sft', help='SFT file (default: the full shift of the potential)')
        parser.add_argument('--potential', help='Potential file')
        parser.add_argument('--embedding-of', help='Use the forbidden-pattern potential of this SFT file')
        parser.add_argument('--steps', type=int, help='Largest beta (default: 20)')
        parser.add_argument('--method', choices=METHODS, help='certified or transfer')
