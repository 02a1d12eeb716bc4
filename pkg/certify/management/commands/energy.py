from ._base import CertifyCommand
from certify.runner import METHODS


class Command(CertifyCommand):
    help = 'Certify the ground-state energy of a potential to within epsilon'
    command_name = 'energy'

    def add_run_arguments(self, parser):
        parser.add_argument('--sft', help='SFT file (default: the full shift of the potential)')
        parser.add_argument('--potential', help='Potential file')
        parser.add_argument('--embedding-of', help='Use the forbidden-pattern potential of this SFT file')
        parser.add_argument('--epsilon', help='Target width p/q (default: 1/8)')
        parser.add_argument('--method', choices=METHODS, help='certified or transfer')
