from ._base import CertifyCommand
from certify.runner import METHODS


class Command(CertifyCommand):
    help = 'Upper sequence for the ground-state energy'
    command_name = 'energy_upper'

    def add_run_arguments(self, parser):
        parser.add_argument('--sft', help='SFT file')
        parser.add_argument('--enumeration', help='Forbidden-pattern list file (instead of --sft)')
        parser.add_argument('--potential', help='Potential file')
        parser.add_argument('--embedding-of', help='Use the forbidden-pattern potential of this SFT file')
        parser.add_argument('--steps', type=int, help='Number of sequence steps (default: 20)')
        parser.add_argument('--inner-steps', type=int,
                            help='Pressure upper-sequence steps per term with --enumeration (default: 12)')
        parser.add_argument('--method', choices=METHODS, help='certified or transfer')
