from ._base import CertifyCommand


class Command(CertifyCommand):
    help = 'Enclose the partition function of a potential on a shape'
    command_name = 'partition'

    def add_run_arguments(self, parser):
        parser.add_argument('--sft', required=True, help='SFT file')
        parser.add_argument('--potential', help='Potential file (default: zero potential)')
        parser.add_argument('--shape', required=True, help='Shape literal, e.g. "box(0..3,0..3)" or "(0,0) (1,0)"')
