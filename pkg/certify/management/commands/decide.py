from ._base import CertifyCommand


class Command(CertifyCommand):
    help = 'Decide whether a pattern is in the language of a strongly irreducible SFT'
    command_name = 'decide'

    def add_run_arguments(self, parser):
        parser.add_argument('--sft', required=True, help='SFT file with an si_gap line')
        parser.add_argument('--pattern', required=True, help='Pattern file')
