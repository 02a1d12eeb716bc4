"""
Language Handler
Handles global admissibility decisions
"""

import logging

from ..errors import ParseError
from ..formats import parse_pattern
from ..language import decide_globally_admissible
from ..utils import RunReport

logger = logging.getLogger(__name__)


class LanguageHandler:
    """Handler for decide"""

    def handle_decide(self, config) -> RunReport:
        if not config.pattern:
            raise ParseError("decide needs --pattern")
        spec = config.load_spec()
        pattern = parse_pattern(config.pattern, spec.alphabet, spec.dim)
        budget = config.budget()
        decision = decide_globally_admissible(pattern, spec, budget.max_level, budget)
        logger.info(f"decide {pattern.literal(spec.alphabet)}: {decision}")
        report = RunReport(config.command, method='DecideLanguage',
                           params={'verdict': str(decision), 'level': decision.level,
                                   'max_level': budget.max_level, 'si_gap': spec.si_gap,
                                   'assumes': 'si_gap'},
                           columns=('verdict', 'level'))
        report.add_row(verdict=str(decision), level=decision.level)
        return report
