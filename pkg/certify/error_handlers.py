from .errors import CertifyError, ResourceLimitExceeded, UndecidedLanguage
import logging

logger = logging.getLogger(__name__)

REFUSALS = (ResourceLimitExceeded, UndecidedLanguage)


def exit_code_for(exc: BaseException) -> int:
    """Exit code reported by the management commands"""
    if isinstance(exc, CertifyError):
        return exc.exit_code
    return 1


def log_command_error(command: str, exc: BaseException) -> int:
    """Log a failed command; budget and undecided refusals are warnings"""
    code = exit_code_for(exc)
    if isinstance(exc, REFUSALS):
        logger.warning(f"{command} refused (exit {code}): {exc}")
    else:
        logger.error(f"{command} failed (exit {code}): {type(exc).__name__}: {exc}")
    return code
