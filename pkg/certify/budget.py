"""
Resource budgets shared by every estimator.
"""

from dataclasses import dataclass, replace
from typing import Any, Dict, Optional
import logging

from django.core.exceptions import ImproperlyConfigured

from .errors import ResourceLimitExceeded

logger = logging.getLogger(__name__)

DEFAULTS: Dict[str, int] = {
    'max_patterns': 2 ** 20,
    'max_states': 2 ** 20,
    'max_matrix_dim': 2 ** 14,
    'max_level': 4,
    'wall_clock_hint': 120,
}

_SETTING_NAMES = {
    'max_patterns': 'CERTIFY_MAX_PATTERNS',
    'max_states': 'CERTIFY_MAX_STATES',
    'max_matrix_dim': 'CERTIFY_MAX_MATRIX_DIM',
    'max_level': 'CERTIFY_MAX_LEVEL',
    'wall_clock_hint': 'CERTIFY_WALL_CLOCK_HINT',
}


@dataclass(frozen=True)
class Budget:
    """Caps on enumeration size, strip states and matrix dimension"""
    max_patterns: int = DEFAULTS['max_patterns']
    max_states: int = DEFAULTS['max_states']
    max_matrix_dim: int = DEFAULTS['max_matrix_dim']
    max_level: int = DEFAULTS['max_level']
    wall_clock_hint: int = DEFAULTS['wall_clock_hint']

    def __post_init__(self):
        for name in _SETTING_NAMES:
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")

    @classmethod
    def from_settings(cls, **overrides: Any) -> 'Budget':
        """Read budgets from Django settings, falling back to the defaults"""
        values = dict(DEFAULTS)
        try:
            from django.conf import settings
            for name, setting in _SETTING_NAMES.items():
                values[name] = int(getattr(settings, setting, values[name]))
        except ImproperlyConfigured:
            logger.debug("settings not configured, using default budgets")
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_overrides(self, **overrides: Any) -> 'Budget':
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def check_patterns(self, projected: int, detail: str = '') -> None:
        if projected > self.max_patterns:
            raise ResourceLimitExceeded('patterns', projected, self.max_patterns, detail)

    def check_states(self, projected: int, detail: str = '') -> None:
        if projected > self.max_states:
            raise ResourceLimitExceeded('strip states', projected, self.max_states, detail)

    def check_matrix_dim(self, projected: int, detail: str = '') -> None:
        if projected > self.max_matrix_dim:
            raise ResourceLimitExceeded('matrix dimension', projected, self.max_matrix_dim, detail)


def resolve(budget: Optional[Budget]) -> Budget:
    return budget if budget is not None else Budget.from_settings()


def setting(name: str, default: Any) -> Any:
    """A CERTIFY_* setting, or the default when settings are not configured"""
    try:
        from django.conf import settings
        return getattr(settings, name, default)
    except ImproperlyConfigured:
        return default
