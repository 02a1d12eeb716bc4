from .pressure_handler import PressureHandler
from .groundstate_handler import GroundStateHandler
from .language_handler import LanguageHandler

__all__ = ['PressureHandler', 'GroundStateHandler', 'LanguageHandler']
