"""
CertificationRunner: turns one RunConfig into a report and an exit code
"""

from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Callable, Dict, Optional
import logging
import time
import traceback

from .budget import Budget
from .error_handlers import log_command_error
from .errors import CertifyError, MethodUnavailable, ParseError
from .formats import parse_potential, parse_sft
from .handlers import GroundStateHandler, LanguageHandler, PressureHandler
from .potential import LocallyConstantPotential, sft_embedding_potential
from .rigor import DEFAULT_PRECISION
from .subshift import SftSpec
from .utils import RunReport

logger = logging.getLogger(__name__)

COMMANDS = (
    'pressure', 'entropy', 'pressure_upper', 'energy', 'energy_upper', 'entropy_upper',
    'decide', 'partition', 'audit_identity',
)
METHODS = ('sandwich', 'certified', 'transfer')
GROUND_STATE_COMMANDS = ('energy', 'energy_upper', 'entropy_upper')


@dataclass(frozen=True)
class RunConfig:
    """
    One command invocation. File options hold file contents so a recorded
    config can be re-run without the original files.
    """
    command: str
    sft: Optional[str] = None
    potential: Optional[str] = None
    pattern: Optional[str] = None
    enumeration: Optional[str] = None
    embedding_of: Optional[str] = None
    shape: Optional[str] = None
    k: int = 10
    epsilon: str = '1/8'
    steps: int = 20
    inner_steps: int = 12
    method: Optional[str] = None
    box_side: Optional[int] = None
    m: int = 0
    max_level: Optional[int] = None
    precision_bits: int = DEFAULT_PRECISION
    deterministic: bool = True
    audit_identity: bool = False
    max_patterns: Optional[int] = None
    max_states: Optional[int] = None
    max_matrix_dim: Optional[int] = None
    wall_clock_hint: Optional[int] = None
    sources: Dict[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.method is not None and self.method not in METHODS:
            raise MethodUnavailable(f"unknown method {self.method!r}; choose one of {', '.join(METHODS)}")
        for name in ('k', 'steps', 'inner_steps', 'precision_bits'):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.box_side is not None and self.box_side < 1:
            raise ValueError("box side must be positive")
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        self.budget()

    def budget(self) -> Budget:
        return Budget.from_settings(
            max_patterns=self.max_patterns,
            max_states=self.max_states,
            max_matrix_dim=self.max_matrix_dim,
            max_level=self.max_level,
            wall_clock_hint=self.wall_clock_hint,
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunConfig':
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    def replaying(self) -> 'RunConfig':
        return replace(self, deterministic=True)

    def load_spec(self) -> SftSpec:
        """The --sft file, else the full shift the potential lives on"""
        if self.sft:
            return parse_sft(self.sft)
        if self.embedding_of:
            embedded = parse_sft(self.embedding_of)
            return SftSpec.full_shift(embedded.alphabet, embedded.dim)
        if self.potential:
            pot = parse_potential(self.potential)
            return SftSpec.full_shift(pot.alphabet, pot.dim)
        raise ParseError(f"{self.command} needs --sft")

    def load_potential(self, spec: SftSpec, required: bool = False) -> LocallyConstantPotential:
        if self.potential and self.embedding_of:
            raise ParseError("give either --potential or --embedding-of, not both")
        if self.potential:
            pot = parse_potential(self.potential)
        elif self.embedding_of:
            pot = sft_embedding_potential(parse_sft(self.embedding_of), self.budget())
        elif required:
            raise ParseError(f"{self.command} needs --potential or --embedding-of")
        else:
            return LocallyConstantPotential.zero(spec.alphabet, spec.dim)
        if pot.alphabet != spec.alphabet or pot.dim != spec.dim:
            raise ParseError("the potential's alphabet and dimension must match the SFT's")
        return pot

    def resolve_method(self, spec: SftSpec) -> str:
        """The requested method, or the default for the spec's dimension"""
        method = self.method or ('transfer' if spec.dim == 1 else 'certified')
        if method == 'transfer' and not (spec.dim == 1 or (spec.dim == 2 and spec.is_full_shift)):
            raise MethodUnavailable("the transfer method covers one-dimensional SFTs and two-dimensional full shifts")
        if method == 'sandwich' and self.command in GROUND_STATE_COMMANDS:
            raise MethodUnavailable("ground-state commands need a width target; use certified or transfer")
        return method


@dataclass
class RunOutcome:
    report: RunReport
    exit_code: int

    @property
    def ok(self) -> bool:
        return self.exit_code == 0


class CertificationRunner:
    """Dispatches a RunConfig to the handler for its command"""

    def __init__(self):
        self.pressure_handler = PressureHandler()
        self.groundstate_handler = GroundStateHandler()
        self.language_handler = LanguageHandler()
        self.routes: Dict[str, Callable[[RunConfig], RunReport]] = {
            'pressure': self.pressure_handler.handle_pressure,
            'entropy': self.pressure_handler.handle_entropy,
            'partition': self.pressure_handler.handle_partition,
            'pressure_upper': self.pressure_handler.handle_pressure_upper,
            'audit_identity': self.pressure_handler.handle_audit_identity,
            'energy': self.groundstate_handler.handle_energy,
            'energy_upper': self.groundstate_handler.handle_energy_upper,
            'entropy_upper': self.groundstate_handler.handle_entropy_upper,
            'decide': self.language_handler.handle_decide,
        }

    def run(self, config: RunConfig) -> RunOutcome:
        logger.info(f"Starting {config.command} run (precision {config.precision_bits} bits)")
        started = time.perf_counter()
        try:
            report = self.routes[config.command](config)
            exit_code = 0 if report.status == 'ok' else 1
        except (CertifyError, ValueError) as e:
            exit_code = log_command_error(config.command, e)
            report = RunReport.failure(config.command, e)
        except Exception as e:
            logger.error(f"Unexpected error in {config.command}: {e}")
            logger.error(traceback.format_exc())
            exit_code = 1
            report = RunReport.failure(config.command, e)
        report.duration_seconds = time.perf_counter() - started
        hint = config.budget().wall_clock_hint
        if report.duration_seconds > hint:
            logger.warning(f"{config.command} took {report.duration_seconds:.1f}s, above the {hint}s hint")
        logger.info(f"Finished {config.command} run: status {report.status}, exit {exit_code}")
        return RunOutcome(report, exit_code)
