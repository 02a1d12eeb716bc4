from dataclasses import dataclass, field
from datetime import timedelta
from typing import Any, Dict, FrozenSet, List, Optional, Tuple
import logging

from django.utils import timezone

from .models import CertificationRun, RunTerm
from .rigor import DyadicInterval, decimal_down, decimal_up, dyadic_form

logger = logging.getLogger(__name__)

DECIMAL_DIGITS = 16


def format_interval(value: DyadicInterval) -> Dict[str, str]:
    """Decimal ends rounded outward plus the exact dyadic ends"""
    return {
        'lo': decimal_down(value.lo, DECIMAL_DIGITS),
        'hi': decimal_up(value.hi, DECIMAL_DIGITS),
        'lo_dyadic': dyadic_form(value.lo),
        'hi_dyadic': dyadic_form(value.hi),
        'width': decimal_up(value.width, DECIMAL_DIGITS),
    }


@dataclass
class RunReport:
    """key=value header, a blank line, then a TSV body"""
    command: str
    status: str = 'ok'
    method: str = ''
    value: Optional[DyadicInterval] = None
    conditional_on: FrozenSet[str] = frozenset()
    params: Dict[str, Any] = field(default_factory=dict)
    columns: Tuple[str, ...] = ()
    rows: List[Dict[str, str]] = field(default_factory=list)
    duration_seconds: Optional[float] = None
    error: str = ''

    @classmethod
    def from_estimate(cls, command: str, estimate, **params: Any) -> 'RunReport':
        merged = dict(estimate.params)
        merged.update(params)
        return cls(command, method=estimate.method.value, value=estimate.value,
                   conditional_on=estimate.conditional_on, params=merged)

    @classmethod
    def failure(cls, command: str, exc: BaseException) -> 'RunReport':
        return cls(command, status='error', error=f"{type(exc).__name__}: {exc}")

    def add_row(self, **values: Any) -> None:
        self.rows.append({c: str(values.get(c, '')) for c in self.columns})

    def header(self) -> List[Tuple[str, str]]:
        items = [('command', self.command), ('status', self.status)]
        if self.error:
            items.append(('error', ' '.join(self.error.split())))
        if self.method:
            items.append(('method', self.method))
        if self.value is not None:
            items.extend(format_interval(self.value).items())
            items.append(('conditional_on', ','.join(sorted(self.conditional_on)) or 'none'))
        items.extend((str(k), str(v)) for k, v in self.params.items())
        if self.duration_seconds is not None:
            items.append(('duration_seconds', f"{self.duration_seconds:.3f}"))
        return items

    def render(self) -> str:
        lines = [f"{key}={value}" for key, value in self.header()]
        if self.columns:
            lines.append('')
            lines.append('\t'.join(self.columns))
            lines.extend('\t'.join(row[c] for c in self.columns) for row in self.rows)
        return '\n'.join(lines) + '\n'


def parse_report(text: str) -> Tuple[Dict[str, str], List[Dict[str, str]]]:
    """Inverse of RunReport.render: (header, body rows)"""
    head, _, body = text.partition('\n\n')
    header = {}
    for line in head.splitlines():
        key, _, value = line.partition('=')
        header[key] = value
    rows = []
    body_lines = [line for line in body.splitlines() if line]
    if body_lines:
        columns = body_lines[0].split('\t')
        rows = [dict(zip(columns, line.split('\t'))) for line in body_lines[1:]]
    return header, rows


class RunManager:
    """Helper class for the run ledger"""

    @staticmethod
    def record(parameters: Dict[str, Any], report: RunReport, exit_code: int) -> CertificationRun:
        """Store a finished run and its upper-sequence terms"""
        fields = format_interval(report.value) if report.value is not None else {}
        run = CertificationRun.objects.create(
            command=report.command,
            parameters=parameters,
            method=report.method,
            lo_dyadic=fields.get('lo_dyadic', ''),
            hi_dyadic=fields.get('hi_dyadic', ''),
            lo_decimal=fields.get('lo', ''),
            hi_decimal=fields.get('hi', ''),
            conditional_on=','.join(sorted(report.conditional_on)),
            exit_code=exit_code,
            report=report.render(),
            duration_seconds=report.duration_seconds,
        )
        if 'hi_dyadic' in report.columns:
            RunTerm.objects.bulk_create([
                RunTerm(run=run, position=i,
                        columns={k: v for k, v in row.items() if k != 'hi_dyadic'},
                        hi_dyadic=row['hi_dyadic'])
                for i, row in enumerate(report.rows, 1)
            ])
        return run

    @staticmethod
    def identical(run: CertificationRun, report: RunReport) -> bool:
        """Bit-for-bit comparison of the dyadic ends and term ends"""
        fields = format_interval(report.value) if report.value is not None else {}
        if (run.lo_dyadic, run.hi_dyadic) != (fields.get('lo_dyadic', ''), fields.get('hi_dyadic', '')):
            return False
        recorded = list(run.terms.values_list('hi_dyadic', flat=True))
        fresh = [row['hi_dyadic'] for row in report.rows] if 'hi_dyadic' in report.columns else []
        return recorded == fresh

    @staticmethod
    def cleanup_old_runs(days: int) -> Tuple[int, int]:
        """Delete runs older than the given number of days"""
        cutoff_date = timezone.now() - timedelta(days=days)
        old_runs = CertificationRun.objects.filter(started_at__lt=cutoff_date)
        run_count = old_runs.count()
        term_count = RunTerm.objects.filter(run__in=old_runs).count()
        old_runs.delete()
        logger.info(f"Deleted {run_count} runs and {term_count} terms older than {days} days")
        return run_count, term_count
