"""
Line-oriented text formats for SFT specs, potentials, patterns and forbidden
enumerations. Blank lines and lines starting with '#' are ignored.

    dim 2
    alphabet 0 1
    forbidden
    (0,0):1 (1,0):1
    (0,0):1 (0,1):1
    end
    si_gap 1

    dim 1
    alphabet 0 1
    window (0) (1)
    entry 1 1 : -1
    default 0
"""

from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple
import logging
import re

from .errors import CertifyError, ParseError
from .lattice import Shape, format_site, parse_site
from .potential import LocallyConstantPotential
from .subshift import Alphabet, ForbiddenEnumeration, Pattern, SftSpec

logger = logging.getLogger(__name__)

_ENTRY_RE = re.compile(r'(\([^()]*\)):(\S+)')


def parse_rational(text: str, line: Optional[int] = None) -> Fraction:
    """`p/q` or an integer"""
    text = text.strip()
    if not re.fullmatch(r'-?\d+(/\d+)?', text):
        raise ParseError(f"bad rational {text!r}", line)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}", line) from None


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith('#'):
            yield number, line


def _keyword(line: str) -> Tuple[str, str]:
    head, _, rest = line.partition(' ')
    return head, rest.strip()


def parse_pattern_line(line: str, alphabet: Alphabet, dim: Optional[int] = None,
                       number: Optional[int] = None) -> Pattern:
    """`(site):tok (site):tok ...`"""
    entries = _ENTRY_RE.findall(line)
    if not entries or _ENTRY_RE.sub('', line).strip():
        raise ParseError(f"bad pattern {line!r}", number)
    assignment: Dict[Tuple[int, ...], int] = {}
    try:
        for site_text, token in entries:
            site = parse_site(site_text)
            if site in assignment:
                raise ParseError(f"site {format_site(site)} assigned twice", number)
            assignment[site] = alphabet.index(token)
        pattern = Pattern.from_mapping(assignment, dim)
    except ParseError as exc:
        if exc.line is None and number is not None:
            raise ParseError(str(exc), number) from exc
        raise
    except CertifyError as exc:
        raise ParseError(str(exc), number) from exc
    return pattern


def _header(lines: List[Tuple[int, str]], kind: str) -> Tuple[int, Alphabet, int]:
    """`dim` and `alphabet` lines; returns (dim, alphabet, index of the next line)"""
    if len(lines) < 2:
        raise ParseError(f"{kind} file needs `dim` and `alphabet` lines")
    (n1, first), (n2, second) = lines[0], lines[1]
    key, value = _keyword(first)
    if key != 'dim' or not value.isdigit() or int(value) < 1:
        raise ParseError(f"expected `dim <d>`, got {first!r}", n1)
    key, value = _keyword(second)
    if key != 'alphabet' or not value:
        raise ParseError(f"expected `alphabet <tok> ...`, got {second!r}", n2)
    try:
        alphabet = Alphabet.of(value.split())
    except ParseError as exc:
        raise ParseError(str(exc), n2) from exc
    return int(first.split()[1]), alphabet, 2


def _forbidden_block(lines: List[Tuple[int, str]], start: int, alphabet: Alphabet,
                     dim: int) -> Tuple[List[Pattern], int]:
    number, line = lines[start]
    if line != 'forbidden':
        raise ParseError(f"expected `forbidden`, got {line!r}", number)
    patterns = []
    i = start + 1
    while i < len(lines):
        number, line = lines[i]
        if line == 'end':
            return patterns, i + 1
        pattern = parse_pattern_line(line, alphabet, dim, number)
        if pattern.dim != dim:
            raise ParseError(f"pattern of dimension {pattern.dim} in a {dim}-dimensional file", number)
        patterns.append(pattern)
        i += 1
    raise ParseError("`forbidden` block is missing its `end`", number)


def parse_sft(text: str) -> SftSpec:
    lines = list(_lines(text))
    dim, alphabet, i = _header(lines, 'SFT')
    forbidden: List[Pattern] = []
    si_gap = None
    seen = set()
    while i < len(lines):
        number, line = lines[i]
        key, value = _keyword(line)
        if key in seen:
            raise ParseError(f"duplicate `{key}` section", number)
        seen.add(key)
        if key == 'forbidden':
            forbidden, i = _forbidden_block(lines, i, alphabet, dim)
            continue
        if key == 'si_gap':
            if not value.isdigit():
                raise ParseError(f"si_gap must be a nonnegative integer, got {value!r}", number)
            si_gap = int(value)
        else:
            raise ParseError(f"unexpected line {line!r}", number)
        i += 1
    try:
        return SftSpec(alphabet, dim, tuple(forbidden), si_gap)
    except CertifyError as exc:
        raise ParseError(str(exc)) from exc


def format_sft(spec: SftSpec) -> str:
    out = [f"dim {spec.dim}", 'alphabet ' + ' '.join(spec.alphabet.symbols), 'forbidden']
    out.extend(w.literal(spec.alphabet) for w in spec.forbidden)
    out.append('end')
    if spec.si_gap is not None:
        out.append(f"si_gap {spec.si_gap}")
    return '\n'.join(out) + '\n'


def parse_enumeration(text: str) -> ForbiddenEnumeration:
    """A finite forbidden list in the SFT format; any si_gap line is ignored"""
    spec = parse_sft(text)
    return ForbiddenEnumeration.from_list(spec.alphabet, spec.dim, spec.forbidden)


def parse_potential(text: str) -> LocallyConstantPotential:
    lines = list(_lines(text))
    dim, alphabet, i = _header(lines, 'potential')
    if i >= len(lines):
        raise ParseError("potential file needs a `window` line")
    number, line = lines[i]
    key, value = _keyword(line)
    if key != 'window':
        raise ParseError(f"expected `window (site) ...`, got {line!r}", number)
    try:
        sites = [parse_site(tok) for tok in re.findall(r'\([^()]*\)', value)]
        if not sites or re.sub(r'\([^()]*\)', '', value).strip():
            raise ParseError(f"bad window {value!r}", number)
        if len(set(sites)) != len(sites):
            raise ParseError("window sites must be distinct", number)
        window = Shape.of(sites, dim)
    except ParseError as exc:
        if exc.line is not None:
            raise
        raise ParseError(str(exc), number) from exc
    except CertifyError as exc:
        raise ParseError(str(exc), number) from exc
    order = [window.index(s) for s in sites]

    table: Dict[Tuple[int, ...], Fraction] = {}
    default = Fraction(0)
    has_default = False
    for number, line in lines[i + 1:]:
        key, value = _keyword(line)
        if key == 'entry':
            tokens, sep, rational = value.partition(':')
            if not sep:
                raise ParseError(f"entry needs `: <p>/<q>`, got {line!r}", number)
            symbols = tokens.split()
            if len(symbols) != len(sites):
                raise ParseError(f"entry has {len(symbols)} symbols for a window of {len(sites)}", number)
            key_in_window_order = [0] * len(sites)
            for position, token in zip(order, symbols):
                try:
                    key_in_window_order[position] = alphabet.index(token)
                except ParseError as exc:
                    raise ParseError(str(exc), number) from exc
            entry_key = tuple(key_in_window_order)
            if entry_key in table:
                raise ParseError(f"duplicate entry {tokens.strip()!r}", number)
            table[entry_key] = parse_rational(rational, number)
        elif key == 'default':
            if has_default:
                raise ParseError("duplicate `default` line", number)
            default = parse_rational(value, number)
            has_default = True
        else:
            raise ParseError(f"unexpected line {line!r}", number)
    try:
        return LocallyConstantPotential.build(alphabet, window, table, default)
    except CertifyError as exc:
        raise ParseError(str(exc)) from exc


def format_potential(pot: LocallyConstantPotential) -> str:
    out = [f"dim {pot.dim}", 'alphabet ' + ' '.join(pot.alphabet.symbols),
           'window ' + ' '.join(format_site(s) for s in pot.window.sites)]
    for key, value in pot.table:
        out.append('entry ' + ' '.join(pot.alphabet.token(s) for s in key) + f" : {format_rational(value)}")
    out.append(f"default {format_rational(pot.default)}")
    return '\n'.join(out) + '\n'


def parse_pattern(text: str, alphabet: Alphabet, dim: int) -> Pattern:
    """A pattern file: an optional `dim` line and one line of `(site):tok` entries"""
    lines = list(_lines(text))
    if lines and _keyword(lines[0][1])[0] == 'dim':
        number, line = lines.pop(0)
        if _keyword(line)[1] != str(dim):
            raise ParseError(f"pattern file declares {line!r}, expected dim {dim}", number)
    if len(lines) != 1:
        raise ParseError(f"pattern file needs exactly one pattern line, found {len(lines)}")
    number, line = lines[0]
    return parse_pattern_line(line, alphabet, dim, number)


def format_pattern(pattern: Pattern, alphabet: Alphabet) -> str:
    return f"dim {pattern.dim}\n{pattern.literal(alphabet)}\n"
