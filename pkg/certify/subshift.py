"""
Patterns, forbidden lists, local admissibility and the SFT data model.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple
import logging
import re
import threading

from .budget import Budget, resolve
from .errors import DimensionMismatch, ParseError, ResourceLimitExceeded
from .lattice import Shape, Site, add_sites, format_site, sub_sites

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r'^[^\s():]+$')


@dataclass(frozen=True)
class Alphabet:
    """Ordered distinct symbol tokens"""
    symbols: Tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ParseError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ParseError(f"alphabet tokens must be unique: {self.symbols}")
        for token in self.symbols:
            if not _TOKEN_RE.match(token):
                raise ParseError(f"bad alphabet token {token!r}")

    @classmethod
    def of(cls, tokens: Iterable[str]) -> 'Alphabet':
        return cls(tuple(str(t) for t in tokens))

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, token: str) -> int:
        try:
            return self.symbols.index(token)
        except ValueError:
            raise ParseError(f"unknown symbol {token!r}") from None

    def token(self, i: int) -> str:
        return self.symbols[i]


@dataclass(frozen=True)
class Pattern:
    """Symbol indices on a shape, aligned with the shape's canonical site order"""
    domain: Shape
    symbols: Tuple[int, ...]

    def __post_init__(self):
        if len(self.symbols) != len(self.domain):
            raise ValueError(f"{len(self.symbols)} symbols for a domain of {len(self.domain)} sites")

    @classmethod
    def from_mapping(cls, assignment: Mapping[Site, int], dim: int = None) -> 'Pattern':
        domain = Shape.of(assignment.keys(), dim)
        return cls(domain, tuple(int(assignment[s]) for s in domain.sites))

    @classmethod
    def word(cls, alphabet: Alphabet, text: str, start: int = 0) -> 'Pattern':
        """1D pattern from single-character tokens, first symbol at `start`"""
        return cls(Shape.of(((start + i,) for i in range(len(text))), 1),
                   tuple(alphabet.index(ch) for ch in text))

    @property
    def dim(self) -> int:
        return self.domain.dim

    def __len__(self) -> int:
        return len(self.symbols)

    def at(self, site: Site) -> int:
        return self.symbols[self.domain.index(tuple(site))]

    def as_dict(self) -> Dict[Site, int]:
        return dict(zip(self.domain.sites, self.symbols))

    def restrict(self, shape: Shape) -> 'Pattern':
        return Pattern(shape, tuple(self.at(s) for s in shape.sites))

    def translate(self, offset: Site) -> 'Pattern':
        return Pattern(self.domain.translate(offset), self.symbols)

    def normalized(self) -> 'Pattern':
        """Translate so the bounding box starts at the origin"""
        lo = self.domain.bounding_box().lo
        return self.translate(tuple(-c for c in lo))

    def text(self, alphabet: Alphabet) -> str:
        return ''.join(alphabet.token(i) for i in self.symbols)

    def literal(self, alphabet: Alphabet) -> str:
        """`(site):tok (site):tok ...`, the form used in spec and pattern files"""
        return ' '.join(f"{format_site(s)}:{alphabet.token(i)}" for s, i in zip(self.domain.sites, self.symbols))


def _check_dims(a: Pattern, b: Pattern) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"patterns of dimension {a.dim} and {b.dim}")


def is_subword_position(w: Pattern, v: Pattern, g: Site) -> bool:
    """w occurs in v with its domain translated by g"""
    _check_dims(w, v)
    for site, symbol in zip(w.domain.sites, w.symbols):
        target = add_sites(site, g)
        if target not in v.domain or v.at(target) != symbol:
            return False
    return True


Placement = Tuple[Tuple[int, ...], Tuple[int, ...]]


@lru_cache(maxsize=1024)
def placement_plan(shape: Shape, forbidden: Tuple[Pattern, ...]) -> Tuple[Tuple[Placement, ...], ...]:
    """
    For each position of `shape`, the forbidden placements whose last site
    (in canonical order) is that position, as (positions, symbols) pairs.
    """
    plan: List[List[Placement]] = [[] for _ in range(len(shape))]
    for w in forbidden:
        if w.dim != shape.dim:
            raise DimensionMismatch(f"forbidden pattern of dimension {w.dim} on a shape of dimension {shape.dim}")
        anchor = w.domain.sites[0]
        for site in shape.sites:
            offset = sub_sites(site, anchor)
            positions = []
            for f in w.domain.sites:
                target = add_sites(f, offset)
                if target not in shape:
                    break
                positions.append(shape.index(target))
            else:
                plan[max(positions)].append((tuple(positions), w.symbols))
    return tuple(tuple(p) for p in plan)


def _clear(placements: Tuple[Placement, ...], assignment: List[int]) -> bool:
    for positions, symbols in placements:
        for p, s in zip(positions, symbols):
            if assignment[p] != s:
                break
        else:
            return False
    return True


def is_locally_admissible(v: Pattern, forbidden: Sequence[Pattern]) -> bool:
    plan = placement_plan(v.domain, tuple(forbidden))
    assignment = list(v.symbols)
    return all(_clear(placements, assignment) for placements in plan)


def iter_locally_admissible(shape: Shape, forbidden: Sequence[Pattern], alphabet_size: int,
                            fixed: Optional[Mapping[int, int]] = None) -> Iterator[Tuple[int, ...]]:
    """
    Depth-first assignment in canonical site order. Positions in `fixed`
    only take their given symbol. Yields symbol tuples in lexicographic order.
    """
    n = len(shape)
    if n == 0:
        yield ()
        return
    plan = placement_plan(shape, tuple(forbidden))
    fixed = fixed or {}
    choices = [(fixed[i],) if i in fixed else range(alphabet_size) for i in range(n)]
    assignment = [0] * n
    stack = [iter(choices[0])]
    while stack:
        i = len(stack) - 1
        symbol = next(stack[-1], None)
        if symbol is None:
            stack.pop()
            continue
        assignment[i] = symbol
        if not _clear(plan[i], assignment):
            continue
        if i == n - 1:
            yield tuple(assignment)
        else:
            stack.append(iter(choices[i + 1]))


def exists_locally_admissible(shape: Shape, forbidden: Sequence[Pattern], alphabet_size: int,
                              fixed: Optional[Mapping[int, int]] = None) -> bool:
    return next(iter_locally_admissible(shape, forbidden, alphabet_size, fixed), None) is not None


@dataclass(frozen=True)
class SftSpec:
    """Alphabet, forbidden patterns and an optional asserted SI gap"""
    alphabet: Alphabet
    dim: int
    forbidden: Tuple[Pattern, ...] = ()
    si_gap: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'forbidden', tuple(self.forbidden))
        if self.dim < 1:
            raise ParseError(f"dimension must be positive, got {self.dim}")
        for w in self.forbidden:
            if w.dim != self.dim:
                raise DimensionMismatch(f"forbidden pattern of dimension {w.dim} in a {self.dim}-dimensional spec")
            if not len(w):
                raise ParseError("forbidden patterns must be nonempty")
            if any(s >= len(self.alphabet) for s in w.symbols):
                raise ParseError("forbidden pattern uses a symbol outside the alphabet")
        if self.si_gap is not None and self.si_gap < 0:
            raise ParseError(f"si_gap must be nonnegative, got {self.si_gap}")

    @classmethod
    def full_shift(cls, alphabet: Alphabet, dim: int) -> 'SftSpec':
        return cls(alphabet, dim, (), 0)

    @property
    def is_full_shift(self) -> bool:
        return not self.forbidden

    def safe_symbol(self) -> Optional[int]:
        """A symbol appearing in no forbidden pattern, if any"""
        used = {s for w in self.forbidden for s in w.symbols}
        for i in range(len(self.alphabet)):
            if i not in used:
                return i
        return None

    def has_local_language(self) -> bool:
        """Every locally admissible pattern on every finite shape is globally admissible"""
        return self.safe_symbol() is not None

    def extents(self) -> Tuple[int, ...]:
        """Per-axis bounding-box side of the largest forbidden pattern (1 when none)"""
        sides = [1] * self.dim
        for w in self.forbidden:
            for axis, side in enumerate(w.domain.bounding_box().sides):
                sides[axis] = max(sides[axis], side)
        return tuple(sides)

    def enumeration(self) -> 'ForbiddenEnumeration':
        return ForbiddenEnumeration.from_list(self.alphabet, self.dim, self.forbidden)


def enumerate_locally_admissible(f: Shape, spec: SftSpec, budget: Optional[Budget] = None) -> List[Pattern]:
    if not len(f):
        raise ValueError("enumerate_locally_admissible needs a nonempty shape")
    if f.dim != spec.dim:
        raise DimensionMismatch(f"shape of dimension {f.dim} for a {spec.dim}-dimensional spec")
    budget = resolve(budget)
    result = []
    for symbols in iter_locally_admissible(f, spec.forbidden, len(spec.alphabet)):
        result.append(Pattern(f, symbols))
        if len(result) > budget.max_patterns:
            raise ResourceLimitExceeded('patterns', len(result), budget.max_patterns,
                                        f"shape of {len(f)} sites; shrink it")
    return result


def enumerate_by_filter(f: Shape, spec: SftSpec) -> List[Pattern]:
    """All |A|^|f| patterns filtered one by one; the reference for the backtracking enumeration"""
    return [Pattern(f, symbols)
            for symbols in product(range(len(spec.alphabet)), repeat=len(f))
            if is_locally_admissible(Pattern(f, symbols), spec.forbidden)]


class ForbiddenEnumeration:
    """
    A demand-driven sequence of forbidden patterns w_1, w_2, ...

    Either a finite list or a callable n -> w_n (1-based) that may go on forever.
    """

    def __init__(self, alphabet: Alphabet, dim: int,
                 patterns: Sequence[Pattern] = (),
                 generator: Optional[Callable[[int], Pattern]] = None):
        self.alphabet = alphabet
        self.dim = dim
        self._generator = generator
        self._materialized: List[Pattern] = list(patterns)
        self._lock = threading.Lock()
        for w in self._materialized:
            self._validate(w)

    @classmethod
    def from_list(cls, alphabet: Alphabet, dim: int, patterns: Sequence[Pattern]) -> 'ForbiddenEnumeration':
        return cls(alphabet, dim, patterns)

    @classmethod
    def from_generator(cls, alphabet: Alphabet, dim: int, generator: Callable[[int], Pattern]) -> 'ForbiddenEnumeration':
        return cls(alphabet, dim, (), generator)

    @property
    def is_finite(self) -> bool:
        return self._generator is None

    def _validate(self, w: Pattern) -> None:
        if w.dim != self.dim:
            raise DimensionMismatch(f"enumerated pattern of dimension {w.dim}, expected {self.dim}")
        if any(s >= len(self.alphabet) for s in w.symbols):
            raise ParseError("enumerated pattern uses a symbol outside the alphabet")

    def prefix(self, n: int) -> Tuple[Pattern, ...]:
        """The first n forbidden words (all of them when a finite list is shorter)"""
        with self._lock:
            while self._generator is not None and len(self._materialized) < n:
                w = self._generator(len(self._materialized) + 1)
                self._validate(w)
                self._materialized.append(w)
            return tuple(self._materialized[:n])

    def sft(self, n: int, si_gap: Optional[int] = None) -> SftSpec:
        return SftSpec(self.alphabet, self.dim, self.prefix(n), si_gap)
