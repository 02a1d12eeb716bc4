"""
Finite shapes in Z^d: sites, boxes, translates and window interiors.

Shapes keep their sites sorted lexicographically, so equal shapes compare
equal and every enumeration downstream walks sites in the same order.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice, product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple
import re

from .errors import DimensionMismatch, ParseError, ShapeError

Site = Tuple[int, ...]

COORD_LIMIT = 10 ** 6


def _check_site(site: Site, dim: int) -> None:
    if len(site) != dim:
        raise DimensionMismatch(f"site {site} has dimension {len(site)}, expected {dim}")
    for coord in site:
        if abs(coord) > COORD_LIMIT:
            raise ShapeError(f"coordinate {coord} outside +-{COORD_LIMIT}")


def add_sites(a: Site, b: Site) -> Site:
    return tuple(x + y for x, y in zip(a, b))


def sub_sites(a: Site, b: Site) -> Site:
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class Shape:
    """A finite subset of Z^dim"""
    sites: Tuple[Site, ...]
    dim: int
    _members: FrozenSet[Site] = field(init=False, repr=False, compare=False, hash=False)
    _positions: Dict[Site, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ShapeError(f"dimension must be positive, got {self.dim}")
        object.__setattr__(self, '_members', frozenset(self.sites))
        object.__setattr__(self, '_positions', {s: i for i, s in enumerate(self.sites)})

    @classmethod
    def of(cls, sites: Iterable[Sequence[int]], dim: int = None) -> 'Shape':
        normalized = {tuple(int(c) for c in site) for site in sites}
        if dim is None:
            if not normalized:
                raise ShapeError("cannot infer the dimension of an empty shape")
            dim = len(next(iter(normalized)))
        for site in normalized:
            _check_site(site, dim)
        return cls(tuple(sorted(normalized)), dim)

    @classmethod
    def origin(cls, dim: int) -> 'Shape':
        return cls(((0,) * dim,), dim)

    def __len__(self) -> int:
        return len(self.sites)

    def __iter__(self) -> Iterator[Site]:
        return iter(self.sites)

    def __contains__(self, site) -> bool:
        return tuple(site) in self._members

    def index(self, site: Site) -> int:
        """Position of a site in canonical order"""
        return self._positions[site]

    def issubset(self, other: 'Shape') -> bool:
        return self._members <= other._members

    def translate(self, offset: Site) -> 'Shape':
        _check_site(tuple(offset), self.dim)
        return Shape.of((add_sites(s, offset) for s in self.sites), self.dim)

    def bounding_box(self) -> 'Box':
        if not self.sites:
            raise ShapeError("empty shape has no bounding box")
        lo = tuple(min(s[i] for s in self.sites) for i in range(self.dim))
        hi = tuple(max(s[i] for s in self.sites) for i in range(self.dim))
        return Box(lo, hi)

    def is_box(self) -> bool:
        return bool(self.sites) and len(self) == self.bounding_box().size

    def __str__(self) -> str:
        return format_shape(self)


@dataclass(frozen=True)
class Box:
    """The product of inclusive integer ranges [lo_i, hi_i]"""
    lo: Site
    hi: Site

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise DimensionMismatch(f"box corners {self.lo} and {self.hi} differ in dimension")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ShapeError(f"box corner {self.lo} is not below {self.hi}")
        _check_site(self.lo, len(self.lo))
        _check_site(self.hi, len(self.hi))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def sides(self) -> Tuple[int, ...]:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        total = 1
        for side in self.sides:
            total *= side
        return total

    def shape(self) -> Shape:
        return _box_shape(self.lo, self.hi)

    def thicken(self, radius: int) -> 'Box':
        return Box(tuple(a - radius for a in self.lo), tuple(b + radius for b in self.hi))

    def translate(self, offset: Site) -> 'Box':
        return Box(add_sites(self.lo, offset), add_sites(self.hi, offset))

    def __contains__(self, site) -> bool:
        return all(a <= c <= b for a, c, b in zip(self.lo, site, self.hi))

    def __str__(self) -> str:
        return 'box(' + ', '.join(f"{a}..{b}" for a, b in zip(self.lo, self.hi)) + ')'


@lru_cache(maxsize=256)
def _box_shape(lo: Site, hi: Site) -> Shape:
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return Shape(tuple(product(*ranges)), len(lo))


def box(radius: int, dim: int) -> Box:
    """[-radius, radius]^dim"""
    if radius < 0:
        raise ShapeError(f"radius must be nonnegative, got {radius}")
    if dim < 1:
        raise ShapeError(f"dimension must be positive, got {dim}")
    return Box((-radius,) * dim, (radius,) * dim)


def side_box(side: int, dim: int) -> Box:
    """[0, side-1]^dim"""
    if side < 1:
        raise ShapeError(f"box side must be positive, got {side}")
    return Box((0,) * dim, (side - 1,) * dim)


def _same_dim(a: Shape, b: Shape) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim} differ")


def e_interior(s: Shape, e: Shape) -> Shape:
    """Sites g of s with e + g contained in s"""
    _same_dim(s, e)
    if not len(s) or not len(e):
        raise ShapeError("e_interior needs nonempty shapes")
    kept = [g for g in s.sites if all(add_sites(g, w) in s for w in e.sites)]
    return Shape(tuple(kept), s.dim)


def minkowski_sum(a: Shape, b: Shape) -> Shape:
    _same_dim(a, b)
    return Shape.of((add_sites(x, y) for x in a.sites for y in b.sites), a.dim)


def translate(s: Shape, g: Site) -> Shape:
    return s.translate(g)


def spiral_order(dim: int) -> Iterator[Site]:
    """Z^dim by increasing infinity-norm shells, lexicographic within a shell"""
    radius = 0
    while True:
        for site in product(range(-radius, radius + 1), repeat=dim):
            if max((abs(c) for c in site), default=0) == radius:
                yield site
        radius += 1


@lru_cache(maxsize=512)
def growth_set(t: int, dim: int) -> Shape:
    """G_t: the first t sites of the spiral order"""
    if t < 1:
        raise ShapeError(f"growth index must be positive, got {t}")
    return Shape.of(islice(spiral_order(dim), t), dim)


_SITE_RE = re.compile(r'\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)')
_BOX_RE = re.compile(r'box\(([^)]*)\)')
_RANGE_RE = re.compile(r'^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$')


def parse_site(text: str) -> Site:
    match = _SITE_RE.fullmatch(text.strip())
    if not match:
        raise ParseError(f"bad site literal {text!r}")
    return tuple(int(c) for c in match.group(1).split(','))


def format_site(site: Site) -> str:
    return '(' + ','.join(str(c) for c in site) + ')'


def parse_shape(text: str, dim: int = None) -> Shape:
    """Parse `(x,y) (x,y) ...` or `box(lo..hi, lo..hi)`"""
    text = text.strip()
    box_match = _BOX_RE.fullmatch(text)
    if box_match:
        lo: List[int] = []
        hi: List[int] = []
        for part in box_match.group(1).split(','):
            bounds = _RANGE_RE.match(part)
            if not bounds:
                raise ParseError(f"bad box range {part!r}")
            lo.append(int(bounds.group(1)))
            hi.append(int(bounds.group(2)))
        try:
            shape = Box(tuple(lo), tuple(hi)).shape()
        except ShapeError as exc:
            raise ParseError(str(exc)) from exc
    else:
        tokens = _SITE_RE.findall(text)
        if not tokens or _SITE_RE.sub('', text).strip():
            raise ParseError(f"bad shape literal {text!r}")
        try:
            shape = Shape.of((tuple(int(c) for c in tok.split(',')) for tok in tokens))
        except (ShapeError, DimensionMismatch) as exc:
            raise ParseError(str(exc)) from exc
    if dim is not None and shape.dim != dim:
        raise ParseError(f"shape has dimension {shape.dim}, expected {dim}")
    return shape


def format_shape(shape: Shape) -> str:
    if shape.is_box():
        return str(shape.bounding_box())
    return ' '.join(format_site(s) for s in shape.sites)
