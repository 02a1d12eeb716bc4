"""
Locally constant rational potentials and the oracle sequences that stand in
for general continuous potentials.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Mapping, Optional, Tuple, Union
import logging
import math
import threading

from .budget import Budget, resolve
from .errors import InsufficientDomain, InvalidPotential, OracleFailure
from .lattice import Shape, Site, add_sites, minkowski_sum
from .subshift import Alphabet, Pattern, SftSpec

logger = logging.getLogger(__name__)

Key = Tuple[int, ...]


@dataclass(frozen=True)
class LocallyConstantPotential:
    """A value table over window patterns plus a default for unlisted ones"""
    alphabet: Alphabet
    window: Shape
    table: Tuple[Tuple[Key, Fraction], ...] = ()
    default: Fraction = Fraction(0)
    _lookup: Dict[Key, Fraction] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        origin = (0,) * self.window.dim
        if origin not in self.window:
            raise InvalidPotential("potential window must contain the origin")
        lookup: Dict[Key, Fraction] = {}
        for key, value in self.table:
            key = tuple(key)
            if len(key) != len(self.window):
                raise InvalidPotential(f"table key {key} does not match a window of {len(self.window)} sites")
            if any(not 0 <= s < len(self.alphabet) for s in key):
                raise InvalidPotential(f"table key {key} uses a symbol outside the alphabet")
            lookup[key] = Fraction(value)
        object.__setattr__(self, 'table', tuple(sorted(lookup.items())))
        object.__setattr__(self, 'default', Fraction(self.default))
        object.__setattr__(self, '_lookup', lookup)

    @classmethod
    def build(cls, alphabet: Alphabet, window: Shape, table: Mapping[Key, Union[Fraction, int]],
              default: Union[Fraction, int] = 0) -> 'LocallyConstantPotential':
        return cls(alphabet, window, tuple((tuple(k), Fraction(v)) for k, v in table.items()), Fraction(default))

    @classmethod
    def zero(cls, alphabet: Alphabet, dim: int) -> 'LocallyConstantPotential':
        return cls(alphabet, Shape.origin(dim))

    @classmethod
    def constant(cls, alphabet: Alphabet, dim: int, value: Union[Fraction, int]) -> 'LocallyConstantPotential':
        return cls(alphabet, Shape.origin(dim), (), Fraction(value))

    @classmethod
    def single_site(cls, alphabet: Alphabet, dim: int,
                    values: Mapping[Union[str, int], Union[Fraction, int]]) -> 'LocallyConstantPotential':
        """Values keyed by symbol token or index; unlisted symbols get 0"""
        table = {}
        for symbol, value in values.items():
            index = alphabet.index(symbol) if isinstance(symbol, str) else int(symbol)
            table[(index,)] = Fraction(value)
        return cls.build(alphabet, Shape.origin(dim), table)

    @property
    def dim(self) -> int:
        return self.window.dim

    @property
    def is_single_site(self) -> bool:
        return len(self.window) == 1

    @property
    def is_complete(self) -> bool:
        """Every window pattern is listed, so the default is never read"""
        return len(self._lookup) == len(self.alphabet) ** len(self.window)

    def value(self, key: Key) -> Fraction:
        return self._lookup.get(tuple(key), self.default)

    def values(self) -> Tuple[Fraction, ...]:
        """Every value the potential takes"""
        found = set(self._lookup.values())
        if not self.is_complete:
            found.add(self.default)
        return tuple(sorted(found))

    def min_value(self) -> Fraction:
        return self.values()[0]

    def read(self, v: Pattern, g: Site) -> Key:
        """The window pattern of v at offset g"""
        return tuple(v.at(add_sites(g, w)) for w in self.window.sites)


def sup_norm(p: LocallyConstantPotential) -> Fraction:
    return max(abs(v) for v in p.values())


def add_constant(p: LocallyConstantPotential, c: Union[Fraction, int]) -> LocallyConstantPotential:
    c = Fraction(c)
    return LocallyConstantPotential(p.alphabet, p.window, tuple((k, v + c) for k, v in p.table), p.default + c)


def scale(p: LocallyConstantPotential, beta: Union[Fraction, int]) -> LocallyConstantPotential:
    beta = Fraction(beta)
    return LocallyConstantPotential(p.alphabet, p.window, tuple((k, v * beta) for k, v in p.table), p.default * beta)


def ergodic_sum(p: LocallyConstantPotential, v: Pattern, f: Shape) -> Fraction:
    """Sum over g in f of p read from v at offset g"""
    needed = minkowski_sum(p.window, f)
    if not needed.issubset(v.domain):
        raise InsufficientDomain(f"pattern domain does not cover window + shape ({len(needed)} sites)")
    return sum((p.value(p.read(v, g)) for g in f.sites), Fraction(0))


def sft_embedding_potential(spec: SftSpec, budget: Optional[Budget] = None) -> LocallyConstantPotential:
    """
    -1 on windows where some forbidden pattern occurs at its own position,
    0 elsewhere. The window is the bounding box of all forbidden domains and
    the origin.
    """
    if not spec.forbidden:
        raise InvalidPotential("the embedding potential needs a nonempty forbidden list")
    budget = resolve(budget)
    origin = (0,) * spec.dim
    sites = {origin}
    for w in spec.forbidden:
        sites.update(w.domain.sites)
    window = Shape.of(sites, spec.dim).bounding_box().shape()
    budget.check_patterns(len(spec.alphabet) ** len(window), "embedding potential table")
    placements = [tuple(window.index(s) for s in w.domain.sites) for w in spec.forbidden]
    table = {}
    for key in product(range(len(spec.alphabet)), repeat=len(window)):
        for positions, w in zip(placements, spec.forbidden):
            if all(key[p] == s for p, s in zip(positions, w.symbols)):
                table[key] = Fraction(-1)
                break
    return LocallyConstantPotential.build(spec.alphabet, window, table, 0)


class PotentialOracle:
    """
    k -> gamma(k), a locally constant potential within 2^-k of the
    represented one in sup norm. Terms are computed once and cached.
    """

    def __init__(self, approximation: Callable[[int], LocallyConstantPotential], name: str = 'oracle'):
        self._approximation = approximation
        self.name = name
        self._cache: Dict[int, LocallyConstantPotential] = {}
        self._lock = threading.Lock()

    @classmethod
    def exact(cls, p: LocallyConstantPotential) -> 'PotentialOracle':
        return cls(lambda k: p, name='exact')

    def __call__(self, k: int) -> LocallyConstantPotential:
        if k < 1:
            raise ValueError("oracle index must be positive")
        with self._lock:
            if k not in self._cache:
                try:
                    term = self._approximation(k)
                except Exception as exc:
                    raise OracleFailure(f"{self.name} failed at k={k}: {exc}") from exc
                if not isinstance(term, LocallyConstantPotential):
                    raise OracleFailure(f"{self.name} returned {type(term).__name__} at k={k}")
                self._cache[k] = term
            return self._cache[k]

    def scaled(self, beta: Union[Fraction, int]) -> 'PotentialOracle':
        """Oracle for beta*phi: beta * gamma(k + s) with 2^s >= |beta|"""
        beta = Fraction(beta)
        shift = max(0, math.ceil(math.log2(abs(beta)))) if beta else 0
        while 2 ** shift < abs(beta):
            shift += 1
        return PotentialOracle(lambda k: scale(self(k + shift), beta), name=f"{beta}*{self.name}")


def upper_regularization(o: PotentialOracle, k: int) -> LocallyConstantPotential:
    """psi_k = gamma(k) + 2^-k, which dominates the represented potential"""
    return add_constant(o(k), Fraction(1, 2 ** k))

