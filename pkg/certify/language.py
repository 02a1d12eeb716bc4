"""
Global admissibility for strongly irreducible SFTs, the extendability sets
used by the anytime upper bounds, and the language providers the pressure
estimators consume.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Callable, Dict, FrozenSet, List, Optional, Set, Tuple
import logging
import threading

from .budget import Budget, resolve
from .errors import (
    DimensionMismatch, MissingGap, OracleFailure, ResourceLimitExceeded, ShapeError, UndecidedLanguage,
)
from .lattice import Box, Shape, box, growth_set, minkowski_sum
from .subshift import (
    ForbiddenEnumeration, Pattern, SftSpec, exists_locally_admissible, is_locally_admissible,
    iter_locally_admissible,
)

logger = logging.getLogger(__name__)


class Verdict(Enum):
    IN = 'IN'
    OUT = 'OUT'
    UNDECIDED = 'UNDECIDED'


@dataclass(frozen=True)
class Decision:
    """A membership answer and the level it was reached at"""
    verdict: Verdict
    level: int

    def __str__(self) -> str:
        if self.verdict is Verdict.UNDECIDED:
            return f"UNDECIDED(level={self.level})"
        return self.verdict.value


@dataclass(frozen=True)
class NestedBoxes:
    """F_m = [-m*step, m*step]^dim, so F_0 is the origin"""
    dim: int
    step: int

    def box(self, m: int) -> Box:
        return box(m * self.step, self.dim)

    def shape(self, m: int) -> Shape:
        return self.box(m).shape()

    def level_of(self, domain: Shape) -> int:
        """Smallest m with domain inside F_m"""
        if domain.dim != self.dim:
            raise DimensionMismatch(f"domain of dimension {domain.dim} for {self.dim}-dimensional boxes")
        reach = max(abs(c) for site in domain.sites for c in site)
        return -(-reach // self.step)

    def annulus(self, m: int) -> Tuple[Tuple[int, ...], ...]:
        """Sites of F_m outside F_{m-1}"""
        if m < 1:
            raise ShapeError("the annulus needs m >= 1")
        inner = self.box(m - 1)
        return tuple(s for s in self.shape(m).sites if s not in inner)


def canonical_boxes(spec: SftSpec) -> NestedBoxes:
    """
    Step r+1 with r the larger of the asserted gap and the reach of the
    forbidden patterns, so F_m + [-r, r]^d lies inside F_{m+1} and every
    forbidden placement crossing the boundary of F_N sees only the annulus.
    """
    if spec.si_gap is None:
        raise MissingGap("deciding the language needs an asserted si_gap")
    reach = max(spec.extents()) - 1
    return NestedBoxes(spec.dim, max(spec.si_gap, reach) + 1)


@dataclass(frozen=True)
class _Sweep:
    restrictions: FrozenSet[Tuple[int, ...]]
    traces: Tuple[Tuple[int, ...], ...]


class DecisionProcedure:
    """
    Memoized membership decisions for one spec.

    Sweeps over the locally admissible patterns of F_N depend only on (n, N)
    and are shared between queries; compatibility answers are keyed on the
    candidate and the annulus trace.
    """

    def __init__(self, spec: SftSpec, budget: Optional[Budget] = None):
        self.spec = spec
        self.boxes = canonical_boxes(spec)
        self.budget = resolve(budget)
        self._sweeps: Dict[Tuple[int, int], _Sweep] = {}
        self._compatible: Dict[Tuple, bool] = {}
        self._lock = threading.RLock()

    def _la(self, shape: Shape, fixed=None):
        return iter_locally_admissible(shape, self.spec.forbidden, len(self.spec.alphabet), fixed)

    def sweep(self, n: int, big_n: int) -> _Sweep:
        with self._lock:
            key = (n, big_n)
            if key not in self._sweeps:
                outer = self.boxes.shape(big_n)
                inner_positions = [outer.index(s) for s in self.boxes.shape(n).sites]
                annulus_positions = [outer.index(s) for s in self.boxes.annulus(big_n)]
                restrictions: Set[Tuple[int, ...]] = set()
                traces: Set[Tuple[int, ...]] = set()
                for count, b in enumerate(self._la(outer), 1):
                    if count > self.budget.max_patterns:
                        raise ResourceLimitExceeded('patterns', count, self.budget.max_patterns,
                                                    f"language sweep on F_{big_n} ({len(outer)} sites)")
                    restrictions.add(tuple(b[p] for p in inner_positions))
                    traces.add(tuple(b[p] for p in annulus_positions))
                logger.debug(f"sweep F_{n} in F_{big_n}: {len(restrictions)} restrictions, {len(traces)} traces")
                self._sweeps[key] = _Sweep(frozenset(restrictions), tuple(sorted(traces)))
            return self._sweeps[key]

    def compatible_trace(self, a: Tuple[int, ...], n: int, big_n: int, trace: Tuple[int, ...]) -> bool:
        """A locally admissible c on F_N equal to a on F_n and to the trace on the annulus exists"""
        key = (a, n, big_n, trace)
        with self._lock:
            if key in self._compatible:
                return self._compatible[key]
        outer = self.boxes.shape(big_n)
        fixed = {outer.index(s): sym for s, sym in zip(self.boxes.shape(n).sites, a)}
        fixed.update({outer.index(s): sym for s, sym in zip(self.boxes.annulus(big_n), trace)})
        answer = exists_locally_admissible(outer, self.spec.forbidden, len(self.spec.alphabet), fixed)
        with self._lock:
            self._compatible[key] = answer
        return answer

    def decide(self, v: Pattern, max_level: Optional[int] = None) -> Decision:
        if v.dim != self.spec.dim:
            raise DimensionMismatch(f"pattern of dimension {v.dim} for a {self.spec.dim}-dimensional spec")
        max_level = max_level or self.budget.max_level
        if not is_locally_admissible(v, self.spec.forbidden):
            return Decision(Verdict.OUT, 0)
        n = self.boxes.level_of(v.domain)
        home = self.boxes.shape(n)
        fixed = {home.index(s): sym for s, sym in zip(v.domain.sites, v.symbols)}
        candidates = set()
        for a in self._la(home, fixed):
            candidates.add(a)
            if len(candidates) > self.budget.max_patterns:
                raise ResourceLimitExceeded('patterns', len(candidates), self.budget.max_patterns,
                                            f"extensions on F_{n}")
        if not candidates:
            return Decision(Verdict.OUT, 0)
        for level in range(1, max_level + 1):
            big_n = n + level
            sweep = self.sweep(n, big_n)
            candidates &= sweep.restrictions
            if not candidates:
                return Decision(Verdict.OUT, level)
            for a in sorted(candidates):
                if all(self.compatible_trace(a, n, big_n, t) for t in sweep.traces):
                    return Decision(Verdict.IN, level)
        return Decision(Verdict.UNDECIDED, max_level)


_procedures: Dict[SftSpec, DecisionProcedure] = {}
_procedures_lock = threading.Lock()


def procedure_for(spec: SftSpec, budget: Optional[Budget] = None) -> DecisionProcedure:
    budget = resolve(budget)
    with _procedures_lock:
        found = _procedures.get(spec)
        if found is None or found.budget != budget:
            found = DecisionProcedure(spec, budget)
            _procedures[spec] = found
        return found


def compatible(a: Pattern, b: Pattern, spec: SftSpec, boxes: Optional[NestedBoxes] = None) -> bool:
    """
    a on F_n, b on F_N with N > n. True iff some locally admissible c on F_N
    restricts to a on F_n and agrees with b on F_N minus F_{N-1}.
    """
    boxes = boxes or canonical_boxes(spec)
    n, big_n = boxes.level_of(a.domain), boxes.level_of(b.domain)
    if a.domain != boxes.shape(n) or b.domain != boxes.shape(big_n):
        raise ShapeError("compatible expects patterns on boxes of the nested sequence")
    if big_n <= n:
        raise ShapeError(f"b must live on a larger box than a (levels {n} and {big_n})")
    fixed = {b.domain.index(s): sym for s, sym in zip(a.domain.sites, a.symbols)}
    for s in boxes.annulus(big_n):
        fixed[b.domain.index(s)] = b.at(s)
    return exists_locally_admissible(b.domain, spec.forbidden, len(spec.alphabet), fixed)


def decide_globally_admissible(v: Pattern, spec: SftSpec, max_level: int,
                               budget: Optional[Budget] = None) -> Decision:
    if max_level < 1:
        raise ValueError("max_level must be positive")
    return procedure_for(spec, budget).decide(v, max_level)


@dataclass(frozen=True)
class ExtendabilityParams:
    t: int
    n: int

    def __post_init__(self):
        if self.t < 1 or self.n < 1:
            raise ValueError(f"extendability parameters must be positive, got t={self.t}, n={self.n}")


def extendable_set(f: Shape, p: ExtendabilityParams, enumeration: ForbiddenEnumeration,
                   budget: Optional[Budget] = None) -> List[Pattern]:
    """
    Patterns w on f, locally admissible for the first n forbidden words, that
    extend to a locally admissible pattern on f + G_t. Canonical order.
    """
    if not len(f):
        raise ShapeError("extendable_set needs a nonempty shape")
    if f.dim != enumeration.dim:
        raise DimensionMismatch(f"shape of dimension {f.dim} for a {enumeration.dim}-dimensional enumeration")
    budget = resolve(budget)
    forbidden = enumeration.prefix(p.n)
    size = len(enumeration.alphabet)
    thick = minkowski_sum(f, growth_set(p.t, f.dim))
    positions = [thick.index(s) for s in f.sites]
    result = []
    for w in iter_locally_admissible(f, forbidden, size):
        fixed = dict(zip(positions, w))
        if exists_locally_admissible(thick, forbidden, size, fixed):
            result.append(Pattern(f, w))
            budget.check_patterns(len(result), f"extendable set on {len(f)} sites")
    return result


class LanguageProvider:
    """
    Answers which patterns on a finite shape belong to the language.

    `exact` providers answer on L(X) itself; the others answer on a superset,
    and every estimate built on them is upper-only. `is_local` means the
    answer on every shape is exactly the locally admissible patterns, which
    lets partition functions use strip contraction.
    """
    kind = 'provider'
    exact = True
    is_local = False

    def __init__(self, spec: SftSpec, budget: Optional[Budget] = None):
        self.spec = spec
        self.budget = resolve(budget)

    @property
    def assertions(self) -> FrozenSet[str]:
        return frozenset()

    def contains(self, v: Pattern) -> bool:
        raise NotImplementedError

    def patterns(self, f: Shape) -> List[Pattern]:
        """The accepted patterns on f in canonical order"""
        result = []
        for symbols in iter_locally_admissible(f, self.spec.forbidden, len(self.spec.alphabet)):
            v = Pattern(f, symbols)
            if self.is_local or self.contains(v):
                result.append(v)
            if len(result) > self.budget.max_patterns:
                raise ResourceLimitExceeded('patterns', len(result), self.budget.max_patterns,
                                            f"{self.kind} language on {len(f)} sites")
        return result

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.spec.dim}, forbidden={len(self.spec.forbidden)})"


class FullShift(LanguageProvider):
    kind = 'full_shift'
    is_local = True

    def __init__(self, spec: SftSpec, budget: Optional[Budget] = None):
        if not spec.is_full_shift:
            raise ValueError("FullShift provider on a spec with forbidden patterns")
        super().__init__(spec, budget)

    def contains(self, v: Pattern) -> bool:
        return True

    def patterns(self, f: Shape) -> List[Pattern]:
        size = len(self.spec.alphabet)
        self.budget.check_patterns(size ** len(f), f"full shift on {len(f)} sites")
        return [Pattern(f, symbols) for symbols in product(range(size), repeat=len(f))]


class LocalOverapprox(LanguageProvider):
    """Locally admissible patterns: a superset of the language"""
    kind = 'local_overapprox'
    exact = False
    is_local = True

    def contains(self, v: Pattern) -> bool:
        return is_locally_admissible(v, self.spec.forbidden)


class ExactSI(LanguageProvider):
    """The language of an SFT asserted strongly irreducible with gap si_gap"""
    kind = 'exact_si'

    def __init__(self, spec: SftSpec, budget: Optional[Budget] = None, max_level: Optional[int] = None):
        if spec.si_gap is None:
            raise MissingGap("the ExactSI provider needs an asserted si_gap")
        super().__init__(spec, budget)
        self.max_level = max_level or self.budget.max_level
        self.is_local = spec.has_local_language()
        self._procedure = None if self.is_local else procedure_for(spec, self.budget)

    @property
    def assertions(self) -> FrozenSet[str]:
        return frozenset({'si_gap'})

    def decide(self, v: Pattern) -> Decision:
        if self.is_local:
            verdict = Verdict.IN if is_locally_admissible(v, self.spec.forbidden) else Verdict.OUT
            return Decision(verdict, 0)
        return self._procedure.decide(v, self.max_level)

    def contains(self, v: Pattern) -> bool:
        decision = self.decide(v)
        if decision.verdict is Verdict.UNDECIDED:
            raise UndecidedLanguage(v.literal(self.spec.alphabet), decision.level)
        return decision.verdict is Verdict.IN


class UserOracle(LanguageProvider):
    """Membership answered by a caller supplied predicate; trusted, and recorded as an assertion"""
    kind = 'user_oracle'

    def __init__(self, spec: SftSpec, predicate: Callable[[Pattern], bool], budget: Optional[Budget] = None):
        super().__init__(spec, budget)
        self._predicate = predicate

    @property
    def assertions(self) -> FrozenSet[str]:
        return frozenset({'user_oracle'})

    def contains(self, v: Pattern) -> bool:
        try:
            answer = self._predicate(v)
        except Exception as exc:
            raise OracleFailure(f"language oracle failed on {v.literal(self.spec.alphabet)}: {exc}") from exc
        if not isinstance(answer, bool):
            raise OracleFailure(f"language oracle returned {type(answer).__name__}, expected bool")
        return answer


PROVIDERS = {
    FullShift.kind: FullShift,
    LocalOverapprox.kind: LocalOverapprox,
    ExactSI.kind: ExactSI,
}


def provider_for(spec: SftSpec, kind: Optional[str] = None, budget: Optional[Budget] = None) -> LanguageProvider:
    """The provider named by `kind`, or the strongest one the spec supports"""
    if kind is None:
        if spec.is_full_shift:
            kind = FullShift.kind
        elif spec.si_gap is not None:
            kind = ExactSI.kind
        else:
            kind = LocalOverapprox.kind
            logger.warning("no si_gap asserted; falling back to locally admissible patterns (upper bounds only)")
    try:
        return PROVIDERS[kind](spec, budget)
    except KeyError:
        raise ValueError(f"unknown language provider {kind!r}") from None
