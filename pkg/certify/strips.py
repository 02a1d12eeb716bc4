"""
Strip contraction: partition functions of finite shapes by a profile
dynamic programme.

Sites are assigned in canonical order. The state after position i is the
last L assigned symbols, where L is the largest span (in canonical
positions) of any forbidden or weight placement, so every placement is
checked exactly once, at its last position.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from gmpy2 import mpfr

from .budget import Budget, resolve
from .errors import DimensionMismatch, EmptySubshift
from .lattice import Shape, add_sites
from .potential import LocallyConstantPotential
from .rigor import DEFAULT_PRECISION, DyadicInterval, down, iv_exp, up
from .subshift import Pattern, placement_plan

logger = logging.getLogger(__name__)

_PAD = -1


@dataclass(frozen=True)
class _Step:
    forbidden: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]
    weights: Tuple[Tuple[int, ...], ...]


def _compile(shape: Shape, forbidden: Sequence[Pattern],
             potential: Optional[LocallyConstantPotential], anchors: Optional[Shape]) -> Tuple[int, List[_Step]]:
    """Per-position placements, in window offsets relative to a state of width L"""
    plan = placement_plan(shape, tuple(forbidden))
    weight_plan: List[List[Tuple[int, ...]]] = [[] for _ in range(len(shape))]
    if potential is not None:
        for g in anchors.sites:
            positions = tuple(shape.index(add_sites(g, w)) for w in potential.window.sites)
            weight_plan[max(positions)].append(positions)
    span = 0
    for i in range(len(shape)):
        for positions, _ in plan[i]:
            span = max(span, i - min(positions))
        for positions in weight_plan[i]:
            span = max(span, i - min(positions))
    steps = []
    for i in range(len(shape)):
        forbidden_here = tuple((tuple(span - (i - p) for p in positions), symbols)
                               for positions, symbols in plan[i])
        weights_here = tuple(tuple(span - (i - p) for p in positions) for positions in weight_plan[i])
        steps.append(_Step(forbidden_here, weights_here))
    return span, steps


def _allowed(step: _Step, window: Tuple[int, ...]) -> bool:
    for offsets, symbols in step.forbidden:
        for o, s in zip(offsets, symbols):
            if window[o] != s:
                break
        else:
            return False
    return True


def _sweep(span: int, steps: List[_Step], alphabet_size: int, one, weight, budget: Budget, label: str):
    """
    Run the programme once. `weight(key)` gives the factor of a weight read;
    `one` seeds the empty profile. Arithmetic happens in the caller's context.
    """
    states: Dict[Tuple[int, ...], object] = {(_PAD,) * span: one}
    for i, step in enumerate(steps):
        following: Dict[Tuple[int, ...], object] = {}
        for state, value in states.items():
            for symbol in range(alphabet_size):
                window = state + (symbol,)
                if not _allowed(step, window):
                    continue
                term = value
                for offsets in step.weights:
                    term = term * weight(tuple(window[o] for o in offsets))
                successor = window[1:]
                if successor in following:
                    following[successor] = following[successor] + term
                else:
                    following[successor] = term
        states = following
        budget.check_states(len(states), f"{label}, position {i + 1} of {len(steps)}")
        if not states:
            break
    return states


def strip_count(shape: Shape, forbidden: Sequence[Pattern], alphabet_size: int,
                budget: Optional[Budget] = None) -> int:
    """Exact number of locally admissible patterns on shape"""
    budget = resolve(budget)
    span, steps = _compile(shape, forbidden, None, None)
    states = _sweep(span, steps, alphabet_size, 1, None, budget, f"count on {len(shape)} sites")
    return sum(states.values())


def strip_partition_function(shape: Shape, forbidden: Sequence[Pattern], alphabet_size: int,
                             potential: Optional[LocallyConstantPotential] = None,
                             anchors: Optional[Shape] = None,
                             precision: int = DEFAULT_PRECISION,
                             budget: Optional[Budget] = None) -> DyadicInterval:
    """
    Enclosure of the sum over locally admissible u on shape of
    exp(sum over g in anchors of potential(u | g + window)).

    anchors defaults to the sites g of shape with g + window inside shape.
    """
    budget = resolve(budget)
    if potential is None or not any(potential.values()):
        count = strip_count(shape, forbidden, alphabet_size, budget)
        if count == 0:
            raise EmptySubshift(f"no admissible pattern on {len(shape)} sites")
        return DyadicInterval.point(count, precision)
    if potential.dim != shape.dim:
        raise DimensionMismatch(f"potential of dimension {potential.dim} on a {shape.dim}-dimensional shape")
    if anchors is None:
        anchors = Shape(tuple(g for g in shape.sites
                              if all(add_sites(g, w) in shape for w in potential.window.sites)), shape.dim)
    span, steps = _compile(shape, forbidden, potential, anchors)
    logger.debug(f"strip contraction on {len(shape)} sites with profile width {span}")

    factors = {value: iv_exp(value, precision) for value in potential.values()}
    lo_table = {key: factors[value].lo for key, value in potential.table}
    hi_table = {key: factors[value].hi for key, value in potential.table}
    if potential.is_complete:
        lo_default = hi_default = None
    else:
        lo_default, hi_default = factors[potential.default].lo, factors[potential.default].hi

    label = f"weighted contraction on {len(shape)} sites"
    with down(precision):
        lo_states = _sweep(span, steps, alphabet_size, mpfr(1),
                           lambda key: lo_table.get(key, lo_default), budget, label)
        lo = sum(lo_states.values(), mpfr(0))
    with up(precision):
        hi_states = _sweep(span, steps, alphabet_size, mpfr(1),
                           lambda key: hi_table.get(key, hi_default), budget, label)
        hi = sum(hi_states.values(), mpfr(0))
    if not hi_states:
        raise EmptySubshift(f"no admissible pattern on {len(shape)} sites")
    return DyadicInterval(lo, hi, precision)
