"""Inlays: sub-models picked block by block from a function or model.

An inlay selects ``s`` increasing positions inside each of the ``l`` blocks
(indices of a discrete model, or points of a block interval of the unit
segment) and restricts the source to the selected grid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError, NotHomogeneousError
from .functions import PiecewiseFunction, evaluate
from .homogeneity import HomogeneousSpec, check_homogeneous
from .models import DiscreteModel, order_pattern
from .sampling import sorted_distinct, substream

_BOUNDARY_REDRAWS = 1000


@dataclass(frozen=True)
class InlaySelection:
    """Per-block strictly increasing positions, all blocks the same length.

    Entries are integers in ``[t]`` for discrete sources or rationals in a
    block's sampling window for continuous ones.
    """

    blocks: tuple[tuple, ...]

    def __post_init__(self):
        if not self.blocks:
            raise InvalidInputError("empty selection")
        sizes = {len(b) for b in self.blocks}
        if len(sizes) != 1 or 0 in sizes:
            raise InvalidInputError("blocks must share one positive length")
        for block in self.blocks:
            if any(a >= b for a, b in zip(block, block[1:])):
                raise InvalidInputError(f"block {block} not strictly increasing")

    @property
    def parts(self) -> int:
        return len(self.blocks)

    @property
    def size(self) -> int:
        return len(self.blocks[0])


@dataclass(frozen=True)
class Box:
    """Per-block sampling windows ``(lower_a, upper_a]`` within ``(0, 1]``."""

    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise InvalidInputError("lower/upper length mismatch")
        for lo, hi in zip(self.lower, self.upper):
            if not (0 <= lo < hi <= 1):
                raise InvalidInputError(f"invalid window ({lo}, {hi}]")

    @classmethod
    def full(cls, parts: int) -> "Box":
        return cls(lower=(Fraction(0),) * parts, upper=(Fraction(1),) * parts)


@dataclass(frozen=True)
class InlaySample:
    """A sampled continuous inlay plus its extracted spec when homogeneous."""

    selection: InlaySelection
    model: DiscreteModel
    spec: HomogeneousSpec | None

    @property
    def homogeneous(self) -> bool:
        return self.spec is not None


def extract_inlay(model: DiscreteModel, selection: InlaySelection) -> DiscreteModel:
    """Restrict a model over ``[t*l]^d`` to the selected per-block indices,
    yielding a model over ``[s*l]^d``."""
    parts = selection.parts
    size = selection.size
    t, rem = divmod(model.m, parts)
    if rem != 0:
        raise InvalidInputError(f"side {model.m} not divisible by {parts} blocks")
    for block in selection.blocks:
        if any(not (isinstance(h, int) and 1 <= h <= t) for h in block):
            raise InvalidInputError(f"selection {block} outside [1, {t}]")

    def entry(idx):
        source = []
        for i in idx:
            block = -((-i) // size)
            offset = i - (block - 1) * size
            source.append((block - 1) * t + selection.blocks[block - 1][offset - 1])
        return model.get(tuple(source))

    return DiscreteModel.from_function(model.d, model.k, size * parts, entry)


def find_homogeneous_inlay(
    model: DiscreteModel, parts: int, size: int
) -> tuple[InlaySelection, DiscreteModel] | None:
    """Exhaustive backtracking over per-block selections for an inlay that is
    ``parts``-part homogeneous; lexicographically first result or None.

    Prunes after each completed block by checking consistency of all entries
    whose coordinates lie in the blocks chosen so far.
    """
    if size < model.d:
        raise InvalidInputError(f"size {size} smaller than arity {model.d}")
    t, rem = divmod(model.m, parts)
    if rem != 0:
        raise InvalidInputError(f"side {model.m} not divisible by {parts} blocks")
    if t < size:
        return None

    def consistent(blocks: list[tuple[int, ...]]) -> bool:
        # Partial homogeneity over the currently selected blocks: entries
        # sharing (cells, pattern) must agree.
        level = len(blocks)
        positions = [
            (a - 1) * t + h for a in range(1, level + 1) for h in blocks[a - 1]
        ]
        table: dict = {}
        for sub in itertools.product(range(len(positions)), repeat=model.d):
            cells = tuple(p // size + 1 for p in sub)
            pattern = order_pattern(sub)
            color = model.get(tuple(positions[p] for p in sub))
            if table.setdefault((cells, pattern), color) != color:
                return False
        return True

    chosen: list[tuple[int, ...]] = []

    def extend():
        if len(chosen) == parts:
            sel = InlaySelection(blocks=tuple(chosen))
            return sel, extract_inlay(model, sel)
        for combo in itertools.combinations(range(1, t + 1), size):
            chosen.append(combo)
            if consistent(chosen):
                found = extend()
                if found is not None:
                    return found
            chosen.pop()
        return None

    return extend()


def sample_random_inlay(
    f: PiecewiseFunction,
    parts: int,
    size: int,
    box: Box,
    seed: int,
    index: int = 0,
    avoid_resolution: int | None = None,
) -> InlaySample:
    """Draw ``size`` sorted uniforms per block window and evaluate the
    induced model over ``[size*parts]^d``.

    Deterministic per ``(seed, index)``; batches pass consecutive indices so
    samples are independent of evaluation order.  With ``avoid_resolution``
    set, selections whose mapped coordinates land exactly on that grid's
    cell boundaries (a measure-zero event) are redrawn, so the sample always
    witnesses a positive-measure configuration of a step function at that
    resolution.
    """
    if size < f.d:
        raise InvalidInputError(f"size {size} smaller than arity {f.d}")
    if len(box.lower) != parts:
        raise InvalidInputError(f"box has {len(box.lower)} windows, expected {parts}")
    rng = substream(seed, index)
    for _ in range(_BOUNDARY_REDRAWS):
        blocks = tuple(
            sorted_distinct(rng, size, box.lower[a], box.upper[a])
            for a in range(parts)
        )
        # block a's window maps into the a-th grid cell, so the flattened
        # coordinate list is globally increasing
        coords = [
            (a + x) / parts for a, block in enumerate(blocks) for x in block
        ]
        if avoid_resolution is not None and any(
            (x * avoid_resolution).denominator == 1 for x in coords
        ):
            continue
        break
    else:
        raise RuntimeError("exceeded redraw budget for boundary avoidance")

    def entry(idx):
        return evaluate(f, tuple(coords[i - 1] for i in idx))

    model = DiscreteModel.from_function(f.d, f.k, size * parts, entry)
    try:
        spec = check_homogeneous(model, parts)
    except NotHomogeneousError:
        spec = None
    return InlaySample(
        selection=InlaySelection(blocks=blocks), model=model, spec=spec
    )
