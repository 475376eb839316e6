"""Appearance search and substructure enumeration.

A model ``R`` over ``[n]^d`` appears in ``S`` over ``[m]^d`` when a strictly
increasing index sequence ``j_1 < ... < j_n`` substitutes into ``S`` to
reproduce ``R`` entry by entry.  The weak variant allows repeats
(``j_1 <= ... <= j_n``), which is how "substructures with equalities" are
probed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .errors import CapExceededError, InvalidInputError
from .homogeneity import HomogeneousSpec
from .models import DiscreteModel, index_tuples, order_pattern

ENUM_CAP = 1_000_000


def _search(r: DiscreteModel, s: DiscreteModel, weak: bool) -> tuple[int, ...] | None:
    if r.d != s.d or r.k != s.k:
        raise InvalidInputError("dimension/color mismatch")
    n, m = r.m, s.m
    if not weak and n > m:
        return None
    # Entries become checkable once every coordinate is chosen; group them by
    # the largest coordinate so each new choice validates only its new ones.
    by_max: list[list[tuple[tuple[int, ...], int]]] = [[] for _ in range(n + 1)]
    for idx in r.tuples():
        by_max[max(idx)].append((idx, r.get(idx)))
    chosen: list[int] = []

    def extend(pos: int) -> tuple[int, ...] | None:
        if pos == n:
            return tuple(chosen)
        if weak:
            lo = chosen[-1] if chosen else 1
            hi = m
        else:
            lo = chosen[-1] + 1 if chosen else 1
            hi = m - (n - pos - 1)
        for j in range(lo, hi + 1):
            chosen.append(j)
            ok = all(
                s.get(tuple(chosen[i - 1] for i in idx)) == color
                for idx, color in by_max[pos + 1]
            )
            if ok:
                found = extend(pos + 1)
                if found is not None:
                    return found
            chosen.pop()
        return None

    return extend(0)


def appears_in_discrete(r: DiscreteModel, s: DiscreteModel) -> tuple[int, ...] | None:
    """Lexicographically first strictly increasing witness, or None.

    The backtracking prunes on fully determined entries only, and is
    exhaustive: a None answer means no witness exists.
    """
    return _search(r, s, weak=False)


def appears_weak(r: DiscreteModel, s: DiscreteModel) -> tuple[int, ...] | None:
    """Like :func:`appears_in_discrete` but with nondecreasing witnesses."""
    return _search(r, s, weak=True)


def enumerate_substructures(
    spec: HomogeneousSpec, n: int, cap: int = ENUM_CAP
) -> list[DiscreteModel]:
    """All ``[n]^d`` models induced by sorted points in a part-homogeneous
    function, i.e. exactly the support of its statistic distribution.

    Enumerated directly from nondecreasing cell assignments; returned sorted
    by value table for determinism.
    """
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if comb(spec.parts + n - 1, n) > cap:
        raise CapExceededError(
            f"C({spec.parts + n - 1},{n}) assignments exceed cap {cap}"
        )
    shapes = [(idx, order_pattern(idx)) for idx in index_tuples(n, spec.d)]
    seen: set[tuple[int, ...]] = set()
    for assign in itertools.combinations_with_replacement(range(1, spec.parts + 1), n):
        values = tuple(
            spec.color(tuple(assign[i - 1] for i in idx), pattern)
            for idx, pattern in shapes
        )
        seen.add(values)
    return [
        DiscreteModel(d=spec.d, k=spec.k, m=n, values=v) for v in sorted(seen)
    ]


def color_bit(color: int, bit: int) -> int:
    """Membership bit of relation ``bit`` encoded in a color (1-based)."""
    return ((color - 1) >> (bit - 1)) & 1


@dataclass(frozen=True)
class InvarianceReport:
    """Outcome of a lower-arity invariance check."""

    ok: bool
    bit: int
    effective_arity: int
    witnesses: tuple[DiscreteModel, ...]  # violating size-2 forbidden structures


def check_arity_invariance(
    spec: HomogeneousSpec, bit: int, effective_arity: int
) -> InvarianceReport:
    """Verify the designated relation bit ignores the last ``d - d'``
    coordinates.

    ``k`` must be a power of two (each color encodes one membership bit per
    relation).  Two table entries that agree on the first ``d'`` cells and on
    the relative order of the first ``d'`` coordinates must agree on the bit.
    On failure the returned report carries the violating size-2 forbidden
    structures: models ``S`` over ``[2]^d`` whose bit at ``(1,...,1)``
    differs from the bit at ``(1,...,1,tail)`` for some tail over ``{1,2}``.
    """
    if spec.k & (spec.k - 1):
        raise InvalidInputError(f"k={spec.k} is not a power of two")
    relations = spec.k.bit_length() - 1
    if not 1 <= bit <= max(relations, 1):
        raise InvalidInputError(f"relation index {bit} outside [1, {relations}]")
    if not 1 <= effective_arity <= spec.d:
        raise InvalidInputError("effective arity must be in [1, d]")
    if effective_arity == spec.d:
        return InvarianceReport(True, bit, effective_arity, ())

    prefix: dict[tuple, int] = {}
    ok = True
    for cells, pattern, color in spec.entries:
        key = (cells[:effective_arity], order_pattern(pattern[:effective_arity]))
        b = color_bit(color, bit)
        if prefix.setdefault(key, b) != b:
            ok = False
            break
    if ok:
        return InvarianceReport(True, bit, effective_arity, ())

    witnesses = []
    tail_len = spec.d - effective_arity
    head = (1,) * effective_arity
    for model in enumerate_substructures(spec, 2):
        base = color_bit(model.get(head + (1,) * tail_len), bit)
        for tail in itertools.product((1, 2), repeat=tail_len):
            if color_bit(model.get(head + tail), bit) != base:
                witnesses.append(model)
                break
    return InvarianceReport(False, bit, effective_arity, tuple(witnesses))
