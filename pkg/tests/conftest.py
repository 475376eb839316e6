"""Shared builders and independent naive oracles for the test suite.

The oracles here deliberately re-derive results from definitions (explicit
point placement, literal subset enumeration) rather than calling back into
the library's optimized paths, so agreement is meaningful.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import factorial

from homopix import (
    DiscreteModel,
    HomogeneousSpec,
    consistent_pairs,
    evaluate,
    generator,
    grid_function,
    homogeneous_function,
)
from homopix.models import index_tuples, order_pattern


# ---------------------------------------------------------------------------
# random instance builders

def rand_model(rng: random.Random, d: int, k: int, m: int) -> DiscreteModel:
    values = tuple(rng.randrange(1, k + 1) for _ in range(m**d))
    return DiscreteModel(d=d, k=k, m=m, values=values)


def rand_spec(rng: random.Random, parts: int, d: int, k: int) -> HomogeneousSpec:
    table = {pair: rng.randrange(1, k + 1) for pair in consistent_pairs(parts, d)}
    return HomogeneousSpec.from_table(parts, d, k, table)


def rand_function(rng: random.Random, d: int, k: int):
    roll = rng.randrange(3)
    if roll == 0:
        return grid_function(rand_model(rng, d, k, rng.randrange(1, 5)))
    if roll == 1:
        return homogeneous_function(rand_spec(rng, rng.randrange(1, 4), d, k))
    return generator(
        "random_homogeneous",
        {"l": rng.randrange(1, 4), "d": d, "k": k, "seed": rng.randrange(10_000)},
    )


# ---------------------------------------------------------------------------
# naive oracles

def naive_appears(r: DiscreteModel, s: DiscreteModel, weak: bool):
    picker = (
        itertools.combinations_with_replacement if weak else itertools.combinations
    )
    for js in picker(range(1, s.m + 1), r.m):
        if all(
            s.get(tuple(js[i - 1] for i in idx)) == r.get(idx) for idx in r.tuples()
        ):
            return js
    return None


def naive_is_homogeneous(model: DiscreteModel, parts: int) -> bool:
    block = model.m // parts
    seen = {}
    for idx in model.tuples():
        key = (
            tuple((i - 1) // block + 1 for i in idx),
            order_pattern(idx),
        )
        if seen.setdefault(key, model.get(idx)) != model.get(idx):
            return False
    return True


def keyed_colors(model: DiscreteModel, parts: int) -> dict:
    """Raw (cells, pattern) -> color-set map, no homogeneity assumed."""
    block = model.m // parts
    out: dict = {}
    for idx in model.tuples():
        key = (tuple((i - 1) // block + 1 for i in idx), order_pattern(idx))
        out.setdefault(key, set()).add(model.get(idx))
    return out


def naive_compatible(a: DiscreteModel, b: DiscreteModel, parts: int) -> bool:
    """Definitional compatibility: every cross pair of tuples with matching
    cells and patterns agrees, evaluated grouped by the shared key."""
    ka, kb = keyed_colors(a, parts), keyed_colors(b, parts)
    for key in set(ka) & set(kb):
        if len(ka[key] | kb[key]) != 1:
            return False
    return True


def naive_mu(f, n: int, res: int) -> dict[tuple[int, ...], Fraction]:
    """Independent statistic distribution: places explicit rational points
    inside each assigned cell and evaluates the function there."""
    out: dict[tuple[int, ...], Fraction] = {}
    shapes = list(index_tuples(n, f.d))
    for assign in itertools.combinations_with_replacement(range(1, res + 1), n):
        counts: dict[int, int] = {}
        for c in assign:
            counts[c] = counts.get(c, 0) + 1
        weight = Fraction(factorial(n), res**n)
        for c in counts.values():
            weight /= factorial(c)
        points = [
            Fraction(assign[i] - 1, res) + Fraction(i + 1, res * (n + 1))
            for i in range(n)
        ]
        values = tuple(
            evaluate(f, tuple(points[i - 1] for i in idx)) for idx in shapes
        )
        out[values] = out.get(values, Fraction(0)) + weight
    return out


def naive_find_inlay(model: DiscreteModel, parts: int, size: int):
    """Literal scan over all per-block selections in lexicographic order."""
    from homopix import InlaySelection, extract_inlay

    t = model.m // parts
    per_block = list(itertools.combinations(range(1, t + 1), size))
    for blocks in itertools.product(per_block, repeat=parts):
        sel = InlaySelection(blocks=blocks)
        sub = extract_inlay(model, sel)
        if naive_is_homogeneous(sub, parts):
            return sel, sub
    return None


def naive_mono(vertices, colors, d: int, size: int):
    for subset in itertools.combinations(vertices, size):
        shades = {colors[frozenset(c)] for c in itertools.combinations(subset, d)}
        if len(shades) == 1:
            return subset
    return None


def naive_uniform(vertices, colors, d: int, size: int):
    for subset in itertools.combinations(vertices, size):
        ok = True
        for c in range(1, d + 1):
            shades = {
                colors[frozenset(sub)] for sub in itertools.combinations(subset, c)
            }
            if len(shades) > 1:
                ok = False
                break
        if ok:
            return subset
    return None


def naive_multisort(coloring, size: int):
    sorts = coloring.sorts
    d = coloring.d
    for picked in itertools.product(
        *(itertools.combinations(part, size) for part in sorts)
    ):
        pool = [v for u in picked for v in u]
        witness = {}
        ok = True
        for c in range(1, d + 1):
            for sub in itertools.combinations(pool, c):
                profile = tuple(sum(1 for v in sub if v in set(u)) for u in picked)
                shade = coloring.colors[frozenset(sub)]
                if witness.setdefault(profile, shade) != shade:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return picked
    return None
