"""Seeded dyadic-rational sampling.

All randomized operations draw 64-bit dyadic rationals so that every sampled
coordinate is an exact ``Fraction`` in ``(0, 1]`` and every run is bit-exactly
reproducible from its seed.  Batch operations derive one substream per item
from ``(seed, index)``, so results never depend on evaluation order or worker
count.  Substreams are counter-based (BLAKE2b over seed, index, counter),
which keeps them platform-stable and cheap to create per trial.
"""

from __future__ import annotations

from fractions import Fraction
from hashlib import blake2b

DYADIC_BITS = 64
_DYADIC_DEN = 1 << DYADIC_BITS
_MASK64 = _DYADIC_DEN - 1
_MAX_REDRAWS = 1000


class Substream:
    """Deterministic stream of 64-bit words for one ``(seed, index)`` pair."""

    __slots__ = ("_prefix", "_counter")

    def __init__(self, seed: int, index: int):
        self._prefix = (seed & _MASK64).to_bytes(8, "little") + (
            index & _MASK64
        ).to_bytes(8, "little")
        self._counter = 0

    def word(self) -> int:
        digest = blake2b(
            self._prefix + self._counter.to_bytes(8, "little"), digest_size=8
        ).digest()
        self._counter += 1
        return int.from_bytes(digest, "little")

    def getrandbits(self, bits: int) -> int:
        if not 0 < bits <= DYADIC_BITS:
            raise ValueError(f"bits must be in [1, {DYADIC_BITS}]")
        return self.word() >> (DYADIC_BITS - bits)

    def randrange(self, bound: int) -> int:
        # rejection sampling keeps the choice exactly uniform
        limit = (_DYADIC_DEN // bound) * bound
        while True:
            w = self.word()
            if w < limit:
                return w % bound


def substream(seed: int, index: int) -> Substream:
    """Deterministic per-item stream derived from a base seed and an index."""
    return Substream(seed, index)


def dyadic_unit(rng: Substream) -> Fraction:
    """One uniform dyadic rational in ``(0, 1]``."""
    return Fraction(rng.getrandbits(DYADIC_BITS) + 1, _DYADIC_DEN)


def dyadic_in(rng: Substream, lo: Fraction, hi: Fraction) -> Fraction:
    """One uniform dyadic-grid point in ``(lo, hi]``."""
    return lo + (hi - lo) * Fraction(rng.getrandbits(DYADIC_BITS) + 1, _DYADIC_DEN)


def sorted_distinct(
    rng: Substream, n: int, lo: Fraction, hi: Fraction
) -> tuple[Fraction, ...]:
    """``n`` sorted, pairwise-distinct uniforms in ``(lo, hi]``.

    Exact collisions are a probability ~``n^2/2^64`` event; the whole batch
    is redrawn when one occurs so the result stays distribution-correct.
    """
    for _ in range(_MAX_REDRAWS):
        draws = [dyadic_in(rng, lo, hi) for _ in range(n)]
        if len(set(draws)) == n:
            return tuple(sorted(draws))
    raise RuntimeError("exceeded redraw budget for distinct samples")
