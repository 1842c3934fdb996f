"""Character n-gram sets and the symmetric-difference (Hamming) metric.

Every text segment an agent produces is represented as the set of its
distinct character n-grams.  Distances between segments are counted on
those sets, so two segments with identical gram sets are the same point
of the metric space regardless of how they were written down.
"""

from __future__ import annotations

from dataclasses import dataclass


class EmptyText(ValueError):
    """A gram set would have to be built from an empty string."""


@dataclass(frozen=True)
class LingSet:
    """A finite set of distinct character n-grams plus its originating text."""

    grams: frozenset[str]
    source: str

    @property
    def cardinality(self) -> int:
        return len(self.grams)

    def sorted_grams(self) -> list[str]:
        """Stable listing, used for debug dumps and JSON serialization."""
        return sorted(self.grams)


def ngram_set(
    text: str,
    n_min: int = 1,
    n_max: int = 3,
    include_space: bool = True,
) -> LingSet:
    """Collect every distinct contiguous substring of length n_min..n_max.

    With ``include_space`` (the default) grams run across word boundaries
    and may contain space characters; otherwise each space-separated token
    is scanned on its own and no gram contains a space.
    """
    if not text:
        raise EmptyText("cannot build an n-gram set from empty text")
    if n_min < 1 or n_max < n_min:
        raise ValueError(f"bad n-gram lengths: n_min={n_min}, n_max={n_max}")
    pieces = [text] if include_space else text.split()
    grams: set[str] = set()
    for piece in pieces:
        for n in range(n_min, min(n_max, len(piece)) + 1):
            for i in range(len(piece) - n + 1):
                grams.add(piece[i : i + n])
    return LingSet(grams=frozenset(grams), source=text)


def hamming(a: LingSet, b: LingSet) -> int:
    """Symmetric-difference distance |a ^ b| between two gram sets."""
    return len(a.grams ^ b.grams)


def join(
    a: LingSet,
    b: LingSet,
    mode: str = "union",
    n_min: int = 1,
    n_max: int = 3,
    include_space: bool = True,
) -> LingSet:
    """Combine two realizations into one joint realization.

    ``union`` takes the gram-set union.  ``concat`` re-extracts grams from
    the space-joined sources, which adds the seam-crossing grams that
    union mode cannot see; its gram set is therefore a superset of the
    union-mode one.
    """
    merged = a.source + " " + b.source
    if mode == "union":
        return LingSet(grams=a.grams | b.grams, source=merged)
    if mode == "concat":
        return ngram_set(merged, n_min, n_max, include_space)
    raise ValueError(f"unknown join mode: {mode!r}")
