"""Semi-separated pair decompositions of collinear point sets.

Points projected onto one splitting segment are one-dimensional, which admits
a simple construction: a balanced (median) split tree over the sorted
coordinates, with the cross pairs of each split refined by fair halving of the
larger-radius bundle until the gap is at least s times the smaller radius.
Singleton bundles have radius zero, so refinement always terminates.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import UnknownId


class SspdPair(NamedTuple):
    a: tuple[int, ...]
    b: tuple[int, ...]
    radius_a: float
    radius_b: float
    gap: float


@dataclass(frozen=True)
class SspdDecomposition:
    pairs: tuple[SspdPair, ...]
    weight: int

    def __len__(self) -> int:
        return len(self.pairs)


class SspdReport(NamedTuple):
    covered: bool
    separated: bool
    weight: int


def _coordinates(points) -> list[tuple[float, int]]:
    out = []
    for p in points:
        if hasattr(p, "param"):
            out.append((float(p.param), int(p.source_id)))
        else:
            pid, x = p
            out.append((float(x), int(pid)))
    return out


def build_sspd(points: Sequence, s: float) -> SspdDecomposition:
    """s-SSPD of collinear points given as ProjectedPoints or (id, x) pairs."""
    if s <= 0:
        raise ValueError(f"separation ratio must be positive, got {s}")
    items = sorted(_coordinates(points))
    n = len(items)
    xs = [x for x, _ in items]
    ids = [pid for _, pid in items]
    pairs: list[SspdPair] = []
    weight = 0

    def interval(lo: int, hi: int):
        return xs[lo], xs[hi - 1]

    def emit_cross(a_lo, a_hi, b_lo, b_hi):
        nonlocal weight
        queue = [(a_lo, a_hi, b_lo, b_hi)]
        while queue:
            alo, ahi, blo, bhi = queue.pop(0)
            a0, a1 = interval(alo, ahi)
            b0, b1 = interval(blo, bhi)
            ra = 0.5 * (a1 - a0)
            rb = 0.5 * (b1 - b0)
            gap = max(0.0, max(b0 - a1, a0 - b1))
            if gap >= s * min(ra, rb):
                pa = tuple(ids[alo:ahi])
                pb = tuple(ids[blo:bhi])
                pairs.append(SspdPair(pa, pb, ra, rb, gap))
                weight += len(pa) + len(pb)
                continue
            # Fair-split the bundle with the larger radius (larger count on ties).
            split_a = ra > rb or (ra == rb and (ahi - alo) >= (bhi - blo))
            if split_a:
                mid = 0.5 * (a0 + a1)
                k = bisect.bisect_right(xs, mid, alo, ahi)
                queue.append((alo, k, blo, bhi))
                queue.append((k, ahi, blo, bhi))
            else:
                mid = 0.5 * (b0 + b1)
                k = bisect.bisect_right(xs, mid, blo, bhi)
                queue.append((alo, ahi, blo, k))
                queue.append((alo, ahi, k, bhi))

    def recurse(lo: int, hi: int):
        if hi - lo <= 1:
            return
        mid = (lo + hi) // 2
        emit_cross(lo, mid, mid, hi)
        recurse(lo, mid)
        recurse(mid, hi)

    recurse(0, n)
    return SspdDecomposition(tuple(pairs), weight)


def verify_sspd(points: Sequence, s: float, dec: SspdDecomposition) -> SspdReport:
    """Exhaustive check of pair coverage and per-pair semi-separation."""
    items = _coordinates(points)
    coord_of = {pid: x for x, pid in items}
    if len(coord_of) != len(items):
        raise UnknownId("duplicate ids in the input point set")
    index = {pid: i for i, pid in enumerate(coord_of)}
    n = len(index)
    covered_matrix = [[False] * n for _ in range(n)]
    separated = True
    weight = 0
    for pair in dec.pairs:
        for pid in pair.a + pair.b:
            if pid not in index:
                raise UnknownId(f"decomposition references unknown id {pid}")
        ax = [coord_of[p] for p in pair.a]
        bx = [coord_of[p] for p in pair.b]
        ra = 0.5 * (max(ax) - min(ax))
        rb = 0.5 * (max(bx) - min(bx))
        gap = max(0.0, max(min(bx) - max(ax), min(ax) - max(bx)))
        scale = max(1.0, abs(max(ax + bx)), abs(min(ax + bx)))
        if gap < s * min(ra, rb) - 1e-12 * scale:
            separated = False
        weight += len(pair.a) + len(pair.b)
        for p in pair.a:
            for q in pair.b:
                covered_matrix[index[p]][index[q]] = True
                covered_matrix[index[q]][index[p]] = True
    covered = all(
        covered_matrix[i][j]
        for i in range(n) for j in range(i + 1, n))
    return SspdReport(covered, separated, weight)
