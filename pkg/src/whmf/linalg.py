"""Exact row reduction over the rationals for short lists of q-expansions."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .series import QSeries


def echelon(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int], list[list[Fraction]]]:
    """Reduced row echelon form.

    Returns ``(reduced_rows, pivot_columns, transform)`` where
    ``transform[i]`` expresses ``reduced_rows[i]`` as a combination of the
    input rows.  Zero rows are dropped.
    """
    m = len(rows)
    work = [[Fraction(x) for x in r] for r in rows]
    trans = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    ncols = max((len(r) for r in work), default=0)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, m) if col < len(work[i]) and work[i][col] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        trans[r], trans[piv] = trans[piv], trans[r]
        inv = 1 / work[r][col]
        work[r] = [x * inv for x in work[r]]
        trans[r] = [x * inv for x in trans[r]]
        for i in range(m):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
                trans[i] = [a - f * b for a, b in zip(trans[i], trans[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return work[:r], pivots, trans[:r]


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(echelon(rows)[1])


def series_rows(series: Sequence[QSeries], start: int, stop: int) -> list[list[Fraction]]:
    return [s.coefficient_list(start, stop) for s in series]


def combine(series: Sequence[QSeries], coeffs: Sequence[Fraction]) -> QSeries:
    """``sum c_i s_i`` (exact)."""
    out = None
    for s, c in zip(series, coeffs):
        if c == 0:
            continue
        term = s * Fraction(c)
        out = term if out is None else out + term
    if out is None:
        return QSeries.zero(min(s.precision for s in series))
    return out


def in_span(target: QSeries, series: Sequence[QSeries], start: int, stop: int) -> bool:
    base = rank(series_rows(series, start, stop))
    return rank(series_rows(list(series) + [target], start, stop)) == base
