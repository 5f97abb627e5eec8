"""Incremental sparse row reduction over the rationals.

Rows are dicts ``{column: Fraction}``.  The pivot of a row is its *largest*
column, so a fully reduced pivot row expresses the pivot column in terms of
smaller non-pivot columns.  With columns numbered in ascending lexicographic
order of basis elements, the non-pivot columns are then exactly the
lexicographically minimal complement basis.
"""

from __future__ import annotations

from fractions import Fraction


class RowReducer:
    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}
        # column -> pivots whose rows mention that column (off the pivot)
        self._users: dict[int, set[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row) -> dict[int, Fraction]:
        """Remainder of ``row`` modulo the current span, on non-pivot columns."""
        row = {c: Fraction(v) for c, v in row.items() if v}
        pivots = self.pivots
        todo = [c for c in row if c in pivots]
        while todo:
            c = todo.pop()
            f = row.pop(c, None)
            if not f:
                continue
            for k, v in pivots[c].items():
                if k == c:
                    continue
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            # pivot rows are fully reduced, so no new pivot columns appear
        return row

    def add(self, row) -> bool:
        """Insert a row; return True if it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        p = max(row)
        lead = row[p]
        if lead != 1:
            row = {k: v / lead for k, v in row.items()}
        for q in list(self._users.get(p, ())):
            prow = self.pivots[q]
            f = prow.pop(p)
            for k, v in row.items():
                if k == p:
                    continue
                nv = prow.get(k, 0) - f * v
                if nv:
                    if k not in prow:
                        self._users.setdefault(k, set()).add(q)
                    prow[k] = nv
                else:
                    if k in prow:
                        del prow[k]
                        self._users[k].discard(q)
        self._users.pop(p, None)
        self.pivots[p] = row
        for k in row:
            if k != p:
                self._users.setdefault(k, set()).add(p)
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)

    def rref_rows(self) -> list[dict[int, Fraction]]:
        """Pivot rows ordered by descending pivot column."""
        return [self.pivots[p] for p in sorted(self.pivots, reverse=True)]
