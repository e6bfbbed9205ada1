"""Knuth's Algorithm X over dicts of sets.

Column choice is deterministic: fewest remaining options, ties broken by
the column's sort key.  Options are tried in sorted order, so the sequence
of solutions is reproducible run to run.
"""

from __future__ import annotations

from .errors import SearchTimeout


class ExactCover:
    """Exact cover of ``primary`` columns; ``secondary`` columns are covered
    at most once.  ``options`` maps option name -> iterable of columns."""

    def __init__(self, options: dict, primary, secondary=(), max_nodes: int | None = None):
        self.options = {name: tuple(cols) for name, cols in options.items()}
        self.primary = sorted(primary)
        self.max_nodes = max_nodes
        self.nodes = 0
        self.depth = 0
        cols = {c: set() for c in self.primary}
        for c in secondary:
            cols.setdefault(c, set())
        for name, row in self.options.items():
            for c in row:
                if c not in cols:
                    raise KeyError(f"option {name!r} uses unknown column {c!r}")
                cols[c].add(name)
        self.cols = cols
        self.active = set(self.primary)

    def _select(self, name):
        removed = []
        for j in self.options[name]:
            for i in self.cols[j]:
                for k in self.options[i]:
                    if k != j:
                        self.cols[k].discard(i)
            removed.append(self.cols.pop(j))
            self.active.discard(j)
        return removed

    def _deselect(self, name, removed):
        for j in reversed(self.options[name]):
            self.cols[j] = removed.pop()
            if j in self._primary_set:
                self.active.add(j)
            for i in self.cols[j]:
                for k in self.options[i]:
                    if k != j:
                        self.cols[k].add(i)

    def solve(self):
        """Yield solutions as lists of option names."""
        self._primary_set = set(self.primary)
        yield from self._search([])

    def _search(self, partial):
        if not self.active:
            yield list(partial)
            return
        self.nodes += 1
        self.depth = max(self.depth, len(partial))
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise SearchTimeout(
                f"exact cover exceeded {self.max_nodes} nodes", depth=self.depth, nodes=self.nodes
            )
        col = min(self.active, key=lambda c: (len(self.cols[c]), c))
        for name in sorted(self.cols[col]):
            partial.append(name)
            removed = self._select(name)
            yield from self._search(partial)
            self._deselect(name, removed)
            partial.pop()


def exact_covers(options: dict, primary, secondary=(), max_nodes=None, limit=None):
    """List up to ``limit`` exact covers (all of them when limit is None)."""
    solver = ExactCover(options, primary, secondary, max_nodes)
    out = []
    for sol in solver.solve():
        out.append(sorted(sol))
        if limit is not None and len(out) >= limit:
            break
    return out
