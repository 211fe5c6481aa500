"""Canonical labeling of binary-operation tables.

A table T of size n (row x = images of the left multiplication by x) is
relabeled by a bijection pi as T'[i][j] = pi(T[pi^-1(i)][pi^-1(j)]); the
canonical form is the lexicographically least relabeling of the flattened
table.  The search assigns new labels in the order values appear during a
row-major scan of the relabeled table, so labels stay contiguous, every
branch point sits inside row 0, and a branch dies as soon as it is
provably worse.

The same machinery prunes partial tables during exhaustive generation: a
prefix of assigned rows is rejected once some relabeling built from
already-known rows beats it, which never discards a table whose
completion is canonical.
"""

from __future__ import annotations

from typing import Optional, Sequence

Row = tuple
Table = tuple


def ascending_block_images(lengths: Sequence[int], offset: int = 0) -> list[int]:
    """Images of the permutation with consecutive forward cycles of the given lengths.

    With lengths sorted ascending this is the lexicographically least
    permutation of that cycle type on points offset..offset+sum-1.
    """
    images = []
    start = offset
    for length in lengths:
        images.extend(range(start + 1, start + length))
        images.append(start)
        start += length
    return images


def min_marked_row(row: Sequence[int], point: int) -> tuple[int, ...]:
    """Least conjugate of row under relabelings that send point to 0.

    0 must stay on a cycle of the same length as point's cycle; the minimum
    runs that cycle first as 0->1->...->l-1->0 and lays the remaining cycles
    out behind it in ascending length order.
    """
    seen = [False] * len(row)
    marked_len = 0
    rest = []
    for start in range(len(row)):
        if seen[start]:
            continue
        cur, length, hit = start, 0, False
        while not seen[cur]:
            seen[cur] = True
            length += 1
            hit = hit or cur == point
            cur = row[cur]
        if hit:
            marked_len = length
        else:
            rest.append(length)
    rest.sort()
    images = ascending_block_images([marked_len])
    images.extend(ascending_block_images(rest, offset=marked_len))
    return tuple(images)


def _partitions(total: int, most: Optional[int] = None):
    if total == 0:
        yield ()
        return
    if most is None or most > total:
        most = total
    for part in range(most, 0, -1):
        for rest in _partitions(total - part, part):
            yield (part,) + rest


def first_row_candidates(n: int) -> list[tuple[int, ...]]:
    """Every possible first row of a canonical table, sorted.

    The first row of a canonical table is the least marked conjugate over
    all rows and marked points, so it is one of these rows, determined by a
    cycle type plus the length of the cycle through the marked point.
    """
    out = set()
    for cycle_type in _partitions(n):
        for marked in set(cycle_type):
            rest = list(cycle_type)
            rest.remove(marked)
            rest.sort()
            images = ascending_block_images([marked])
            images.extend(ascending_block_images(rest, offset=marked))
            out.add(tuple(images))
    return sorted(out)


class _Smaller(Exception):
    """Internal signal: a strictly smaller relabeling exists."""


def _prune_scan(rows, ref, n, pi, rho, next_label, i, j) -> bool:
    """True iff some relabeling continuation beats ref; pi/rho restored.

    Hot path of the generator: kept free of attribute lookups and
    allocation, recursing only at the free-label branches of row 0.
    """
    trail = []
    try:
        while True:
            src_row = rows[rho[i]]
            if src_row is None:
                return False  # needs an unassigned row: tie, no conclusion
            ref_row = ref[i]
            while j < n:
                src = rho[j]
                if src == -1:
                    for point in range(n):
                        if pi[point] == -1:
                            pi[point] = j
                            rho[j] = point
                            hit = _prune_scan(rows, ref, n, pi, rho,
                                              next_label + 1, i, j)
                            pi[point] = -1
                            rho[j] = -1
                            if hit:
                                return True
                    return False
                value = src_row[src]
                label = pi[value]
                if label == -1:
                    label = next_label
                    pi[value] = label
                    rho[label] = value
                    next_label += 1
                    trail.append(value)
                r = ref_row[j]
                if label != r:
                    return label < r
                j += 1
            i += 1
            j = 0
            if i == len(ref):
                return False
    finally:
        for value in trail:
            rho[pi[value]] = -1
            pi[value] = -1


class _Search:
    """Relabeling DFS tracking the least complete table found so far."""

    __slots__ = ("rows", "n", "pi", "rho", "next_label", "out",
                 "best_flat", "best_pi")

    def __init__(self, rows: Sequence[Row], n: int):
        self.rows = rows
        self.n = n
        self.pi = [-1] * n
        self.rho = [-1] * n
        self.next_label = 0
        self.out: list[int] = []
        self.best_flat: Optional[list[int]] = None
        self.best_pi: Optional[tuple[int, ...]] = None

    def run_from_seed(self, seed: int) -> None:
        self.pi[seed] = 0
        self.rho[0] = seed
        self.next_label = 1
        self._scan(0, 0, False)
        self.pi[seed] = -1
        self.rho[0] = -1
        self.next_label = 0

    def _scan(self, i: int, j: int, better: bool) -> None:
        """Emit cells from (i,j) onward; branches only occur inside row 0."""
        n, rows, pi, rho = self.n, self.rows, self.pi, self.rho
        best = self.best_flat
        trail: list[int] = []
        out_mark = len(self.out)
        try:
            while True:
                row = rows[rho[i]]
                while j < n:
                    src = rho[j]
                    if src == -1:
                        # label j is still free: branch over unused points
                        for point in range(n):
                            if pi[point] == -1:
                                pi[point] = j
                                rho[j] = point
                                self.next_label += 1
                                self._scan(i, j, better)
                                self.next_label -= 1
                                pi[point] = -1
                                rho[j] = -1
                        return
                    value = row[src]
                    label = pi[value]
                    if label == -1:
                        label = self.next_label
                        pi[value] = label
                        rho[label] = value
                        self.next_label += 1
                        trail.append(value)
                    if not better and best is not None:
                        target = best[i * n + j]
                        if label > target:
                            return
                        if label < target:
                            better = True
                    self.out.append(label)
                    j += 1
                i += 1
                j = 0
                if i == n:
                    # compare against the live best: a nested branch may have
                    # improved it while this one was compared to a stale copy
                    if self.best_flat is None or self.out < self.best_flat:
                        self.best_flat = list(self.out)
                        self.best_pi = tuple(self.pi)
                    return
                best = self.best_flat
        finally:
            for value in trail:
                label = self.pi[value]
                self.pi[value] = -1
                self.rho[label] = -1
                self.next_label -= 1
            del self.out[out_mark:]


def _seeds(rows: Sequence[Optional[Row]], n: int) -> tuple[list[int], tuple[int, ...]]:
    """Points achieving the least marked first row among known rows."""
    best: Optional[tuple[int, ...]] = None
    seeds: list[int] = []
    for point in range(n):
        row = rows[point]
        if row is None:
            continue
        least = min_marked_row(row, point)
        if best is None or least < best:
            best = least
            seeds = [point]
        elif least == best:
            seeds.append(point)
    assert best is not None
    return seeds, best


def has_smaller_relabeling(rows: Sequence[Optional[Row]], n: int, prefix_len: int) -> bool:
    """True if some relabeling beats the assigned prefix rows 0..prefix_len-1.

    rows may contain None for unassigned rows; only relabelings expressible
    through known rows are tried, so False is conservative while True proves
    non-canonicity of every completion.
    """
    ref = [rows[i] for i in range(prefix_len)]
    seeds, least = _seeds(rows, n)
    if least < ref[0]:
        return True
    if least > ref[0]:
        # the prefix's own row 0 is already below every achievable first row,
        # which cannot happen for prefixes produced by the generator
        return False
    pi = [-1] * n
    rho = [-1] * n
    for seed in seeds:
        pi[seed] = 0
        rho[0] = seed
        hit = _prune_scan(rows, ref, n, pi, rho, 1, 0, 0)
        pi[seed] = -1
        rho[0] = -1
        if hit:
            return True
    return False


def canonical_table(table: Table) -> tuple[Table, tuple[int, ...]]:
    """Canonical form of a complete table plus a relabeling achieving it.

    Returns (canonical, pi) with canonical[pi[x]][pi[y]] = pi[table[x][y]].
    """
    n = len(table)
    if n == 0:
        return (), ()
    rows = list(table)
    seeds, _ = _seeds(rows, n)
    search = _Search(rows, n)
    for seed in seeds:
        search.run_from_seed(seed)
    flat, pi = search.best_flat, search.best_pi
    assert flat is not None and pi is not None
    canon = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
    return canon, pi


def is_canonical(table: Table) -> bool:
    """True iff the table equals its canonical form (cheaper than computing it)."""
    n = len(table)
    if n <= 1:
        return True
    return not has_smaller_relabeling(list(table), n, n)
