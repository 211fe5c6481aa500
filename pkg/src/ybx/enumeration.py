"""Isomorph-free exhaustive generation of indecomposable cycle sets.

Orderly backtracking over rows: assign whole left-multiplication rows in
index order, propagate the defining law

    sigma_{x*v} o sigma_x = sigma_{v*x} o sigma_v

to completion after every assignment (knowing three of the four rows in
such a relation forces the fourth), prune partial tables that some
relabeling of their known rows beats, and keep exactly the leaves that are
transitive and equal to their canonical form.

Workers split on the first-row candidates; merging sorts canonical tables,
so output is identical for any worker count.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Iterable, Iterator, Optional, Sequence

from . import canon
from .cycleset import CycleSet

Row = tuple
Table = tuple


def _compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(map(a.__getitem__, b))


def _invert(a: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(a)
    for i, j in enumerate(a):
        inv[j] = i
    return tuple(inv)


class _Conflict(Exception):
    pass


class _State:
    """Partial table: assigned rows, their inverses, and the diagonal."""

    __slots__ = ("n", "rows", "invs", "assigned")

    def __init__(self, n: int):
        self.n = n
        self.rows: list[Optional[Row]] = [None] * n
        self.invs: list[Optional[Row]] = [None] * n
        self.assigned: list[int] = []

    def copy(self) -> "_State":
        st = _State.__new__(_State)
        st.n = self.n
        st.rows = self.rows[:]
        st.invs = self.invs[:]
        st.assigned = self.assigned[:]
        return st

    def assign(self, v: int, row: Row) -> None:
        if self.rows[v] is not None:
            if self.rows[v] != row:
                raise _Conflict
            return
        self.rows[v] = row
        self.invs[v] = _invert(row)
        self.assigned.append(v)

    def diagonal_ok(self) -> bool:
        seen = set()
        for v in self.assigned:
            q = self.rows[v][v]
            if q in seen:
                return False
            seen.add(q)
        return True

    def propagate(self, fresh: Sequence[int]) -> None:
        """Close the law relations, working outward from freshly assigned rows.

        The relation of the pair (x,v) involves rows x, v, x*v and v*x and
        can act as soon as three of them are known, so each new row r wakes
        the pairs it participates in directly plus those whose forced row
        is r; this visits every actionable relation.
        """
        rows = self.rows
        invs = self.invs
        rng = range(self.n)
        queue = list(fresh)
        push = queue.append

        def relate(x: int, v: int) -> None:
            rx = rows[x]
            rv = rows[v]
            u = rx[v]
            w = rv[x]
            ru = rows[u]
            rw = rows[w]
            if ru is not None:
                if rw is not None:
                    for z in rng:
                        if ru[rx[z]] != rw[rv[z]]:
                            raise _Conflict
                else:
                    self.assign(w, _compose(_compose(ru, rx), invs[v]))
                    push(w)
            elif rw is not None:
                self.assign(u, _compose(_compose(rw, rv), invs[x]))
                push(u)

        while queue:
            r = queue.pop()
            for x in tuple(self.assigned):
                if x == r:
                    continue
                relate(x, r)
                relate(r, x)
                v = invs[x][r]         # x*v = r: r is the forced row there
                if v != x and v != r and rows[v] is not None:
                    relate(x, v)
            for v in tuple(self.assigned):
                if v == r:
                    continue
                x = invs[v][r]         # v*x = r: r is the forced row there
                if x != v and x != r and rows[x] is not None:
                    relate(x, v)

    def prefix_len(self) -> int:
        k = 0
        while k < self.n and self.rows[k] is not None:
            k += 1
        return k


def _pinned_square_roots(P: Row, x: int, v: int) -> Iterator[Row]:
    """All permutations r with r o r = P and r(x) = v.

    Setting r(a) = b forces the chain r(b) = P(a), r(P(a)) = P(b), ...;
    remaining points restart with a fresh branch.
    """
    n = len(P)
    images = [-1] * n
    used = [False] * n

    def place(a: int, b: int, trail: list[int]) -> bool:
        while True:
            if images[a] != -1:
                return images[a] == b
            if used[b]:
                return False
            images[a] = b
            used[b] = True
            trail.append(a)
            a, b = b, P[a]

    def extend() -> Iterator[Row]:
        a = next((p for p in range(n) if images[p] == -1), None)
        if a is None:
            yield tuple(images)
            return
        for b in range(n):
            if used[b]:
                continue
            trail: list[int] = []
            if place(a, b, trail):
                yield from extend()
            for p in trail:
                used[images[p]] = False
                images[p] = -1

    trail: list[int] = []
    if place(x, v, trail):
        yield from extend()
    for p in trail:
        used[images[p]] = False
        images[p] = -1


def _row_candidates(state: _State, v: int) -> Iterator[Row]:
    """Candidate rows for position v consistent with the local constraints.

    With an anchor (an assigned x whose row value u = x*v has an assigned
    row) the whole candidate is determined by w = v*x whenever w's row is
    known, shrinks to pinned square roots when w = v, and falls back to
    entry backtracking pinned at x otherwise.
    """
    n, rows = state.n, state.rows
    anchor = None
    for x in state.assigned:
        if x == v:
            continue
        u = rows[x][v]
        if rows[u] is not None:
            anchor = (x, u)
            break
    if anchor is None:
        yield from _enumerate_rows(state, v, None, None)
        return
    x, u = anchor
    target = _compose(rows[u], rows[x])  # sigma_w o sigma_v must equal this
    for w in range(n):
        rw = rows[w]
        if rw is not None:
            cand = _compose(state.invs[w], target)
            if cand[x] == w:
                yield cand
        elif w == v:
            yield from _pinned_square_roots(target, x, v)
        else:
            yield from _enumerate_rows(state, v, x, w)


def _enumerate_rows(state: _State, v: int, pin_pos: Optional[int],
                    pin_val: Optional[int]) -> Iterator[Row]:
    """Entry backtracking for row v.

    Anchor positions (assigned x whose target sigma_{x*v} o sigma_x is
    known) come first: a value w placed there with w's row assigned forces
    the whole candidate through the law, and an unassigned w at least pins
    the forced row's diagonal entry sigma_w(w) = target[x].
    """
    n, rows, invs = state.n, state.rows, state.invs
    diag_used = {rows[a][a] for a in state.assigned}

    anchors: list[tuple[int, Row]] = []  # (position x, sigma_{x*v} o sigma_x)
    assigned_sorted = sorted(state.assigned)
    for x in assigned_sorted:
        if x == v:
            continue
        u = rows[x][v]
        if rows[u] is not None:
            anchors.append((x, _compose(rows[u], rows[x])))
    anchor_pos = {x for x, _ in anchors}
    order = [x for x, _ in anchors]
    order += [x for x in assigned_sorted if x != v and x not in anchor_pos]
    order += [x for x in range(n) if x == v or x not in state.assigned]
    seen = set()
    order = [x for x in order if not (x in seen or seen.add(x))]
    count_anchors = len(anchors)
    targets = [t for _, t in anchors]

    images = [-1] * n
    used = [False] * n
    if pin_pos is not None:
        images[pin_pos] = pin_val
        used[pin_val] = True

    def fits(cand: Row) -> bool:
        for p in range(n):
            ip = images[p]
            if ip != -1 and cand[p] != ip:
                return False
        return cand[v] not in diag_used

    def step(idx: int) -> Iterator[Row]:
        if idx == len(order):
            yield tuple(images)
            return
        x = order[idx]
        if images[x] != -1:
            yield from step(idx + 1)
            return
        is_anchor = idx < count_anchors
        target = targets[idx] if is_anchor else None
        for w in range(n):
            if used[w]:
                continue
            if x == v and w in diag_used:
                continue
            if is_anchor:
                rw = rows[w]
                if rw is not None:
                    # the law closes the whole row: sigma_v = sigma_w^-1 o target
                    cand = _compose(invs[w], target)
                    if cand[x] == w and fits(cand):
                        yield cand
                    continue
                if w != v and target[x] in diag_used:
                    continue  # forced diagonal sigma_w(w) collides
            images[x] = w
            used[w] = True
            yield from step(idx + 1)
            images[x] = -1
            used[w] = False

    yield from step(0)


def _quick_reject(state: _State, v: int, cand: Row) -> bool:
    """Cheap law and diagonal screening before any state is copied.

    Checks every law relation whose four rows are all known once cand is
    placed at v, with pointwise early exit.
    """
    rows = state.rows
    rng = range(state.n)
    q = cand[v]
    for x in state.assigned:
        rx = rows[x]
        if rx[x] == q:
            return True
        if x == v:
            continue
        u = rx[v]
        w = cand[x]
        ru = cand if u == v else rows[u]
        rw = cand if w == v else rows[w]
        if ru is not None and rw is not None:
            for z in rng:
                if ru[rx[z]] != rw[cand[z]]:
                    return True
    return False


def _branch_row(state: _State) -> int:
    """Unassigned row to branch on.

    Prefer rows with the most anchors (assigned x whose value x*v has an
    assigned row): committing such a row immediately forces others through
    the law, so dead branches die soonest.  Ties fall to the least index,
    which also grows the contiguous prefix the canonicity pruning compares.
    """
    rows = state.rows
    best = None
    best_key = None
    for v in range(state.n):
        if rows[v] is not None:
            continue
        anchors = 0
        for x in state.assigned:
            if x != v and rows[rows[x][v]] is not None:
                anchors += 1
        key = (-anchors, v)
        if best_key is None or key < best_key:
            best, best_key = v, key
    return best


def _complete(state: _State, out: list[Table]) -> None:
    """Recursive search over a chosen unassigned row."""
    n = state.n
    if len(state.assigned) == n:
        rows = state.rows
        if not _transitive(rows, n):
            return
        table = tuple(rows)
        if canon.is_canonical(table):
            out.append(table)
        return
    v = _branch_row(state)
    row0 = state.rows[0]
    for cand in _row_candidates(state, v):
        if canon.min_marked_row(cand, v) < row0:
            continue  # this row relabels below the canonical first row
        if _quick_reject(state, v, cand):
            continue
        child = state.copy()
        try:
            child.assign(v, cand)
            child.propagate([v])
        except _Conflict:
            continue
        if not child.diagonal_ok():
            continue
        if canon.has_smaller_relabeling(child.rows, n, child.prefix_len()):
            continue
        _complete(child, out)


def _transitive(rows: Sequence[Row], n: int) -> bool:
    seen = [False] * n
    seen[0] = True
    queue = [0]
    count = 1
    while queue:
        p = queue.pop()
        for row in rows:
            q = row[p]
            if not seen[q]:
                seen[q] = True
                count += 1
                queue.append(q)
    return count == n


def _search_first_row(args: tuple[int, Row, int, int]) -> list[Table]:
    """Search below one first row, handling only its shard of the second
    branch level so that parallel workers share the heavy subtrees."""
    n, first, shard, nshards = args
    state = _State(n)
    try:
        state.assign(0, first)
        state.propagate([0])
    except _Conflict:
        return []
    if not state.diagonal_ok():
        return []
    if canon.has_smaller_relabeling(state.rows, n, state.prefix_len()):
        return []
    out: list[Table] = []
    if len(state.assigned) == n or nshards == 1:
        if shard == 0:
            _complete(state, out)
        return out
    v = _branch_row(state)
    row0 = state.rows[0]
    for index, cand in enumerate(_row_candidates(state, v)):
        if index % nshards != shard:
            continue
        if canon.min_marked_row(cand, v) < row0:
            continue
        if _quick_reject(state, v, cand):
            continue
        child = state.copy()
        try:
            child.assign(v, cand)
            child.propagate([v])
        except _Conflict:
            continue
        if not child.diagonal_ok():
            continue
        if canon.has_smaller_relabeling(child.rows, n, child.prefix_len()):
            continue
        _complete(child, out)
    return out


def enumerate_indecomposable(n: int, jobs: int = 1) -> list[CycleSet]:
    """One canonical representative per isomorphism class, sorted by table."""
    if n < 1:
        raise ValueError("size must be positive")
    if n == 1:
        return [CycleSet([[0]])]
    # an identity row forces the set of identity rows invariant under every
    # sigma_y, so no indecomposable table of size >= 2 contains one; the
    # identity first row only roots tables with an identity row
    identity = tuple(range(n))
    firsts = [row for row in canon.first_row_candidates(n) if row != identity]
    nshards = 1 if jobs <= 1 else 8 * jobs
    tasks = [(n, first, shard, nshards)
             for first in firsts for shard in range(nshards)]
    tables: list[Table] = []
    if jobs > 1:
        with Pool(processes=jobs) as pool:
            for chunk in pool.imap_unordered(_search_first_row, tasks, chunksize=1):
                tables.extend(chunk)
    else:
        for task in tasks:
            tables.extend(_search_first_row(task))
    tables = sorted(set(tables))
    return [CycleSet(t) for t in tables]


@dataclass(frozen=True)
class EnumerationReport:
    """Counts over the enumerated stream: all classes, multipermutation
    classes, and finite-primitive-level classes, plus the emitted tables."""

    n: int
    c: int
    m: int
    fp: int
    elapsed: float
    tables: tuple[Table, ...]


def tabulate(n: int, jobs: int = 1) -> EnumerationReport:
    """Counts (c, m, fp) of indecomposable cycle sets of size n."""
    start = time.monotonic()
    classes = enumerate_indecomposable(n, jobs=jobs)
    m = 0
    fp = 0
    for X in classes:
        if X.mpl() is not None:
            m += 1
        if not X.displacement_group().is_transitive():
            fp += 1
    return EnumerationReport(
        n=n,
        c=len(classes),
        m=m,
        fp=fp,
        elapsed=time.monotonic() - start,
        tables=tuple(X.table for X in classes),
    )
