"""Exponential-time ground-truth solvers, used at desk scale to certify
kernels and to decide yes/no answers in tests and the CLI.

Packing problems use pivot branching (branch on the obstructions through the
smallest usable vertex, or discard it) with a greedy seed and a |remaining|/3
upper bound.  Hitting problems use 3-way branching on the first surviving
obstruction with a greedy disjoint-obstruction lower bound, wrapped in
iterative deepening for exact optima.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import TooLarge
from .graphs import Tournament, UndirectedGraph, enumerate_induced_p3, enumerate_triangles
from .instances import PACKING_PROBLEMS, TOURNAMENT_PROBLEMS, InstanceSpec

DEFAULT_TOURNAMENT_LIMIT = 24
DEFAULT_GRAPH_LIMIT = 30
LIMIT_ENV_VAR = "RAINBOWKERNEL_ORACLE_LIMIT"


def _limit_for(default: int, limit: int | None) -> int:
    if limit is not None:
        return limit
    env = os.environ.get(LIMIT_ENV_VAR)
    return int(env) if env else default


@dataclass(frozen=True)
class ExactAnswer:
    problem: str
    value: int
    witness: tuple


def _triples_by_vertex(n: int, triples: list[tuple[int, int, int]]) -> list[list[int]]:
    by_vertex: list[list[int]] = [[] for _ in range(n)]
    for idx, tri in enumerate(triples):
        for v in tri:
            by_vertex[v].append(idx)
    return by_vertex


def _greedy_packing(triples: list[tuple[int, int, int]], avail: set[int]) -> list[int]:
    used: set[int] = set()
    out = []
    for idx, tri in enumerate(triples):
        if all(v in avail and v not in used for v in tri):
            out.append(idx)
            used.update(tri)
    return out


def _max_packing(n: int, triples: list[tuple[int, int, int]],
                 target: int | None = None) -> list[tuple[int, int, int]]:
    """Maximum disjoint sub-collection of `triples`.  With `target`, stops as
    soon as a packing of that size is found (the result may be sub-optimal but
    its size is >= target iff a packing of size target exists)."""
    by_vertex = _triples_by_vertex(n, triples)
    best: list[int] = _greedy_packing(triples, set(range(n)))
    if target is not None and len(best) >= target:
        return [triples[i] for i in best]
    hit = [False] * n
    for tri in triples:
        for v in tri:
            hit[v] = True

    def dfs(avail: set[int], acc: list[int]) -> None:
        nonlocal best
        if target is not None and len(best) >= target:
            return
        usable = sum(1 for v in avail if hit[v])
        if len(acc) + usable // 3 <= len(best):
            return
        pivot = None
        for v in sorted(avail):
            if not hit[v]:
                continue
            if any(all(u in avail for u in triples[i]) for i in by_vertex[v]):
                pivot = v
                break
        if pivot is None:
            if len(acc) > len(best):
                best = list(acc)
            return
        for i in by_vertex[pivot]:
            tri = triples[i]
            if all(u in avail for u in tri):
                acc.append(i)
                dfs(avail - set(tri), acc)
                acc.pop()
                if target is not None and len(best) >= target:
                    return
        dfs(avail - {pivot}, acc)

    dfs(set(range(n)), [])
    return [triples[i] for i in best]


def _greedy_disjoint_count(triples: list[tuple[int, int, int]], removed: set[int]) -> int:
    used: set[int] = set()
    count = 0
    for tri in triples:
        if all(v not in removed and v not in used for v in tri):
            count += 1
            used.update(tri)
    return count


def _hitting_within(triples: list[tuple[int, int, int]], budget: int) -> set[int] | None:
    """A set of <= budget vertices meeting every triple, or None."""

    def rec(removed: set[int], depth: int) -> set[int] | None:
        first = None
        for tri in triples:
            if not (removed & set(tri)):
                first = tri
                break
        if first is None:
            return set(removed)
        if depth == 0 or _greedy_disjoint_count(triples, removed) > depth:
            return None
        for v in first:
            result = rec(removed | {v}, depth - 1)
            if result is not None:
                return result
        return None

    return rec(set(), budget)


def _min_hitting(triples: list[tuple[int, int, int]]) -> set[int]:
    for budget in range(0, 3 * len(triples) + 1):
        result = _hitting_within(triples, budget)
        if result is not None:
            return result
    return set()


# ---------------------------------------------------------------------------
# Public solvers
# ---------------------------------------------------------------------------


def max_triangle_packing(t: Tournament, limit: int | None = None) -> ExactAnswer:
    lim = _limit_for(DEFAULT_TOURNAMENT_LIMIT, limit)
    if t.n > lim:
        raise TooLarge(f"n={t.n} exceeds limit {lim}")
    packing = _max_packing(t.n, enumerate_triangles(t))
    return ExactAnswer("TPT", len(packing), tuple(packing))


def min_fvs_tournament(t: Tournament, limit: int | None = None) -> ExactAnswer:
    lim = _limit_for(DEFAULT_TOURNAMENT_LIMIT, limit)
    if t.n > lim:
        raise TooLarge(f"n={t.n} exceeds limit {lim}")
    hitting = _min_hitting(enumerate_triangles(t))
    return ExactAnswer("FVST", len(hitting), tuple(sorted(hitting)))


def max_induced_p3_packing(g: UndirectedGraph, limit: int | None = None) -> ExactAnswer:
    lim = _limit_for(DEFAULT_GRAPH_LIMIT, limit)
    if g.n > lim:
        raise TooLarge(f"n={g.n} exceeds limit {lim}")
    triples = [tuple(sorted(tri)) for tri in enumerate_induced_p3(g)]
    packing = _max_packing(g.n, triples)
    return ExactAnswer("I2PP", len(packing), tuple(packing))


def min_p3_hitting_set(g: UndirectedGraph, limit: int | None = None) -> ExactAnswer:
    lim = _limit_for(DEFAULT_GRAPH_LIMIT, limit)
    if g.n > lim:
        raise TooLarge(f"n={g.n} exceeds limit {lim}")
    triples = [tuple(sorted(tri)) for tri in enumerate_induced_p3(g)]
    hitting = _min_hitting(triples)
    return ExactAnswer("I2PHS", len(hitting), tuple(sorted(hitting)))


def exact_answer(spec: InstanceSpec, limit: int | None = None) -> bool:
    """Decision answer for (payload, k): packing problems ask for a packing of
    size >= k, hitting problems for a hitting set of size <= k.  Uses early
    cutoffs instead of the full optimum, so it stays fast for small k."""
    problem, payload, k = spec.problem, spec.payload, spec.k
    if problem in TOURNAMENT_PROBLEMS:
        lim = _limit_for(DEFAULT_TOURNAMENT_LIMIT, limit)
        if payload.n > lim:
            raise TooLarge(f"n={payload.n} exceeds limit {lim}")
        triples = enumerate_triangles(payload)
    else:
        lim = _limit_for(DEFAULT_GRAPH_LIMIT, limit)
        if payload.n > lim:
            raise TooLarge(f"n={payload.n} exceeds limit {lim}")
        triples = [tuple(sorted(tri)) for tri in enumerate_induced_p3(payload)]
    if problem in PACKING_PROBLEMS:
        if k == 0:
            return True
        packing = _max_packing(payload.n, triples, target=k)
        return len(packing) >= k
    return _hitting_within(triples, k) is not None
