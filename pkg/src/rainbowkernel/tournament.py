"""Kernelization for triangle packing and feedback vertex set in tournaments
(TPT / FVST).

The greedily localized remainder of a tournament is acyclic, so its surviving
part (the pool) carries a fixed topological position 1..t0.  Bucketed
vertices are grouped by the unique position index splitting the pool into a
part that dominates them and a part they dominate.  Bucket indices, the
intervals between them, and the demand computed over those intervals drive
the auxiliary multigraph:

  * an ordinary edge {u, w} colored by c for every triangle {c, u, w} with
    c an untreated core vertex and u, w in the pool,
  * val(I) fresh slot colors per positive-demand interval I, looped onto
    every pool vertex lying strictly inside I.

A rainbow matching selects one pool vertex per slot (a bucket allocation)
plus one pool edge per core color, and the run stops.  A color cover either
retires core colors (add-1: the cover joins the spine, B^{W1}) or merges the
buckets of one block interval (add-2: its window joins the bulk, B^{W2});
the local-size law |bulk_i| <= c(delta) |seeds_i|^delta survives both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .demand import BucketProfile, Demand, compute_demand, interval_stats
from .errors import (Case2SelectionFailed, InvalidSolution, NotNicePair,
                     OracleContractViolation, PreconditionViolated,
                     RepackFailed)
from .graphs import (ColoredEdge, Tournament, colored_edge, enumerate_triangles,
                     is_triangle, make_colored_multigraph, topological_order)
from .intervals import (BucketInterval, block_partition, maximal_elements,
                        span_buckets)
from .p3 import PackingFound
from .rainbow import (ColorCover, OracleConfig, RainbowMatching, RainbowOracle,
                      verify_outcome)
from .report import Decided, KernelOutput, KernelReport, RoundRecord


@dataclass(frozen=True)
class TriangleLocalization:
    """A maximal triangle packing and the topological order of the rest."""

    packing: tuple[tuple[int, int, int], ...]
    core: frozenset[int]
    order: tuple[int, ...]


def greedy_localize_triangles(t: Tournament, threshold: int) -> PackingFound | TriangleLocalization:
    """Claim disjoint triangles scanning triples lexicographically; one pass
    gives a maximal packing.  Stops once `threshold` triangles are claimed."""
    if threshold <= 0:
        return PackingFound(())
    m = t.matrix
    free = np.ones(t.n, dtype=bool)
    packing: list[tuple[int, int, int]] = []
    for a in range(t.n):
        if not free[a]:
            continue
        for b in range(a + 1, t.n):
            if not free[b]:
                continue
            if m[a, b]:
                cands = m[b] & m[:, a] & free
            else:
                cands = m[a] & m[:, b] & free
            cands[:b + 1] = False
            idx = np.flatnonzero(cands)
            if idx.size:
                c = int(idx[0])
                packing.append((a, b, c))
                free[a] = free[b] = free[c] = False
                if len(packing) >= threshold:
                    return PackingFound(tuple(packing))
                break
    core = frozenset(v for tri in packing for v in tri)
    order = topological_order(t, [v for v in range(t.n) if free[v]])
    return TriangleLocalization(tuple(packing), core, order)


@dataclass(frozen=True)
class TptDecomp:
    """Partial decomposition for the tournament problems.

    `spine` and `bulk` split the bucketed remainder vertices: spine vertices
    count as seeds next to the core, bulk vertices are the merge products
    only bounded by the local-size law.
    """

    loc: TriangleLocalization
    pool: frozenset[int]
    bucketed: frozenset[int]
    colors: frozenset[int]
    spine: frozenset[int]
    bulk: frozenset[int]
    delta: float
    c_delta: float
    s_psi: tuple[int, ...]
    buckets: dict[int, frozenset[int]]

    @property
    def t0(self) -> int:
        return len(self.loc.order)

    @property
    def infinity(self) -> int:
        return self.t0 + 1

    @property
    def core_side(self) -> frozenset[int]:
        return self.bucketed & self.loc.core

    def seeds(self, i: int) -> frozenset[int]:
        return self.buckets[i] & (self.loc.core | self.spine)

    def bulk_of(self, i: int) -> frozenset[int]:
        return self.buckets[i] & self.bulk

    def bucket_of(self, v: int) -> int:
        for i, b in self.buckets.items():
            if v in b:
                return i
        raise KeyError(v)

    @property
    def potential(self) -> int:
        return len(self.pool) + len(self.colors)

    def window(self, interval: BucketInterval) -> frozenset[int]:
        """Pool vertices whose position lies in [l, r)."""
        pos = _positions(self.loc)
        return frozenset(v for v in self.pool if interval.l <= pos[v] < interval.r)

    def profile(self) -> BucketProfile:
        return BucketProfile(
            self.s_psi,
            {i: len(self.seeds(i)) for i in self.s_psi},
            {i: len(self.bulk_of(i)) for i in self.s_psi},
        )


def _positions(loc: TriangleLocalization) -> dict[int, int]:
    return {v: i + 1 for i, v in enumerate(loc.order)}


def bucket_decompose_tpt(pool: frozenset[int], bucketed: frozenset[int],
                         t: Tournament, loc: TriangleLocalization):
    """Unique bucket structure of a nice pair: each bucketed vertex lands at
    the smallest pool position it dominates (the infinity sentinel when it
    dominates none).  A pool vertex past that position dominating it back
    witnesses a triangle with two pool vertices."""
    pos = _positions(loc)
    if not pool <= set(pos):
        raise ValueError("pool must lie inside the localization remainder")
    t0 = len(loc.order)
    pool_by_pos = sorted(pool, key=lambda v: pos[v])
    positions = [pos[v] for v in pool_by_pos]
    m = t.matrix
    buckets: dict[int, set[int]] = {}
    if pool_by_pos:
        ids = np.array(pool_by_pos)
        for v in sorted(bucketed):
            row = m[v][ids]  # v -> pool vertex, in position order
            hits = np.flatnonzero(row)
            if hits.size == 0:
                idx = t0 + 1
            else:
                first = int(hits[0])
                rest = row[first:]
                if not rest.all():
                    bad = first + int(np.flatnonzero(~rest)[0])
                    raise NotNicePair((v, pool_by_pos[first], pool_by_pos[bad]))
                idx = positions[first]
            buckets.setdefault(idx, set()).add(v)
    elif bucketed:
        buckets[t0 + 1] = set(bucketed)
    s_psi = tuple(sorted(buckets))
    return s_psi, {i: frozenset(b) for i, b in buckets.items()}


def make_tpt_decomp(loc: TriangleLocalization, pool, bucketed, colors, spine,
                    bulk, t: Tournament, delta: float, c_delta: float) -> TptDecomp:
    pool = frozenset(pool)
    bucketed = frozenset(bucketed)
    colors = frozenset(colors)
    spine = frozenset(spine)
    bulk = frozenset(bulk)
    rest = set(loc.order)
    if spine | bulk != bucketed & rest or spine & bulk:
        raise ValueError("spine and bulk must partition the bucketed remainder part")
    s_psi, buckets = bucket_decompose_tpt(pool, bucketed, t, loc)
    return TptDecomp(loc, pool, bucketed, colors, spine, bulk, delta, c_delta,
                     s_psi, buckets)


def check_tpt_decomp(d: TptDecomp, t: Tournament) -> list[str]:
    """Full validator: partition, nice pair, bucket membership, seeds, the
    spine budget and the local-size law.  Empty list = everything holds."""
    out: list[str] = []
    if d.pool | d.bucketed | d.colors != frozenset(range(t.n)) or \
            len(d.pool) + len(d.bucketed) + len(d.colors) != t.n:
        out.append("pool/bucketed/colors do not partition the vertex set")
    if not d.colors <= d.loc.core:
        out.append("colors must come from the localization core")
    pos = _positions(d.loc)
    if not d.pool <= set(pos):
        out.append("pool leaks outside the localization remainder")
        return out
    viol = _nice_pair_violation_tpt(t, d.pool, d.bucketed)
    if viol is not None:
        out.append(f"triangle {viol} has two pool vertices")
    union: set[int] = set()
    pool_sorted = sorted(d.pool, key=lambda v: pos[v])
    positions = [pos[v] for v in pool_sorted]
    m = t.matrix
    for i in sorted(d.buckets):
        members = d.buckets[i]
        if not members:
            out.append(f"bucket {i} is empty")
        if i not in d.s_psi:
            out.append(f"bucket {i} missing from the index set")
        if i != d.infinity and (i not in positions):
            out.append(f"bucket index {i} is not a pool position")
        union |= members
        for v in members:
            for w, p in zip(pool_sorted, positions):
                forward = bool(m[v, w])
                if p < i and forward:
                    out.append(f"bucket {i} vertex {v} dominates earlier pool vertex {w}")
                if p >= i and not forward:
                    out.append(f"bucket {i} vertex {v} dominated by later pool vertex {w}")
    if union != set(d.bucketed):
        out.append("buckets do not partition the bucketed set")
    rest = set(d.loc.order)
    if d.spine | d.bulk != d.bucketed & rest or d.spine & d.bulk:
        out.append("spine/bulk do not partition the bucketed remainder part")
    for i in d.s_psi:
        if not d.seeds(i):
            out.append(f"bucket {i} has no seed vertex")
    if len(d.spine) > 10 * len(d.core_side):
        out.append(f"spine size {len(d.spine)} exceeds 10*|core side| = {10 * len(d.core_side)}")
    for i in d.s_psi:
        allowed = d.c_delta * len(d.seeds(i)) ** d.delta
        if len(d.bulk_of(i)) > allowed + 1e-9:
            out.append(f"bucket {i} bulk {len(d.bulk_of(i))} exceeds local size {allowed:.3f}")
    return out


def _nice_pair_violation_tpt(t: Tournament, pool: frozenset[int],
                             bucketed: frozenset[int]):
    ids = sorted(pool)
    if len(ids) < 2:
        return None
    m = t.matrix
    arr = np.array(ids)
    sub = m[np.ix_(ids, ids)]
    for b in sorted(bucketed):
        outs = m[b][arr]   # b -> w
        inns = m[arr, b]   # w -> b
        if not (outs.any() and inns.any()):
            continue
        cand = sub[outs][:, inns]
        if cand.any():
            oi = np.flatnonzero(outs)
            ii = np.flatnonzero(inns)
            r, c = np.argwhere(cand)[0]
            return tuple(sorted((b, ids[int(oi[r])], ids[int(ii[c])])))
    return None


def clean_tpt(d: TptDecomp, t: Tournament) -> TptDecomp:
    """Demote colors that form no triangle with two pool vertices.  They join
    the core side of the buckets; spine, bulk, and the local sizes do not
    move."""
    stale = frozenset(c for c in d.colors if not _forms_pool_triangle(t, d.pool, c))
    if not stale:
        return d
    return make_tpt_decomp(d.loc, d.pool, d.bucketed | stale, d.colors - stale,
                           d.spine, d.bulk, t, d.delta, d.c_delta)


def _forms_pool_triangle(t: Tournament, pool: frozenset[int], c: int) -> bool:
    ids = sorted(pool)
    if len(ids) < 2:
        return False
    m = t.matrix
    arr = np.array(ids)
    outs = m[c][arr]
    inns = m[arr, c]
    if not (outs.any() and inns.any()):
        return False
    sub = m[np.ix_(ids, ids)]
    return bool(sub[outs][:, inns].any())


# ---------------------------------------------------------------------------
# Auxiliary multigraph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TptAux:
    cm: "ColoredMultigraph"
    meanings: tuple[tuple, ...]  # ("color", vertex) or ("slot", (l, r), j)
    demand: Demand

    def slot_interval(self, color: int) -> BucketInterval:
        kind, payload = self.meanings[color][0], self.meanings[color][1]
        if kind != "slot":
            raise KeyError(color)
        return BucketInterval(*payload)


def build_tpt_aux(d: TptDecomp, t: Tournament, demand: Demand) -> TptAux:
    meanings: list[tuple] = [("color", c) for c in sorted(d.colors)]
    edges: list[ColoredEdge] = []
    ids = sorted(d.pool)
    arr = np.array(ids) if ids else np.zeros(0, dtype=int)
    m = t.matrix
    sub = m[np.ix_(ids, ids)] if ids else None
    for idx, c in enumerate(sorted(d.colors)):
        outs = np.flatnonzero(m[c][arr]) if ids else []
        inns = np.flatnonzero(m[arr, c]) if ids else []
        for i in outs:
            row = sub[i]
            for j in inns:
                if row[j]:
                    edges.append(colored_edge(ids[int(i)], ids[int(j)], idx))
    for interval in sorted(demand.positive(), key=lambda iv: (iv.l, iv.r)):
        window = sorted(d.window(interval))
        for j in range(demand.values[interval]):
            idx = len(meanings)
            meanings.append(("slot", (interval.l, interval.r), j))
            for v in window:
                edges.append(colored_edge(v, v, idx))
    cm = make_colored_multigraph(d.pool, edges, len(meanings))
    return TptAux(cm, tuple(meanings), demand)


@dataclass(frozen=True)
class Allocation:
    """val(I) chosen window vertices per positive-demand interval, disjoint."""

    picks: dict[BucketInterval, frozenset[int]]

    def vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for p in self.picks.values():
            out |= p
        return frozenset(out)


def extract_allocation(aux: TptAux, matching: RainbowMatching) -> Allocation:
    by_color = matching.by_color()
    picks: dict[BucketInterval, set[int]] = {}
    for color, meaning in enumerate(aux.meanings):
        if meaning[0] != "slot":
            continue
        interval = BucketInterval(*meaning[1])
        picks.setdefault(interval, set()).add(by_color[color].u)
    return Allocation({iv: frozenset(vs) for iv, vs in picks.items()})


def check_allocation(d: TptDecomp, demand: Demand, alloc: Allocation) -> list[str]:
    out = []
    seen: set[int] = set()
    for interval in demand.positive():
        picks = alloc.picks.get(interval, frozenset())
        if len(picks) != demand.values[interval]:
            out.append(f"{interval}: {len(picks)} picks != demand {demand.values[interval]}")
        if not picks <= d.window(interval):
            out.append(f"{interval}: picks leave the window")
        if picks & seen:
            out.append(f"{interval}: picks overlap another interval's")
        seen |= picks
    return out


# ---------------------------------------------------------------------------
# Add operations
# ---------------------------------------------------------------------------


def add1(d: TptDecomp, t: Tournament, moved: frozenset[int],
         retired: frozenset[int]) -> TptDecomp:
    """Demote `moved` pool vertices into the spine and retire `retired`
    colors into the buckets.  Requires |moved| <= 10 |retired| and that no
    triangle through a retired color keeps two pool vertices outside
    `moved` (this is what the vertex cover guarantees)."""
    if not moved <= d.pool or not retired <= d.colors:
        raise PreconditionViolated("moved/retired must come from pool/colors")
    if len(moved) > 10 * len(retired):
        raise PreconditionViolated(
            f"|moved| = {len(moved)} exceeds 10 * |retired| = {10 * len(retired)}")
    survivors = frozenset(d.pool - moved)
    for c in sorted(retired):
        if _forms_pool_triangle(t, survivors, c):
            raise PreconditionViolated(
                f"retired color {c} still forms a triangle with two surviving pool vertices")
    return make_tpt_decomp(d.loc, survivors, d.bucketed | moved | retired,
                           d.colors - retired, d.spine | moved, d.bulk,
                           t, d.delta, d.c_delta)


def add2(d: TptDecomp, t: Tournament, interval: BucketInterval) -> TptDecomp:
    """Merge the buckets spanned by `interval` together with its window into
    the bucket at the right endpoint; the window joins the bulk.  Requires
    |window| <= 10 * capacity(interval)."""
    if interval.l not in d.s_psi or interval.r not in d.s_psi:
        raise PreconditionViolated(f"{interval} endpoints must be bucket indices")
    window = d.window(interval)
    capacity = interval_stats(d.profile(), interval).capacity
    if len(window) > 10 * capacity:
        raise PreconditionViolated(
            f"|window| = {len(window)} exceeds 10 * capacity = {10 * capacity}")
    nxt = make_tpt_decomp(d.loc, d.pool - window, d.bucketed | window, d.colors,
                          d.spine, d.bulk | window, t, d.delta, d.c_delta)
    span = set(span_buckets(interval, d.s_psi))
    expected = tuple(sorted((set(d.s_psi) - span) | {interval.r}))
    if nxt.s_psi != expected:
        raise AssertionError(f"merge produced indices {nxt.s_psi}, expected {expected}")
    merged = window | set().union(*(d.buckets[i] for i in span))
    if nxt.buckets[interval.r] != frozenset(merged):
        raise AssertionError("merged bucket does not match the predicted union")
    return nxt


# ---------------------------------------------------------------------------
# The reduction rule and the driver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TptRuleStop:
    kept: frozenset[int]
    matching: RainbowMatching
    aux: TptAux
    allocation: Allocation
    oracle_stats: dict
    demand_summary: dict


@dataclass(frozen=True)
class TptRuleNext:
    decomp: TptDecomp
    case: str
    oracle_stats: dict
    demand_summary: dict


def _demand_summary(d: TptDecomp, demand: Demand) -> dict:
    return {
        "intervals": len(demand.order),
        "positive": len(demand.positive()),
        "val_total": sum(demand.values.values()),
        "bucket_total": sum(len(b) for b in d.buckets.values()),
    }


def apply_rule_tpt(d: TptDecomp, t: Tournament, oracle: RainbowOracle) -> TptRuleStop | TptRuleNext:
    """One round at the fixed oracle slack eps = 1, so covers obey
    |cover| <= 5 |colors|."""
    demand = compute_demand(d.profile())
    aux = build_tpt_aux(d, t, demand)
    outcome, stats = oracle.solve(aux.cm, 1.0)
    ok, problems = verify_outcome(aux.cm, outcome)
    if not ok:
        raise OracleContractViolation("; ".join(problems))
    stats_dict = {"layer": stats.layer, "p": stats.p, "edges": stats.n_edges}
    summary = _demand_summary(d, demand)
    if isinstance(outcome, RainbowMatching):
        allocation = extract_allocation(aux, outcome)
        bad = check_allocation(d, demand, allocation)
        if bad:
            raise OracleContractViolation("; ".join(bad))
        kept = frozenset(outcome.vertices()) | d.bucketed | d.colors
        return TptRuleStop(kept, outcome, aux, allocation, stats_dict, summary)
    cover: ColorCover = outcome
    covered = frozenset(cover.cover)
    retired = frozenset(aux.meanings[c][1] for c in cover.colors
                        if aux.meanings[c][0] == "color")
    slot_colors = [c for c in cover.colors if aux.meanings[c][0] == "slot"]
    if len(slot_colors) <= len(retired):
        nxt = add1(d, t, covered, retired)
        return TptRuleNext(nxt, "case1", stats_dict, summary)
    hit = sorted({aux.slot_interval(c) for c in slot_colors})
    for interval in hit:
        if not d.window(interval) <= covered:
            raise OracleContractViolation(
                f"slot color of {interval} covered but its window is not")
    _, joins = block_partition(maximal_elements(hit))
    for join_interval in joins:
        window = d.window(join_interval)
        capacity = interval_stats(d.profile(), join_interval).capacity
        if len(window) <= 10 * capacity:
            nxt = add2(d, t, join_interval)
            return TptRuleNext(nxt, "case2", stats_dict, summary)
    raise Case2SelectionFailed(
        "no block interval satisfies |window| <= 10 * capacity")


@dataclass
class TptKernelState:
    final: TptDecomp
    matching: RainbowMatching
    aux: TptAux
    demand: Demand
    allocation: Allocation


def choose_delta(k: int) -> float:
    """Exponent selection: min(2, 1 + sqrt(log2 21)/sqrt(log2 k)), monotone
    decreasing towards 1 as k grows."""
    if k < 2:
        raise ValueError("delta selection needs k >= 2")
    return min(2.0, 1.0 + math.sqrt(math.log2(21.0)) / math.sqrt(math.log2(k)))


def local_size_constant(delta: float) -> float:
    """c(delta) = max(20/(2^delta - 2), (21/delta)^(1/(delta-1))), rounded up
    at the 12th decimal so float noise never fails the local-size check."""
    if not 1.0 < delta <= 2.0:
        raise ValueError("delta must lie in (1, 2]")
    raw = max(20.0 / (2.0 ** delta - 2.0), (21.0 / delta) ** (1.0 / (delta - 1.0)))
    return math.ceil(raw * 1e12) / 1e12


def kernelize_tournament(t: Tournament, k: int, *, delta: float | None = None,
                         problem: str = "TPT", validate: bool = True,
                         oracle_config: OracleConfig | None = None) -> Decided | KernelOutput:
    """Shrink (t, k) to an equivalent induced sub-tournament on at most
    6534 * c(delta) * k^delta vertices.

    The rounds are problem-independent; only the greedy threshold differs.
    k disjoint triangles answer TPT with yes, k+1 of them rule out a feedback
    vertex set of size k (FVST answers no).
    """
    if problem not in ("TPT", "FVST"):
        raise ValueError(f"not a tournament problem: {problem}")
    if delta is None:
        delta = choose_delta(k) if k >= 2 else 2.0
    if not 1.0 < delta <= 2.0:
        raise ValueError("delta must lie in (1, 2]")
    c_delta = local_size_constant(delta)
    bound = 6534.0 * c_delta * k ** delta
    params = {"delta": delta, "c_delta": c_delta, "epsilon": 1.0}
    report = KernelReport(problem=problem, n=t.n, k=k, params=params, status="kernel",
                          bound=bound, bound_formula="6534*c(delta)*k^delta")
    threshold = k if problem == "TPT" else k + 1
    loc = greedy_localize_triangles(t, threshold)
    if isinstance(loc, PackingFound):
        report.status = "early-yes" if problem == "TPT" else "early-no"
        report.witness = [list(tri) for tri in loc.packing]
        return Decided(problem == "TPT", loc.packing, report)
    report.core_size = len(loc.core)
    report.rest_size = len(loc.order)
    oracle = RainbowOracle(oracle_config)
    d = make_tpt_decomp(loc, frozenset(loc.order), frozenset(), loc.core,
                        frozenset(), frozenset(), t, delta, c_delta)
    d = clean_tpt(d, t)
    max_rounds = d.potential
    prev_potential = None
    while True:
        if validate:
            problems = check_tpt_decomp(d, t)
            if problems:
                raise AssertionError("invariants broken: " + "; ".join(problems))
        if prev_potential is not None and d.potential >= prev_potential:
            raise AssertionError("round potential did not decrease")
        prev_potential = d.potential
        step = apply_rule_tpt(d, t, oracle)
        record = RoundRecord(index=len(report.rounds), case="",
                             pool_size=len(d.pool), bucketed_size=len(d.bucketed),
                             colors_size=len(d.colors), potential=d.potential,
                             oracle=step.oracle_stats)
        if isinstance(step, TptRuleStop):
            record.case = "matching"
            record.demand = step.demand_summary
            report.rounds.append(record)
            kept = tuple(sorted(step.kept))
            report.kept = list(kept)
            report.kernel_size = len(kept)
            if len(kept) > bound + 1e-9:
                raise AssertionError(f"kernel size {len(kept)} exceeds bound {bound}")
            state = TptKernelState(final=d, matching=step.matching, aux=step.aux,
                                   demand=step.aux.demand, allocation=step.allocation)
            return KernelOutput(kept, report, state)
        record.case = step.case
        record.demand = step.demand_summary
        report.rounds.append(record)
        if len(report.rounds) > max_rounds:
            raise AssertionError("round count exceeded the initial potential")
        d = clean_tpt(step.decomp, t)


# ---------------------------------------------------------------------------
# Constructions on top of a finished run
# ---------------------------------------------------------------------------


def _max_bipartite_matching(left: list, neighbors: dict) -> dict:
    """Augmenting-path matching from `left` items into their candidate sets;
    returns {left item -> chosen candidate} for the matched ones."""
    match_right: dict = {}
    match_left: dict = {}

    def augment(item, seen: set) -> bool:
        for cand in sorted(neighbors[item]):
            if cand in seen:
                continue
            seen.add(cand)
            if cand not in match_right or augment(match_right[cand], seen):
                match_right[cand] = item
                match_left[item] = cand
                return True
        return False

    for item in left:
        augment(item, set())
    return match_left


def repack_via_allocation(state: TptKernelState, t: Tournament,
                          packing: list[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    """Reroute a triangle packing of T[pool + bucketed] into the allocation.

    Triangles inside the buckets survive.  Each remaining triangle owns a
    backward bucket arc; those arcs form a matching, and each is assigned a
    distinct allocation vertex inside its interval window via an explicit
    maximum bipartite matching (the counting that makes this total is the
    demand's small-total bound)."""
    d, alloc = state.final, state.allocation
    legal = d.pool | d.bucketed
    used: set[int] = set()
    inside: list[tuple[int, int, int]] = []
    crossing: list[tuple[tuple[int, int, int], tuple[int, int], BucketInterval]] = []
    for tri in packing:
        tset = set(tri)
        if not tset <= legal:
            raise InvalidSolution(f"{tri} leaves pool + bucketed")
        if not is_triangle(t, tri):
            raise InvalidSolution(f"{tri} is not a triangle")
        if tset & used:
            raise InvalidSolution("packing is not vertex-disjoint")
        used |= tset
        pool_part = sorted(tset & d.pool)
        if not pool_part:
            inside.append(tuple(sorted(tset)))
            continue
        if len(pool_part) != 1:
            raise InvalidSolution(f"{tri} has two pool vertices; pair is not nice")
        u, v = sorted(tset - set(pool_part))
        bu, bv = d.bucket_of(u), d.bucket_of(v)
        if bu == bv:
            raise RepackFailed(f"{tri}: both bucket vertices in bucket {bu}")
        interval = BucketInterval(min(bu, bv), max(bu, bv))
        crossing.append((tri, (u, v), interval))
    allocation_vertices = alloc.vertices()
    neighbors = {
        idx: sorted(d.window(interval) & allocation_vertices)
        for idx, (_, _, interval) in enumerate(crossing)
    }
    assignment = _max_bipartite_matching(list(range(len(crossing))), neighbors)
    if len(assignment) != len(crossing):
        raise RepackFailed("allocation cannot saturate the backward arcs")
    out = list(inside)
    for idx, (_, (u, v), _) in enumerate(crossing):
        w = assignment[idx]
        tri = tuple(sorted((u, v, w)))
        if not is_triangle(t, tri):
            raise RepackFailed(f"rerouted triple {tri} is not a triangle")
        out.append(tri)
    final_used: set[int] = set()
    target = allocation_vertices | d.bucketed
    for tri in out:
        if set(tri) & final_used or not set(tri) <= target:
            raise RepackFailed(f"rerouted triple {tri} collides or leaves the target")
        final_used |= set(tri)
    return out


def lift_fvs(state: TptKernelState, t: Tournament, fvs: set[int]) -> frozenset[int]:
    """Turn a feedback vertex set of the kernel into one of t, no larger.

    The kernel part of the solution inside buckets is kept.  Slots it spent
    on allocation vertices are exchanged, per block interval of the surviving
    backward bucket arcs, for the cheaper of the two bucket covers (all seeds
    vs everything but the largest bucket); all colors enter as well."""
    d, alloc = state.final, state.allocation
    kept = sorted(frozenset(state.matching.vertices()) | d.bucketed | d.colors)
    x = set(fvs)
    survivors = [v for v in kept if v not in x]
    if enumerate_triangles(t, survivors):
        raise InvalidSolution("input does not hit every triangle of the kernel")
    allocation_vertices = alloc.vertices()
    x_b = x & d.bucketed
    pos = _positions(d.loc)
    live = sorted(d.bucketed - x_b)
    bucket_idx = {v: d.bucket_of(v) for v in live}
    m = t.matrix
    intervals: set[BucketInterval] = set()
    for i, u in enumerate(live):
        for v in live[i + 1:]:
            bu, bv = bucket_idx[u], bucket_idx[v]
            if bu == bv:
                continue
            hi, lo = (u, v) if bu > bv else (v, u)
            if m[hi, lo]:
                intervals.add(BucketInterval(min(bu, bv), max(bu, bv)))
    chosen: set[int] = set()
    if intervals:
        _, joins = block_partition(maximal_elements(sorted(intervals)))
        for join_interval in joins:
            span = span_buckets(join_interval, d.s_psi)
            seed_cover: set[int] = set()
            for i in span:
                seed_cover |= d.seeds(i)
            sizes = {i: len(d.buckets[i]) for i in span}
            biggest = max(span, key=lambda i: (sizes[i], -i))
            match_cover: set[int] = set()
            for i in span:
                if i != biggest:
                    match_cover |= d.buckets[i]
            chosen |= seed_cover if len(seed_cover) <= len(match_cover) else match_cover
    lifted = set(d.colors) | x_b | chosen
    if len(lifted) > len(fvs):
        raise AssertionError("lifted feedback vertex set grew; exchange argument violated")
    leftover = [v for v in range(t.n) if v not in lifted]
    if enumerate_triangles(t, leftover):
        raise AssertionError("lifted set misses a triangle; exchange argument violated")
    return frozenset(lifted)
