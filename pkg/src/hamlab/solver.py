"""Backtracking Hamiltonian-cycle search with pruning and iterated restarts."""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .graph import DeletionJournal, Graph
from .pruning import Reason, initial_check

_UNBOUNDED = 1 << 62


class Heuristic(str, enum.Enum):
    LOW = "low"
    HIGH = "high"
    RANDOM = "random"


_HEURISTIC_CODE = {Heuristic.LOW: K.LOW_FIRST, Heuristic.HIGH: K.HIGH_FIRST,
                   Heuristic.RANDOM: K.RANDOM_ORDER}


class Phase(str, enum.Enum):
    INITIAL_PRUNE = "InitialPrune"
    SEARCH = "Search"
    LIMIT_HIT = "LimitHit"

    def __str__(self) -> str:
        return self.value


class Outcome(str, enum.Enum):
    HAMILTONIAN = "HC"
    NONHAMILTONIAN = "NONHAM"
    TIMEOUT = "TIMEOUT"

    def __str__(self) -> str:
        return self.value


class Hardness(str, enum.Enum):
    EASY = "Easy"
    QUADRATIC = "QuadraticallyHard"
    ROBUST_QUADRATIC = "RobustlyQuadraticallyHard"

    def __str__(self) -> str:
        return self.value


@dataclass
class SearchConfig:
    """Solver policy.

    With ``restarts`` on, attempt ``i`` may spend at most
    ``ceil(initial_limit_factor * n) * multiplier**(i-1)`` nodes (the factor
    defaults to the multiplier, giving 2n, 4n, 8n, ...).  ``node_limit``
    caps the total over all attempts; ``time_limit`` is in seconds.
    ``start_vertex=None`` draws a fresh random start for every attempt.
    """

    heuristic: Heuristic = Heuristic.LOW
    restarts: bool = True
    multiplier: float = 2.0
    initial_limit_factor: float | None = None
    node_limit: int | None = None
    time_limit: float | None = None
    check_components: bool = False
    check_cutpoints: bool = False
    start_vertex: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        self.heuristic = Heuristic(self.heuristic)
        if self.multiplier < 1:
            raise ValueError("restart multiplier must be >= 1")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if (self.restarts and self.multiplier == 1 and self.node_limit is None
                and self.time_limit is None):
            raise ValueError("multiplier 1 never grows the restart limit; set a node or time limit")

    @property
    def robust(self) -> bool:
        return self.restarts and self.multiplier == 2


@dataclass
class SearchStats:
    nodes: int = 0
    restarts: int = 0
    attempt_nodes: list[int] = field(default_factory=list)
    attempt_limits: list[int | None] = field(default_factory=list)
    wall_time: float = 0.0
    phase: Phase = Phase.INITIAL_PRUNE

    @property
    def ms(self) -> int:
        return int(round(self.wall_time * 1000))


@dataclass
class SolveOutcome:
    kind: Outcome
    cycle: list[int] | None = None
    reason: Reason | None = None

    @property
    def hamiltonian(self) -> bool:
        return self.kind is Outcome.HAMILTONIAN


class _Search:
    """Arrays for one resumable search over ``g`` (mutated in place, restored after)."""

    chunk = 1024

    def __init__(self, g: Graph, j: DeletionJournal, cfg: SearchConfig):
        n = g.n
        self.g, self.j, self.cfg = g, j, cfg
        self.path = np.zeros(n, dtype=np.int32)
        self.on_path = np.zeros(n, dtype=np.int32)
        self.marks = np.zeros(n, dtype=np.int64)
        self.cand = np.zeros((n, n), dtype=np.int32)
        self.ncand = np.zeros(n, dtype=np.int32)
        self.ci = np.zeros(n, dtype=np.int32)
        self.s = K.scratch(n)
        self.ctl = np.zeros(3, dtype=np.int64)
        self.heuristic = _HEURISTIC_CODE[cfg.heuristic]
        self.check_comp = int(cfg.check_components)
        self.check_cut = int(cfg.check_cutpoints)

    def attempt(self, start: int, seed: int, cap: int, deadline: float | None) -> tuple[int, int]:
        """Run one bounded attempt; returns ``(status, nodes)``, status -1 on timeout."""
        g, j, s = self.g, self.j, self.s
        j.reserve()
        self.ctl[0] = -1
        self.ctl[1] = 0
        self.ctl[2] = start
        self.on_path[:] = 0
        while True:
            pause = cap if deadline is None else int(self.ctl[1]) + self.chunk
            status = K.search(g.nbr, g.pos, g.deg, g.n, j.rows, j.top, self.path, self.on_path,
                              self.marks, self.cand, self.ncand, self.ci, s["mark"], s["cnt"],
                              s["hits"], s["stamp"], s["comp"], s["stk"], s["disc"], s["low"],
                              s["parent"], s["itr"], s["is_art"], s["keys"], self.ctl,
                              self.heuristic, self.check_comp, self.check_cut, seed, cap, pause)
            if status != K.PAUSED:
                return int(status), int(self.ctl[1])
            if time.perf_counter() >= deadline:
                return -1, int(self.ctl[1])


def _restart_limits(n: int, cfg: SearchConfig):
    factor = cfg.initial_limit_factor if cfg.initial_limit_factor is not None else cfg.multiplier
    limit = math.ceil(factor * n)
    while True:
        yield limit
        limit = math.ceil(limit * cfg.multiplier)


def restart_schedule(n: int, cfg: SearchConfig, count: int) -> list[int]:
    """First ``count`` per-attempt node limits."""
    gen = _restart_limits(n, cfg)
    return [next(gen) for _ in range(count)]


def solve_prepared(work: Graph, j: DeletionJournal, cfg: SearchConfig,
                   original: Graph | None = None) -> tuple[SolveOutcome, SearchStats]:
    """Solve on a caller-owned working graph.

    ``work`` is pruned in place; on return it equals the post-initial-pruning
    graph, with the journal reset to that baseline.
    """
    t0 = time.perf_counter()
    original = original if original is not None else work.copy()
    stats = SearchStats()
    n = work.n
    if n < 3:
        raise ValueError("Hamiltonian cycles need n >= 3")

    pre = initial_check(work, j)
    if pre.nonhamiltonian:
        # baseline = pruned graph even when we stop here
        j.forget()
        stats.wall_time = time.perf_counter() - t0
        return SolveOutcome(Outcome.NONHAMILTONIAN, reason=pre.reason), stats
    j.forget()

    stats.phase = Phase.SEARCH
    rng = np.random.default_rng(cfg.seed)
    deadline = None if cfg.time_limit is None else t0 + cfg.time_limit
    limits = _restart_limits(n, cfg) if cfg.restarts else None
    search = _Search(work, j, cfg)
    outcome = None
    while outcome is None:
        start = cfg.start_vertex if cfg.start_vertex is not None else int(rng.integers(n))
        seed = int(rng.integers(1 << 32))
        limit = next(limits) if limits is not None else None
        cap = limit if limit is not None else _UNBOUNDED
        if cfg.node_limit is not None:
            cap = min(cap, cfg.node_limit - stats.nodes)
        status, used = search.attempt(start, seed, cap, deadline)
        stats.nodes += used
        stats.attempt_nodes.append(used)
        stats.attempt_limits.append(limit)

        if status == K.FOUND:
            cycle = search.path[:n].tolist()
            if not verify_cycle(original, cycle):
                raise AssertionError(f"search produced an invalid cycle: {cycle}")
            outcome = SolveOutcome(Outcome.HAMILTONIAN, cycle=cycle)
        elif status == K.EXHAUSTED:
            outcome = SolveOutcome(Outcome.NONHAMILTONIAN, reason=Reason.EXHAUSTED)
        elif status == K.BUDGET and limit is not None and used >= limit and (
                cfg.node_limit is None or stats.nodes < cfg.node_limit):
            stats.restarts += 1
        else:
            stats.phase = Phase.LIMIT_HIT
            outcome = SolveOutcome(Outcome.TIMEOUT)
        K.restore(work.nbr, work.pos, work.deg, j.rows, j.top, 0)

    stats.wall_time = time.perf_counter() - t0
    return outcome, stats


def solve(g: Graph, cfg: SearchConfig | None = None) -> tuple[SolveOutcome, SearchStats]:
    """Decide Hamiltonicity of ``g``; the input graph is never modified."""
    cfg = cfg or SearchConfig()
    work = g.copy()
    return solve_prepared(work, DeletionJournal(work), cfg, original=g)


def verify_cycle(g: Graph, cycle) -> bool:
    """True iff ``cycle`` visits every vertex once using edges of ``g``."""
    n = g.n
    if len(cycle) != n or len(set(cycle)) != n:
        return False
    if any(not (0 <= int(v) < n) for v in cycle):
        return False
    return all(g.has_edge(int(cycle[i]), int(cycle[(i + 1) % n])) for i in range(n))


def order_neighbors(g: Graph, v: int, heuristic: Heuristic | str,
                    rng: np.random.Generator | None = None) -> list[int]:
    """Neighbors of ``v`` in the order the search would try them."""
    heuristic = Heuristic(heuristic)
    row = g.nbr[v, : g.deg[v]].copy()
    seed = int(rng.integers(1 << 32)) if rng is not None else 0
    K.order_candidates(row, len(row), g.deg, _HEURISTIC_CODE[heuristic], seed,
                       np.zeros(max(len(row), 1), dtype=np.int64))
    return row.tolist()


def classify_hardness(nodes: int | SearchStats, n: int, robust: bool = False) -> Hardness:
    """``n**2`` search nodes or more counts as quadratically hard."""
    total = nodes.nodes if isinstance(nodes, SearchStats) else int(nodes)
    if total < n * n:
        return Hardness.EASY
    return Hardness.ROBUST_QUADRATIC if robust else Hardness.QUADRATIC


def brute_force_oracle(g: Graph) -> list[int] | None:
    """Exact answer by enumerating vertex orders that start at vertex 0.

    An order is abandoned at its first missing edge; nothing else is pruned.
    Returns a Hamiltonian cycle or None.
    """
    n = g.n
    if n > 12:
        raise ValueError(f"brute force is limited to n <= 12 (got {n})")
    if n < 3:
        return None
    adj = [sorted(g.neighbors(v)) for v in range(n)]
    closing = set(adj[0])
    order = [0]
    used = [False] * n
    used[0] = True

    def extend() -> bool:
        if len(order) == n:
            return order[-1] in closing
        for w in adj[order[-1]]:
            if not used[w]:
                used[w] = True
                order.append(w)
                if extend():
                    return True
                order.pop()
                used[w] = False
        return False

    return list(order) if extend() else None
