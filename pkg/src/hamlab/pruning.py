"""Edge pruning, pre-search checks and cheap non-Hamiltonicity certificates."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .graph import DeletionJournal, Graph


class Reason(str, enum.Enum):
    MIN_DEGREE = "MinDegree"
    TRI_FORCED = "TriForced"
    DISCONNECTED = "Disconnected"
    CUT_POINT = "CutPoint"
    ODD_FORCED_DEGREE = "OddForcedDegree"
    EXHAUSTED = "Exhausted"

    def __str__(self) -> str:
        return self.value


_CODE_TO_REASON = {
    K.MIN_DEGREE: Reason.MIN_DEGREE,
    K.TRI_FORCED: Reason.TRI_FORCED,
    K.DISCONNECTED: Reason.DISCONNECTED,
    K.CUT_POINT: Reason.CUT_POINT,
    K.ODD_FORCED_DEGREE: Reason.ODD_FORCED_DEGREE,
}


@dataclass
class PruneOutcome:
    nonhamiltonian: bool
    deleted: int
    reason: Reason | None = None
    passes: int = 0

    @property
    def status(self) -> str:
        return "NonHamiltonian" if self.nonhamiltonian else "Reduced"


@dataclass
class Certificate:
    """Verdict of a standalone test; ``witness`` explains a NonHamiltonian one."""

    nonhamiltonian: bool
    reason: Reason | None = None
    witness: dict = field(default_factory=dict)

    def describe(self) -> str:
        if not self.nonhamiltonian:
            return "INCONCLUSIVE"
        w = self.witness
        if self.reason is Reason.ODD_FORCED_DEGREE:
            members = ",".join(str(v) for v in w["component"])
            return f"NONHAM odd forced degree, component={{{members}}}, fdeg={w['fdeg']}"
        cut = ",".join(str(v) for v in w["cut"])
        return f"NONHAM cut={{{cut}}} components={w['components']}"


def _run_prune(g: Graph, j: DeletionJournal, s: dict) -> tuple[int, int]:
    j.reserve()
    return K.prune(g.nbr, g.pos, g.deg, g.n, j.rows, j.top, s["mark"], s["cnt"],
                   s["hits"], s["stamp"])


def prune_fixpoint(g: Graph, j: DeletionJournal) -> PruneOutcome:
    """Delete edges that no Hamiltonian cycle can use, until nothing changes.

    Two rules, applied in sweeps:

    * a vertex with exactly two degree-2 neighbours loses every other edge
      (three or more such neighbours is an immediate certificate);
    * the end-to-end edge of a maximal path of degree-2 vertices is deleted
      unless the path already spans all ``n`` vertices.

    Deletions go to the journal under the currently open mark.  A vertex
    of degree below two, or a closed forced cycle shorter than ``n``,
    yields ``MinDegree``.
    """
    assert j.g is g and j._marks, "prune_fixpoint needs an open journal mark"
    before = len(j)
    code, passes = _run_prune(g, j, K.scratch(g.n))
    deleted = len(j) - before
    if code == K.REDUCED:
        return PruneOutcome(False, deleted, None, int(passes))
    return PruneOutcome(True, deleted, _CODE_TO_REASON[int(code)], int(passes))


def _screen(g: Graph) -> Reason | None:
    if g.min_degree() < 2:
        return Reason.MIN_DEGREE
    s = K.scratch(g.n)
    nart, ncomp = K.articulation(g.nbr, g.deg, g.n, s["disc"], s["low"], s["parent"],
                                 s["itr"], s["stk"], s["is_art"])
    if ncomp > 1:
        return Reason.DISCONNECTED
    if nart > 0:
        return Reason.CUT_POINT
    return None


def initial_check(g: Graph, j: DeletionJournal) -> PruneOutcome:
    """Pre-search filter: minimum degree 2, connected, no cut-points.

    The raw graph is screened first so that structural defects are reported
    as such, then pruned to a fixpoint and screened again.
    """
    if not j._marks:
        j.mark()
    reason = _screen(g)
    if reason is not None:
        return PruneOutcome(True, 0, reason, 0)
    out = prune_fixpoint(g, j)
    if out.nonhamiltonian:
        return out
    reason = _screen(g)
    if reason is not None:
        return PruneOutcome(True, out.deleted, reason, out.passes)
    return out


def forced_edges(g: Graph) -> set[tuple[int, int]]:
    """Edges incident on a degree-2 vertex, as ``(u, v)`` with ``u < v``."""
    return {(u, v) for u, v in g.edges() if g.deg[u] == 2 or g.deg[v] == 2}


def forced_degree_parity_test(g: Graph) -> Certificate:
    """Odd forced-degree certificate, linear time.

    Remove the forced edges; every component of what is left must be
    entered and left through forced edges, so its count of forced-edge
    endpoints has to be even in a Hamiltonian graph.
    """
    comp = np.zeros(g.n, dtype=np.int32)
    fdeg = np.zeros(g.n, dtype=np.int64)
    odd, _ = K.forced_parity(g.nbr, g.deg, g.n, comp, fdeg, np.zeros(g.n, dtype=np.int32))
    if odd < 0:
        return Certificate(False)
    members = np.flatnonzero(comp == odd).tolist()
    return Certificate(True, Reason.ODD_FORCED_DEGREE,
                       {"component": members, "fdeg": int(fdeg[odd])})


def small_cutset_scan(g: Graph, max_c: int = 3) -> Certificate:
    """Look for a vertex set S, ``|S| <= max_c``, leaving more than ``|S|`` components.

    Exhaustive over all subsets, so O(n^max_c (n + m)); meant for post-mortem
    diagnosis rather than the search loop.
    """
    if max_c not in (1, 2, 3):
        raise ValueError("max_c must be 1, 2 or 3")
    removed = np.zeros(g.n, dtype=np.int8)
    comp = np.zeros(g.n, dtype=np.int32)
    stk = np.zeros(g.n, dtype=np.int32)
    for c in range(1, max_c + 1):
        for cut in itertools.combinations(range(g.n), c):
            if c >= g.n:
                break
            removed[list(cut)] = 1
            parts = K.count_components_without(g.nbr, g.deg, g.n, removed, comp, stk)
            removed[list(cut)] = 0
            if parts > c:
                return Certificate(True, Reason.CUT_POINT if c == 1 else Reason.DISCONNECTED,
                                   {"cut": list(cut), "components": int(parts)})
    return Certificate(False)
