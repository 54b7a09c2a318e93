"""Seeded instance generators for the six graph families."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .graph import Graph


class GenerationError(RuntimeError):
    """Raised when a generator gives up (retry cap exceeded)."""


MAX_RETRIES = 1000
V2_MAX_FAILS = 100


class _Draws:
    """Buffered uniform integers from a numpy Generator."""

    def __init__(self, rng: np.random.Generator, block: int = 4096):
        self.rng = rng
        self.block = block
        self.buf = rng.random(block)
        self.i = 0

    def below(self, k: int) -> int:
        if self.i == self.block:
            self.buf = self.rng.random(self.block)
            self.i = 0
        x = self.buf[self.i]
        self.i += 1
        return int(x * k)


def _round_half_up(x: float) -> int:
    # guard against 81.49999999 coming from 0.815 * 100
    return math.floor(x + 0.5 + 1e-9)


def degree_param_to_m(n: int, k: float) -> int:
    """Edge count whose mean degree is ``k * (ln n + ln ln n)``."""
    if n < 3:
        raise ValueError("degree parameter needs n >= 3")
    if k <= 0:
        raise ValueError("degree parameter k must be positive")
    m = _round_half_up(k * (math.log(n) + math.log(math.log(n))) * n / 2)
    return max(0, min(m, n * (n - 1) // 2))


# ------------------------------------------------------------------ G(n, m)


def gnm_edges(n: int, m: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if m > n * (n - 1) // 2 or m < 0:
        raise ValueError(f"cannot place m={m} edges on n={n} vertices")
    draws = _Draws(rng)
    seen: set[tuple[int, int]] = set()
    out = []
    while len(out) < m:
        u = draws.below(n)
        v = draws.below(n)
        if u == v:
            continue
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            continue
        seen.add((u, v))
        out.append((u, v))
    return out


def gen_gnm(n: int, m: int, rng: np.random.Generator) -> Graph:
    """Uniform graph with exactly ``m`` edges (rejection sampling of pairs)."""
    return Graph.from_edges(n, gnm_edges(n, m, rng))


def gnstar_edges(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if n < 3:
        raise ValueError("G(n*) needs n >= 3")
    draws = _Draws(rng)
    deg = [0] * n
    short = n
    seen: set[tuple[int, int]] = set()
    out = []
    while short:
        u = draws.below(n)
        v = draws.below(n)
        if u == v:
            continue
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            continue
        seen.add((u, v))
        out.append((u, v))
        for w in (u, v):
            deg[w] += 1
            if deg[w] == 2:
                short -= 1
    return out


def gen_gnstar(n: int, rng: np.random.Generator) -> Graph:
    """Add random edges until the minimum degree reaches 2, then stop."""
    return Graph.from_edges(n, gnstar_edges(n, rng))


# ------------------------------------------------------------- Degreebound


def degreebound_targets(n: int, p3: float, rng: np.random.Generator) -> np.ndarray:
    """Degree-2/3 target sequence with the odd-total fix applied."""
    if n < 4:
        raise ValueError("Degreebound graphs need n >= 4")
    if not 0 <= p3 <= 1:
        raise ValueError("p3 must lie in [0, 1]")
    d3 = _round_half_up(p3 * n)
    target = np.full(n, 2, dtype=np.int64)
    target[rng.permutation(n)[:d3]] = 3
    if target.sum() % 2:
        lows = np.flatnonzero(target == target.min())
        target[lows[int(rng.integers(len(lows)))]] += 1
    return target


def _v1_attempt(target, draws: _Draws, rng: np.random.Generator):
    n = len(target)
    free = [int(d) for d in target]
    arr = [v for v in range(n) if free[v] > 0]
    where = {v: i for i, v in enumerate(arr)}
    seen: set[tuple[int, int]] = set()
    out = []

    def drop(v):
        i = where.pop(v)
        last = arr.pop()
        if last != v:
            arr[i] = last
            where[last] = i

    threshold = 2 * int(max(target))
    while len(arr) > threshold:
        v = arr[draws.below(len(arr))]
        w = arr[draws.below(len(arr))]
        if v == w:
            continue
        e = (v, w) if v < w else (w, v)
        if e in seen:
            continue
        seen.add(e)
        out.append(e)
        for x in (v, w):
            free[x] -= 1
            if free[x] == 0:
                drop(x)

    rest = sorted(arr)
    pairs = [(a, b) for i, a in enumerate(rest) for b in rest[i + 1:]]
    for idx in rng.permutation(len(pairs)):
        a, b = pairs[idx]
        if free[a] > 0 and free[b] > 0 and (a, b) not in seen:
            seen.add((a, b))
            out.append((a, b))
            free[a] -= 1
            free[b] -= 1
    if any(free):
        return None
    return out


def _v2_attempt(target, draws: _Draws):
    arr = [v for v, d in enumerate(target) for _ in range(int(d))]
    seen: set[tuple[int, int]] = set()
    out = []
    fails = 0
    while arr:
        i = draws.below(len(arr))
        j = draws.below(len(arr))
        v, w = arr[i], arr[j]
        e = (v, w) if v < w else (w, v)
        if v == w or e in seen:
            fails += 1
            if fails >= V2_MAX_FAILS:
                return None
            continue
        fails = 0
        seen.add(e)
        out.append(e)
        for k in sorted((i, j), reverse=True):
            arr[k] = arr[-1]
            arr.pop()
    return out


def degree_sequence_edges(target, version: int, rng: np.random.Generator,
                          max_retries: int = MAX_RETRIES) -> list[tuple[int, int]]:
    """Realize an arbitrary degree sequence with the version 1 or 2 procedure."""
    if version not in (1, 2):
        raise ValueError("version must be 1 or 2")
    if sum(int(d) for d in target) % 2:
        raise ValueError("degree sum must be even")
    draws = _Draws(rng)
    for _ in range(max_retries):
        edges = _v1_attempt(target, draws, rng) if version == 1 else _v2_attempt(target, draws)
        if edges is not None:
            return edges
    raise GenerationError(f"no realization after {max_retries} attempts")


def gen_degreebound(n: int, p3: float, version: int, rng: np.random.Generator) -> Graph:
    """Random graph whose vertices have degree 2 or 3, ``p3`` of them degree 3."""
    target = degreebound_targets(n, p3, rng)
    return Graph.from_edges(n, degree_sequence_edges(target, version, rng))


# ----------------------------------------------------------------- knights


def knight_edges(a: int, b: int, rows: int, cols: int) -> list[tuple[int, int]]:
    if a < 0 or b < 0 or (a == 0 and b == 0):
        raise ValueError("move steps must be non-negative and not both zero")
    if rows < 1 or cols < 1:
        raise ValueError("board needs at least one row and column")
    moves = {(sa * a, sb * b) for sa in (1, -1) for sb in (1, -1)}
    moves |= {(sb * b, sa * a) for sa in (1, -1) for sb in (1, -1)}
    out = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            for dr, dc in sorted(moves):
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    v = rr * cols + cc
                    if u < v:
                        out.append((u, v))
    return out


def gen_knight(a: int, b: int, rows: int, cols: int) -> Graph:
    """Generalized (a, b) knight's graph on a rows x cols board, cell id r*cols + c."""
    return Graph.from_edges(rows * cols, knight_edges(a, b, rows, cols))


# -------------------------------------------------------------------- ICCS


@dataclass
class IccsLayout:
    k_sub: int
    s: int
    independent: list[list[int]] = field(default_factory=list)
    plain: list[list[int]] = field(default_factory=list)
    t1: list[int] = field(default_factory=list)
    t2: list[int] = field(default_factory=list)
    decoy: list[int] = field(default_factory=list)
    connectors: list[int] = field(default_factory=list)
    cycle: list[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.k_sub * (2 * self.s + 2)

    def cover_set(self, j: int) -> list[int]:
        return [self.t1[j], self.t2[j], self.decoy[j], *self.plain[j]]


def iccs_mean_degree_bounds(s: int) -> tuple[float, float]:
    if s < 6:
        raise ValueError("independent set size must be >= 6")
    return s - 2.5 + 9.5 / (s + 1), s - 2 + 8 / (s + 1)


def gen_iccs(k_sub: int, s: int, rng: np.random.Generator) -> tuple[Graph, IccsLayout]:
    """Interconnected-cutset graph: ``k_sub`` gadgets on a ring.

    Per gadget (``2s + 2`` ids): independent set ``i_1..i_s``, terminals
    ``t1, t2``, decoy ``d``, plain vertices ``c_1..c_{s-2}`` and the degree-2
    connector to the next gadget.  Plain vertices are joined to every
    independent vertex; ``t1-i_1`` and ``t2-i_s`` are the only terminal
    links into the independent set; the decoy touches both terminals plus
    ``i_2`` and ``i_{s-1}``.  With several gadgets every plain vertex also
    gets one random edge to a plain vertex of another gadget; those edges
    lie on no Hamiltonian cycle.
    """
    if k_sub < 1:
        raise ValueError("need at least one subgraph")
    if s < 6:
        raise ValueError("independent set size must be >= 6")
    block = 2 * s + 2
    lay = IccsLayout(k_sub, s)
    g = Graph(k_sub * block)
    for j in range(k_sub):
        base = j * block
        ind = list(range(base, base + s))
        t1, t2, d = base + s, base + s + 1, base + s + 2
        plain = list(range(base + s + 3, base + 2 * s + 1))
        u = base + 2 * s + 1
        lay.independent.append(ind)
        lay.plain.append(plain)
        lay.t1.append(t1)
        lay.t2.append(t2)
        lay.decoy.append(d)
        lay.connectors.append(u)
        g.add_edge(t1, ind[0])
        g.add_edge(t2, ind[-1])
        for x in (t1, t2, ind[1], ind[-2]):
            g.add_edge(d, x)
        for c in plain:
            for i in ind:
                g.add_edge(c, i)
    for j in range(k_sub):
        g.add_edge(lay.t2[j], lay.connectors[j])
        g.add_edge(lay.connectors[j], lay.t1[(j + 1) % k_sub])

    if k_sub >= 2:
        draws = _Draws(rng)
        for j in range(k_sub):
            for c in lay.plain[j]:
                other = draws.below(k_sub - 1)
                if other >= j:
                    other += 1
                g.add_edge(c, lay.plain[other][draws.below(s - 2)])

    for j in range(k_sub):
        ind, plain = lay.independent[j], lay.plain[j]
        seq = [lay.t1[j], ind[0], plain[0], ind[1], lay.decoy[j], ind[-2]]
        middle = ind[2:-2]
        for c, i in zip(plain[1:], middle):
            seq += [c, i]
        seq += [plain[-1], ind[-1], lay.t2[j], lay.connectors[j]]
        lay.cycle.extend(seq)
    return g, lay


# ------------------------------------------------------------ InstanceSpec

FAMILIES: dict[str, tuple[str, ...]] = {
    "gnm": ("n", "m"),
    "gnmk": ("n", "k"),
    "gnstar": ("n",),
    "degreebound": ("n", "p3", "version"),
    "knight": ("a", "b", "rows", "cols"),
    "iccs": ("k", "s"),
}
_FLOAT_PARAMS = {"k", "p3"}
_SEEDLESS = {"knight"}


def _fmt(v: Any) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


@dataclass(frozen=True)
class InstanceSpec:
    """One generator invocation, e.g. ``gnm:n=100,m=322,seed=42``.

    ``k`` means the degree parameter for ``gnmk`` and the subgraph count for
    ``iccs``.
    """

    family: str
    params: tuple[tuple[str, Any], ...]
    seed: int = 0

    @classmethod
    def make(cls, family: str, seed: int = 0, **params) -> "InstanceSpec":
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
        keys = FAMILIES[family]
        missing = [k for k in keys if k not in params]
        extra = [k for k in params if k not in keys]
        if missing or extra:
            raise ValueError(f"{family} takes {keys}; missing {missing}, unexpected {extra}")
        typed = tuple((k, float(params[k]) if k in _FLOAT_PARAMS and family != "iccs"
                       else int(params[k])) for k in keys)
        spec = cls(family, typed, int(seed))
        spec.validate()
        return spec

    @classmethod
    def parse(cls, text: str) -> "InstanceSpec":
        family, _, body = text.strip().partition(":")
        kv = {}
        for item in filter(None, body.split(",")):
            key, sep, val = item.partition("=")
            if not sep:
                raise ValueError(f"bad spec item {item!r} in {text!r}")
            kv[key.strip()] = val.strip()
        seed = int(kv.pop("seed", 0))
        return cls.make(family.strip(), seed=seed, **kv)

    def __getitem__(self, key: str) -> Any:
        return dict(self.params)[key]

    def __str__(self) -> str:
        body = ",".join(f"{k}={_fmt(v)}" for k, v in self.params)
        if self.family in _SEEDLESS:
            return f"{self.family}:{body}"
        return f"{self.family}:{body},seed={self.seed}"

    def validate(self) -> None:
        p = dict(self.params)
        f = self.family
        if f in ("gnm", "gnmk", "gnstar", "degreebound") and p["n"] < 1:
            raise ValueError("n must be positive")
        if f == "gnm" and not 0 <= p["m"] <= p["n"] * (p["n"] - 1) // 2:
            raise ValueError(f"m={p['m']} out of range for n={p['n']}")
        if f == "gnmk" and (p["k"] <= 0 or p["n"] < 3):
            raise ValueError("gnmk needs k > 0 and n >= 3")
        if f == "gnstar" and p["n"] < 3:
            raise ValueError("gnstar needs n >= 3")
        if f == "degreebound" and (not 0 <= p["p3"] <= 1 or p["version"] not in (1, 2)
                                   or p["n"] < 4):
            raise ValueError("degreebound needs n >= 4, 0 <= p3 <= 1, version 1|2")
        if f == "knight" and (p["a"] < 0 or p["b"] < 0 or p["a"] == p["b"] == 0
                              or p["rows"] < 1 or p["cols"] < 1):
            raise ValueError("knight needs a, b >= 0 (not both 0) and a non-empty board")
        if f == "iccs" and (p["k"] < 1 or p["s"] < 6):
            raise ValueError("iccs needs k >= 1 and s >= 6")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def build_with_layout(self) -> tuple[Graph, IccsLayout | None]:
        p = dict(self.params)
        rng = self.rng()
        f = self.family
        if f == "gnm":
            return gen_gnm(p["n"], p["m"], rng), None
        if f == "gnmk":
            return gen_gnm(p["n"], degree_param_to_m(p["n"], p["k"]), rng), None
        if f == "gnstar":
            return gen_gnstar(p["n"], rng), None
        if f == "degreebound":
            return gen_degreebound(p["n"], p["p3"], p["version"], rng), None
        if f == "knight":
            return gen_knight(p["a"], p["b"], p["rows"], p["cols"]), None
        g, lay = gen_iccs(p["k"], p["s"], rng)
        return g, lay

    def build(self) -> Graph:
        return self.build_with_layout()[0]
