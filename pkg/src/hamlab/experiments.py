"""Parameter sweeps, result records, aggregate tables and reference curves."""

from __future__ import annotations

import csv
import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Iterator, TextIO

import numpy as np

from .generators import FAMILIES, InstanceSpec
from .graph import Graph
from .solver import Outcome, SearchConfig, classify_hardness, solve

CSV_COLUMNS = ["spec", "family", "n", "m", "param", "seed", "outcome", "phase", "nodes",
               "node_ratio", "restarts", "ms", "hardness"]
ERROR = "ERROR"

# which parameter a cell is labelled with in the ``param`` column
_PRIMARY = {"gnm": "m", "gnmk": "k", "gnstar": None, "degreebound": "p3",
            "knight": ("a", "b"), "iccs": ("k", "s")}


# ----------------------------------------------------------------- records


@dataclass
class ResultRecord:
    cell: int
    trial: int
    spec: str
    family: str
    n: int | None = None
    m: int | None = None
    param: Any = ""
    seed: int = 0
    outcome: str = ERROR
    phase: str = ""
    nodes: int | None = None
    restarts: int | None = None
    ms: int | None = None
    hardness: str = ""

    @property
    def node_ratio(self) -> float | None:
        if self.nodes is None or not self.n:
            return None
        return self.nodes / self.n

    @property
    def decided(self) -> bool:
        return self.outcome in (Outcome.HAMILTONIAN.value, Outcome.NONHAMILTONIAN.value)

    def row(self, timing: bool = False) -> list:
        ratio = self.node_ratio
        return [self.spec, self.family, _blank(self.n), _blank(self.m), self.param, self.seed,
                self.outcome, self.phase, _blank(self.nodes),
                "" if ratio is None else f"{ratio:.4f}", _blank(self.restarts),
                _blank(self.ms) if timing else "", self.hardness]


def _blank(v) -> str:
    return "" if v is None else str(v)


def records_from_csv(fh: TextIO) -> list[ResultRecord]:
    """Read back a sweep CSV (cell indices are rebuilt from row order)."""
    out = []
    cells: dict[tuple, int] = {}
    for i, row in enumerate(csv.DictReader(fh)):
        key = (row["family"], row["n"], row["param"])
        cell = cells.setdefault(key, len(cells))
        as_int = lambda s: int(s) if s not in ("", None) else None  # noqa: E731
        param: Any = row["param"]
        try:
            param = float(param) if "." in param else int(param)
        except ValueError:
            pass
        out.append(ResultRecord(cell, i, row["spec"], row["family"], as_int(row["n"]),
                                as_int(row["m"]), param, int(row["seed"]), row["outcome"],
                                row["phase"], as_int(row["nodes"]), as_int(row["restarts"]),
                                as_int(row["ms"]), row["hardness"]))
    return out


# ------------------------------------------------------------------ sweeps


@dataclass
class SweepSpec:
    """A family, a grid of its parameters, and how to solve each instance.

    ``grid`` maps every parameter of the family to a list of values; cells
    are the cartesian product in the family's parameter order.
    """

    family: str
    grid: dict[str, list]
    trials: int = 100
    config: SearchConfig = field(default_factory=SearchConfig)
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        keys = FAMILIES[self.family]
        missing = [k for k in keys if k not in self.grid]
        extra = [k for k in self.grid if k not in keys]
        if missing or extra:
            raise ValueError(f"{self.family} grid needs {keys}; missing {missing}, unexpected {extra}")
        if any(len(self.grid[k]) == 0 for k in keys):
            raise ValueError("every grid axis needs at least one value")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def cells(self) -> list[dict[str, Any]]:
        keys = FAMILIES[self.family]
        return [dict(zip(keys, combo)) for combo in itertools.product(*(self.grid[k] for k in keys))]

    def __len__(self) -> int:
        return len(self.cells()) * self.trials


def instance_seed(master: int, cell: int, trial: int, stream: int = 0) -> int:
    """64-bit seed that depends only on (master, cell, trial, stream)."""
    ss = np.random.SeedSequence([master, cell, trial, stream])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def cell_param(family: str, params: dict[str, Any]) -> Any:
    key = _PRIMARY[family]
    if key is None:
        return ""
    if isinstance(key, tuple):
        return ":".join(str(params[k]) for k in key)
    return params[key]


def run_instance(family: str, params: dict[str, Any], cell: int, trial: int, master: int,
                 cfg: SearchConfig) -> ResultRecord:
    """Generate and solve one instance; generator failures become error rows."""
    seed = instance_seed(master, cell, trial)
    rec = ResultRecord(cell, trial, "", family, param=cell_param(family, params), seed=seed)
    try:
        spec = InstanceSpec.make(family, seed=seed, **params)
        rec.spec = str(spec)
        g = spec.build()
    except Exception as exc:  # noqa: BLE001  (recorded, sweep goes on)
        rec.spec = rec.spec or f"{family}:" + ",".join(f"{k}={v}" for k, v in params.items())
        rec.phase = type(exc).__name__
        return rec
    rec.n, rec.m = g.n, g.m
    out, stats = solve(g, replace(cfg, seed=instance_seed(master, cell, trial, 1)))
    rec.outcome = out.kind.value
    rec.phase = stats.phase.value
    rec.nodes = stats.nodes
    rec.restarts = stats.restarts
    rec.ms = stats.ms
    rec.hardness = classify_hardness(stats, g.n, robust=cfg.robust).value
    return rec


def _task(args) -> ResultRecord:
    return run_instance(*args)


def run_sweep(spec: SweepSpec, workers: int = 1) -> Iterator[ResultRecord]:
    """Yield one record per (cell, trial), in that order, whatever ``workers`` is."""
    tasks = [(spec.family, params, c, t, spec.master_seed, spec.config)
             for c, params in enumerate(spec.cells()) for t in range(spec.trials)]
    if workers <= 1:
        for args in tasks:
            yield _task(args)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_task, tasks, chunksize=max(1, min(16, len(tasks) // (4 * workers))))


def write_csv(records: Iterable[ResultRecord], out: TextIO, timing: bool = False,
              progress: Callable[[ResultRecord], None] | None = None) -> list[ResultRecord]:
    """Stream records as CSV, flushing after each row; returns them."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    out.flush()
    done = []
    for rec in records:
        w.writerow(rec.row(timing))
        out.flush()
        done.append(rec)
        if progress is not None:
            progress(rec)
    return done


# ----------------------------------------------------------- config files


def _expand(text: str) -> list:
    """``a,b,c`` or an inclusive range ``start:stop:step``."""
    vals: list = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            lo, hi, step = (float(x) for x in part.split(":"))
            if step <= 0:
                raise ValueError(f"range step must be positive in {part!r}")
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            digits = max(0, -int(math.floor(math.log10(step))) + 2)
            vals.extend(round(lo + i * step, digits) for i in range(count))
        else:
            vals.append(float(part) if any(c in part for c in ".eE") else int(part))
    return vals


def _as_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_config(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ValueError(f"config line {lineno}: expected key = value")
        out[key.strip().replace("-", "_")] = val.strip()
    return out


_CHECKS = {"none": (False, False), "components": (True, False),
           "cutpoints": (False, True), "both": (True, True)}


def sweep_from_settings(settings: dict[str, str]) -> SweepSpec:
    """Build a SweepSpec from flat string settings (config file plus overrides)."""
    s = dict(settings)
    family = s.pop("family", None)
    if family is None:
        raise ValueError("sweep needs a family")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    grid = {k: _expand(s.pop(k)) for k in FAMILIES[family] if k in s}
    trials = int(s.pop("trials", 100))
    seed = int(s.pop("seed", 0))
    cfg_kw: dict[str, Any] = {}
    if "heuristic" in s:
        cfg_kw["heuristic"] = s.pop("heuristic")
    if "restarts" in s:
        cfg_kw["restarts"] = _as_bool(s.pop("restarts"))
    for key, conv in (("multiplier", float), ("node_limit", int), ("time_limit", float),
                      ("start_vertex", int), ("initial_limit_factor", float)):
        if key in s:
            cfg_kw[key] = conv(s.pop(key))
    if "checks" in s:
        comp, cut = _CHECKS[s.pop("checks")]
        cfg_kw["check_components"], cfg_kw["check_cutpoints"] = comp, cut
    if s:
        raise ValueError(f"unknown sweep settings: {sorted(s)}")
    return SweepSpec(family, grid, trials, SearchConfig(**cfg_kw), seed)


# -------------------------------------------------------------- aggregates


def _default_key(r: ResultRecord):
    return (r.family, r.n if r.family not in ("knight", "iccs") else None, r.param)


@dataclass
class CellSummary:
    trials: int = 0
    hamiltonian: int = 0
    nonhamiltonian: int = 0
    timeout: int = 0
    error: int = 0

    @property
    def decided(self) -> int:
        return self.hamiltonian + self.nonhamiltonian

    @property
    def pct(self) -> float | None:
        return 100.0 * self.hamiltonian / self.decided if self.decided else None


def pct_hamiltonian(records: Iterable[ResultRecord],
                    key: Callable[[ResultRecord], Any] = _default_key) -> dict[Any, CellSummary]:
    """Per-cell outcome counts; the percentage ignores timeouts and errors."""
    table: dict[Any, CellSummary] = {}
    for r in records:
        c = table.setdefault(key(r), CellSummary())
        c.trials += 1
        if r.outcome == Outcome.HAMILTONIAN.value:
            c.hamiltonian += 1
        elif r.outcome == Outcome.NONHAMILTONIAN.value:
            c.nonhamiltonian += 1
        elif r.outcome == Outcome.TIMEOUT.value:
            c.timeout += 1
        else:
            c.error += 1
    return table


def _isotonic(y: np.ndarray, w: np.ndarray) -> np.ndarray:
    from scipy.optimize import isotonic_regression

    return isotonic_regression(y, weights=w, increasing=True).x


def fifty_percent_point(curve: Iterable[tuple[float, float]],
                        weights: Iterable[float] | None = None) -> float:
    """Parameter where the %Hamiltonian curve crosses 50, by linear interpolation.

    Points may come in any order.  A curve that crosses 50 more than once
    is first smoothed by isotonic (non-decreasing) regression.
    """
    pts = sorted((float(x), float(y)) for x, y in curve)
    if not pts:
        raise ValueError("empty curve")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    side = np.sign(ys - 50.0)
    nonzero = side[side != 0]
    crossings = int(np.count_nonzero(np.diff(nonzero))) if len(nonzero) else 0
    if crossings > 1 or (crossings == 1 and np.any(np.diff(ys) < 0)):
        w = np.ones(len(ys)) if weights is None else np.asarray(list(weights), float)
        ys = _isotonic(ys, w)
    if ys.min() > 50 or ys.max() < 50:
        raise ValueError("curve does not cross 50%")
    at = np.flatnonzero(np.isclose(ys, 50.0))
    if len(at):
        return float((xs[at[0]] + xs[at[-1]]) / 2)
    i = int(np.flatnonzero(ys > 50)[0])
    if i == 0:
        raise ValueError("curve does not cross 50%")
    x0, x1, y0, y1 = xs[i - 1], xs[i], ys[i - 1], ys[i]
    return float(x0 + (50.0 - y0) * (x1 - x0) / (y1 - y0))


@dataclass
class HardnessRow:
    hard_hc: int = 0
    hard_nonham: int = 0
    timeout: int = 0


def hardness_counts(records: Iterable[ResultRecord],
                    key: Callable[[ResultRecord], Any] = _default_key) -> dict[Any, HardnessRow]:
    """Quadratically hard instances per cell, split by answer; timeouts kept apart."""
    table: dict[Any, HardnessRow] = {}
    for r in records:
        row = table.setdefault(key(r), HardnessRow())
        if r.outcome == Outcome.TIMEOUT.value:
            row.timeout += 1
        elif r.decided and r.nodes is not None and r.n and r.nodes >= r.n * r.n:
            if r.outcome == Outcome.HAMILTONIAN.value:
                row.hard_hc += 1
            else:
                row.hard_nonham += 1
    return table


RATIO_EDGES = (2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000, 20000, 50000)


def ratio_bucket(ratio: float, edges: tuple[int, ...] = RATIO_EDGES) -> str:
    for e in edges:
        if ratio <= e:
            return f"<={e}n" if e == edges[0] else f"{e}n"
    return f">{edges[-1]}n"


def node_ratio_histogram(records: Iterable[ResultRecord],
                         edges: tuple[int, ...] = RATIO_EDGES) -> dict[str, int]:
    """Counts of node ratios per bucket (smallest bucket edge at or above the ratio)."""
    hist = {ratio_bucket(e, edges): 0 for e in edges}
    hist[f">{edges[-1]}n"] = 0
    for r in records:
        if r.node_ratio is not None:
            hist[ratio_bucket(r.node_ratio, edges)] += 1
    return hist


# ------------------------------------------------------- reference curves


def ham_probability_theory(n: int, m: float) -> float:
    """Asymptotic P(G(n, m) is Hamiltonian) = exp(-exp(-2c))."""
    if n < 3:
        raise ValueError("n must be >= 3")
    c = 2 * m / n - math.log(n) - math.log(math.log(n))
    return math.exp(-math.exp(-2 * c))


def e_3d2_asymptotic(n: int, eps: float) -> float:
    return n * (1 - eps) * eps ** 3


def e_3d2(n: int, eps: float) -> float:
    """Expected number of degree-3 vertices with only degree-2 neighbours.

    Assumes a degree-3 vertex's three neighbours are a uniform 3-subset of
    the other vertices; 0 when fewer than three degree-2 vertices exist.
    """
    if not 0 <= eps <= 1:
        raise ValueError("eps must lie in [0, 1]")
    d2 = eps * n
    if d2 < 3:
        return 0.0
    return n * (1 - eps) * d2 * (d2 - 1) * (d2 - 2) / ((n - 1) * (n - 2) * (n - 3))


def predicted_50_point(n: int) -> float:
    """Mean degree where the expected 3D2 count is one."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return 3 - n ** (-1 / 3)


def count_3d2(g: Graph) -> int:
    """Degree-3 vertices whose three neighbours all have degree 2."""
    deg = g.deg
    idx = np.flatnonzero(deg == 3)
    if len(idx) == 0:
        return 0
    nb = g.nbr[idx, :3]
    return int(np.count_nonzero((deg[nb] == 2).all(axis=1)))


def progress_printer(total: int, stream: TextIO | None = None, every: int = 50):
    done = 0

    def show(rec: ResultRecord) -> None:
        nonlocal done
        done += 1
        if done % every == 0 or done == total:
            out = stream if stream is not None else sys.stderr
            out.write(f"\r{done}/{total} instances")
            if done == total:
                out.write("\n")
            out.flush()

    return show
