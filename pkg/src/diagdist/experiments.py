"""Monte Carlo runs on G(n, p) and exhaustive f(n) for tiny n."""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import analytic
from .exact_solver import diagonal_distance, upper_bound_mindeg, upper_bound_pairs
from .flip_game import verify_witness
from .graph_core import Graph, GraphError, gnp, serialize_graph6
from .heuristic import best_witness

SCHEMA_ID = "diagdist-exp-v1"
CSV_COLUMNS = (
    "schema_id", "n", "p", "trial", "seed", "f", "proven_optimal", "mindeg_bound",
    "pair_bound", "fhat_pred", "regime_pred", "regime_obs", "micros",
)
CURVE_SCHEMA_ID = "diagdist-curve-v1"
CURVE_COLUMNS = ("schema_id", "n", "p", "trials", "mean_f_over_n", "mean_mindeg_over_n", "fhat_pred", "regime_pred")

# Without a budget the exact search is only run where it stays affordable.
UNBOUNDED_MAX_N = 48
EXHAUSTIVE_MAX_N = 7


class ExperimentError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    p_grid: Tuple[float, ...]
    trials: int
    seed: int
    budget: Optional[int] = 10**9
    out: Optional[str] = None
    threads: int = 1
    timing: bool = True
    heuristic_effort: int = 2000

    def __post_init__(self):
        object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))
        if self.n < 2:
            raise ExperimentError("experiments need n >= 2")
        if self.trials < 1:
            raise ExperimentError("trials must be at least 1")
        for p in self.p_grid:
            if not 0.0 < p < 1.0:
                raise ExperimentError(f"grid probability {p} not in (0, 1)")
        if self.budget is None and self.n > UNBOUNDED_MAX_N:
            raise ExperimentError(
                f"n={self.n} is too large for unbounded exact search; pass a node budget "
                "and non-optimal trials will be flagged"
            )


@dataclass(frozen=True)
class ExperimentRecord:
    n: int
    p: float
    trial: int
    seed: int
    f: int
    proven_optimal: bool
    mindeg_bound: int
    pair_bound: int
    fhat_pred: float
    regime_pred: str
    regime_obs: str
    micros: int = field(default=0, compare=False)

    def csv_row(self) -> List[str]:
        return [
            SCHEMA_ID, str(self.n), repr(self.p), str(self.trial), str(self.seed), str(self.f),
            str(int(self.proven_optimal)), str(self.mindeg_bound), str(self.pair_bound),
            repr(self.fhat_pred), self.regime_pred, self.regime_obs, str(self.micros),
        ]


def observed_regime(f: int, mindeg_bound: int, pair_bound: int) -> str:
    if f == mindeg_bound:
        return analytic.REGIME_MINDEG
    if f == pair_bound:
        return analytic.REGIME_PAIR
    return analytic.REGIME_PLATEAU


def trial_seed(master: int, p_index: int, trial: int) -> int:
    """64-bit seed for one trial, derived by SeedSequence from ``(master, p_index, trial)``."""
    ss = np.random.SeedSequence(int(master), spawn_key=(int(p_index), int(trial)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def solve_trial(n: int, p: float, trial: int, seed: int, budget: Optional[int], effort: int,
                timing: bool = True) -> ExperimentRecord:
    start = time.perf_counter()
    G = gnp(n, p, seed)
    res = diagonal_distance(G, budget=budget)
    wit, proven = res.witness, res.proven_optimal
    if not proven:
        alt = best_witness(G, effort=effort, seed=seed)
        if alt.cost < wit.cost:
            wit = alt
    ok, cost = verify_witness(G, wit.A)
    if not ok or cost != wit.cost:
        raise AssertionError(f"invalid witness for n={n}, p={p}, seed={seed}")
    mindeg, _ = upper_bound_mindeg(G)
    pair, _ = upper_bound_pairs(G)
    fhat, regime = analytic.predicted_fhat(p)
    micros = int((time.perf_counter() - start) * 1e6) if timing else 0
    return ExperimentRecord(n, p, trial, seed, wit.cost, proven, mindeg, pair, fhat, regime,
                            observed_regime(wit.cost, mindeg, pair), micros)


def _run_one(args) -> Tuple[int, int, ExperimentRecord]:
    pi, trial, cfg = args
    p = cfg.p_grid[pi]
    rec = solve_trial(cfg.n, p, trial, trial_seed(cfg.seed, pi, trial), cfg.budget, cfg.heuristic_effort, cfg.timing)
    return pi, trial, rec


def run_gnp_experiment(cfg: ExperimentConfig) -> List[ExperimentRecord]:
    """One record per (grid point, trial), ordered by grid index then trial."""
    jobs = [(pi, t, cfg) for pi in range(len(cfg.p_grid)) for t in range(cfg.trials)]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            done = list(pool.map(_run_one, jobs, chunksize=max(1, len(jobs) // (4 * cfg.threads))))
    else:
        done = [_run_one(job) for job in jobs]
    done.sort(key=lambda item: (item[0], item[1]))
    records = [rec for _, _, rec in done]
    if cfg.out:
        write_records_csv(records, cfg.out)
    return records


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow(rec.csv_row())
    return buf.getvalue()


def write_records_csv(records: Iterable[ExperimentRecord], path) -> None:
    Path(path).write_text(records_to_csv(records))


def read_records_csv(path) -> List[ExperimentRecord]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["schema_id"] != SCHEMA_ID:
                raise ExperimentError(f"unknown CSV schema {row['schema_id']!r}")
            out.append(ExperimentRecord(
                int(row["n"]), float(row["p"]), int(row["trial"]), int(row["seed"]), int(row["f"]),
                row["proven_optimal"] == "1", int(row["mindeg_bound"]), int(row["pair_bound"]),
                float(row["fhat_pred"]), row["regime_pred"], row["regime_obs"], int(row["micros"]),
            ))
    return out


def parse_grid(spec: str) -> Tuple[float, ...]:
    """``"a:b:step"`` (inclusive of ``b`` up to rounding) or a comma list."""
    if ":" in spec:
        lo, hi, step = (float(x) for x in spec.split(":"))
        if step <= 0:
            raise ExperimentError("grid step must be positive")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return tuple(round(lo + k * step, 12) for k in range(count))
    return tuple(float(x) for x in spec.split(",") if x.strip())


# --- the f-hat curve ------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    p: float
    mean_f_over_n: float
    mean_mindeg_over_n: float
    fhat_pred: float
    regime_pred: str


def summarize(records: Sequence[ExperimentRecord]) -> List[CurvePoint]:
    by_p = {}
    for rec in records:
        by_p.setdefault(rec.p, []).append(rec)
    out = []
    for p in sorted(by_p):
        rs = by_p[p]
        n = rs[0].n
        fhat, regime = analytic.predicted_fhat(p)
        out.append(CurvePoint(
            p,
            math.fsum(r.f for r in rs) / (n * len(rs)),
            math.fsum(r.mindeg_bound for r in rs) / (n * len(rs)),
            fhat, regime,
        ))
    return out


def fhat_curve(n: int, p_grid: Sequence[float], trials: int, seed: int, budget: Optional[int] = 10**9,
               threads: int = 1) -> List[CurvePoint]:
    cfg = ExperimentConfig(n, tuple(p_grid), trials, seed, budget, threads=threads, timing=False)
    return summarize(run_gnp_experiment(cfg))


def curve_to_csv(points: Sequence[CurvePoint], n: int, trials: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_COLUMNS)
    for pt in points:
        w.writerow([CURVE_SCHEMA_ID, n, f"{pt.p:.10g}", trials, f"{pt.mean_f_over_n:.12f}",
                    f"{pt.mean_mindeg_over_n:.12f}", f"{pt.fhat_pred:.12f}", pt.regime_pred])
    return buf.getvalue()


@dataclass(frozen=True)
class ShapeVerdict:
    rising: bool
    plateau: bool
    falling: bool
    plateau_ps: Tuple[float, ...] = ()

    @property
    def passed(self) -> bool:
        return self.rising and self.plateau and self.falling


def three_phase_shape(points: Sequence[CurvePoint], plateau_band: float = 0.03, slack: float = 0.005) -> ShapeVerdict:
    """Rise, plateau, fall, read off the empirical curve.

    The plateau is the set of grid points within ``plateau_band`` of the
    maximum; it must be a contiguous run of at least two points that contains
    ``p = 1/2``.  Points left of it must be nondecreasing and points right of
    it nonincreasing (both up to ``slack``), with at least one on each side.
    At small n the flat part is narrower than ``[lambda0, p0]``, so the
    predicted regimes are not used to place it.
    """
    pts = sorted(points, key=lambda pt: pt.p)
    ys = [pt.mean_f_over_n for pt in pts]
    if len(ys) < 5:
        raise ExperimentError("shape test needs at least five grid points")
    top = max(ys)
    flat = [k for k, y in enumerate(ys) if y >= top - plateau_band]
    lo, hi = flat[0], flat[-1]
    contiguous = flat == list(range(lo, hi + 1))
    plateau = contiguous and len(flat) >= 2 and pts[lo].p <= 0.5 <= pts[hi].p
    left, right = ys[: lo + 1], ys[hi:]
    rising = lo >= 1 and all(b - a >= -slack for a, b in zip(left, left[1:]))
    falling = hi <= len(ys) - 2 and all(a - b >= -slack for a, b in zip(right, right[1:]))
    return ShapeVerdict(rising, plateau, falling, tuple(pts[k].p for k in flat))


# --- f(n) by exhaustion ---------------------------------------------------


def all_labeled_graphs(n: int) -> Iterable[Graph]:
    """Every labelled graph on ``n`` vertices; bit ``k`` of the code is the ``k``-th pair in row-major order."""
    pairs = list(itertools.combinations(range(n), 2))
    for code in range(1 << len(pairs)):
        rows = [0] * n
        for k, (u, v) in enumerate(pairs):
            if code >> k & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        yield Graph(n, tuple(rows))


@dataclass(frozen=True)
class FnResult:
    n: int
    f_n: int
    argmax_graph6: str
    graphs: int
    gv_l: int


def exhaustive_fn(n: int, include_edgeless: bool = True) -> FnResult:
    """``f(n) = max f(G)`` over labelled graphs of order ``n``.

    ``include_edgeless`` selects the reading of "non-empty graph": nonzero
    vertex count (default) or at least one edge.  The first maximiser in code
    order is returned.
    """
    if not 1 <= n <= EXHAUSTIVE_MAX_N:
        raise GraphError(f"exhaustive f(n) is limited to 1 <= n <= {EXHAUSTIVE_MAX_N}")
    best, arg, count = None, None, 0
    for G in all_labeled_graphs(n):
        if not include_edgeless and G.num_edges == 0:
            continue
        count += 1
        f = diagonal_distance(G, budget=None).f
        if best is None or f > best:
            best, arg = f, G
    if best is None:
        raise GraphError(f"no graph with an edge on {n} vertex")
    gv = analytic.best_gv_bound(n)
    if best < gv or best > n:
        raise AssertionError(f"f({n}) = {best} contradicts the counting bounds")
    return FnResult(n, best, serialize_graph6(arg), count, gv)
