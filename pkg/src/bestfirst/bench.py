"""Pure-enumeration benchmarks: throughput curves, time-to-target scaling and
per-block delay profiles.  Results flatten to one CSV schema."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .costs import CostModel, integer_model, real_model
from .engines import ALGORITHMS, batches, make_enumerator
from .errors import UnknownAlgorithm
from .grammar import Grammar, SeededRandom, make_family

CSV_FIELDS = [
    "family", "k", "seed", "algorithm", "bucket_size",
    "cost_mode", "metric", "block_or_tick", "value",
]
BLOCK = 100_000
TICK = 1.0


@dataclass
class BenchConfig:
    family: str = "D"
    ks: Sequence[int] = (4,)
    algorithms: Sequence[str] = ALGORITHMS
    seeds: Sequence[int] = (0, 1, 2, 3, 4)
    duration: float = 60.0
    target: int = 1_000_000
    timeout: float = 300.0
    bucket_size: int | None = None
    cost_mode: str = "int"
    rho: float = 0.01
    jobs: int = 1

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("at least one seed is required")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise UnknownAlgorithm(f"unknown algorithm {a!r}")

    def cost_label(self) -> str:
        return f"real(rho={self.rho:g})" if self.cost_mode == "real" else "int"


@dataclass
class BenchSample:
    family: str
    k: int
    seed: int
    algorithm: str
    bucket_size: int | None
    cost_mode: str
    elapsed: float = 0.0
    programs: int = 0
    # (tick index, cumulative programs) for throughput runs
    ticks: list[tuple[int, int]] = field(default_factory=list)
    queue_ops: int = 0
    empty_calls: int = 0
    # time-to-target runs: None means the run did not finish
    seconds_to_target: float | None = None

    def rows(self) -> list[dict]:
        base = {
            "family": self.family, "k": self.k, "seed": self.seed,
            "algorithm": self.algorithm,
            "bucket_size": "" if self.bucket_size is None else self.bucket_size,
            "cost_mode": self.cost_mode,
        }
        out = [dict(base, metric="programs", block_or_tick=t, value=n) for t, n in self.ticks]
        out.append(dict(base, metric="queue_ops", block_or_tick="", value=self.queue_ops))
        if self.algorithm == "bee":
            out.append(dict(base, metric="empty_calls", block_or_tick="", value=self.empty_calls))
        if not self.ticks:
            v = "DNF" if self.seconds_to_target is None else f"{self.seconds_to_target:.6f}"
            out.append(dict(base, metric="seconds_to_target", block_or_tick="", value=v))
        return out


def family_grammar(family: str, k: int, seed: int) -> Grammar:
    return make_family(family, k, SeededRandom(seed=seed))


def cost_model(g: Grammar, mode: str, rho: float) -> CostModel:
    # family costs are integers; real mode reads them as reals rounded to rho
    return real_model(g, rho) if mode == "real" else integer_model(g)


def _throughput_run(cfg: BenchConfig, k: int, algo: str, seed: int) -> BenchSample:
    g = family_grammar(cfg.family, k, seed)
    m = cost_model(g, cfg.cost_mode, cfg.rho)
    t0 = time.perf_counter()
    e = make_enumerator(algo, g, m, cfg.bucket_size)
    s = BenchSample(cfg.family, k, seed, algo, getattr(e, "bucket_size", None), cfg.cost_label())
    n = 0
    next_tick = 1
    if cfg.duration > 0:
        for _, progs in batches(e):
            n += len(progs)
            now = time.perf_counter() - t0
            while now >= next_tick * TICK and next_tick * TICK <= cfg.duration:
                s.ticks.append((next_tick, n))
                next_tick += 1
            if now >= cfg.duration:
                break
    last = max(1, int(cfg.duration // TICK))
    while next_tick <= last:
        # enumeration ended (finite language) or the duration is zero
        s.ticks.append((next_tick, n))
        next_tick += 1
    s.elapsed = time.perf_counter() - t0
    s.programs = n
    s.queue_ops = e.queue_steps
    s.empty_calls = getattr(e, "empty_calls", 0)
    return s


def _scaling_run(cfg: BenchConfig, k: int, algo: str, seed: int) -> BenchSample:
    g = family_grammar(cfg.family, k, seed)
    m = cost_model(g, cfg.cost_mode, cfg.rho)
    t0 = time.perf_counter()
    e = make_enumerator(algo, g, m, cfg.bucket_size)
    s = BenchSample(cfg.family, k, seed, algo, getattr(e, "bucket_size", None), cfg.cost_label())
    n = 0
    for _, progs in batches(e):
        n += len(progs)
        elapsed = time.perf_counter() - t0
        if n >= cfg.target:
            s.seconds_to_target = elapsed
            break
        if elapsed > cfg.timeout:
            break
    s.elapsed = time.perf_counter() - t0
    s.programs = n
    s.queue_ops = e.queue_steps
    s.empty_calls = getattr(e, "empty_calls", 0)
    return s


def _run_all(fn, cfg: BenchConfig) -> list[BenchSample]:
    jobs = [(cfg, k, a, s) for k in cfg.ks for a in cfg.algorithms for s in cfg.seeds]
    if cfg.jobs <= 1:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def run_throughput(cfg: BenchConfig) -> list[BenchSample]:
    """Cumulative program counts at one-second ticks, per (k, algorithm, seed)."""
    return _run_all(_throughput_run, cfg)


def run_scaling(cfg: BenchConfig) -> list[BenchSample]:
    """Seconds to reach ``cfg.target`` programs; None (DNF) on timeout."""
    if cfg.target < 1:
        raise ValueError("target must be at least 1")
    return _run_all(_scaling_run, cfg)


@dataclass
class BlockStat:
    index: int
    seconds: float
    queue_ops: float
    output_calls: float


@dataclass
class DelayReport:
    algorithm: str
    bucket_size: int | None
    blocks: list[BlockStat]

    @property
    def ratio(self) -> float:
        first, last = self.blocks[0].queue_ops, self.blocks[-1].queue_ops
        return last / first if first else float("inf")


def _calls(e) -> int:
    """Calls of the enumerator's central routine so far."""
    for attr in ("output_calls", "calls", "generated"):
        v = getattr(e, attr, None)
        if isinstance(v, int):
            return v
    return 0


def measure_delay(
    g: Grammar,
    m: CostModel,
    algorithm: str,
    n: int,
    block: int = BLOCK,
    bucket_size: int | None = None,
) -> DelayReport:
    """Wall time and operation counts per block of ``block`` programs.

    One enumerator step can emit a whole cost level spanning several blocks;
    its work is then shared among those blocks in proportion to the programs
    each receives.
    """
    if n < 2 * block:
        raise ValueError(f"need at least two blocks of {block} programs")
    nblocks = n // block
    e = make_enumerator(algorithm, g, m, bucket_size)
    ops = [0.0] * nblocks
    calls = [0.0] * nblocks
    secs = [0.0] * nblocks
    emitted = 0
    prev_ops, prev_calls = e.queue_steps, _calls(e)
    prev_t = time.perf_counter()
    total = nblocks * block
    for _, progs in batches(e):
        now = time.perf_counter()
        d_ops = e.queue_steps - prev_ops
        d_calls = _calls(e) - prev_calls
        d_t = now - prev_t
        prev_ops, prev_calls, prev_t = e.queue_steps, _calls(e), now
        take = min(len(progs), total - emitted)
        if take == 0:
            # empty step: charge it to the block in progress
            b = min(emitted // block, nblocks - 1)
            ops[b] += d_ops
            calls[b] += d_calls
            secs[b] += d_t
            continue
        pos = emitted
        while pos < emitted + take:
            b = pos // block
            share = min((b + 1) * block, emitted + take) - pos
            frac = share / take
            ops[b] += d_ops * frac
            calls[b] += d_calls * frac
            secs[b] += d_t * frac
            pos += share
        emitted += take
        if emitted >= total:
            break
    stats = [BlockStat(i, secs[i], ops[i], calls[i]) for i in range(nblocks)]
    return DelayReport(algorithm, getattr(e, "bucket_size", None), stats)


def delay_rows(report: DelayReport, family: str, k: int, seed: int, cost_mode: str) -> list[dict]:
    base = {
        "family": family, "k": k, "seed": seed, "algorithm": report.algorithm,
        "bucket_size": "" if report.bucket_size is None else report.bucket_size,
        "cost_mode": cost_mode,
    }
    rows = []
    for b in report.blocks:
        rows.append(dict(base, metric="block_seconds", block_or_tick=b.index, value=f"{b.seconds:.6f}"))
        rows.append(dict(base, metric="block_queue_ops", block_or_tick=b.index, value=round(b.queue_ops, 3)))
        rows.append(dict(base, metric="block_output_calls", block_or_tick=b.index, value=round(b.output_calls, 3)))
    return rows


def write_csv(rows: Iterable[dict], out) -> None:
    w = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)


def csv_text(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def gnuplot_data(rows: Iterable[dict], metric: str) -> str:
    """Whitespace columns ``x value``, one indexed data set per
    (family, k, algorithm, seed), separated by two blank lines."""
    groups: dict[tuple, list[tuple]] = {}
    for r in rows:
        if r["metric"] != metric:
            continue
        key = (r["family"], str(r["k"]), r["algorithm"], str(r["seed"]))
        groups.setdefault(key, []).append((r["block_or_tick"], r["value"]))
    chunks = []
    for (fam, k, algo, seed), pts in groups.items():
        lines = [f"# {fam}{k} {algo} seed={seed}"]
        lines += [f"{x if x != '' else 0} {v}" for x, v in pts]
        chunks.append("\n".join(lines))
    return "\n\n\n".join(chunks) + ("\n" if chunks else "")
