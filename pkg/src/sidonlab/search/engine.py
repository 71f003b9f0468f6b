"""Exact searches for R_h(g,n), C_h(g,n) and shortest Sidon sets.

The integer problems are all driven by one quantity, the minimal diameter
D(k) of a k-element B*_h[g] set.  R_h(g,n) = max{k : D(k) <= n-1}, and
min{n : R_h(g,n) >= k} = D(k) + 1.  D(k) is found by trying L = D(k-1)+1,
D(k-1)+2, ... and searching for a set with both 0 and L in it; the exact
values already computed for smaller k bound every sub-run of the current
partial set, which is what makes the search fast.
"""

from __future__ import annotations

import json
import math
import multiprocessing as mp
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from sidonlab.errors import CapExceeded, TimeBudgetExceeded
from sidonlab.search import _kernels as K
from sidonlab.sets import IntegerSet, ModularSet

EXACT = "EXACT"
LOWER_BOUND = "LOWER_BOUND"
MODES = ("first", "all", "count")
ORACLE_CAP = 1 << 25
CHECKPOINT_FORMAT = "sidonlab-checkpoint"
CHECKPOINT_VERSION = 1
CHECKPOINT_EVERY = 30.0


@dataclass(frozen=True)
class SearchConfig:
    """How to search.

    mode: "first" returns one witness, "all" every witness, "count" only
    their number.  ``symmetry`` and ``bounds`` switch the pruning rules off
    for cross-checking.  ``time_budget`` is in seconds of wall time.
    """

    mode: str = "first"
    symmetry: bool = True
    bounds: bool = True
    time_budget: Optional[float] = None
    workers: int = 1
    split_depth: int = 3
    checkpoint: Optional[str] = None
    chunk_nodes: int = 1 << 20

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.split_depth < 2:
            raise ValueError("split_depth must be >= 2")
        if self.time_budget is not None and self.time_budget < 0:
            raise ValueError("time_budget must be nonnegative")


@dataclass(frozen=True)
class SearchStats:
    nodes: int = 0
    prunes: int = 0
    wall_time: float = 0.0


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a search.

    ``optimum`` is a cardinality for R and C and a diameter for shortest
    Sidon sets.  With status LOWER_BOUND the search ran out of time: for R
    and C the optimum is at least the reported value, for diameters the
    true diameter is at least the reported value and no witness is known.
    """

    problem: str
    params: Dict[str, int]
    optimum: int
    witnesses: Tuple[Union[IntegerSet, ModularSet], ...] = ()
    status: str = EXACT
    count: Optional[int] = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def exact(self) -> bool:
        return self.status == EXACT


class _OutOfTime(Exception):
    pass


class _Clock:
    def __init__(self, budget: Optional[float]):
        self.start = time.monotonic()
        self.deadline = None if budget is None else self.start + budget
        self.nodes = 0
        self.prunes = 0

    def check(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _OutOfTime

    def absorb(self, state: np.ndarray, before: Tuple[int, int]):
        self.nodes += int(state[1]) - before[0]
        self.prunes += int(state[2]) - before[1]

    def stats(self) -> SearchStats:
        return SearchStats(self.nodes, self.prunes, time.monotonic() - self.start)

    def remaining(self) -> Optional[float]:
        if self.deadline is None:
            return None
        return max(0.0, self.deadline - time.monotonic())


def max_multinomial(h: int, k: int) -> int:
    """Largest ordered representation count forced by k distinct elements."""
    parts = min(k, h)
    if parts <= 0:
        return 0 if h else 1
    q, r = divmod(h, parts)
    denom = math.factorial(q + 1) ** r * math.factorial(q) ** (parts - r)
    return math.factorial(h) // denom


def max_feasible_size(h: int, g: int) -> Optional[int]:
    """Largest size of any B*_h[g] set, or None when sizes are unbounded."""
    if g >= math.factorial(h):
        return None
    k = 0
    while max_multinomial(h, k + 1) <= g:
        k += 1
    return k


# ---------------------------------------------------------------- pinned runs


def _kind(h: int, g: int) -> str:
    if h == 2:
        return "sidon" if g == 2 else "pair"
    return "general"


class _PinnedRun:
    """Resumable search for k-element sets {0, ..., L} (both ends present)."""

    def __init__(self, h, g, L, m, lb, sym=True, suffix=True, placed=(), base=None, cand=None):
        self.h, self.g, self.L, self.m = h, g, L, m
        self.kind = _kind(h, g)
        self.lb = np.asarray(lb, dtype=np.int64)
        self.sym, self.suffix = sym, suffix
        self.marks = np.zeros(m + 1, dtype=np.int64)
        self.marks[m - 1] = L
        self.cand = np.zeros(m + 2, dtype=np.int64)
        self.base = len(placed) + 1 if base is None else base
        self.state = np.array([len(placed) + 1, 0, 0], dtype=np.int64)
        self.pref = np.zeros(m * m + 2, dtype=np.int64)
        self.valid = self._build(placed)
        if cand is not None:
            self.cand[: len(cand)] = cand
        else:
            self.cand[len(placed) + 1] = (placed[-1] if placed else 0) + 1
        self.trivial_done = False

    def _build(self, placed) -> bool:
        h, g, L = self.h, self.g, self.L
        if self.kind == "sidon":
            self.tab = np.zeros(L + 1, dtype=np.bool_)
            self.tab[L] = True
        elif self.kind == "pair":
            self.tab = np.zeros(2 * L + 1, dtype=np.int64)
            self.tab[0] += 1
            self.tab[2 * L] += 1
            self.tab[L] += 2
            if self.tab.max() > g:
                return False
        else:
            self.binom = K.binomials(h)
            self.tab = np.zeros((h + 1, h * L + 1), dtype=np.int64)
            self.tab[0, 0] = 1
            K.levels_add(self.tab, 0, h, self.binom, 0)
            K.levels_add(self.tab, L, h, self.binom, 0)
            if self.tab[h].max() > g:
                return False
        for i, x in enumerate(placed, start=1):
            if not 0 < x < L or (i > 1 and x <= placed[i - 2]):
                return False
            if not self._add(i, x):
                return False
        return True

    def _add(self, i: int, x: int) -> bool:
        self.marks[i] = x
        L, tab = self.L, self.tab
        prev = [int(a) for a in self.marks[:i]]
        if self.kind == "sidon":
            diffs = [x - a for a in prev] + [L - x]
            if len(set(diffs)) < len(diffs) or any(tab[d] for d in diffs):
                return False
            for d in diffs:
                tab[d] = True
            return True
        if self.kind == "pair":
            for a in prev:
                tab[x + a] += 2
            tab[x + L] += 2
            tab[2 * x] += 1
            return bool(tab.max() <= self.g)
        K.levels_add(tab, x, self.h, self.binom, 0)
        return bool(tab[self.h].max() <= self.g)

    def step(self, node_limit: int) -> int:
        if not self.valid:
            return K.DONE
        if self.m == 2:
            if self.trivial_done:
                return K.DONE
            self.trivial_done = True
            return K.FOUND
        if self.kind == "sidon":
            return K.sidon_pinned(self.L, self.m, self.lb, self.marks, self.cand, self.tab, self.state,
                                  self.base, node_limit, self.pref, self.sym, self.suffix)
        if self.kind == "pair":
            return K.pair_pinned(self.L, self.m, self.g, self.lb, self.marks, self.cand, self.tab,
                                 self.state, self.base, node_limit, self.sym)
        return K.general_pinned(self.L, self.m, self.h, self.g, self.lb, self.marks, self.cand, self.tab,
                                self.binom, self.state, self.base, node_limit, self.sym)

    def witness(self) -> Tuple[int, ...]:
        # after FOUND the kernel stepped back one level but kept the marks
        return tuple(int(a) for a in self.marks[: self.m])

    def snapshot(self) -> dict:
        level = int(self.state[0])
        return {
            "L": self.L,
            "m": self.m,
            "level": level,
            "placed": [int(a) for a in self.marks[1:level]],
            "cand": [int(c) for c in self.cand[: level + 1]],
            "nodes": int(self.state[1]),
            "prunes": int(self.state[2]),
        }

    @classmethod
    def restore(cls, h, g, lb, snap, sym=True, suffix=True) -> "_PinnedRun":
        run = cls(h, g, snap["L"], snap["m"], lb, sym, suffix, tuple(snap["placed"]), base=1, cand=snap["cand"])
        run.state[1], run.state[2] = snap["nodes"], snap["prunes"]
        return run

    def level_range(self, i: int) -> Tuple[int, int]:
        """Candidate range for level i given marks below it (Python mirror of the kernels)."""
        lo = max(int(self.marks[i - 1]) + 1, int(self.lb[i + 1]))
        hi = self.L - int(self.lb[self.m - i])
        if self.sym:
            if i == 1:
                cap = self.L // 2 if self.m == 3 else (self.L - 1) // 2
            else:
                cap = self.L - int(self.marks[1])
            hi = min(hi, cap)
        return lo, hi


def _drive(run: _PinnedRun, want_all: bool, clock: _Clock, chunk: int, stop=None,
           on_pause=None) -> List[Tuple[int, ...]]:
    found = []
    while True:
        before = (int(run.state[1]), int(run.state[2]))
        code = run.step(chunk)
        clock.absorb(run.state, before)
        if code == K.FOUND:
            found.append(run.witness())
            if not want_all:
                return found
        elif code == K.DONE:
            return found
        else:
            if stop is not None and stop.value:
                return found
            if on_pause is not None:
                on_pause(run)
            clock.check()


def _prefixes(h, g, L, m, lb, sym, depth) -> Iterator[Tuple[int, ...]]:
    """Valid partial sets (levels 1..depth-1) used to split work between processes."""
    depth = min(depth, m - 2)

    def rec(prefix):
        if len(prefix) == depth - 1:
            yield prefix
            return
        probe = _PinnedRun(h, g, L, m, lb, sym, False, prefix)
        if not probe.valid:
            return
        lo, hi = probe.level_range(len(prefix) + 1)
        for x in range(lo, hi + 1):
            nxt = prefix + (x,)
            i = len(nxt)
            if any(x - int(probe.marks[j]) < lb[i - j + 1] for j in range(i)):
                continue
            if _PinnedRun(h, g, L, m, lb, sym, False, nxt).valid:
                yield from rec(nxt)

    yield from rec(())


_STOP = None


def _worker_init(flag):
    global _STOP
    _STOP = flag


def _worker(args):
    h, g, L, m, lb, sym, suffix, prefix, want_all, deadline, chunk = args
    clock = _Clock(None)
    clock.deadline = deadline
    run = _PinnedRun(h, g, L, m, lb, sym, suffix, prefix)
    try:
        found = _drive(run, want_all, clock, chunk, stop=_STOP)
        complete = True
    except _OutOfTime:
        found, complete = [], False
    if found and not want_all and _STOP is not None:
        _STOP.value = 1
    return found, clock.nodes, clock.prunes, complete


def _pinned_search(h, g, L, m, lb, config: SearchConfig, clock: _Clock, want_all: bool,
                   sym: Optional[bool] = None, on_pause=None, resume: Optional[_PinnedRun] = None):
    """All (or the first) sets {0, ..., L} of size m; raises _OutOfTime."""
    sym = config.symmetry if sym is None else sym
    suffix = config.bounds
    if config.workers <= 1 or m - 2 < config.split_depth or resume is not None:
        run = resume or _PinnedRun(h, g, L, m, lb, sym, suffix)
        return _drive(run, want_all, clock, config.chunk_nodes, on_pause=on_pause)
    prefixes = list(_prefixes(h, g, L, m, lb, sym, config.split_depth))
    if not prefixes:
        return []
    clock.check()
    wall_deadline = None
    if clock.deadline is not None:
        wall_deadline = time.monotonic() + clock.remaining()
    ctx = mp.get_context("fork")
    flag = ctx.Value("b", 0)
    jobs = [(h, g, L, m, lb, sym, suffix, p, want_all, wall_deadline, config.chunk_nodes) for p in prefixes]
    found: List[Tuple[int, ...]] = []
    complete = True
    with ProcessPoolExecutor(config.workers, mp_context=ctx, initializer=_worker_init, initargs=(flag,)) as pool:
        pending = {pool.submit(_worker, j) for j in jobs}
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                if fut.cancelled():
                    continue
                ws, nodes, prunes, ok = fut.result()
                clock.nodes += nodes
                clock.prunes += prunes
                found.extend(ws)
                complete &= ok
            if found and not want_all:
                flag.value = 1
                for fut in pending:
                    fut.cancel()
    if found and not want_all:
        return [min(found)]
    if not complete:
        raise _OutOfTime
    return sorted(found)


# ------------------------------------------------------------ diameter tables


class DiameterTable:
    """Known facts about the minimal diameter D(k) of k-element B*_h[g] sets.

    ``exact[k]`` holds (D(k), witness); ``lower[k]`` a proven lower bound.
    Tables are shared per (h, g) within a process since the numbers are
    facts, not search artefacts.
    """

    def __init__(self, h: int, g: int):
        self.h, self.g = h, g
        self.cap = max_feasible_size(h, g)
        self.exact: Dict[int, Tuple[int, Tuple[int, ...]]] = {}
        self.lower: Dict[int, int] = {}
        if g >= 1:
            self.exact[1] = (0, (0,))
        self.exact.setdefault(0, (0, ()))

    def feasible(self, k: int) -> bool:
        return self.cap is None or k <= self.cap

    def lower_bound(self, k: int) -> int:
        if k in self.exact:
            return self.exact[k][0]
        best = max(k - 1, 0)
        for j in range(2, k):
            # dropping k - j elements from a set leaves a j-set
            if j in self.exact:
                best = max(best, self.exact[j][0] + (k - j))
            elif j in self.lower:
                best = max(best, self.lower[j] + (k - j))
        return max(best, self.lower.get(k, 0))

    def note_lower(self, k: int, value: int):
        if k not in self.exact and value > self.lower.get(k, 0):
            self.lower[k] = value

    def lb_array(self, m: int, bounds: bool) -> np.ndarray:
        lb = np.zeros(m + 3, dtype=np.int64)
        for j in range(2, m + 1):
            lb[j] = self.lower_bound(j) if bounds else j - 1
        lb[m + 1] = lb[m] + 1 if m >= 1 else 0
        lb[m + 2] = lb[m + 1] + 1
        return lb

    def known_k(self) -> int:
        k = 1
        while k + 1 in self.exact:
            k += 1
        return k

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "g": self.g,
            "exact": {str(k): [d, list(w)] for k, (d, w) in sorted(self.exact.items()) if k >= 2},
            "lower": {str(k): v for k, v in sorted(self.lower.items())},
        }

    def merge_json(self, data: dict):
        for k, (d, w) in data.get("exact", {}).items():
            self.exact[int(k)] = (int(d), tuple(int(a) for a in w))
            self.lower.pop(int(k), None)
        for k, v in data.get("lower", {}).items():
            self.note_lower(int(k), int(v))


_TABLES: Dict[Tuple[int, int], DiameterTable] = {}


def diameter_table(h: int, g: int, config: Optional[SearchConfig] = None) -> DiameterTable:
    if config is not None and not (config.bounds and config.symmetry):
        return DiameterTable(h, g)
    key = (h, g)
    if key not in _TABLES:
        _TABLES[key] = DiameterTable(h, g)
    return _TABLES[key]


def clear_cache():
    """Forget all shared diameter tables (tests use this to time cold runs)."""
    _TABLES.clear()


def _extend(table: DiameterTable, k: int, config: SearchConfig, clock: _Clock, limit: Optional[int] = None,
            on_pause=None, resume=None) -> bool:
    """Make D(k) exact, or prove D(k) > limit.  Returns True iff D(k) <= limit.

    D(j) for j < k is made exact first (always within ``limit`` when given:
    if some smaller size already exceeds it, so does k).
    """
    for j in range(2, k):
        if j not in table.exact:
            if not _extend(table, j, config, clock, limit):
                table.note_lower(k, table.lower_bound(j) + (k - j))
                return False
    if k in table.exact:
        return limit is None or table.exact[k][0] <= limit
    if not table.feasible(k):
        raise ValueError(f"no B*_{table.h}[{table.g}] set has {k} elements")
    L = table.lower_bound(k)
    if resume is not None and resume.L >= L:
        L = resume.L
    else:
        resume = None
    while limit is None or L <= limit:
        lb = table.lb_array(k, config.bounds)
        ws = _pinned_search(table.h, table.g, L, k, lb, config, clock, want_all=False,
                            on_pause=on_pause, resume=resume if resume is not None and resume.L == L else None)
        resume = None
        if ws:
            table.exact[k] = (L, ws[0])
            table.lower.pop(k, None)
            return True
        table.note_lower(k, L + 1)
        L += 1
        clock.check()
    return False


def _witness_set(w: Sequence[int], shift: int = 0) -> IntegerSet:
    return IntegerSet(a + shift for a in w)


def _reflect(w: Sequence[int]) -> Tuple[int, ...]:
    d = w[-1]
    return tuple(sorted(d - a for a in w))


def _budget(config: SearchConfig) -> Optional[float]:
    if config.time_budget is not None:
        return config.time_budget
    env = os.environ.get("SIDONLAB_BUDGET_SECS")
    return float(env) if env else None


# ------------------------------------------------------------------ R and D


def max_bstar_subset(n: int, h: int = 2, g: int = 2, config: Optional[SearchConfig] = None) -> SearchResult:
    """R_h(g,n): the largest B*_h[g] subset of {1, ..., n}."""
    config = config or SearchConfig()
    if n < 1:
        raise ValueError("n must be >= 1")
    if h < 1 or g < 0:
        raise ValueError("need h >= 1 and g >= 0")
    params = {"n": n, "h": h, "g": g}
    clock = _Clock(_budget(config))
    table = diameter_table(h, g, config)
    best = 1 if g >= 1 else 0
    try:
        while table.feasible(best + 1) and best + 1 <= n:
            if not _extend(table, best + 1, config, clock, limit=n - 1):
                break
            best += 1
    except _OutOfTime:
        w = table.exact[best][1] if best in table.exact else ()
        partial = SearchResult("R", params, best, (_witness_set(w, 1),) if best else (), LOWER_BOUND,
                               stats=clock.stats())
        raise TimeBudgetExceeded(f"R_{h}({g},{n}) >= {best}; budget exhausted", partial) from None
    if best == 0:
        return SearchResult("R", params, 0, (IntegerSet(()),), EXACT, 1, clock.stats())
    if config.mode == "first":
        w = table.exact[best][1]
        return SearchResult("R", params, best, (_witness_set(w, 1),), EXACT, None, clock.stats())
    try:
        sets = _all_in_range(table, best, n, config, clock)
    except _OutOfTime:
        partial = SearchResult("R", params, best, (), LOWER_BOUND, stats=clock.stats())
        raise TimeBudgetExceeded("budget exhausted while enumerating witnesses", partial) from None
    witnesses = tuple(IntegerSet(s) for s in sets) if config.mode == "all" else ()
    return SearchResult("R", params, best, witnesses, EXACT, len(sets), clock.stats())


def _all_in_range(table: DiameterTable, k: int, n: int, config: SearchConfig, clock: _Clock) -> List[Tuple[int, ...]]:
    """Every k-element B*_h[g] subset of {1..n}, sorted."""
    if k == 1:
        return [(a,) for a in range(1, n + 1)]
    out = []
    D = table.exact[k][0]
    for L in range(D, n):
        lb = table.lb_array(k, config.bounds)
        for w in _pinned_search(table.h, table.g, L, k, lb, config, clock, want_all=True, sym=False):
            for t in range(1, n - L + 1):
                out.append(tuple(a + t for a in w))
    return sorted(out)


def min_n_for_size(h: int, g: int, k: int, config: Optional[SearchConfig] = None) -> int:
    """Least n with R_h(g,n) >= k, i.e. one more than the minimal diameter D(k).

    The table is grown one size and one diameter at a time, each step using
    the exact diameters already found as pruning bounds.
    """
    config = config or SearchConfig()
    if k < 1:
        raise ValueError("k must be >= 1")
    if g < 1:
        raise ValueError("g must be >= 1")
    table = diameter_table(h, g, config)
    if not table.feasible(k):
        raise ValueError(f"no B*_{h}[{g}] set has {k} elements")
    clock = _Clock(_budget(config))
    try:
        _extend(table, k, config, clock)
    except _OutOfTime:
        lo = table.lower_bound(k) + 1
        partial = SearchResult("min_n", {"h": h, "g": g, "k": k}, lo, (), LOWER_BOUND, stats=clock.stats())
        raise TimeBudgetExceeded(f"min n >= {lo}; budget exhausted", partial) from None
    return table.exact[k][0] + 1


def min_n_witness(h: int, g: int, k: int, config: Optional[SearchConfig] = None) -> IntegerSet:
    """A k-element B*_h[g] subset of {1, ..., min_n_for_size(h,g,k)}."""
    min_n_for_size(h, g, k, config)
    return _witness_set(diameter_table(h, g, config).exact[k][1], 1)


# ----------------------------------------------------------- shortest Sidon


def _load_checkpoint(path: str, k: int) -> Optional[dict]:
    if not path or not os.path.exists(path):
        return None
    with open(path) as fh:
        data = json.load(fh)
    if data.get("format") != CHECKPOINT_FORMAT or data.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"{path} is not a version {CHECKPOINT_VERSION} sidonlab checkpoint")
    if data.get("k") != k:
        raise ValueError(f"checkpoint {path} is for k={data.get('k')}, not k={k}")
    return data


def _save_checkpoint(path: str, k: int, table: DiameterTable, phase: str, run: Optional[_PinnedRun],
                     found: Sequence[Tuple[int, ...]] = (), complete: bool = False):
    data = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "k": k,
        "table": table.to_json(),
        "phase": phase,
        "run": run.snapshot() if run is not None else None,
        "found": [list(w) for w in found],
        "complete": complete,
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh, indent=1)
    os.replace(tmp, path)


def shortest_sidon(k: int, config: Optional[SearchConfig] = None) -> SearchResult:
    """Minimal diameter of a k-element Sidon set and all shortest sets.

    Witnesses start at 0 and are reported once per mirror pair (the
    lexicographically smaller of A and d - A), sorted.

    With ``config.checkpoint`` set, progress is written to that JSON file
    every thirty seconds and when the budget runs out; rerunning with the
    same path resumes where the previous run stopped.
    """
    config = config or SearchConfig()
    if k < 2:
        raise ValueError("k must be >= 2")
    params = {"k": k}
    clock = _Clock(_budget(config))
    table = diameter_table(2, 2, config)
    path = config.checkpoint
    resume_run = None
    found: List[Tuple[int, ...]] = []
    phase = "diameter"
    ck = _load_checkpoint(path, k) if path else None
    if ck is not None:
        table.merge_json(ck["table"])
        phase = ck["phase"]
        found = [tuple(w) for w in ck.get("found", [])]
        if ck.get("run") and config.workers <= 1:
            snap = ck["run"]
            lb = table.lb_array(snap["m"], config.bounds)
            resume_run = _PinnedRun.restore(2, 2, lb, snap, sym=config.symmetry, suffix=config.bounds)

    last = [time.monotonic()]
    current: Dict[str, Optional[_PinnedRun]] = {"run": None}

    def track(run):
        current["run"] = run
        if path and time.monotonic() - last[0] > CHECKPOINT_EVERY:
            _save_checkpoint(path, k, table, phase, run, found)
            last[0] = time.monotonic()

    def resumable(m, L=None):
        r = resume_run
        if r is not None and r.m == m and (L is None or r.L == L):
            return r
        return None

    try:
        if phase == "diameter":
            for j in range(2, k + 1):
                _extend(table, j, config, clock, on_pause=track, resume=resumable(j))
            phase = "witnesses"
            current["run"] = None
        D, first = table.exact[k]
        if config.mode == "first":
            witnesses = [first]
        elif config.workers > 1 and not path:
            lb = table.lb_array(k, config.bounds)
            witnesses = _pinned_search(2, 2, D, k, lb, config, clock, want_all=True)
        else:
            run = resumable(k, D)
            if run is None:
                found = []
                run = _PinnedRun(2, 2, D, k, table.lb_array(k, config.bounds), config.symmetry, config.bounds)
            current["run"] = run
            while True:
                ws = _drive(run, False, clock, config.chunk_nodes, on_pause=track)
                if not ws:
                    break
                found.append(ws[0])
            witnesses = found
    except _OutOfTime:
        if path:
            _save_checkpoint(path, k, table, phase, current["run"], found)
        lo = table.lower_bound(k)
        known = table.exact.get(k)
        ws = (IntegerSet(known[1]),) if known else ()
        status = EXACT if known else LOWER_BOUND
        partial = SearchResult("shortest", params, known[0] if known else lo, ws, status, stats=clock.stats())
        raise TimeBudgetExceeded(f"shortest Sidon set with {k} elements: budget exhausted", partial) from None
    classes = sorted({min(tuple(w), _reflect(w)) for w in witnesses})
    if path:
        _save_checkpoint(path, k, table, "done", None, classes, complete=True)
    if config.mode == "count":
        return SearchResult("shortest", params, D, (), EXACT, len(classes), clock.stats())
    return SearchResult("shortest", params, D, tuple(IntegerSet(w) for w in classes), EXACT,
                        len(classes) if config.mode == "all" else None, clock.stats())


# ------------------------------------------------------------------ modular


def _integer_room_bound(table: DiameterTable, n: int) -> np.ndarray:
    """rub[j] >= largest B*_h[g] subset of j consecutive integers, j < n."""
    rub = np.zeros(n + 1, dtype=np.int64)
    for j in range(1, n + 1):
        k = rub[j - 1]
        while table.feasible(k + 1) and table.lower_bound(k + 1) <= j - 1:
            k += 1
        rub[j] = k
    return rub


def _room_bound(table: DiameterTable, n: int, config: SearchConfig, clock: _Clock) -> np.ndarray:
    if not config.bounds:
        return np.arange(n + 1, dtype=np.int64)
    # sharpen the integer bound a little; exactness does not depend on it
    soft = _Clock(min(2.0, clock.remaining() or 2.0))
    k = table.known_k()
    try:
        while table.feasible(k + 1) and _extend(table, k + 1, config, soft, limit=n - 2):
            k += 1
    except _OutOfTime:
        pass
    clock.nodes += soft.nodes
    clock.prunes += soft.prunes
    return _integer_room_bound(table, n)


class _ModularRun:
    """Resumable search for ``target``-element sets mod n extending ``placed``."""

    def __init__(self, n, target, h, g, rub, lb, sym, placed=(0,), nonunit=False, fc=True):
        self.n, self.target, self.h, self.g, self.sym = n, target, h, g, sym
        self.rub, self.lb = rub, lb
        self.nonunit, self.fc = nonunit, fc
        self.units = np.array([math.gcd(d, n) == 1 for d in range(n)], dtype=np.bool_)
        self.els = np.zeros(target + 1, dtype=np.int64)
        self.cand = np.zeros(target + 2, dtype=np.int64)
        self.maxgap = np.zeros(target + 1, dtype=np.int64)
        self.base = len(placed)
        self.state = np.array([self.base, 0, 0], dtype=np.int64)
        if h == 2:
            self.tab = np.zeros(n, dtype=np.int64)
        else:
            self.binom = K.binomials(h)
            self.tab = np.zeros((h + 1, n), dtype=np.int64)
            self.tab[0, 0] = 1
        for i, x in enumerate(placed):
            self.els[i] = x
            if i:
                self.maxgap[i] = max(self.maxgap[i - 1], x - placed[i - 1])
            if h == 2:
                for a in placed[:i]:
                    self.tab[(x + a) % n] += 2
                self.tab[(2 * x) % n] += 1
            else:
                K.levels_add(self.tab, x, h, self.binom, n)
        self.cand[self.base] = placed[-1] + 1
        top = self.tab.max() if h == 2 else self.tab[h].max()
        self.valid = top <= g and len(placed) <= target
        self.trivial_done = False

    def step(self, node_limit: int) -> int:
        if not self.valid:
            return K.DONE
        if self.target == self.base:
            if self.trivial_done:
                return K.DONE
            self.trivial_done = True
            return K.FOUND
        args = (self.maxgap, self.state, self.base, node_limit, self.sym, self.units, self.nonunit)
        if self.h == 2:
            return K.modular_pair(self.n, self.target, self.g, self.rub, self.lb, self.els, self.cand, self.tab,
                                  *args, self.fc)
        return K.modular_general(self.n, self.target, self.h, self.g, self.rub, self.lb, self.els, self.cand,
                                 self.tab, self.binom, *args)

    def witness(self) -> Tuple[int, ...]:
        return tuple(int(a) for a in self.els[: self.target])


def _modular_exists(n, target, h, g, rub, lb, config: SearchConfig, clock: _Clock) -> Optional[Tuple[int, ...]]:
    """One ``target``-element B*_h[g] set mod n, or None.

    With symmetry on the search is split by affine normal form.  If two
    elements differ by a unit u, the map x -> (x - a)/u sends them to 0 and
    1, so it suffices to search sets containing {0, 1}.  Otherwise no
    difference is a unit; those sets are searched separately (translated to
    contain 0 with the largest gap closing the circle) with every unit
    difference forbidden, which is very restrictive.
    """
    fc = config.bounds
    if not config.symmetry or target < 2 or n < 2:
        runs = [_ModularRun(n, target, h, g, rub, lb, False, (0,), fc=fc)]
    else:
        runs = [
            _ModularRun(n, target, h, g, rub, lb, False, (0, 1), fc=fc),
            _ModularRun(n, target, h, g, rub, lb, True, (0,), nonunit=True, fc=fc),
        ]
    for run in runs:
        ws = _drive(run, False, clock, config.chunk_nodes)
        if ws:
            return ws[0]
    return None


def max_modular(n: int, h: int = 2, g: int = 2, config: Optional[SearchConfig] = None) -> SearchResult:
    """C_h(g,n): the largest B*_h[g] subset of Z/n.

    Sets are searched through translates containing 0 (and, with symmetry
    on, through an affine normal form; see ``_modular_exists``).  Elements
    above the current one are bounded by the largest B*_h[g] subset of the
    remaining integer interval.  In "all" and "count" modes witnesses are
    every optimal set containing 0.
    """
    config = config or SearchConfig()
    if n < 1:
        raise ValueError("n must be >= 1")
    if h < 1 or g < 0:
        raise ValueError("need h >= 1 and g >= 0")
    params = {"n": n, "h": h, "g": g}
    clock = _Clock(_budget(config))
    if g < 1 or (h >= 1 and n == 1 and g < 1):
        return SearchResult("C", params, 0, (ModularSet(n, ()),), EXACT, 1, clock.stats())
    table = diameter_table(h, g, config)
    rub = _room_bound(table, n, config, clock)
    cap = min(n, table.cap) if table.cap is not None else n
    best, witness = 1, (0,)
    # {0} is B*_h[g] mod n iff h*0 has count 1 <= g, always true for g >= 1
    try:
        while best < cap:
            w = _modular_exists(n, best + 1, h, g, rub, table.lb_array(best + 1, config.bounds), config, clock)
            if w is None:
                break
            best, witness = best + 1, w
    except _OutOfTime:
        partial = SearchResult("C", params, best, (ModularSet(n, witness),), LOWER_BOUND, stats=clock.stats())
        raise TimeBudgetExceeded(f"C_{h}({g},{n}) >= {best}; budget exhausted", partial) from None
    if config.mode == "first":
        return SearchResult("C", params, best, (ModularSet(n, witness),), EXACT, None, clock.stats())
    try:
        run = _ModularRun(n, best, h, g, rub, table.lb_array(best, config.bounds), False, fc=config.bounds)
        sets = sorted(set(_drive(run, True, clock, config.chunk_nodes)))
    except _OutOfTime:
        partial = SearchResult("C", params, best, (ModularSet(n, witness),), LOWER_BOUND, stats=clock.stats())
        raise TimeBudgetExceeded("budget exhausted while enumerating witnesses", partial) from None
    ws = tuple(ModularSet(n, s) for s in sets) if config.mode == "all" else ()
    return SearchResult("C", params, best, ws, EXACT, len(sets), clock.stats())


# ------------------------------------------------------- Sidon upper bounds


def sidon_size_refuted(m: int, n: int, config: Optional[SearchConfig] = None) -> bool:
    """True iff there is provably no m-element Sidon subset of {1, ..., n}.

    Returns False when such a set exists.  Runs an unpinned search for sets
    {0 < ... <= n-1} whose pruning combines the known diameter lower bounds
    with a difference-sum bound on the unplaced suffix, so it is fast far
    below the optimum where the pinned diameter search would crawl.
    """
    config = config or SearchConfig()
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    table = diameter_table(2, 2, config)
    if m == 1:
        return False
    if m in table.exact:
        return table.exact[m][0] > n - 1
    if table.lower_bound(m) > n - 1:
        return True
    clock = _Clock(_budget(config))
    Lmax = n - 1
    lb = table.lb_array(m, config.bounds)
    marks = np.zeros(m + 1, dtype=np.int64)
    cand = np.zeros(m + 2, dtype=np.int64)
    cand[1] = 1
    used = np.zeros(Lmax + 2, dtype=np.bool_)
    state = np.array([1, 0, 0], dtype=np.int64)
    pref = np.zeros(m * m + 2, dtype=np.int64)
    try:
        while True:
            code = K.sidon_bounded(Lmax, m, lb, marks, cand, used, state, config.chunk_nodes, pref)
            if code != K.PAUSED:
                break
            clock.check()
    except _OutOfTime:
        raise TimeBudgetExceeded(f"could not settle {m} elements in [1, {n}] within budget") from None
    if code == K.DONE:
        table.note_lower(m, n)
        return True
    return False


def modular_size_refuted(m: int, n: int, h: int = 2, g: int = 2, config: Optional[SearchConfig] = None) -> bool:
    """True iff there is provably no m-element B*_h[g] subset of Z/n.

    Returns False when such a set exists.  This is the existence half of
    :func:`max_modular` at one size; far above the optimum it settles much
    faster than computing the optimum itself.
    """
    config = config or SearchConfig()
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    if g < 1 or m > n:
        return True
    table = diameter_table(h, g, config)
    if not table.feasible(m):
        return True
    if m == 1:
        return False
    clock = _Clock(_budget(config))
    rub = _room_bound(table, n, config, clock)
    try:
        w = _modular_exists(n, m, h, g, rub, table.lb_array(m, config.bounds), config, clock)
    except _OutOfTime:
        raise TimeBudgetExceeded(f"could not settle {m} elements mod {n} within budget") from None
    return w is None


# ---------------------------------------------------------------- the oracle


def brute_force_oracle(n: int, h: int = 2, g: int = 2, modular: bool = False) -> SearchResult:
    """Plain enumeration of every B*_h[g] subset of {1..n} (or of Z/n).

    Subsets are grown in increasing order and a branch is only cut when the
    set built so far already violates the count bound; there is no other
    pruning.  The whole subset lattice has 2^n members, and n is capped so
    that it stays within ORACLE_CAP (2^25).  Returns the optimum, every
    optimal set and their number.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if 2 ** n > ORACLE_CAP:
        raise CapExceeded(f"2^{n} subsets exceeds the oracle cap 2^25")
    t0 = time.monotonic()
    universe = list(range(n)) if modular else list(range(1, n + 1))
    size = n if modular else h * n + 1
    # levels[t][s]: ordered t-tuples summing to s
    levels = [[0] * size for _ in range(h + 1)]
    levels[0][0] = 1
    binom = [[math.comb(t, j) for j in range(h + 1)] for t in range(h + 1)]

    def change(x, sign):
        rng = range(h, 0, -1) if sign > 0 else range(1, h + 1)
        for t in rng:
            row = levels[t]
            for s in range(size):
                acc = 0
                for j in range(1, t + 1):
                    src = s - j * x
                    if modular:
                        src %= n
                    elif src < 0:
                        break
                    acc += binom[t][j] * levels[t - j][src]
                if acc:
                    row[s] += sign * acc

    best = [0, []]
    nodes = [0]
    chosen: List[int] = []

    def rec(start):
        nodes[0] += 1
        k = len(chosen)
        if k > best[0]:
            best[0], best[1] = k, [tuple(chosen)]
        elif k == best[0]:
            best[1].append(tuple(chosen))
        for idx in range(start, len(universe)):
            x = universe[idx]
            change(x, 1)
            if max(levels[h]) <= g:
                chosen.append(x)
                rec(idx + 1)
                chosen.pop()
            change(x, -1)

    rec(0)
    make = (lambda s: ModularSet(n, s)) if modular else IntegerSet
    ws = tuple(make(s) for s in sorted(best[1]))
    return SearchResult("C" if modular else "R", {"n": n, "h": h, "g": g}, best[0], ws, EXACT, len(ws),
                        SearchStats(nodes[0], 0, time.monotonic() - t0))
