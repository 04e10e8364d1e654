"""Update streams: parsing, workload generation, replay with oracle checking, CSV reports."""
from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .det_engine import DetEngine
from .graph import DynGraph, canon
from .oracle import edge_connectivity
from .rand_engine import ConnectivityAnswer, RandEngine
from .rng import stream as rng_stream

CSV_COLUMNS = ["event_idx", "kind", "u", "v", "answer", "oracle", "match", "work_units", "micros"]
KIND_NAMES = {"i": "insert", "d": "delete", "q": "query"}


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class UnknownWorkload(ValueError):
    pass


@dataclass(frozen=True)
class UpdateEvent:
    kind: str
    u: int | None = None
    v: int | None = None


@dataclass
class Stream:
    n: int
    events: list

    @property
    def updates(self) -> int:
        return sum(1 for e in self.events if e.kind != "q")

    def text(self) -> str:
        out = [f"# n {self.n}"]
        for e in self.events:
            out.append("q" if e.kind == "q" else f"{e.kind} {e.u} {e.v}")
        return "\n".join(out) + "\n"


def parse_stream(text: str) -> Stream:
    """Parse and validate a stream; replaying it from the empty graph is always legal."""
    n = None
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            parts = s[1:].split()
            if len(parts) == 2 and parts[0] == "n" and n is None:
                try:
                    n = int(parts[1])
                except ValueError:
                    raise ParseError(lineno, f"bad vertex count {parts[1]!r}") from None
                if n < 0:
                    raise ParseError(lineno, "negative vertex count")
            continue
        parts = s.split()
        if parts[0] == "q" and len(parts) == 1:
            raw.append((lineno, UpdateEvent("q")))
            continue
        if parts[0] not in ("i", "d") or len(parts) != 3:
            raise ParseError(lineno, f"unrecognised event {s!r}")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(lineno, f"bad endpoints in {s!r}") from None
        raw.append((lineno, UpdateEvent(parts[0], u, v)))
    if n is None:
        n = 1 + max((max(e.u, e.v) for _, e in raw if e.kind != "q"), default=-1)
    present = set()
    events = []
    for lineno, e in raw:
        if e.kind != "q":
            if e.u == e.v:
                raise ParseError(lineno, f"self-loop at {e.u}")
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise ParseError(lineno, f"vertex out of range 0..{n - 1}")
            key = canon(e.u, e.v)
            if e.kind == "i":
                if key in present:
                    raise ParseError(lineno, f"duplicate insert of {key}")
                present.add(key)
            else:
                if key not in present:
                    raise ParseError(lineno, f"delete of absent edge {key}")
                present.discard(key)
        events.append(e)
    return Stream(n, events)


# -- workloads -----------------------------------------------------------------

class _Builder:
    def __init__(self, n: int, rng):
        self.n, self.rng = n, rng
        self.present: set = set()
        self.order: list = []
        self.events: list = []

    def add(self, e) -> None:
        e = canon(*e)
        self.present.add(e)
        self.events += [UpdateEvent("i", *e), UpdateEvent("q")]

    def remove(self, e) -> None:
        e = canon(*e)
        self.present.discard(e)
        self.events += [UpdateEvent("d", *e), UpdateEvent("q")]

    def pick_present(self, pool=None):
        pool = sorted(self.present if pool is None else pool)
        return pool[int(self.rng.integers(len(pool)))] if pool else None

    def pick_absent(self, ok=None, tries: int = 200):
        for _ in range(tries):
            u, v = (int(x) for x in self.rng.choice(self.n, 2, replace=False))
            e = canon(u, v)
            if e not in self.present and (ok is None or ok(e)):
                return e
        return None

    @property
    def steps(self) -> int:
        return len(self.events) // 2


def _random(b: _Builder, steps: int, p: float | None = None, **_):
    n = b.n
    p = min(0.5, 8 / max(n - 1, 1)) if p is None else p
    target = p * n * (n - 1) / 2
    while b.steps < steps:
        want_insert = b.rng.random() < (0.8 if len(b.present) < target else 0.2)
        e = b.pick_absent() if want_insert or not b.present else None
        if e is not None:
            b.add(e)
        else:
            b.remove(b.pick_present())


def _halves(n: int):
    half = n // 2
    return (lambda e: (e[0] < half) == (e[1] < half)), half


def _planted(b: _Builder, steps: int, bridges: int = 3, p_in: float = 0.7, **_):
    inside, half = _halves(b.n)
    cross_ok = lambda e: not inside(e)
    target_in = p_in * (half * (half - 1) / 2 + (b.n - half) * (b.n - half - 1) / 2)
    while b.steps < steps:
        cross = [e for e in b.present if not inside(e)]
        n_in = len(b.present) - len(cross)
        r = b.rng.random()
        if len(cross) < bridges and r < 0.5:
            e = b.pick_absent(cross_ok)
            if e is not None:
                b.add(e)
                continue
        if len(cross) > bridges or (len(cross) == bridges and r < 0.05):
            b.remove(b.pick_present(cross))
            continue
        if b.rng.random() < (0.85 if n_in < target_in else 0.15):
            e = b.pick_absent(inside)
            if e is not None:
                b.add(e)
                continue
        inner = [e for e in b.present if inside(e)]
        if inner:
            b.remove(b.pick_present(inner))
        else:
            b.add(b.pick_absent(inside))


def _tau_oscillate(b: _Builder, steps: int, p_in: float = 1.0, tau: int | None = None, **_):
    from .det_engine import default_tau

    inside, half = _halves(b.n)
    n_in = half * (half - 1) // 2 + (b.n - half) * (b.n - half - 1) // 2
    if tau is None:
        tau = default_tau(int(p_in * n_in), b.n)
    lo, hi = max(1, tau - 1), tau + 2
    inner_all = [e for e in ((u, v) for u in range(b.n) for v in range(u + 1, b.n)) if inside(e)]
    order = [inner_all[i] for i in b.rng.permutation(len(inner_all))][: int(p_in * n_in)]
    for e in order:
        if b.steps >= steps:
            return
        b.add(e)
    rising = True
    while b.steps < steps:
        cross = [e for e in b.present if not inside(e)]
        if b.rng.random() < 0.15:
            e = b.pick_present([x for x in b.present if inside(x)])
            if e is not None:
                b.remove(e)
                if b.steps < steps:
                    b.add(e)
                continue
        if rising and len(cross) >= hi:
            rising = False
        elif not rising and len(cross) <= lo:
            rising = True
        if rising:
            e = b.pick_absent(lambda e: not inside(e))
            if e is None:
                rising = False
                continue
            b.add(e)
        else:
            b.remove(b.pick_present(cross))


def _delete_heavy(b: _Builder, steps: int, p: float = 0.5, **_):
    n = b.n
    build = steps // 3
    target = p * n * (n - 1) / 2
    while b.steps < build and len(b.present) < target:
        b.add(b.pick_absent())
    while b.steps < steps:
        if b.present and b.rng.random() < 0.8:
            b.remove(b.pick_present())
        else:
            e = b.pick_absent()
            if e is None:
                b.remove(b.pick_present())
            else:
                b.add(e)


WORKLOADS = {
    "random": _random,
    "planted-cut": _planted,
    "tau-oscillate": _tau_oscillate,
    "delete-heavy": _delete_heavy,
}


def generate(workload: str, n: int, steps: int, seed: int, **params) -> Stream:
    """A stream of exactly ``steps`` updates from the empty graph, each followed by a query."""
    if workload not in WORKLOADS:
        raise UnknownWorkload(f"unknown workload {workload!r}; choose from {sorted(WORKLOADS)}")
    if n < 2:
        raise ValueError("workloads need n >= 2")
    b = _Builder(n, rng_stream(seed, "workload", workload, n))
    WORKLOADS[workload](b, steps, **params)
    return Stream(n, b.events[: 2 * steps])


# -- replay --------------------------------------------------------------------

class OracleEngine:
    """Recompute lambda from scratch at each query."""

    def __init__(self, n: int):
        self.g = DynGraph(n)
        self._work = 0

    def update(self, u: int, v: int, inserted: bool) -> None:
        self.g.update(u, v, inserted)

    def query(self) -> ConnectivityAnswer:
        self._work += self.g.n ** 3
        return ConnectivityAnswer(edge_connectivity(self.g), None, "oracle")

    def work(self) -> int:
        return self._work


def make_engine(kind: str, n: int, seed: int = 0, t_reps: int = 32, tau_const: float = 1.0,
                phi_const: float = 240):
    if kind == "rand":
        return RandEngine(n, T=t_reps, seed=seed, tau_const=tau_const)
    if kind == "det":
        return DetEngine(n, phi_const=phi_const)
    if kind == "oracle":
        return OracleEngine(n)
    raise ValueError(f"unknown engine {kind!r}")


@dataclass
class RunReport:
    engine: str
    rows: list = field(default_factory=list)
    mismatches: int = 0
    undershoots: int = 0
    checked: int = 0

    @property
    def update_costs(self) -> list:
        return [r["work_units"] for r in self.rows if r["kind"] != "query"]

    @property
    def max_update_cost(self) -> int:
        return max(self.update_costs, default=0)

    @property
    def avg_update_cost(self) -> float:
        c = self.update_costs
        return sum(c) / len(c) if c else 0.0

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r)
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.csv_text())

    def summary(self) -> str:
        return (f"engine={self.engine} events={len(self.rows)} checked={self.checked} "
                f"mismatches={self.mismatches} undershoots={self.undershoots} "
                f"max_update_work={self.max_update_cost} avg_update_work={self.avg_update_cost:.1f}")


class EngineError(RuntimeError):
    def __init__(self, idx: int, err: Exception):
        super().__init__(f"event {idx}: {err!r}")
        self.idx = idx


def run(engine_kind: str, stream: Stream, check: bool = False, seed: int = 0,
        t_reps: int = 32, tau_const: float = 1.0, phi_const: float = 240,
        timing: bool = True, parallel: bool = False, engine=None) -> RunReport:
    """Replay a stream; with ``check`` the oracle is consulted after every update."""
    eng = engine if engine is not None else make_engine(
        engine_kind, stream.n, seed, t_reps, tau_const, phi_const)
    truth = DynGraph(stream.n)
    report = RunReport(engine_kind)
    oracle_val = None
    answer = None
    pool = ThreadPoolExecutor(max_workers=1) if parallel and check else None
    try:
        for idx, ev in enumerate(stream.events):
            w0 = eng.work()
            t0 = time.perf_counter()
            try:
                if ev.kind == "q":
                    answer = eng.query().lam
                else:
                    ins = ev.kind == "i"
                    truth.update(ev.u, ev.v, ins)
                    fut = pool.submit(edge_connectivity, truth.copy()) if pool else None
                    eng.update(ev.u, ev.v, ins)
                    answer = eng.query().lam
                    if check:
                        oracle_val = fut.result() if fut else edge_connectivity(truth)
                        report.checked += 1
                        report.mismatches += answer != oracle_val
                        report.undershoots += answer < oracle_val
            except Exception as err:  # surface with the event index
                raise EngineError(idx, err) from err
            micros = int((time.perf_counter() - t0) * 1e6) if timing else 0
            report.rows.append({
                "event_idx": idx,
                "kind": KIND_NAMES[ev.kind],
                "u": "" if ev.u is None else ev.u,
                "v": "" if ev.v is None else ev.v,
                "answer": "" if answer is None else answer,
                "oracle": "" if not check or oracle_val is None else oracle_val,
                "match": "" if not check or oracle_val is None else int(answer == oracle_val),
                "work_units": eng.work() - w0,
                "micros": micros,
            })
    finally:
        if pool:
            pool.shutdown()
    return report


def fit_exponent(xs, ys) -> float:
    """Least-squares slope of log y against log x."""
    x = np.log(np.asarray(xs, dtype=float))
    y = np.log(np.maximum(np.asarray(ys, dtype=float), 1e-9))
    return float(np.polyfit(x, y, 1)[0])


def scaling_trend(engine_kind: str, sizes, steps, seed: int = 0, workload: str = "random",
                  **engine_kw) -> tuple[list[dict], float]:
    """Average per-update work across sizes, plus the fitted growth exponent in n.

    ``steps`` is a count or a function of n.
    """
    rows = []
    for n in sizes:
        s = generate(workload, n, steps(n) if callable(steps) else steps, seed)
        rep = run(engine_kind, s, check=False, seed=seed, timing=False, **engine_kw)
        truth_m = DynGraph(n)
        for ev in s.events:
            if ev.kind != "q":
                truth_m.update(ev.u, ev.v, ev.kind == "i")
        rows.append({"engine": engine_kind, "n": n, "final_m": truth_m.m,
                     "avg_update_work": rep.avg_update_cost, "max_update_work": rep.max_update_cost})
    exp = fit_exponent([r["n"] for r in rows], [r["avg_update_work"] for r in rows]) \
        if len(rows) > 1 else math.nan
    return rows, exp
