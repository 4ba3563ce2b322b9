"""Batch experiments: the reproducible measurement suite behind ``synchro verify``.

Each experiment returns a list of named checks; the runner times it and
records the machines it used by content digest.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .algebra import (
    act_periodic,
    fixed_letter_state,
    level_transformation,
    loop_states,
    min_core,
    normal_form_power,
    omega_classes,
    power,
    product,
)
from .catalog import all_entries, bisync_family, builtin, random_transducer
from .growth import (
    dummy_active_state,
    dummy_active_state_closed_form,
    growth_series,
    level_drop,
    sigma,
    solve_exponent_prefix,
)
from .sync import core_dist, core_indices, is_core, sync_level
from .transducer import PeriodicWord, Transducer, serialize


def digest(T: Transducer) -> str:
    return hashlib.sha256(serialize(T).encode()).hexdigest()[:16]


@dataclass
class Check:
    name: str
    passed: bool
    value: object = None


@dataclass
class ExperimentReport:
    name: str
    title: str
    limit: float
    inputs: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    duration: float = 0.0
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks) and self.duration < self.limit

    def summary(self) -> str:
        failed = [c for c in self.checks if not c.passed]
        status = "PASS" if self.passed else "FAIL"
        detail = f"{len(self.checks)} checks"
        if failed:
            detail += f", {len(failed)} failed (first: {failed[0].name} -> {failed[0].value})"
        if self.error:
            detail = f"error: {self.error}"
        if self.duration >= self.limit:
            detail += f", over time limit {self.limit:g}s"
        return f"{status} [{self.name}] {self.title}: {detail}, {self.duration:.2f}s"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "title": self.title,
            "passed": self.passed,
            "limit_seconds": self.limit,
            "duration_seconds": round(self.duration, 4),
            "inputs": self.inputs,
            "checks": [{"name": c.name, "passed": c.passed, "value": _plain(c.value)} for c in self.checks],
            "error": self.error,
        }


def _plain(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


class _Context:
    def __init__(self, seed: int):
        self.seed = seed
        self.machines: dict[str, str] = {}
        self.params: dict = {}

    def use(self, name: str, T: Transducer) -> Transducer:
        self.machines[name] = digest(T)
        return T


_EXPERIMENTS: dict[str, tuple[str, float, object]] = {}


def experiment(name: str, title: str, limit: float):
    def register(fn):
        _EXPERIMENTS[name] = (title, limit, fn)
        return fn
    return register


def _pairs_by_alphabet(entries):
    groups: dict[int, list] = {}
    for entry in entries:
        groups.setdefault(entry.machine.n, []).append(entry)
    for group in groups.values():
        yield from itertools.product(group, repeat=2)


def _core_entries(ctx):
    entries = [e for e in all_entries(3) if e.expected.get("core")]
    for e in entries:
        ctx.use(e.name, e.machine)
    return entries


@experiment("shift-growth", "|min Core(shift2^m)| = 2^m, m = 1..8", 30)
def _shift_growth(ctx):
    A = ctx.use("shift2", builtin("shift2").machine)
    checks = []
    for m in range(1, 9):
        raw = min_core(power(A, m)).size
        incremental = normal_form_power(A, m).size
        checks.append(Check(f"m={m}", raw == incremental == 2 ** m, (raw, incremental)))
    return checks


@experiment("h3-bound", "g_h3: |min Core(G^m)| >= 2^floor(m/2) and >= m, m = 1..10", 120)
def _h3_bound(ctx):
    G = ctx.use("g_h3", builtin("g_h3").machine)
    series = growth_series(G, 10)
    checks = []
    for record in series.records:
        m, size = record.m, record.min_core_size
        raw = min_core(power(G, m)).size
        checks.append(Check(f"m={m} size={size}",
                            size == raw and size >= 2 ** (m // 2) and size >= m, (size, raw)))
    ctx.params["sizes"] = series.sizes
    return checks


@experiment("levels-add", "sync_level(A*B) <= level(A) + level(B)", 10)
def _levels_add(ctx):
    entries = [builtin("shift2"), builtin("oneway2"), builtin("g_h3")]
    entries += [bisync_family(i) for i in range(1, 4)]
    checks = []
    for a, b in _pairs_by_alphabet(entries):
        ctx.use(a.name, a.machine)
        la, lb = sync_level(a.machine), sync_level(b.machine)
        lab = sync_level(product(a.machine, b.machine))
        checks.append(Check(f"{a.name}*{b.name}", lab is not None and lab <= la + lb, (lab, la, lb)))
    return checks


@experiment("collapse-vs-brute", "collapsing level equals brute-force level", 120)
def _collapse_vs_brute(ctx):
    machines = []
    for i in range(600):
        machines.append((f"random-{i}", random_transducer(2, 1 + i % 4, seed=ctx.seed + i)))
    for entry in all_entries(3):
        machines.append((entry.name, ctx.use(entry.name, entry.machine)))
    ctx.params["random_machines"] = 600
    agree = 0
    checks = []
    for name, T in machines:
        fast, slow = sync_level(T), oracles.sync_level(T)
        if fast == slow:
            agree += 1
        else:
            checks.append(Check(name, False, (fast, slow)))
    checks.append(Check(f"agreement {agree}/{len(machines)}", agree == len(machines), agree))
    return checks


@experiment("minimize-oracle", "partition refinement equals bounded-depth comparison", 60)
def _minimize_oracle(ctx):
    checks = []
    agree = 0
    for i in range(200):
        n, states = 2 + i % 2, 1 + i % 5
        T = random_transducer(n, states, seed=ctx.seed + 10_000 + i)
        classes = omega_classes(T)
        fast = {frozenset(np.flatnonzero(classes == c).tolist()) for c in np.unique(classes)}
        slow = set(oracles.omega_classes(T))
        if fast == slow:
            agree += 1
        else:
            checks.append(Check(f"machine {i}", False, (sorted(map(sorted, fast)), sorted(map(sorted, slow)))))
    checks.append(Check(f"agreement {agree}/200", agree == 200, agree))
    return checks


@experiment("dummy-closed-form", "closed-form active states equal simulation", 60)
def _dummy_closed_form(ctx):
    mismatches = 0
    total = 0
    for r in range(11):
        for x in itertools.product((0, 1), repeat=r):
            for k in range(1, 13):
                total += 1
                if dummy_active_state(x, k) != dummy_active_state_closed_form(x, k):
                    mismatches += 1
    return [Check(f"{total} cases", mismatches == 0, mismatches)]


@experiment("sigma", "nested sums: recurrence and binomial form", 1)
def _sigma(ctx):
    checks = []
    for i in range(1, 11):
        for j in range(0, 11):
            recurrence = sum(sigma(i, k) for k in range(1, j + 1)) == sigma(i + 1, j)
            closed = sigma(i, j) == math.comb(j + i, i + 1)
            literal = sigma(i, j) == oracles.nested_sum(i, j)
            checks.append(Check(f"S({i},{j})", recurrence and closed and literal, sigma(i, j)))
    return checks


@experiment("prefix-solve", "every exponent prefix of length <= 5 is realised", 60)
def _prefix_solve(ctx):
    checks = []
    for j in range(1, 6):
        for y in itertools.product((0, 1), repeat=j):
            x = solve_exponent_prefix(y)
            reached = dummy_active_state(x, j)
            checks.append(Check(f"y={''.join(map(str, y))}",
                                len(x) == 2 * j - 1 and reached == tuple((0, v) for v in y), x))
    return checks


@experiment("core-dist", "CoreDist(A*B) <= k_B and CoreDist of g_h3 powers <= ceil(m/2)", 60)
def _core_dist(ctx):
    checks = []
    for a, b in _pairs_by_alphabet(_core_entries(ctx)):
        value = core_dist(product(a.machine, b.machine))
        kb = sync_level(b.machine)
        checks.append(Check(f"{a.name}*{b.name}", value <= kb, (value, kb)))
    G = ctx.use("g_h3", builtin("g_h3").machine)
    base = min_core(G)
    current = base
    for m in range(1, 9):
        unreduced = G if m == 1 else product(current.machine, base.machine)
        if m > 1:
            current = min_core(unreduced)
        value = core_dist(unreduced)
        bound = -(-m // 2)
        checks.append(Check(f"incremental m={m}", value <= bound, (value, bound)))
        raw = core_dist(power(G, m))
        checks.append(Check(f"raw power m={m}", raw <= bound, (raw, bound)))
    return checks


@experiment("level-drop", "min Core(shift2^3 * shift2) has level >= 2", 10)
def _level_drop(ctx):
    B = ctx.use("shift2", builtin("shift2").machine)
    A = min_core(power(B, 3)).machine
    n = A.n
    level = level_drop(A, B)
    return [
        Check("|A| > n(n+1)", A.size > n * (n + 1), A.size),
        Check("B has level 1", sync_level(B) == 1, sync_level(B)),
        Check("level >= 2", level >= 2, level),
    ]


def _all_cycles(n: int, max_period: int):
    for p in range(1, max_period + 1):
        for cycle in itertools.product(range(n), repeat=p):
            yield PeriodicWord(cycle)


@experiment("laws", "level maps compose; periodic action composes and commutes with shift", 60)
def _laws(ctx):
    checks = []
    entries = [e for e in all_entries(3) if sync_level(e.machine) is not None]
    for e in entries:
        ctx.use(e.name, e.machine)
    cycles = {n: list(_all_cycles(n, 6)) for n in {e.machine.n for e in entries}}
    for a, b in _pairs_by_alphabet(entries):
        A, B = a.machine, b.machine
        AB = product(A, B)
        k = sync_level(A) + sync_level(B)
        composed = level_transformation(A, k).then(level_transformation(B, k))
        checks.append(Check(f"level map {a.name}*{b.name} k={k}",
                            level_transformation(AB, k) == composed))
        bad = 0
        for w in cycles[A.n]:
            via_product = act_periodic(AB, w)
            via_steps = act_periodic(B, act_periodic(A, w))
            if not via_product.aligned_with(via_steps):
                bad += 1
        checks.append(Check(f"action {a.name}*{b.name}", bad == 0, bad))
    for e in entries:
        T = e.machine
        k = sync_level(T)
        bad = 0
        for w in cycles[T.n]:
            image = act_periodic(T, w)
            if not act_periodic(T, w.rotate()).aligned_with(image.rotate()):
                bad += 1
            if not image.aligned_with(PeriodicWord(oracles.periodic_action(T, w.cycle, k))):
                bad += 1
        checks.append(Check(f"shift-commuting {e.name}", bad == 0, bad))
    return checks


@experiment("fixed-letter", "loop x|x state found; its k-th power stays in the core", 60)
def _fixed_letter(ctx):
    checks = []
    for e in all_entries(3):
        T = e.machine
        if sync_level(T) is None:
            continue
        ctx.use(e.name, T)
        found = fixed_letter_state(T)
        i, x = found.i, found.x
        level_map = level_transformation(T, 1)
        # brute force: least i with a fixed letter
        least = next(j for j in range(1, math.factorial(T.n) + 1)
                     if any(level_map.iterate(j).mapping[y] == y for y in range(T.n)))
        q0 = found.normal_form.machine.state_index(found.q0)
        loop_ok = (found.normal_form.machine.delta[q0, x] == q0
                   and found.normal_form.machine.out[q0, x] == x)
        checks.append(Check(f"{e.name}: i={i} x={x} q0={found.q0}", i == least and loop_ok, (i, least)))
        tuple_idx = [T.state_index(s) for s in found.loop_tuple]
        for k in range(1, 5):
            P = power(T, k * i)
            index = 0
            for q in tuple_idx * k:
                index = index * T.size + q
            in_core = bool(np.isin(index, core_indices(P)))
            unique = int(loop_states(P, 1)[x]) == index
            checks.append(Check(f"{e.name}: q0^{k} in core of power {k * i}", in_core and unique))
    return checks


def names() -> list[str]:
    return list(_EXPERIMENTS)


def run_experiment(name: str, seed: int = 0) -> ExperimentReport:
    title, limit, fn = _EXPERIMENTS[name]
    ctx = _Context(seed)
    report = ExperimentReport(name, title, limit)
    start = time.perf_counter()
    try:
        report.checks = fn(ctx)
    except Exception as exc:  # reported, not raised: one broken experiment must not hide the rest
        report.error = f"{type(exc).__name__}: {exc}"
    report.duration = time.perf_counter() - start
    report.inputs = {"machines": ctx.machines, "seed": seed, **ctx.params}
    return report


def run_suite(selection: str | list[str] = "all", seed: int = 0) -> list[ExperimentReport]:
    chosen = names() if selection == "all" else list(selection)
    unknown = [s for s in chosen if s not in _EXPERIMENTS]
    if unknown:
        raise KeyError(f"unknown experiments {unknown}; known: {names()}")
    return [run_experiment(name, seed) for name in chosen]
