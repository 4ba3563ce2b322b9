"""Core growth series and the binary dummy-machine calculus for the H3 example."""

from __future__ import annotations

import csv
import io
from collections.abc import Sequence
from dataclasses import asdict, dataclass

import numpy as np

from .algebra import min_core, min_core_with_map, power, product
from .errors import NotSynchronizing, TooFewRecords
from .sync import core_dist, core_indices, sync_level
from .transducer import Transducer


@dataclass(frozen=True)
class GrowthRecord:
    m: int
    core_size: int | None          # |Core(A^m)| from the raw power, when computed
    min_core_size: int
    sync_level: int
    core_dist: int

    @property
    def conjecture_ok(self) -> bool:
        return self.min_core_size >= self.m


@dataclass(frozen=True)
class Classification:
    label: str
    slope: float | None = None
    residual: float | None = None


@dataclass
class GrowthSeries:
    name: str
    records: list[GrowthRecord]
    classification: Classification
    digest: str = ""

    @property
    def conjecture_ok(self) -> bool:
        return all(r.conjecture_ok for r in self.records)

    @property
    def sizes(self) -> list[int]:
        return [r.min_core_size for r in self.records]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "core_size", "min_core_size", "sync_level", "core_dist", "conjecture_ok"])
        for r in self.records:
            writer.writerow([r.m, "" if r.core_size is None else r.core_size, r.min_core_size,
                             r.sync_level, r.core_dist, str(r.conjecture_ok).lower()])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "digest": self.digest,
            "records": [dict(asdict(r), conjecture_ok=r.conjecture_ok) for r in self.records],
            "classification": asdict(self.classification),
            "conjecture_ok": self.conjecture_ok,
        }


def classify_sizes(sizes: Sequence[int], slope_threshold: float = 0.05,
                   residual_threshold: float = 0.1) -> Classification:
    if len(sizes) < 4:
        raise TooFewRecords(f"need at least 4 records, got {len(sizes)}")
    ms = np.arange(1, len(sizes) + 1, dtype=float)
    logs = np.log(np.asarray(sizes, dtype=float))
    half = len(sizes) // 2
    (slope, intercept) = np.polyfit(ms[half:], logs[half:], 1)
    residual = float(np.linalg.norm(logs[half:] - (slope * ms[half:] + intercept)))
    slope = float(slope)
    if slope > slope_threshold and residual < residual_threshold:
        label = "exponential"
    elif sizes[-1] == sizes[-2] == sizes[-3]:
        label = "bounded"
    elif all(a < b for a, b in zip(sizes, sizes[1:])):
        label = "at-least-polynomial"
    else:
        label = "inconclusive"
    return Classification(label, slope, residual)


def classify_growth(records: Sequence[GrowthRecord], **thresholds) -> Classification:
    """Empirical growth label from the log-size slope over the last half of the series."""
    return classify_sizes([r.min_core_size for r in records], **thresholds)


def growth_series(A: Transducer, max_m: int, name: str = "", raw_limit: int = 2 ** 16,
                  **thresholds) -> GrowthSeries:
    """Sizes of ``min Core(A^m)`` for ``m = 1..max_m`` via incremental products.

    ``core_size`` (the unreduced core of the raw power) is filled in while
    ``|A|^m <= raw_limit``.
    """
    if max_m < 1:
        raise ValueError("max_m must be at least 1")
    if sync_level(A) is None:
        raise NotSynchronizing("growth is only defined for strongly synchronizing machines")
    base = min_core(A)
    records = []
    current = None
    for m in range(1, max_m + 1):
        if current is None:
            unreduced = A
            current = base
        else:
            unreduced = product(current.machine, base.machine)
            current = min_core(unreduced)
        raw_core = None
        if A.size ** m <= raw_limit:
            raw_core = len(core_indices(power(A, m)))
        records.append(GrowthRecord(m, raw_core, current.size,
                                    current.level, core_dist(unreduced)))
    label = (classify_growth(records, **thresholds) if len(records) >= 4
             else Classification("inconclusive"))
    return GrowthSeries(name, records, label)


@dataclass(frozen=True)
class LowerBoundRow:
    m: int
    size: int
    reachable: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.reachable >= self.bound

    @property
    def gap(self) -> int:
        """Distance above the ``m + 1`` states of a level-``m`` family member."""
        return self.reachable - (self.m + 1)


def _reachable(T: Transducer, start: int) -> int:
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = np.unique(T.delta[frontier])
        frontier = [int(q) for q in nxt if int(q) not in seen]
        seen.update(frontier)
    return len(seen)


def verify_lower_bound(A: Transducer, q: str, max_m: int) -> list[LowerBoundRow]:
    """Count states of ``min Core(A^m)`` reachable from the class of ``q^m``.

    ``q`` must lie in the core of every power, as a state with a fixed
    loop does.  Each row is compared with ``2^floor(m/2)``.
    """
    base, base_map = min_core_with_map(A)
    qi = int(base_map[A.state_index(q)])
    if qi < 0:
        raise ValueError(f"state {q!r} is not in the core")
    current, cls = base, qi
    rows = []
    for m in range(1, max_m + 1):
        if m > 1:
            current, mapping = min_core_with_map(product(current.machine, base.machine))
            cls = int(mapping[cls * base.size + qi])
            if cls < 0:
                raise ValueError(f"{q}^{m} is not in the core of the {m}-th power")
        rows.append(LowerBoundRow(m, current.size, _reachable(current.machine, cls), 2 ** (m // 2)))
    return rows


def level_drop(A: Transducer, B: Transducer) -> int:
    """Minimal level of ``min Core(A * B)``; at least 2 when ``A`` is large and ``B`` has level 1."""
    return min_core(product(A, B)).level


# ---------------------------------------------------------------------------
# nested sums

class SigmaTable:
    """Memoized nested sums S(i, j) = sum_{l1<=j} sum_{l2<=l1} ... l_i.

    S(i, j) = 0 for j <= 0 and S(0, j) = j, so S(i, j) = S(i, j-1) + S(i-1, j).
    """

    def __init__(self):
        self._values: dict[tuple[int, int], int] = {}

    def __call__(self, i: int, j: int) -> int:
        if i < 0:
            raise ValueError("i must be non-negative")
        if j <= 0:
            return 0
        if i == 0:
            return j
        key = (i, j)
        if key not in self._values:
            total = 0
            for jj in range(1, j + 1):
                total += self(i - 1, jj)
                self._values[(i, jj)] = total
        return self._values[key]


_SIGMA = SigmaTable()


def sigma(i: int, j: int) -> int:
    return _SIGMA(i, j)


# ---------------------------------------------------------------------------
# the binary dummy machine; sigma_i^j is the pair (i, j)

def _dummy_label(sub: int, exp: int) -> str:
    return f"s{sub}^{exp}"


DUMMY_ROOT = "B"


def dummy_transducer() -> Transducer:
    """Five states over {0, 1}: a root ``B`` plus sigma_i^j for i, j in {0, 1}.

    ``sigma_i^j`` reads ``x`` into ``sigma_{i+1}^{x+ij}`` emitting ``x+j`` (mod 2);
    the root reads 0|0 into sigma_1^1 and 1|1 into sigma_0^1.
    """
    pairs = [(0, 1), (1, 1), (0, 0), (1, 0)]
    labels = [DUMMY_ROOT] + [_dummy_label(*p) for p in pairs]
    edges = [(DUMMY_ROOT, 0, 0, _dummy_label(1, 1)), (DUMMY_ROOT, 1, 1, _dummy_label(0, 1))]
    for i, j in pairs:
        for x in (0, 1):
            edges.append((_dummy_label(i, j), x, (x + j) % 2,
                          _dummy_label((i + 1) % 2, (x + i * j) % 2)))
    return Transducer.from_edges(2, labels, edges)


_DUMMY = None


def _dummy():
    global _DUMMY
    if _DUMMY is None:
        _DUMMY = dummy_transducer()
    return _DUMMY


def dummy_active_state(x: Sequence[int], k: int) -> tuple[tuple[int, int], ...]:
    """Active state of the k-th power started at (sigma_1^1)^k after reading ``x``.

    Simulated letter by letter through the product; returns (subscript, exponent) pairs.
    """
    T = _dummy()
    start = T.state_index(_dummy_label(1, 1))
    state = [start] * k
    for letter in x:
        for c in range(k):
            q = state[c]
            state[c] = int(T.delta[q, letter])
            letter = int(T.out[q, letter])
    pairs = []
    for q in state:
        label = T.states[q]
        pairs.append((int(label[1]), int(label[3])))
    return tuple(pairs)


def _coefficient(t: int, j: int, odd: bool) -> int:
    """Coefficient of x_{r-t} in the exponent of the j-th term after r reads."""
    if t == 0:
        return 1
    shift = t // 2 if odd else (t + 1) // 2
    return sigma(t - 1, j - shift)


def dummy_active_state_closed_form(x: Sequence[int], k: int) -> tuple[tuple[int, int], ...]:
    """Closed-form exponents of the active state, with x_0 = 1.

    After an even number r of reads term j is sigma_1^e with
    e = x_r + (j-1) x_{r-1} + S(1, j-1) x_{r-2} + S(2, j-2) x_{r-3} + ...;
    after an odd number it is sigma_0^e with
    e = x_r + j x_{r-1} + S(1, j-1) x_{r-2} + S(2, j-1) x_{r-3} + ...
    """
    r = len(x)
    odd = r % 2 == 1
    padded = (1,) + tuple(x)          # padded[l] = x_l
    result = []
    for j in range(1, k + 1):
        e = sum(_coefficient(t, j, odd) * padded[r - t] for t in range(r + 1))
        result.append((0 if odd else 1, e % 2))
    return tuple(result)


def solve_exponent_prefix(y: Sequence[int]) -> tuple[int, ...]:
    """Input of length 2j-1 whose active state starts sigma_0^{y_1} ... sigma_0^{y_j}.

    The equations are triangular over Z/2: equation l (l < j) is solved for
    x_{r-2l+1} and the last one for x_1; every other letter is set to 0.
    """
    j = len(y)
    if j < 1:
        raise ValueError("need at least one target exponent")
    r = 2 * j - 1
    x = [1] + [0] * r                 # x[0] is the constant 1
    for l in range(1, j + 1):
        pivot = 1 if l == j else r - 2 * l + 1
        rest = sum(_coefficient(t, l, True) * x[r - t]
                   for t in range(r + 1) if r - t != pivot)
        assert _coefficient(r - pivot, l, True) % 2 == 1
        x[pivot] = (y[l - 1] - rest) % 2
    solution = tuple(x[1:])
    reached = dummy_active_state(solution, j)
    if reached != tuple((0, v % 2) for v in y):
        raise AssertionError(f"solver produced {solution}, reaching {reached}")
    return solution
