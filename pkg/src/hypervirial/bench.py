"""Wall-time comparison of the moment recursion against the RSPT oracle."""

from __future__ import annotations

import json
import platform
import time
from dataclasses import asdict, dataclass, field

import gmpy2

from .engine import energy_series
from .errors import DomainError
from .families import PotentialFamily, QuantumState
from .rspt import rspt_series

METHODS = ("hfhv", "rspt")
BENCH_ORACLE_LIMIT = 40


@dataclass(frozen=True)
class BenchRow:
    method: str
    r0: int
    seconds: float


@dataclass
class BenchReport:
    family: str
    state: str
    rows: list[BenchRow]
    environment: str
    repeats: int
    ratios: dict[int, float] = field(default_factory=dict)

    def seconds(self, method: str, r0: int) -> float:
        for row in self.rows:
            if row.method == method and row.r0 == r0:
                return row.seconds
        raise KeyError((method, r0))

    @property
    def orders(self) -> list[int]:
        return sorted({row.r0 for row in self.rows})

    def to_markdown(self) -> str:
        orders = self.orders
        head = "| | " + " | ".join(f"r0={r}" for r in orders) + " |"
        sep = "|---|" + "---|" * len(orders)
        lines = [
            f"Wall time (seconds, best of {self.repeats}) for eps(0..r0), {self.family} {self.state}",
            "",
            head,
            sep,
            "| RSPT method | " + " | ".join(f"{self.seconds('rspt', r):.4g}" for r in orders) + " |",
            "| HFHV method | " + " | ".join(f"{self.seconds('hfhv', r):.4g}" for r in orders) + " |",
            "| RSPT/HFHV | " + " | ".join(f"{self.ratios[r]:.3g}" for r in orders) + " |",
            "",
            f"environment: {self.environment}",
        ]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        data = asdict(self)
        data["ratios"] = {str(k): v for k, v in self.ratios.items()}
        return json.dumps(data, indent=2) + "\n"


def _best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def environment_note() -> str:
    return (
        f"python {platform.python_version()} ({platform.python_implementation()}), "
        f"gmpy2 {gmpy2.version()}, {platform.machine()}, {platform.system()}"
    )


def run_bench(
    family: PotentialFamily,
    orders: list[int],
    *,
    repeats: int = 3,
    oracle_limit: int = BENCH_ORACLE_LIMIT,
) -> BenchReport:
    """Time both methods for the 1S-type state (n = l = 0) at each order."""
    if not orders:
        raise DomainError("at least one order is required")
    if any(r < 0 for r in orders):
        raise DomainError("orders must be non-negative")
    if max(orders) > oracle_limit:
        raise DomainError(f"order {max(orders)} exceeds the oracle limit {oracle_limit}")
    if repeats < 1:
        raise DomainError("repeats must be >= 1")
    state = QuantumState(0, 0)
    # warm-up, excluded from timings
    energy_series(family, state, 2)
    rspt_series(family, 0, 2)
    rows = []
    ratios = {}
    for r0 in sorted(set(orders)):
        hfhv = _best_of(lambda: energy_series(family, state, r0), repeats)
        rspt = _best_of(lambda: rspt_series(family, 0, r0, oracle_limit=oracle_limit), repeats)
        rows += [BenchRow("hfhv", r0, hfhv), BenchRow("rspt", r0, rspt)]
        ratios[r0] = rspt / hfhv if hfhv > 0 else float("inf")
    return BenchReport(family.name, state.label, rows, environment_note(), repeats, ratios)
