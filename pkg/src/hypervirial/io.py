"""Series documents (json / csv) and the on-disk series cache."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .engine import EnergySeries, energy_series
from .errors import DomainError, InternalConsistencyError
from .families import PotentialFamily, PotentialKind, QuantumState

SCHEMA_VERSION = 1


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        if not sep:
            return Fraction(int(num))
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"malformed rational {text!r}") from exc


@dataclass
class SeriesDocument:
    family: PotentialFamily
    state: QuantumState
    coefficients: list[Fraction]
    metadata: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def r0(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def from_series(cls, series: EnergySeries, **metadata) -> "SeriesDocument":
        meta = {"engine_version": __version__, "method": series.method}
        if "wall_time" in series.metadata:
            meta["wall_time"] = series.metadata["wall_time"]
        meta.update(metadata)
        return cls(series.family, series.state, list(series.coefficients), meta)

    def to_series(self) -> EnergySeries:
        return EnergySeries(
            self.family, self.state, tuple(self.coefficients), self.metadata.get("method", "hfhv")
        )

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "family": {"kind": self.family.kind.value, "p": self.family.p},
            "state": {"n": self.state.n, "l": self.state.l},
            "r0": self.r0,
            "coefficients": [format_rational(c) for c in self.coefficients],
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "SeriesDocument":
        try:
            version = data["schema_version"]
            family = PotentialFamily(PotentialKind(data["family"]["kind"]), int(data["family"]["p"]))
            state = QuantumState(int(data["state"]["n"]), int(data["state"]["l"]))
            coefficients = [parse_rational(c) for c in data["coefficients"]]
            r0 = int(data["r0"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed series document: {exc}") from exc
        if version != SCHEMA_VERSION:
            raise DomainError(f"unsupported schema_version {version}")
        if len(coefficients) != r0 + 1:
            raise DomainError(f"r0 = {r0} but {len(coefficients)} coefficients")
        return cls(family, state, coefficients, dict(data.get("metadata", {})), version)

    @classmethod
    def from_json(cls, text: str) -> "SeriesDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid json: {exc}") from exc
        return cls.from_dict(data)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "coefficient"])
        for k, c in enumerate(self.coefficients):
            writer.writerow([k, format_rational(c)])
        return buf.getvalue()


def parse_csv(text: str) -> list[Fraction]:
    """Coefficients from a ``k,coefficient`` table; rows must be ``k = 0, 1, ...``."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["k", "coefficient"]:
        raise DomainError("csv must start with the header 'k,coefficient'")
    out = []
    for expected, row in enumerate(r for r in rows[1:] if r):
        if len(row) != 2 or not row[0].strip().isdigit() or int(row[0]) != expected:
            raise DomainError(f"csv row {expected + 1} is malformed: {row!r}")
        out.append(parse_rational(row[1]))
    return out


class SeriesCache:
    """Directory of series documents, one file per (family, n, l)."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path(self, family: PotentialFamily, state: QuantumState) -> Path:
        return self.root / f"{family.kind.value}-p{family.p}-n{state.n}-l{state.l}.json"

    def load(self, family: PotentialFamily, state: QuantumState) -> SeriesDocument | None:
        path = self.path(family, state)
        if not path.exists():
            return None
        return SeriesDocument.from_json(path.read_text())

    def store(self, document: SeriesDocument) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.path(document.family, document.state)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(document.to_json())
        tmp.replace(path)
        return path

    def series(self, family: PotentialFamily, state: QuantumState, r0: int) -> EnergySeries:
        """Series to order ``r0``, served from or extending the cache.

        Extension recomputes from scratch and requires the cached prefix to
        match exactly.
        """
        cached = self.load(family, state)
        if cached is not None and cached.r0 >= r0:
            return cached.to_series().prefix(r0)
        fresh = energy_series(family, state, r0)
        if cached is not None:
            prefix = tuple(cached.coefficients)
            if fresh.coefficients[: len(prefix)] != prefix:
                raise InternalConsistencyError(
                    f"cached series {self.path(family, state)} disagrees with a fresh computation"
                )
        self.store(SeriesDocument.from_series(fresh, timestamp=time.time()))
        return fresh
