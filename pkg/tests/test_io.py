import json
from fractions import Fraction

import pytest

from hypervirial import CORNELL, QUARTIC, PotentialFamily, PotentialKind, QuantumState, energy_series
from hypervirial.errors import DomainError, InternalConsistencyError
from hypervirial.io import (
    SCHEMA_VERSION,
    SeriesCache,
    SeriesDocument,
    format_rational,
    parse_csv,
    parse_rational,
)


class TestRationalText:
    @pytest.mark.parametrize(
        "value,text", [(Fraction(3), "3/1"), (Fraction(-165, 16), "-165/16"), (Fraction(0), "0/1")]
    )
    def test_format(self, value, text):
        assert format_rational(value) == text
        assert parse_rational(text) == value

    def test_parse_integer(self):
        assert parse_rational(" -12 ") == -12

    @pytest.mark.parametrize("text", ["1/0", "abc", "1.5", "3/x", ""])
    def test_malformed(self, text):
        with pytest.raises(DomainError):
            parse_rational(text)


class TestSeriesDocument:
    def test_json_example(self):
        doc = SeriesDocument.from_series(energy_series(QUARTIC, QuantumState(0, 0), 2))
        data = json.loads(doc.to_json())
        assert data["coefficients"] == ["3/1", "15/4", "-165/16"]
        assert data["schema_version"] == SCHEMA_VERSION
        assert data["family"] == {"kind": "oscillator_plus_even_power", "p": 2}
        assert data["r0"] == 2 and data["metadata"]["method"] == "hfhv"

    @pytest.mark.parametrize(
        "family", [CORNELL, QUARTIC, PotentialFamily(PotentialKind.COULOMB_PLUS_POWER, 3)], ids=lambda f: f.name
    )
    def test_json_round_trip(self, family):
        series = energy_series(family, QuantumState(1, 2), 40)
        back = SeriesDocument.from_json(SeriesDocument.from_series(series).to_json())
        assert back.to_series() == series
        assert back.family == family and back.state == QuantumState(1, 2)

    def test_csv_round_trip(self):
        series = energy_series(CORNELL, QuantumState(0, 1), 40)
        text = SeriesDocument.from_series(series).to_csv()
        assert text.splitlines()[0] == "k,coefficient"
        assert text.splitlines()[2] == "1,10/1"
        assert tuple(parse_csv(text)) == series.coefficients

    def test_order_zero_csv(self):
        text = SeriesDocument.from_series(energy_series(CORNELL, QuantumState(0, 0), 0)).to_csv()
        assert text == "k,coefficient\n0,-1/4\n"

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda d: d.pop("coefficients"),
            lambda d: d.update(schema_version=99),
            lambda d: d.update(r0=5),
            lambda d: d["family"].update(kind="morse"),
            lambda d: d["state"].update(n=-1),
            lambda d: d["coefficients"].__setitem__(0, "x/y"),
        ],
    )
    def test_malformed_documents(self, mutate):
        data = SeriesDocument.from_series(energy_series(CORNELL, QuantumState(0, 0), 3)).to_dict()
        mutate(data)
        with pytest.raises(DomainError):
            SeriesDocument.from_dict(data)

    def test_invalid_json(self):
        with pytest.raises(DomainError):
            SeriesDocument.from_json("{not json")

    @pytest.mark.parametrize("text", ["", "a,b\n0,1/1\n", "k,coefficient\n1,1/1\n", "k,coefficient\n0,1,2\n"])
    def test_malformed_csv(self, text):
        with pytest.raises(DomainError):
            parse_csv(text)


class TestSeriesCache:
    @pytest.mark.parametrize("family", [CORNELL, QUARTIC], ids=lambda f: f.name)
    def test_extension_is_prefix_stable(self, tmp_path, family):
        cache = SeriesCache(tmp_path)
        state = QuantumState(0, 0)
        short = cache.series(family, state, 40)
        assert cache.load(family, state).r0 == 40
        long = cache.series(family, state, 60)
        assert long.coefficients[:41] == short.coefficients
        assert cache.load(family, state).r0 == 60
        assert long == energy_series(family, state, 60)

    def test_serves_prefix_without_recomputing(self, tmp_path, monkeypatch):
        cache = SeriesCache(tmp_path)
        state = QuantumState(1, 0)
        full = cache.series(CORNELL, state, 20)
        monkeypatch.setattr("hypervirial.io.energy_series", lambda *a: pytest.fail("recomputed"))
        assert cache.series(CORNELL, state, 12) == full.prefix(12)

    def test_corrupted_cache_detected(self, tmp_path):
        cache = SeriesCache(tmp_path)
        state = QuantumState(0, 0)
        doc = SeriesDocument.from_series(energy_series(QUARTIC, state, 10))
        doc.coefficients[5] += 1
        cache.store(doc)
        with pytest.raises(InternalConsistencyError):
            cache.series(QUARTIC, state, 20)

    def test_paths_are_distinct(self, tmp_path):
        cache = SeriesCache(tmp_path)
        paths = {
            cache.path(f, QuantumState(n, l))
            for f in (CORNELL, QUARTIC, PotentialFamily(PotentialKind.COULOMB_PLUS_POWER, 2))
            for n in range(2)
            for l in range(2)
        }
        assert len(paths) == 12

    def test_missing_entry(self, tmp_path):
        assert SeriesCache(tmp_path / "absent").load(CORNELL, QuantumState(0, 0)) is None
