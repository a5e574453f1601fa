import csv
import io
import json
import logging
import math

import numpy as np
import pytest

from robustht.config import JOBS_ENV_VAR
from robustht.utils.files import append_jsonl, dump_json, format_number, load_vector, to_jsonable, write_csv
from robustht.utils.helpers import ci_radius, fit_loglog_slope, log_grid
from robustht.utils.logger import setup_logging
from robustht.utils.pool import chunk_ranges, default_jobs, gather_map, run_map


class TestPool:
    def test_default_jobs(self, monkeypatch):
        monkeypatch.delenv(JOBS_ENV_VAR, raising=False)
        assert default_jobs() == 1
        monkeypatch.setenv(JOBS_ENV_VAR, "4")
        assert default_jobs() == 4
        monkeypatch.setenv(JOBS_ENV_VAR, "0")
        assert default_jobs() == 1
        monkeypatch.setenv(JOBS_ENV_VAR, "many")
        assert default_jobs() == 1

    @pytest.mark.asyncio
    async def test_gather_map_keeps_order(self):
        assert await gather_map(abs, [-3, 1, -2, 5], jobs=2) == [3, 1, 2, 5]
        assert await gather_map(abs, [-7], jobs=4) == [7]

    def test_run_map(self):
        items = list(range(-5, 5))
        assert run_map(abs, items, jobs=1) == run_map(abs, items, jobs=3) == [abs(i) for i in items]

    @pytest.mark.parametrize("total,parts", [(10, 3), (3, 8), (0, 4), (7, 1)])
    def test_chunk_ranges(self, total, parts):
        ranges = chunk_ranges(total, parts)
        assert [i for r in ranges for i in r] == list(range(total))
        assert len(ranges) <= max(1, parts)
        sizes = [len(r) for r in ranges]
        assert max(sizes) - min(sizes) <= 1


class TestFiles:
    def test_load_json(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text("[1, 2.5, 0]")
        assert load_vector(path) == [1.0, 2.5, 0.0]
        path.write_text('{"probs": [0.25, 0.75]}')
        assert load_vector(path) == [0.25, 0.75]

    def test_load_csv(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("\n0.1,0.9\n0.5,0.5\n")
        assert load_vector(path) == [0.1, 0.9]

    @pytest.mark.parametrize("text", ["{not json", '["a", 1]', '{"x": 1}'])
    def test_load_rejects(self, tmp_path, text):
        path = tmp_path / "p.json"
        path.write_text(text)
        with pytest.raises(ValueError):
            load_vector(path)

    def test_format_number(self):
        assert format_number(math.inf) == "inf"
        assert format_number(-math.inf) == "-inf"
        assert format_number(0.1) == "0.10000000000000001"
        assert float(format_number(1 / 3)) == 1 / 3

    def test_to_jsonable(self):
        data = {1: np.array([1.5, np.inf]), "b": (np.int64(3), np.bool_(True), float("nan"))}
        assert to_jsonable(data) == {"1": [1.5, "inf"], "b": [3, True, "nan"]}

    def test_dump_json(self, tmp_path):
        path = tmp_path / "out.json"
        text = dump_json({"b": 1, "a": -math.inf}, path)
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(path.read_text()) == {"a": "-inf", "b": 1}

    def test_append_jsonl(self, tmp_path):
        path = tmp_path / "results.jsonl"
        append_jsonl({"n": 1}, path)
        append_jsonl({"n": np.int32(2)}, path)
        assert [json.loads(line)["n"] for line in path.read_text().splitlines()] == [1, 2]

    def test_write_csv(self, tmp_path):
        path = tmp_path / "table.csv"
        text = write_csv(["n", "value", "ok", "name"], [[3, 0.5, True, "x"], [np.int64(4), math.inf, False, "y"]], path)
        assert text == "n,value,ok,name\n3,0.5,true,x\n4,inf,false,y\n"
        assert path.read_text() == text

    def test_write_csv_quotes_cells(self):
        text = write_csv(["label", "note"], [["a,b", 'say "hi"'], ["plain", "x"]])
        assert text == 'label,note\n"a,b","say ""hi"""\nplain,x\n'
        assert list(csv.reader(io.StringIO(text))) == [["label", "note"], ["a,b", 'say "hi"'], ["plain", "x"]]


class TestHelpers:
    def test_log_grid(self):
        grid = log_grid(1e-3, 1.0, 4)
        np.testing.assert_allclose(grid, [1e-3, 1e-2, 1e-1, 1.0])
        with pytest.raises(ValueError):
            log_grid(0.0, 1.0, 5)
        with pytest.raises(ValueError):
            log_grid(1.0, 2.0, 1)

    def test_fit_loglog_slope(self):
        x = np.array([1e-4, 1e-3, 1e-2])
        slope, intercept, r_squared = fit_loglog_slope(x, 3.0 * x ** -2)
        assert slope == pytest.approx(-2.0)
        assert intercept == pytest.approx(math.log(3.0))
        assert r_squared == pytest.approx(1.0)
        with pytest.raises(ValueError):
            fit_loglog_slope([1.0], [1.0])

    def test_ci_radius(self):
        assert ci_radius(0.5, 100) == pytest.approx(1.96 * 0.05)
        assert ci_radius(0.0, 100) == 0.0
        assert ci_radius(0.5, 0) == math.inf


class TestLogging:
    def test_levels(self, tmp_path):
        log_file = tmp_path / "logs" / "run.log"
        setup_logging("debug", str(log_file))
        assert logging.getLogger("robustht").level == logging.DEBUG
        logging.getLogger("robustht.test").debug("written")
        assert log_file.exists()
        setup_logging("warning")
        assert logging.getLogger("robustht").level == logging.WARNING

    def test_unknown_level(self):
        with pytest.raises(ValueError):
            setup_logging("chatty")
