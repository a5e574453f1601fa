import json

import pytest

import robustht
from robustht.cli import main
from robustht.version import OUTPUT_SCHEMA_VERSION, ROBUSTHT_VERSION


@pytest.fixture
def pair_files(tmp_path):
    p_path, q_path = tmp_path / "p.json", tmp_path / "q.json"
    p_path.write_text("[0.6, 0.4]")
    q_path.write_text("[0.4, 0.6]")
    return ["--p", str(p_path), "--q", str(q_path)]


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestCommands:
    def test_clips(self, capsys, pair_files):
        code, out, _ = run(capsys, ["clips", *pair_files, "--eps", "0.05", "--seed", "1"])
        assert code == 0
        document = json.loads(out)
        assert document["schema"] == OUTPUT_SCHEMA_VERSION
        assert document["config"]["seed"] == 1 and document["config"]["model"] == "tv"
        assert document["clips"]["lower"] < 1.0 < document["clips"]["upper"]

    def test_overlap_is_a_domain_error(self, capsys, pair_files):
        code, out, err = run(capsys, ["clips", *pair_files, "--eps", "0.15", "--seed", "1"])
        assert code == 1 and out == ""
        assert "SetsOverlap" in err and "tv(p,q)" in err

    def test_lfd_csv(self, capsys, pair_files):
        code, out, _ = run(capsys, ["lfd", *pair_files, "--eps", "0.05", "--model", "hub", "--seed", "1",
                                    "--format", "csv"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("# config=")
        assert json.loads(lines[0][len("# config="):])["model"] == "hub"
        assert lines[1] == "index,p,q,p_star,q_star"
        assert len(lines) == 4

    def test_complexity_identical_pair(self, capsys, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("0.5,0.5\n")
        code, _, err = run(capsys, ["complexity", "--p", str(path), "--q", str(path), "--seed", "1"])
        assert code == 1 and "DistributionError" in err

    def test_complexity(self, capsys, pair_files):
        code, out, _ = run(capsys, ["complexity", *pair_files, "--eps", "0.02", "--seed", "1"])
        assert code == 0
        assert json.loads(out)["complexity"]["predicted_n"] > 0

    def test_nosim(self, capsys):
        code, out, _ = run(capsys, ["nosim", "--seed", "1"])
        assert code == 0 and json.loads(out)["all_ok"] is True


class TestReproducibility:
    argv = ["simulate", "--adversary", "tv", "--eps", "0.02", "--n", "20", "--trials", "200", "--seed", "5"]

    def test_repeat_runs_are_identical(self, capsys, pair_files):
        _, first, _ = run(capsys, [*self.argv, *pair_files])
        _, second, _ = run(capsys, [*self.argv, *pair_files])
        assert first == second
        assert json.loads(first)["report"]["trials"] == 200

    def test_jobs_do_not_change_output(self, capsys, pair_files):
        _, single, _ = run(capsys, [*self.argv, *pair_files, "--jobs", "1"])
        _, double, _ = run(capsys, [*self.argv, *pair_files, "--jobs", "2"])
        assert single == double
        assert "jobs" not in json.loads(single)["config"]

    def test_missing_seed_is_drawn_and_recorded(self, capsys, pair_files):
        code, out, _ = run(capsys, ["clips", *pair_files, "--eps", "0.05"])
        assert code == 0
        assert isinstance(json.loads(out)["config"]["seed"], int)


class TestConfigAndErrors:
    def test_config_supplies_eps(self, capsys, pair_files, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"eps": 0.05, "model": "sub"}))
        code, out, _ = run(capsys, ["clips", *pair_files, "--config", str(config), "--seed", "1"])
        assert code == 0
        document = json.loads(out)
        assert document["config"]["eps"] == 0.05 and document["config"]["model"] == "sub"

    def test_unknown_config_key(self, capsys, pair_files, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"epsilon": 0.05}))
        code, _, err = run(capsys, ["clips", *pair_files, "--config", str(config)])
        assert code == 2 and "epsilon" in err

    def test_missing_eps(self, capsys, pair_files):
        code, _, err = run(capsys, ["clips", *pair_files, "--seed", "1"])
        assert code == 2 and "--eps" in err

    def test_missing_file(self, capsys, tmp_path):
        missing = str(tmp_path / "nope.json")
        code, _, err = run(capsys, ["clips", "--p", missing, "--q", missing, "--eps", "0.05", "--seed", "1"])
        assert code == 2 and "ConfigError" in err

    def test_bad_arguments(self, capsys):
        assert main(["clips", "--eps", "not-a-number"]) == 2
        assert main(["no-such-command"]) == 2
        capsys.readouterr()

    def test_clips_have_no_table(self, capsys, pair_files):
        code, _, err = run(capsys, ["clips", *pair_files, "--eps", "0.05", "--seed", "1", "--format", "csv"])
        assert code == 2 and "no table" in err

    def test_output_file(self, capsys, pair_files, tmp_path):
        target = tmp_path / "out.json"
        code, out, _ = run(capsys, ["lfd", *pair_files, "--eps", "0.05", "--seed", "1", "--output", str(target)])
        assert code == 0 and out == ""
        assert "lfd" in json.loads(target.read_text())

    def test_version(self, capsys):
        assert main(["--version"]) == 0
        out = capsys.readouterr().out
        assert "robustht" in out and ROBUSTHT_VERSION in out
        assert robustht.__version__ == ROBUSTHT_VERSION
