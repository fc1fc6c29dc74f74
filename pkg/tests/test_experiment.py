import csv
import io
import json

import pytest

from rcoreset import Graph, RegimeWarning
from rcoreset.cli import main
from rcoreset.experiment import (
    REPORT_COLUMNS,
    ConfigError,
    ExperimentConfig,
    Report,
    emit_report,
    format_report,
    load_config,
    parse_config_text,
    run_experiment,
)
from rcoreset.graph import dump_graph, load_graph


@pytest.fixture
def ten_edges(tmp_path):
    g = Graph(10, [(i, 5 + (i + j) % 5) for i in range(5) for j in range(2)], n_left=5)
    f = tmp_path / "g.txt"
    dump_graph(g, f)
    return f


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestRun:
    def test_single_machine_file(self, ten_edges):
        cfg = ExperimentConfig(generator="file", input=str(ten_edges), k=[1], seeds=[0])
        r = run_experiment(cfg)
        assert len(r.rows) == 1 and r.rows[0]["ratio"] == 1.0 and r.rows[0]["valid"]

    def test_sweep_over_k(self):
        cfg = ExperimentConfig(generator="hard-matching", n=4096, k=[2, 4, 8], alpha=[8], seeds=[0, 1])
        r = run_experiment(cfg)
        assert len(r.rows) == 6
        assert all(row["ratio"] <= 9 for row in r.rows)
        assert [(row["k"], row["seed"]) for row in r.rows] == [(2, 0), (2, 1), (4, 0), (4, 1), (8, 0), (8, 1)]

    def test_invalid_scheme_before_work(self):
        with pytest.raises(ConfigError, match="scheme"):
            run_experiment(ExperimentConfig(scheme="psychic"))

    @pytest.mark.parametrize(
        "overrides",
        [
            {"generator": "nope"},
            {"seeds": []},
            {"k": [0]},
            {"generator": "file"},
            {"generator": "random-bipartite"},
            {"scheme": "vc-grouped", "generator": "trap", "alpha": [None]},
            {"format": "xml"},
        ],
    )
    def test_invalid_configs(self, overrides):
        with pytest.raises(ConfigError):
            ExperimentConfig(**{"alpha": [8.0], **overrides}).validate()

    def test_oracle_on_big_general_graph(self, tmp_path):
        f = tmp_path / "g.txt"
        dump_graph(Graph(30, [(i, i + 1) for i in range(29)]), f)
        cfg = ExperimentConfig(scheme="vc-coreset", generator="file", input=str(f))
        with pytest.raises(ConfigError, match="oracle"):
            run_experiment(cfg)

    def test_replay_independent_of_workers(self):
        base = dict(scheme="vc-coreset", generator="hard-vc", n=1024, k=[4, 8], alpha=[8, 16], seeds=[0, 1, 2])
        a = run_experiment(ExperimentConfig(**base, workers=1))
        b = run_experiment(ExperimentConfig(**base, workers=4))
        assert format_report(a.without_timing()) == format_report(b.without_timing())


class TestReport:
    def test_empty_csv(self):
        assert format_report(Report()) == ",".join(REPORT_COLUMNS) + "\n"

    def test_one_row(self, ten_edges):
        r = run_experiment(ExperimentConfig(generator="file", input=str(ten_edges), k=[1]))
        text = format_report(r)
        assert len(text.splitlines()) == 2
        assert rows(text)[0]["ratio"] == "1.0"

    def test_json_keys(self, ten_edges):
        r = run_experiment(ExperimentConfig(generator="file", input=str(ten_edges), k=[1, 2]))
        objs = json.loads(format_report(r, "json"))
        assert len(objs) == 2 and all(list(o) == list(REPORT_COLUMNS) for o in objs)

    def test_no_oracle_blanks_ratio(self, ten_edges):
        r = run_experiment(ExperimentConfig(generator="file", input=str(ten_edges), oracle=False))
        assert rows(format_report(r))[0]["ratio"] == ""

    def test_unwritable(self, tmp_path):
        with pytest.raises(OSError):
            emit_report(Report(), "csv", tmp_path / "missing" / "r.csv")

    def test_sort_order(self):
        r = Report([
            {"scheme": "b", "k": 1, "alpha": None, "seed": 0},
            {"scheme": "a", "k": 2, "alpha": 4.0, "seed": 1},
            {"scheme": "a", "k": 2, "alpha": 4.0, "seed": 0},
            {"scheme": "a", "k": 1, "alpha": 8.0, "seed": 0},
        ]).sorted()
        assert [(x["scheme"], x["k"], x["seed"]) for x in r.rows] == [("a", 1, 0), ("a", 2, 0), ("a", 2, 1), ("b", 1, 0)]


class TestConfig:
    def test_parse(self):
        values = parse_config_text("scheme = vc-coreset  # trailing\nk = 2, 4\nalpha=8\nnum_seeds = 3\n")
        assert values == {"scheme": "vc-coreset", "k": [2, 4], "alpha": [8.0], "seeds": [0, 1, 2]}

    def test_flags_override_file(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("generator = hard-vc\nscheme = vc-coreset\nk = 2\nalpha = 8\nn = 256\n")
        cfg = load_config(f, {"k": [4, 8], "n": None})
        assert cfg.k == [4, 8] and cfg.n == 256 and cfg.generator == "hard-vc"

    @pytest.mark.parametrize("text", ["k 2\n", "colour = red\n"])
    def test_bad_text(self, text):
        with pytest.raises(ConfigError):
            load_config(overrides=parse_config_text(text))


class TestCli:
    def test_generate_partition_coreset_merge(self, tmp_path, capsys):
        g = tmp_path / "g.txt"
        args = ["--generator", "hard-matching", "--n", "256", "--alpha", "4", "--k", "4"]
        assert main(["generate", *args, "--out", str(g)]) == 0
        meta = json.loads((tmp_path / "g.txt.meta.json").read_text())
        assert meta["n"] == 256 and len(meta["A"]) == 64
        p = tmp_path / "p.txt"
        assert main(["partition", "--input", str(g), "--k", "4", "--seed", "3", "--out", str(p)]) == 0
        outs = []
        for i in range(4):
            c = tmp_path / f"c{i}.txt"
            args = ["--input", str(g), "--partition", str(p), "--shard", str(i), "--out", str(c)]
            assert main(["coreset", *args]) == 0
            outs.append(str(c))
        merged = tmp_path / "m.txt"
        assert main(["merge", *outs, "--out", str(merged)]) == 0
        m = load_graph(merged)
        assert m.num_vertices == 512 and m.num_edges > 0

    def test_vc_coreset_files(self, tmp_path, capsys):
        g = tmp_path / "g.txt"
        main(["generate", "--generator", "multiscale-vc", "--n", "512", "--alpha", "8", "--k", "4", "--out", str(g)])
        p = tmp_path / "p.txt"
        main(["partition", "--input", str(g), "--k", "4", "--out", str(p)])
        files = []
        for i in range(4):
            c = tmp_path / f"v{i}.txt"
            main(["coreset", "--scheme", "vc", "--input", str(g), "--partition", str(p),
                  "--shard", str(i), "--out", str(c)])
            files.append(str(c))
        capsys.readouterr()
        assert main(["merge", "--scheme", "vc", *files]) == 0
        cover = json.loads(capsys.readouterr().out)["cover"]
        graph = load_graph(g)
        assert all(u in cover or v in cover for u, v in graph.edge_list())

    def test_simulate(self, capsys):
        with pytest.warns(RegimeWarning):
            code = main([
                "simulate", "--generator", "hard-vc", "--n", "512", "--alpha", "8",
                "--k", "4", "--scheme", "vc-coreset", "--oracle",
            ])
        out = json.loads(capsys.readouterr().out)
        assert code == 0 and out["valid"] and out["optimum"] <= 512 // 8 + 1

    def test_experiment_replay(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("generator = hard-matching\nn = 512\nk = 2, 4\nalpha = 4\nnum_seeds = 2\n")
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["experiment", "--config", str(cfg), "--out", str(a)]) == 0
        assert main(["experiment", "--config", str(cfg), "--workers", "3", "--out", str(b)]) == 0
        strip = lambda p: [{**r, "wall_time": ""} for r in rows(p.read_text())]
        assert strip(a) == strip(b) and len(strip(a)) == 4

    def test_experiment_json_stdout(self, capsys):
        assert main(["experiment", "--generator", "trap", "--n", "64", "--k", "4", "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out)[0]["ratio"] >= 1

    def test_stats(self, tmp_path, capsys):
        g = tmp_path / "g.txt"
        main(["generate", "--generator", "random-bipartite", "--n", "2000", "--avg-degree", "1", "--out", str(g)])
        capsys.readouterr()
        assert main(["stats", "--input", str(g), "--k", "2"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["s_size"] > 0 and len(out["shard_sizes"]) == 2

    def test_errors_exit_two(self, tmp_path, capsys):
        assert main(["partition", "--input", str(tmp_path / "missing.txt")]) == 2
        assert main(["experiment", "--scheme", "vc-grouped", "--generator", "trap"]) == 2
        assert main(["simulate", "--generator", "hard-vc"]) == 2
        assert "error" in capsys.readouterr().err
