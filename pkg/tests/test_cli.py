import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from oscnet.cli import main
from oscnet.network import erdos_renyi


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestNetworkProfile:
    def test_rrg_zero_coupling(self, tmp_path):
        code, text = run(tmp_path, "network-profile", "--model", "rrg", "--nodes", "200",
                         "--degree", "6", "--coupling", "0", "--realizations", "2", "--seed", "1")
        assert code == 0
        assert text.splitlines()[0] == "degree,mean_entropy_nats,std,count"
        table = rows(text)
        assert [r["degree"] for r in table] == ["6"]
        assert float(table[0]["mean_entropy_nats"]) == 0.0
        assert table[0]["count"] == "400"

    def test_rows_sorted_and_deterministic(self, tmp_path):
        args = ["network-profile", "--model", "sf-ba", "--nodes", "120", "--m", "2",
                "--coupling", "0.3", "--realizations", "3", "--seed", "42"]
        _, a = run(tmp_path, *args, name="a.csv")
        _, b = run(tmp_path, *args, name="b.csv")
        assert a == b
        degrees = [int(r["degree"]) for r in rows(a)]
        assert degrees == sorted(degrees)
        assert "\r" not in a

    def test_coupling_dominance(self, tmp_path):
        base = ["network-profile", "--model", "er", "--nodes", "300", "--mean-degree", "8",
                "--realizations", "2", "--seed", "3"]
        _, lo = run(tmp_path, *base, "--coupling", "0.2", name="lo.csv")
        _, hi = run(tmp_path, *base, "--coupling", "0.4", name="hi.csv")
        for a, b in zip(rows(lo), rows(hi)):
            assert a["degree"] == b["degree"]
            if int(a["degree"]) > 0:
                assert float(b["mean_entropy_nats"]) > float(a["mean_entropy_nats"])

    def test_json(self, tmp_path):
        code, text = run(tmp_path, "network-profile", "--model", "er", "--nodes", "60",
                         "--mean-degree", "4", "--coupling", "0.2", "--realizations", "2",
                         "--seed", "9", "--format", "json", name="out.json")
        assert code == 0
        doc = json.loads(text)
        assert doc["meta"]["seed"] == 9 and doc["meta"]["model"] == "er"
        assert doc["meta"]["version"]
        assert set(doc["records"][0]) == {"degree", "mean_entropy_nats", "std", "count"}

    def test_graph_file(self, tmp_path):
        g = erdos_renyi(40, 3, seed=2)
        g.write(tmp_path / "g.txt")
        code, text = run(tmp_path, "network-profile", "--graph", str(tmp_path / "g.txt"),
                         "--coupling", "0.3")
        assert code == 0
        assert sum(int(r["count"]) for r in rows(text)) == 40

    def test_missing_parameter(self, tmp_path, capsys):
        code, _ = run(tmp_path, "network-profile", "--model", "er", "--coupling", "0.2")
        assert code == 1
        err = capsys.readouterr().err.strip().splitlines()
        assert len(err) == 1 and "--mean-degree" in err[0]


class TestComScaling:
    def test_pairwise_constant(self, tmp_path):
        code, text = run(tmp_path, "com-scaling", "--pattern", "pairwise", "--n-list", "1,2,4,8",
                         "--g0", "0.5", "--temperature", "0")
        assert code == 0
        values = [float(r["log_negativity"]) for r in rows(text)]
        assert values == pytest.approx([0.25 * np.log(3)] * 4, abs=1e-11)
        assert text.splitlines()[0] == "N,pattern,G0,T,log_negativity"

    def test_one_to_all_increasing_with_tc(self, tmp_path):
        code, text = run(tmp_path, "com-scaling", "--pattern", "one-to-all", "--n-list", "1,2,4,8",
                         "--g0", "0.05", "--critical", "--tol", "1e-7")
        assert code == 0
        table = rows(text)
        assert np.all(np.diff([float(r["log_negativity"]) for r in table]) > 0)
        assert np.all(np.diff([float(r["T_c"]) for r in table]) > 0)

    def test_stability_error(self, tmp_path, capsys):
        code, _ = run(tmp_path, "com-scaling", "--pattern", "one-to-all", "--n-list", "1,2,4,8",
                      "--g0", "0.2")
        assert code == 1
        assert "N=8" in capsys.readouterr().err


class TestChain:
    def test_zero_coupling(self, tmp_path):
        _, text = run(tmp_path, "chain", "--topology", "ring", "--length", "20", "--coupling", "0",
                      "--max-separation", "4")
        assert all(float(r["log_negativity"]) == 0.0 for r in rows(text))

    def test_ring_regression(self, tmp_path):
        _, text = run(tmp_path, "chain", "--topology", "ring", "--length", "60", "--coupling", "0.5",
                      "--temperature", "0", "--max-separation", "5")
        values = [float(r["log_negativity"]) for r in rows(text)]
        assert np.all(np.diff(values) <= 0)
        assert values[0] == pytest.approx(0.170400769892, abs=1e-11)
        assert values[1:] == [0.0] * 4

    def test_high_temperature(self, tmp_path):
        _, text = run(tmp_path, "chain", "--topology", "path", "--length", "30", "--coupling", "0.5",
                      "--temperature", "5", "--max-separation", "3")
        assert all(float(r["log_negativity"]) == 0.0 for r in rows(text))

    def test_onset(self, tmp_path, capsys):
        code, text = run(tmp_path, "chain", "--length", "30", "--coupling", "0.5",
                         "--max-separation", "2", "--onset")
        assert code == 0
        onset = float(rows(text)[0]["onset_temperature"])
        assert onset > 0
        assert "separable above" in capsys.readouterr().err
        _, above = run(tmp_path, "chain", "--length", "30", "--coupling", "0.5",
                       "--temperature", str(onset * 1.001), "--max-separation", "2", name="b.csv")
        assert all(float(r["log_negativity"]) == 0.0 for r in rows(above))

    def test_bad_separation(self, tmp_path):
        code, _ = run(tmp_path, "chain", "--length", "10", "--coupling", "0.5", "--max-separation", "6")
        assert code == 1


def test_numbers_roundtrip(tmp_path):
    from oscnet.cli import fmt

    for x in np.random.default_rng(0).normal(size=200) * 10.0 ** np.arange(-100, 100):
        assert abs(float(fmt(x)) - x) <= 1e-12 * abs(x)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "oscnet", "com-scaling", "--pattern", "pairwise", "--g0", "0.2",
         "--n-list", "1,2"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.startswith("N,pattern,G0,T,log_negativity\n")
