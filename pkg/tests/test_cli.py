import csv
import json
import math

import pytest

import fusionkit as fk
from fusionkit.cli import main


@pytest.fixture()
def ring_file(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)
    return write


@pytest.fixture()
def su2_file(ring_file):
    return ring_file("su2.json", {"type": "builtin", "name": "su2", "params": {}})


@pytest.fixture()
def z_file(ring_file):
    return ring_file("z.json", {"type": "builtin", "name": "zd", "params": {"d": 1}})


@pytest.fixture()
def dsu2_file(ring_file):
    return ring_file("d3.json",
                     {"type": "builtin", "name": "deformed_su2", "params": {"n": 3}})


@pytest.fixture()
def free_file(ring_file):
    return ring_file("f2.json", {"type": "builtin", "name": "free", "params": {"rank": 2}})


class TestAxiomsCommand:
    def test_su2_passes(self, su2_file, capsys):
        assert main(["axioms", su2_file, "--radius", "8"]) == 0
        out = capsys.readouterr().out
        assert "frobenius_reciprocity: PASS" in out

    def test_corrupted_table_exits_one(self, ring_file, capsys):
        labels = ["e", "a", "b"]
        mult = {"e": {"e": "e", "a": "a", "b": "b"},
                "a": {"e": "a", "a": "b", "b": "e"},
                "b": {"e": "b", "a": "e", "b": "a"}}
        doc = {
            "type": "table", "labels": labels, "unit": "e",
            "conjugate": {"e": "e", "a": "a", "b": "b"},
            "dim": {l: 1 for l in labels},
            "products": {f"{x}|{y}": {mult[x][y]: 1} for x in labels for y in labels},
        }
        path = ring_file("bad.json", doc)
        assert main(["axioms", path, "--radius", "2"]) == 1
        out = capsys.readouterr().out
        assert "frobenius_reciprocity: FAIL" in out

    def test_missing_entry_exits_two(self, ring_file, capsys):
        doc = {
            "type": "table", "labels": ["e", "g"], "unit": "e",
            "conjugate": {"e": "e", "g": "g"},
            "dim": {"e": 1, "g": 1},
            "products": {"e|e": {"e": 1}, "e|g": {"g": 1}, "g|e": {"g": 1}},
        }
        path = ring_file("partial.json", doc)
        assert main(["axioms", path, "--radius", "1"]) == 2
        assert "IncompleteTable" in capsys.readouterr().err


class TestCheckCommand:
    def test_fc3_su2_interval(self, su2_file, capsys):
        code = main(["check", su2_file, "--condition", "fc3",
                     "--set", "interval:0..100", "--support", "1",
                     "--eps", "0.06"])
        assert code == 0
        out = capsys.readouterr().out
        assert "lhs 20605" in out
        assert "satisfied True" in out

    def test_fc2_not_satisfied(self, su2_file, capsys):
        code = main(["check", su2_file, "--condition", "fc2",
                     "--set", "interval:0..3", "--support", "1",
                     "--eps", "0.5"])
        assert code == 1
        out = capsys.readouterr().out
        assert "lhs 20" in out

    def test_fc1_measure_missing_unit(self, su2_file, capsys):
        code = main(["check", su2_file, "--condition", "fc1",
                     "--set", "interval:0..5", "--measure", "delta:1",
                     "--eps", "0.5"])
        assert code == 2
        assert "MeasureMissingUnit" in capsys.readouterr().err

    def test_fc1_satisfied(self, su2_file, capsys):
        code = main(["check", su2_file, "--condition", "fc1",
                     "--set", "interval:0..100",
                     "--measure", "decomp:0=1,1=1", "--eps", "0.05"])
        assert code == 0
        assert "identity supp = F u boundary: True" in capsys.readouterr().out

    def test_set_spec_forms(self, z_file):
        assert main(["check", z_file, "--condition", "fc3",
                     "--set", "set:-1,0,1", "--support", "1,-1",
                     "--eps", "5.0"]) == 0
        assert main(["check", z_file, "--condition", "fc3",
                     "--set", "ball:5", "--support", "1,-1",
                     "--eps", "0.5"]) == 0

    def test_missing_support_usage_error(self, su2_file, capsys):
        code = main(["check", su2_file, "--condition", "fc3",
                     "--set", "interval:0..3", "--eps", "0.5"])
        assert code == 2


class TestSpectrumCommand:
    def test_su2_closed_forms(self, su2_file, capsys, tmp_path):
        csv_path = str(tmp_path / "spec.csv")
        code = main(["spectrum", su2_file, "--measure", "delta:1",
                     "--radii", "10,50,100", "--csv", csv_path])
        assert code == 0  # gap at radius 100 is below the default threshold
        out = capsys.readouterr().out
        for radius in (10, 50, 100):
            expected = math.cos(math.pi / (radius + 2))
            assert format(expected, ".12g") in out
        assert "EVIDENCE_AMENABLE" in out
        with open(csv_path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["radius", "window_size", "lambda_max"]
        assert len(rows) == 4
        assert float(rows[3][2]) == pytest.approx(math.cos(math.pi / 102), abs=1e-12)

    def test_deformed_nonamenable_exit(self, dsu2_file, capsys):
        code = main(["spectrum", dsu2_file, "--measure", "delta:1",
                     "--radii", "100,300,505,506,507,508"])
        assert code == 1
        out = capsys.readouterr().out
        assert "EVIDENCE_NONAMENABLE" in out

    def test_free_group_inconclusive(self, free_file, capsys):
        code = main(["spectrum", free_file, "--measure", "uniform-gens",
                     "--radii", "2,3,4"])
        assert code == 3
        out = capsys.readouterr().out
        assert "INCONCLUSIVE" in out
        final = [l for l in out.splitlines() if l.startswith("radius 4")][0]
        assert float(final.split("lambda_max")[1].split()[0]) < 0.8661

    def test_nonsymmetric_measure_rejected(self, z_file, capsys):
        code = main(["spectrum", z_file, "--measure", "delta:1",
                     "--radii", "2,3"])
        assert code == 2
        assert "NonSymmetricMeasure" in capsys.readouterr().err

    def test_decomp_measure(self, su2_file, capsys):
        code = main(["spectrum", su2_file, "--measure", "decomp:1=1",
                     "--radii", "50,100,200"])
        assert code == 0


class TestFoelnerCommand:
    def test_su2_finds_interval(self, su2_file, capsys, tmp_path):
        csv_path = str(tmp_path / "curve.csv")
        code = main(["foelner", su2_file, "--support", "1", "--eps", "0.1",
                     "--budget", "200", "--csv", csv_path])
        assert code == 0
        out = capsys.readouterr().out
        assert "satisfied True" in out
        with open(csv_path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["step", "set_size", "weight_F", "weight_boundary", "ratio"]
        assert int(rows[-1][1]) == 60
        assert float(rows[-1][4]) < 0.1

    def test_deformed_budget_exhausted(self, dsu2_file, capsys):
        code = main(["foelner", dsu2_file, "--support", "1", "--eps", "0.5",
                     "--budget", "500"])
        assert code == 3
        out = capsys.readouterr().out
        ratio = float(out.split("ratio ")[1].split()[0])
        assert ratio > 1.0

    def test_eps_zero_usage_error(self, su2_file, capsys):
        assert main(["foelner", su2_file, "--support", "1", "--eps", "0",
                     "--budget", "50"]) == 2

    def test_csv_deterministic(self, z_file, tmp_path):
        paths = []
        for i in range(2):
            p = tmp_path / f"curve{i}.csv"
            assert main(["foelner", z_file, "--eps", "0.15",
                         "--budget", "100", "--csv", str(p)]) == 0
            paths.append(p.read_bytes())
        assert paths[0] == paths[1]


class TestDirichletCommand:
    def test_su2_values(self, su2_file, capsys):
        code = main(["dirichlet", su2_file, "--measure", "delta:1",
                     "--fn", "interval:0..3", "--r", "1"])
        assert code == 0
        out = capsys.readouterr().out
        assert "dirichlet_norm 10" in out
        assert "lp_sigma_norm 30" in out
        assert "ratio 0.333333333333" in out

    def test_r2_prints_energy_residual(self, su2_file, capsys):
        code = main(["dirichlet", su2_file, "--measure", "delta:1",
                     "--fn", "interval:0..3", "--r", "2"])
        assert code == 0
        out = capsys.readouterr().out
        line = [l for l in out.splitlines() if "energy_identity_residual" in l][0]
        assert float(line.split()[-1]) < 1e-10

    def test_constant_on_finite_ring(self, ring_file, capsys):
        path = ring_file("z6.json",
                         {"type": "builtin", "name": "cyclic", "params": {"n": 6}})
        code = main(["dirichlet", path, "--measure", "uniform-gens",
                     "--fn", "interval:0..5", "--r", "1"])
        assert code == 0
        assert "ratio 0\n" in capsys.readouterr().out


class TestUsageErrors:
    def test_bad_ring_file(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["axioms", str(path), "--radius", "2"]) == 2

    def test_bad_measure_spec(self, su2_file, capsys):
        assert main(["spectrum", su2_file, "--measure", "nonsense",
                     "--radii", "2"]) == 2

    def test_bad_set_spec(self, su2_file, capsys):
        assert main(["check", su2_file, "--condition", "fc3",
                     "--set", "frob:1", "--support", "1", "--eps", "0.5"]) == 2

    def test_uniform_gens_without_generators(self, ring_file, capsys):
        path = ring_file("trivial.json",
                         {"type": "builtin", "name": "trivial", "params": {}})
        assert main(["spectrum", path, "--measure", "uniform-gens",
                     "--radii", "1"]) == 2
