import json
import math
import subprocess
import sys

import pytest

from geospanner.cli import main
from geospanner.instances import load_instance, load_spanner


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture()
def instance_file(tmp_path):
    path = tmp_path / "inst.json"
    code = main(["gen", "--n", "12", "--holes", "0", "--polygon-vertices", "10",
                 "--seed", "7", "--out", str(path)])
    assert code == 0
    return path


@pytest.fixture()
def domain_instance_file(tmp_path):
    path = tmp_path / "dom.json"
    code = main(["gen", "--n", "10", "--holes", "2", "--polygon-vertices", "10",
                 "--seed", "9", "--out", str(path)])
    assert code == 0
    return path


class TestGen:
    def test_deterministic_bytes(self, tmp_path, capsys):
        p1 = tmp_path / "a.json"
        p2 = tmp_path / "b.json"
        for p in (p1, p2):
            code, _, _ = run(["gen", "--n", "8", "--holes", "1", "--seed", "3",
                              "--out", str(p)], capsys)
            assert code == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_n_zero(self, tmp_path, capsys):
        p = tmp_path / "z.json"
        code, _, _ = run(["gen", "--n", "0", "--seed", "1", "--out", str(p)], capsys)
        assert code == 0
        assert load_instance(p).n == 0

    def test_seed_env_fallback(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("GEOSPANNER_SEED", "55")
        p = tmp_path / "e.json"
        code, _, _ = run(["gen", "--n", "4", "--out", str(p)], capsys)
        assert code == 0
        assert load_instance(p).seed == 55

    def test_missing_seed_fails(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("GEOSPANNER_SEED", raising=False)
        code, _, err = run(["gen", "--n", "4", "--out", str(tmp_path / "x.json")],
                           capsys)
        assert code == 2
        assert "seed" in err


class TestBuild:
    def test_build_and_verify_roundtrip(self, instance_file, tmp_path, capsys):
        sp = tmp_path / "sp.json"
        code, out, _ = run(["build", "--input", str(instance_file), "--k", "1",
                            "--eps", "1.0", "--out", str(sp)], capsys)
        assert code == 0
        assert "edges=" in out
        code, out, _ = run(["verify", "--instance", str(instance_file),
                            "--spanner", str(sp), "--exhaustive"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["ok"] is True
        assert report["max_stretch"] <= math.sqrt(10) + 1.0 + 1e-9

    def test_eps_zero_rejected(self, instance_file, tmp_path, capsys):
        code, _, err = run(["build", "--input", str(instance_file), "--eps", "0",
                            "--out", str(tmp_path / "sp.json")], capsys)
        assert code == 2
        assert "eps" in err

    def test_mode_domain_on_simple_matches(self, instance_file, tmp_path, capsys):
        sp1 = tmp_path / "s1.json"
        sp2 = tmp_path / "s2.json"
        run(["build", "--input", str(instance_file), "--mode", "simple",
             "--out", str(sp1)], capsys)
        run(["build", "--input", str(instance_file), "--mode", "domain",
             "--out", str(sp2)], capsys)
        e1 = load_spanner(sp1)["edges"]
        e2 = load_spanner(sp2)["edges"]
        assert e1 == e2

    def test_build_deterministic(self, instance_file, tmp_path, capsys):
        sp1 = tmp_path / "s1.json"
        sp2 = tmp_path / "s2.json"
        for sp in (sp1, sp2):
            run(["build", "--input", str(instance_file), "--out", str(sp)], capsys)
        assert sp1.read_bytes() == sp2.read_bytes()

    def test_mode_simple_with_holes_rejected(self, domain_instance_file, tmp_path,
                                             capsys):
        code, _, _ = run(["build", "--input", str(domain_instance_file),
                          "--mode", "simple", "--out", str(tmp_path / "x.json")],
                         capsys)
        assert code == 2


class TestVerify:
    def test_hash_mismatch(self, instance_file, tmp_path, capsys):
        sp = tmp_path / "sp.json"
        run(["build", "--input", str(instance_file), "--out", str(sp)], capsys)
        other = tmp_path / "other.json"
        run(["gen", "--n", "12", "--seed", "99", "--out", str(other)], capsys)
        code, _, err = run(["verify", "--instance", str(other),
                            "--spanner", str(sp)], capsys)
        assert code == 2
        assert "different instance" in err

    def test_mutation_to_failure(self, instance_file, tmp_path, capsys):
        sp = tmp_path / "sp.json"
        run(["build", "--input", str(instance_file), "--out", str(sp)], capsys)
        payload = load_spanner(sp)
        # delete every edge at vertex 0: pairs with 0 become unreachable
        payload["edges"] = [e for e in payload["edges"] if 0 not in e[:2]]
        import geospanner.instances as gi
        gi.save_spanner(payload, sp)
        code, out, _ = run(["verify", "--instance", str(instance_file),
                            "--spanner", str(sp)], capsys)
        assert code == 1
        report = json.loads(out)
        assert report["ok"] is False
        assert not report["all_reachable"]

    def test_domain_target_auto(self, domain_instance_file, tmp_path, capsys):
        sp = tmp_path / "sp.json"
        run(["build", "--input", str(domain_instance_file), "--k", "1",
             "--eps", "0.5", "--out", str(sp)], capsys)
        code, out, _ = run(["verify", "--instance", str(domain_instance_file),
                            "--spanner", str(sp)], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["target"] == pytest.approx(6.5)


class TestStatsAndRender:
    def test_stats_json(self, capsys):
        code, out, _ = run(["stats", "--mode", "simple", "--n-list", "8,16",
                            "--k", "1", "--eps", "1.0", "--seed", "2",
                            "--polygon-vertices", "8"], capsys)
        assert code == 0
        rows = json.loads(out)
        assert [r["n"] for r in rows] == [8, 16]

    def test_render_instance_only(self, instance_file, tmp_path, capsys):
        svg = tmp_path / "img.svg"
        code, _, _ = run(["render", "--instance", str(instance_file),
                          "--out", str(svg)], capsys)
        assert code == 0
        text = svg.read_text()
        assert text.startswith("<svg")
        assert "polyline" not in text  # no edges drawn

    def test_render_with_spanner_and_faults(self, instance_file, tmp_path, capsys):
        sp = tmp_path / "sp.json"
        run(["build", "--input", str(instance_file), "--out", str(sp)], capsys)
        svg = tmp_path / "img.svg"
        code, _, _ = run(["render", "--instance", str(instance_file),
                          "--spanner", str(sp), "--faults", "0,3",
                          "--out", str(svg)], capsys)
        assert code == 0
        text = svg.read_text()
        assert "polyline" in text
        assert text.count('stroke="red"') == 4  # two crossed-out vertices


class TestEntryPoint:
    def test_subprocess_help(self):
        proc = subprocess.run(
            [sys.executable, "-m", "geospanner.cli", "--help"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "gen" in proc.stdout and "verify" in proc.stdout

    def test_subprocess_usage_error(self):
        proc = subprocess.run(
            [sys.executable, "-m", "geospanner.cli", "bogus"],
            capture_output=True, text=True)
        assert proc.returncode == 2
