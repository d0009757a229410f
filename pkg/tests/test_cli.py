"""Command line interface: outputs, determinism, exit codes."""
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from phmap import cli
from phmap.errors import CertificateError
from phmap.geometry import (
    PointCloud,
    SampledMap,
    read_sampled_map_csv,
    write_sampled_map_csv,
)


def run(argv):
    return cli.main([str(a) for a in argv])


def write_circle_fixture(path, n=12, power=2):
    ang = np.arange(n) * 2 * np.pi / n
    dom = np.column_stack([np.cos(ang), np.sin(ang)])
    img = np.column_stack([np.cos(power * ang), np.sin(power * ang)])
    write_sampled_map_csv(path, SampledMap(PointCloud(dom), PointCloud(img)))


def test_synth_circle(tmp_path):
    out = tmp_path / "maps" / "circle.csv"
    assert run(["synth", "circle", "--n", 10, "--power", 2, "--out", out]) == 0
    back = read_sampled_map_csv(out)
    assert back.n == 10
    assert np.allclose(np.linalg.norm(back.domain.points, axis=1), 1.0)


def test_synth_torus_default_name(tmp_path):
    assert run(["synth", "torus", "--grid", 4, "--matrix", 2, 1, 1, 1,
                "--out-dir", tmp_path]) == 0
    assert (tmp_path / "torus_map.csv").exists()


def test_ph_outputs_and_content(tmp_path, capsys):
    src = tmp_path / "circle.csv"
    write_circle_fixture(src)
    out = tmp_path / "out"
    assert run(["ph", src, "--out-dir", out, "--emit", "json,csv,svg"]) == 0
    stdout = capsys.readouterr().out
    assert "degree=1 field=1009" in stdout
    diagram = json.loads((out / "circle_diagram.json").read_text())
    assert diagram["degree"] == 1
    assert diagram["field"] == 1009
    assert len(diagram["points"]) == 1
    pt = diagram["points"][0]
    assert pt["birth"] == pytest.approx(math.sin(math.pi / 6))
    gens = json.loads((out / "circle_generators.json").read_text())
    gen = gens["points"][0]["generators"][0]
    assert gen["domain_winding"] in (1, -1)
    assert gen["image_winding"] == 2 * gen["domain_winding"]
    assert (out / "circle_diagram.csv").exists()
    assert (out / "circle_diagram.svg").exists()
    assert not (out / "circle_diagram.png").exists()


def test_ph_reruns_are_byte_identical(tmp_path):
    src = tmp_path / "circle.csv"
    write_circle_fixture(src)
    for d in ("a", "b"):
        assert run(["ph", src, "--out-dir", tmp_path / d,
                    "--emit", "json,csv,svg"]) == 0
    for name in ("circle_diagram.json", "circle_diagram.csv",
                 "circle_diagram.svg", "circle_generators.json"):
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes()


def test_ph_seed_shuffles_bases_without_changing_diagram(tmp_path):
    src = tmp_path / "circle.csv"
    write_circle_fixture(src)
    assert run(["ph", src, "--out-dir", tmp_path / "plain",
                "--emit", "json"]) == 0
    assert run(["ph", src, "--out-dir", tmp_path / "seeded",
                "--emit", "json", "--seed", 99]) == 0
    plain = (tmp_path / "plain" / "circle_diagram.json").read_bytes()
    seeded = (tmp_path / "seeded" / "circle_diagram.json").read_bytes()
    assert plain == seeded


def test_ph_png_and_prefix(tmp_path):
    src = tmp_path / "circle.csv"
    write_circle_fixture(src)
    out = tmp_path / "out"
    assert run(["ph", src, "--out-dir", out, "--emit", "png",
                "--prefix", "run1"]) == 0
    assert (out / "run1_diagram.png").exists()
    assert (out / "run1_generators.png").exists()


def test_ph_torus_reports_induced_matrix(tmp_path):
    assert run(["synth", "torus", "--grid", 4, "--out-dir", tmp_path]) == 0
    out = tmp_path / "out"
    assert run(["ph", tmp_path / "torus_map.csv", "--metric", "torus",
                "--out-dir", out, "--emit", "json"]) == 0
    gens = json.loads((out / "torus_map_generators.json").read_text())
    assert gens["induced_matrix"] == [["2", "1"], ["1", "1"]]
    entry = gens["points"][0]["generators"][0]
    assert "domain_winding_residues" in entry


def test_out_dir_env_default(tmp_path, monkeypatch):
    src = tmp_path / "circle.csv"
    write_circle_fixture(src)
    monkeypatch.setenv("PHMAP_OUT_DIR", str(tmp_path / "envout"))
    assert run(["ph", src, "--emit", "csv"]) == 0
    assert (tmp_path / "envout" / "circle_diagram.csv").exists()


def test_stability_report(tmp_path, capsys):
    src = tmp_path / "circle.csv"
    write_circle_fixture(src)
    out = tmp_path / "out"
    assert run(["stability", src, src, "--out-dir", out, "--emit", "json"]) == 0
    assert "satisfied=true" in capsys.readouterr().out
    report = json.loads((out / "circle_vs_circle_stability.json").read_text())
    assert report["hausdorff"] == 0.0
    assert report["bottleneck"] == 0.0
    assert report["satisfied"] is True


def test_timeseries_subcommand(tmp_path):
    n = 12
    ang = np.arange(n) * 2 * np.pi / n
    def circ(a):
        return np.column_stack([np.cos(a), np.sin(a)])
    p1 = tmp_path / "step1.csv"
    p2 = tmp_path / "step2.csv"
    write_sampled_map_csv(p1, SampledMap(PointCloud(circ(ang)), PointCloud(circ(2 * ang))))
    write_sampled_map_csv(p2, SampledMap(PointCloud(circ(2 * ang)), PointCloud(circ(4 * ang))))
    out = tmp_path / "out"
    assert run(["timeseries", p1, p2, "--out-dir", out, "--emit", "json"]) == 0
    diagram = json.loads((out / "step1_chain_diagram.json").read_text())
    assert diagram["degree"] == 1
    gens = json.loads((out / "step1_chain_generators.json").read_text())
    if gens["points"]:
        cycles = gens["points"][0]["generators"][0]["cycles"]
        assert set(cycles) == {"0", "1", "2", "3", "4"}


def test_timeseries_rejects_non_composable(tmp_path, capsys):
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_circle_fixture(p1, power=2)
    write_circle_fixture(p2, power=3)
    assert run(["timeseries", p1, p2, "--out-dir", tmp_path]) == 2
    assert "error:" in capsys.readouterr().err


def test_diagram_render(tmp_path):
    src = tmp_path / "circle.csv"
    write_circle_fixture(src)
    out = tmp_path / "out"
    assert run(["ph", src, "--out-dir", out, "--emit", "json"]) == 0
    assert run(["diagram-render", out / "circle_diagram.json",
                "--out-dir", out, "--prefix", "redrawn"]) == 0
    assert (out / "redrawn.svg").exists()
    assert (out / "redrawn.png").exists()


def test_exit_code_on_missing_file(tmp_path, capsys):
    assert run(["ph", tmp_path / "nope.csv", "--out-dir", tmp_path]) == 2
    assert "error:" in capsys.readouterr().err


def test_exit_code_on_malformed_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n", encoding="utf-8")
    assert run(["ph", bad, "--out-dir", tmp_path]) == 2
    capsys.readouterr()


def test_exit_code_on_bad_emit(tmp_path, capsys):
    src = tmp_path / "circle.csv"
    write_circle_fixture(src)
    assert run(["ph", src, "--out-dir", tmp_path, "--emit", "pdf"]) == 2
    capsys.readouterr()


def test_exit_code_on_internal_violation(tmp_path, monkeypatch, capsys):
    src = tmp_path / "circle.csv"
    write_circle_fixture(src)

    def explode(*args, **kwargs):
        raise CertificateError("synthetic failure")

    monkeypatch.setattr(cli, "build_module", explode)
    assert run(["ph", src, "--out-dir", tmp_path]) == 3
    assert "invariant" in capsys.readouterr().err


def test_console_script_entry_point(tmp_path):
    out = tmp_path / "cli_map.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "phmap.cli", "synth", "circle",
         "--n", "8", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert out.exists()
