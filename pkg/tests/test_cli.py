import json
import subprocess
import sys
from pathlib import Path

from mindmapper.cli import main

PKG_ROOT = Path(__file__).resolve().parent.parent


def run_cli(args):
    return subprocess.run([sys.executable, "-m", "mindmapper.cli", *args],
                          capture_output=True, text=True, cwd=PKG_ROOT)


def gen_args(fixtures_dir, out, mode="multi", doc="shakespeare.sept.json", extra=()):
    return ["generate",
            "--sept", str(fixtures_dir / doc),
            "--ontology", str(fixtures_dir / "ontology_historical.json"),
            "--mode", mode, "--out", str(out), "--seed", "13", *extra]


def test_multi_mode_emits_tree_and_svgs(fixtures_dir, tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({
        "g_th": 2,
        "images": {"manifest": str(fixtures_dir / "images" / "manifest.json")},
    }))
    out = tmp_path / "out"
    code = main(gen_args(fixtures_dir, out, extra=["--config", str(config)]))
    assert code == 0
    index = json.loads((out / "tree.json").read_text())
    assert len(index["nodes"]) == 3  # root + Work + Personal Life
    labels = {n["label"] for n in index["nodes"]}
    assert labels == {"root", "Work", "Personal Life"}
    for node in index["nodes"]:
        assert (out / node["svg"]).exists()
    tree = json.loads((out / "mlmr.json").read_text())
    assert set(tree["groups"]) == set(index["nodes"][0]["groups"]) or len(tree["groups"]) == 2


def test_single_mode_emits_one_svg(fixtures_dir, tmp_path):
    out = tmp_path / "single"
    code = main(gen_args(fixtures_dir, out, mode="single", doc="ali.sept.json"))
    assert code == 0
    svgs = list(out.glob("*.svg"))
    assert [p.name for p in svgs] == ["mindmap.svg"]


def test_missing_ontology_flag_is_usage_error():
    result = run_cli(["generate", "--sept", "whatever.json"])
    assert result.returncode == 2
    assert "--ontology" in result.stderr


def test_unreadable_input_is_reported(fixtures_dir, tmp_path):
    code = main(["generate", "--sept", str(tmp_path / "missing.json"),
                 "--ontology", str(fixtures_dir / "ontology_historical.json"),
                 "--out", str(tmp_path / "out")])
    assert code == 1


def test_cc_flag_changes_queries(fixtures_dir, tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({
        "images": {"manifest": str(fixtures_dir / "images" / "manifest.json")},
    }))
    out_direct = tmp_path / "direct"
    out_cc = tmp_path / "cc"
    assert main(gen_args(fixtures_dir, out_direct, mode="single",
                         extra=["--config", str(config)])) == 0
    assert main(gen_args(fixtures_dir, out_cc, mode="single",
                         extra=["--config", str(config), "--cc"])) == 0
    direct_svg = (out_direct / "mindmap.svg").read_text()
    cc_svg = (out_cc / "mindmap.svg").read_text()
    assert "shakespeare_queen.png" not in direct_svg
    assert "shakespeare_queen.png" in cc_svg


def test_determinism_byte_identical_outputs(fixtures_dir, tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert main(gen_args(fixtures_dir, out_a)) == 0
    assert main(gen_args(fixtures_dir, out_b)) == 0
    files_a = sorted(p.name for p in out_a.iterdir())
    files_b = sorted(p.name for p in out_b.iterdir())
    assert files_a == files_b
    for name in files_a:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name
