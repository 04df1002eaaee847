import json
import subprocess
import sys
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


def test_figure_examples(tmp_path):
    subprocess.run([sys.executable, SCRIPTS / "figure_examples.py", "--outdir", tmp_path], check=True,
                   capture_output=True)
    svgs = sorted(p.name for p in tmp_path.glob("*.svg"))
    assert "slice_cube_mid.svg" in svgs and len(svgs) == 7


def test_run_suites_small_scale(tmp_path):
    out = tmp_path / "r.json"
    subprocess.run([sys.executable, SCRIPTS / "run_suites.py", "--scale", "0.005", "--out", out],
                   check=True, capture_output=True)
    data = json.loads(out.read_text())
    assert set(data) == {"arm", "indicatrix", "slice"}
    assert all(not v["report"]["failures"] for v in data.values())
