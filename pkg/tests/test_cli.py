import json
import subprocess
import sys

import numpy as np
import pytest

from slicedev import polytope as pt
from slicedev.cli import EXIT_FAIL, EXIT_INVALID, EXIT_IO, EXIT_OK, main
from slicedev.develop import NOTHING_TO_PROVE


@pytest.fixture
def cube_off(tmp_path):
    path = tmp_path / "cube.off"
    assert main(["gen", "--shape", "cube", "--out", str(path)]) == EXIT_OK
    return path


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------- gen

def test_gen_cube_is_canonical(cube_off):
    assert cube_off.read_text() == pt.to_off(pt.cube())
    assert len(pt.read_off(cube_off).vertices) == 8


def test_gen_random_hull(tmp_path):
    a, b = tmp_path / "a.off", tmp_path / "b.off"
    for path in (a, b):
        assert main(["gen", "--shape", "random-hull", "--points", "50", "--seed", "1",
                     "--out", str(path)]) == EXIT_OK
    assert a.read_text() == b.read_text()
    assert len(pt.read_off(a).vertices) == 50


def test_gen_rejects_too_few_points(capsys):
    code, _, err = run(["gen", "--shape", "random-hull", "--points", 3], capsys)
    assert code == EXIT_INVALID and "points" in err


def test_gen_tetra_to_stdout(capsys):
    code, out, _ = run(["gen", "--shape", "tetra"], capsys)
    assert code == EXIT_OK and out.startswith("OFF")


# ---------------------------------------------------------------- slice

def test_slice_cube(cube_off, tmp_path, capsys):
    out = tmp_path / "s.json"
    code, _, _ = run(["slice", "--polytope", cube_off, "--plane", "0,0,1,0.5", "--out", out], capsys)
    assert code == EXIT_OK
    data = json.loads(out.read_text())
    assert data["variant"] == "Curve" and len(data["corners"]) == 4


def test_slice_degenerate(cube_off, capsys):
    code, out, _ = run(["slice", "--polytope", cube_off, "--plane", "0,0,1,0"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["variant"] == "DegenerateFace"


def test_slice_io_and_parse_errors(tmp_path, cube_off, capsys):
    code, _, err = run(["slice", "--polytope", tmp_path / "missing.off", "--plane", "0,0,1,0"], capsys)
    assert code == EXIT_IO and "cannot read" in err
    bad = tmp_path / "bad.off"
    bad.write_text("OFF\n8 6 12\n0 0 zero\n")
    code, _, err = run(["slice", "--polytope", bad, "--plane", "0,0,1,0"], capsys)
    assert code == EXIT_IO and "line 3" in err
    code, _, _ = run(["slice", "--polytope", cube_off, "--plane", "0,0,1"], capsys)
    assert code == EXIT_IO


def test_slice_nonconvex_mesh_is_validation_failure(tmp_path, capsys):
    c = pt.cube()
    v = c.vertices.copy()
    v[7] = (0.6, 0.6, 0.6)
    faces = [t for f in c.faces for t in ((f[0], f[1], f[2]), (f[0], f[2], f[3]))]
    lines = ["OFF", f"8 {len(faces)} 0"] + [" ".join(map(str, r)) for r in v]
    lines += [f"3 {a} {b} {c_}" for a, b, c_ in faces]
    path = tmp_path / "dent.off"
    path.write_text("\n".join(lines) + "\n")
    code, _, err = run(["slice", "--polytope", path, "--plane", "0,0,1,0.5"], capsys)
    assert code == EXIT_INVALID and "convex" in err


# ---------------------------------------------------------------- develop

def test_develop_round_trip_from_slice_json(cube_off, tmp_path, capsys):
    s, d, svg = tmp_path / "s.json", tmp_path / "d.json", tmp_path / "d.svg"
    run(["slice", "--polytope", cube_off, "--plane", "0,0,1,0.5", "--out", s], capsys)
    code, out, _ = run(["develop", "--slice", s, "--out", d, "--svg", svg], capsys)
    assert code == EXIT_OK
    assert "PASS angle bounds" in out and "PASS simplicity" in out
    dev = json.loads(d.read_text())
    assert dev["side"] == "right" and dev["betas"] == pytest.approx([0, 0, 0], abs=1e-12)
    np.testing.assert_allclose(dev["joints"], [[k, 0] for k in range(5)], atol=1e-12)
    text = svg.read_text()
    assert 'width="512"' in text and "stroke-dasharray" in text and "<circle" in text


def test_develop_both_sides_congruent(cube_off, tmp_path, capsys):
    d = tmp_path / "d.json"
    code, out, _ = run(["develop", "--polytope", cube_off, "--plane", "0.1,0.2,1,0.6",
                        "--side", "both", "--out", d], capsys)
    assert code == EXIT_OK and "congruent right/left: yes" in out
    right, left = json.loads(d.read_text())
    assert (right["side"], left["side"]) == ("right", "left")
    assert left["betas"] == pytest.approx([-b for b in right["betas"]], abs=1e-12)


def test_develop_degenerate_exits_zero(cube_off, tmp_path, capsys):
    for planespec in ("0,0,1,0", "1,1,1,0"):
        code, out, _ = run(["develop", "--polytope", cube_off, "--plane", planespec], capsys)
        assert code == EXIT_OK and NOTHING_TO_PROVE in out
    s = tmp_path / "deg.json"
    run(["slice", "--polytope", cube_off, "--plane", "1,1,1,0", "--out", s], capsys)
    code, out, _ = run(["develop", "--slice", s], capsys)
    assert code == EXIT_OK and "DegenerateVertex" in out and NOTHING_TO_PROVE in out


def test_develop_dump_indicatrix(cube_off, capsys):
    code, out, _ = run(["develop", "--polytope", cube_off, "--plane", "0,0,1,0.5", "--out",
                        "-", "--dump-indicatrix"], capsys)
    assert code == EXIT_OK
    line = [ln for ln in out.splitlines() if ln.startswith('{"cumulative_turning"')][0]
    data = json.loads(line)
    assert data["cumulative_turning"] == [0.0] * 4 and len(data["directions"]) == 4


def test_develop_batch(capsys):
    code, out, _ = run(["develop", "--batch", 20, "--seed", 3], capsys)
    assert code == EXIT_OK
    assert "batch: 20/20 slices pass" in out


def test_develop_needs_an_input(capsys):
    code, _, _ = run(["develop"], capsys)
    assert code == EXIT_INVALID


def test_develop_malformed_slice_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["develop", "--slice", bad], capsys)[0] == EXIT_IO
    bad.write_text('{"variant": "Curve", "corners": [{"kind": "EdgeCrossing"}]}')
    assert run(["develop", "--slice", bad], capsys)[0] == EXIT_IO


# ---------------------------------------------------------------- verify

def test_verify_passes_and_reports(tmp_path, capsys):
    rep = tmp_path / "r.json"
    code, out, _ = run(["verify", "--suite", "all", "--trials", 30, "--seed", 7, "--report", rep], capsys)
    assert code == EXIT_OK
    data = json.loads(rep.read_text())
    assert {"trials", "failures", "min_margin", "seed"} <= set(data)
    assert data["trials"] == 30 and data["seed"] == 7 and data["failures"] == []
    assert set(data["suites"]) == {"arm", "indicatrix", "slice"}
    assert "arm: PASS" in out


def test_verify_report_is_byte_identical(tmp_path):
    paths = [tmp_path / f"r{k}.json" for k in range(3)]
    for path, jobs in zip(paths, (1, 1, 2)):
        assert main(["verify", "--suite", "all", "--trials", "40", "--seed", "11",
                     "--report", str(path), "--jobs", str(jobs)]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes() == paths[2].read_bytes()


def test_verify_injected_bug_fails_with_replay(tmp_path, capsys):
    # a negated length tolerance demands a strictly positive forbidden-disk
    # margin, which the identity-edge extreme samples cannot give
    rep = tmp_path / "bad.json"
    code, out, _ = run(["--eps-len=-1e-6", "verify", "--suite", "arm", "--trials", 20,
                        "--seed", 42, "--report", rep], capsys)
    assert code == EXIT_FAIL
    assert "replay trial seed" in out
    fail = json.loads(rep.read_text())["failures"][0]
    assert "spec" in fail and "lengths" in fail["spec"] and "trial_seed" in fail


def test_verify_env_tolerance(monkeypatch, capsys):
    monkeypatch.setenv("SLICEDEV_TOLERANCE", "len=-1e-6")
    code, _, _ = run(["verify", "--suite", "arm", "--trials", 10], capsys)
    assert code == EXIT_FAIL
    monkeypatch.setenv("SLICEDEV_TOLERANCE", "nonsense")
    code, _, err = run(["verify", "--suite", "arm", "--trials", 10], capsys)
    assert code == EXIT_INVALID and "tolerance" in err


def test_verify_rejects_zero_trials(capsys):
    assert run(["verify", "--trials", 0], capsys)[0] == EXIT_INVALID


def test_cli_restores_library_tolerance():
    from slicedev import tolerance

    before = tolerance.current()
    main(["--eps-angle", "1e-3", "gen", "--shape", "cube", "--out", "-"])
    assert tolerance.current() == before


def test_console_entry_point_exit_code(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "slicedev.cli", "slice", "--polytope",
                           str(tmp_path / "nope.off"), "--plane", "0,0,1,0"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_IO


@pytest.mark.slow
def test_verify_all_seed_7_budget(capsys):
    import time

    start = time.perf_counter()
    code, _, _ = run(["verify", "--suite", "all", "--trials", 1000, "--seed", 7], capsys)
    assert code == EXIT_OK
    assert time.perf_counter() - start <= 90  # arm 30 s + slice 60 s budgets

