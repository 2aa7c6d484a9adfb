import json

from dynrank.cli import main
from dynrank.fixtures import example_one, weak_monotonicity_seqpav_profile
from dynrank.model import dump_profile, load_profile
from dynrank.session import dump_trajectory, replay_trajectory


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_rank_command(tmp_path, capsys):
    path = tmp_path / "profile.json"
    dump_profile(example_one(), path)
    code, out = run_cli(
        capsys, "rank", "--rule", "dyn-seqpav", "--profile", str(path), "--implemented", "b"
    )
    assert code == 0
    assert out.splitlines() == ["c", "a", "d", "e"]


def test_rank_with_debts(tmp_path, capsys):
    path = tmp_path / "profile.json"
    dump_profile(example_one(), path)
    code, out = run_cli(
        capsys,
        "rank", "--rule", "dyn-phragmen", "--profile", str(path),
        "--implemented", "b,d", "--debts",
    )
    lines = out.splitlines()
    assert lines[:3] == ["a", "c", "e"]
    assert lines[3:] == [
        "0 1/5", "1 1/5", "2 1/5", "3 1/5", "4 1/5",
        "5 1/3", "6 1/3", "7 1/3", "8 0/1",
    ]


def test_check_mono_reports_violation(tmp_path, capsys):
    profile = weak_monotonicity_seqpav_profile()
    traj = replay_trajectory(profile, "dyn-seqpav", ("b",))
    path = tmp_path / "traj.json"
    dump_trajectory(traj, path)
    code, out = run_cli(
        capsys,
        "check", "--axiom", "weak-mono", "--trajectory", str(path),
        "--h", "3", "--alpha", "39/177",
    )
    report = json.loads(out)
    assert code == 1
    assert not report["holds"]
    assert any(v["before"] == "1/1" and v["after"] == "3/13" for v in report["violations"])


def test_check_js_passes(tmp_path, capsys):
    traj = replay_trajectory(example_one(), "myopic-phragmen", ("a", "c"))
    path = tmp_path / "traj.json"
    dump_trajectory(traj, path)
    code, out = run_cli(capsys, "check", "--axiom", "js", "--trajectory", str(path))
    report = json.loads(out)
    assert code == 0
    assert report["holds"]


def test_check_gr_dyn_phragmen(tmp_path, capsys):
    traj = replay_trajectory(example_one(), "dyn-phragmen", ("b",))
    path = tmp_path / "traj.json"
    dump_trajectory(traj, path)
    code, out = run_cli(capsys, "check", "--axiom", "gr", "--trajectory", str(path))
    report = json.loads(out)
    assert code == 0
    assert report["holds"]


def test_gen_round_trip(tmp_path, capsys):
    out_path = tmp_path / "profile.json"
    code, _ = run_cli(
        capsys,
        "gen", "--model", "blurred", "--group-size", "12", "--seed", "7",
        "-o", str(out_path),
    )
    assert code == 0
    profile = load_profile(out_path)
    assert profile.n == 60 and profile.m == 20


def test_experiment_command(tmp_path, capsys):
    out_dir = tmp_path / "out"
    code, out = run_cli(
        capsys,
        "experiment", "--figure", "row2", "--model", "spatial",
        "--rules", "av", "--runs", "2", "-o", str(out_dir),
    )
    assert code == 0
    csv_path = out_dir / "row2_spatial.csv"
    assert csv_path.exists()
    assert (out_dir / "row2_spatial.png").exists()
    assert out.strip().endswith("row2_spatial.csv")
