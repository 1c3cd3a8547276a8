import json

from laacsim.cli import main


def test_simulate_subset_and_analyze(tmp_path, capsys):
    out = tmp_path / "records"
    assert main(["simulate", "--presets", "1,2", "--noise", "0",
                 "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "preset01-seed1" in printed and "preset02-seed2" in printed
    assert len(list(out.iterdir())) == 2

    summary = tmp_path / "s.json"
    assert main(["analyze", str(out), "--summary", str(summary)]) == 0
    payload = json.loads(summary.read_text())
    assert payload["aggregate"]["n"] == 2


def test_analyze_empty_directory(tmp_path, capsys):
    assert main(["analyze", str(tmp_path)]) == 1
    assert "no records found" in capsys.readouterr().err


def test_simulate_refuses_overwrite(tmp_path, capsys):
    out = tmp_path / "records"
    assert main(["simulate", "--presets", "1", "--out", str(out)]) == 0
    assert main(["simulate", "--presets", "1", "--out", str(out)]) == 1
    assert "already exists" in capsys.readouterr().err
    assert main(["simulate", "--presets", "1", "--out", str(out),
                 "--force"]) == 0


def test_plot_data_export(tmp_path):
    out = tmp_path / "records"
    main(["simulate", "--presets", "3", "--noise", "0", "--out", str(out)])
    plot = tmp_path / "fd.csv"
    assert main(["analyze", str(out), "--plot-data", str(plot)]) == 0
    lines = plot.read_text().splitlines()
    assert lines[0] == "t_s,disp_mm,force_N"
    assert len(lines) > 1000


def test_replay_prints_samples(tmp_path, capsys):
    out = tmp_path / "records"
    main(["simulate", "--presets", "1", "--noise", "0", "--out", str(out)])
    capsys.readouterr()  # drop the simulate table
    bundle = next(out.iterdir())
    assert main(["replay", str(bundle), "--speed", "0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t_s,force_N,disp_mm"
    assert lines[1].startswith("0.025,")
