import csv
import io
import subprocess
import sys

import pytest

from hypercs import cli
from hypercs.errors import ConfigurationError
from hypercs.verify import format_report, run_suite


def _run(args, capsys):
    code = cli.main(args)
    return code, capsys.readouterr()


@pytest.mark.parametrize(
    "fid, header",
    [
        (1, "x,ln_W_r1,ln_W_r2,ln_W_r3"),
        (2, "x,P_r1,P_r2,P_r3,poisson"),
        (3, "x,P_r1,P_r2,P_r3,poisson"),
        (4, "x,nbar_r1,nbar_r2,nbar_r3"),
        (5, "x,Q_r1,Q_r2,Q_r3"),
        (6, "x,omega_r1,omega_r2,omega_r3"),
        (7, "x,varX_r1,varX_r2,varX_r3"),
        (8, "re_z,im_z,varX"),
        (9, "re_z,im_z,varP"),
    ],
)
def test_figure_headers_and_shape(fid, header, capsys):
    code, out = _run(["figure", "--id", str(fid), "--steps", "5"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out.out)))
    assert ",".join(rows[0]) == header
    expected = 25 if fid in (8, 9) else 5
    assert len(rows) == expected + 1
    assert all(len(row) == len(rows[0]) for row in rows)


def test_figure_origin_row(capsys):
    code, out = _run(["figure", "--id", "2", "--x-min", "0", "--steps", "3"], capsys)
    assert code == 0
    assert out.out.splitlines()[1] == "0,1,1,1,1"


def test_figure_deterministic_and_worker_independent(capsys):
    args = ["figure", "--id", "5", "--steps", "12"]
    _, a = _run(args, capsys)
    _, b = _run(args, capsys)
    _, c = _run(args + ["--workers", "2"], capsys)
    assert a.out == b.out == c.out


def test_figure_to_file(tmp_path, capsys):
    path = tmp_path / "fig4.csv"
    code, out = _run(["figure", "--id", "4", "--steps", "4", "--out", str(path)], capsys)
    assert code == 0 and out.out == ""
    assert path.read_text().startswith("x,nbar_r1")


@pytest.mark.parametrize(
    "args",
    [
        ["figure", "--id", "12"],
        ["figure", "--id", "1", "--x-min", "0"],
        ["figure", "--id", "3", "--x-min", "5", "--x-max", "1"],
        ["figure", "--id", "3", "--steps", "1"],
        ["figure", "--id", "3", "--r", "0,1"],
        ["verify", "--suite", "state", "--tail-tol", "1"],
        ["verify", "--suite", "moments", "--contour-re", "-1"],
    ],
)
def test_usage_errors_exit_2(args, capsys):
    code, out = _run(args, capsys)
    assert code == 2
    assert out.err.startswith("hypercs:")


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", "--suite", "nope"])
    assert info.value.code == 2


def test_verify_eigen_passes(capsys):
    code, out = _run(["verify", "--suite", "eigen"], capsys)
    assert code == 0
    lines = out.out.splitlines()
    assert lines[0] == "# hypercs verify suite=eigen"
    assert lines[-1].endswith("0 failed")


def test_verify_sabotaged_truncation_fails(capsys):
    code, out = _run(["verify", "--suite", "eigen", "--tail-tol", "1"], capsys)
    assert code == 1
    assert "FAIL" in out.out


def test_verify_report_deterministic():
    a = format_report("statistics", run_suite("statistics"))
    b = format_report("statistics", run_suite("statistics"))
    assert a == b


def test_run_config_validation():
    with pytest.raises(ConfigurationError):
        cli.RunConfig(command="figure", figure_id=2, workers=0)
    cfg = cli.RunConfig(command="figure", figure_id=8)
    assert (cfg.x_min, cfg.x_max, cfg.steps) == (-3.0, 3.0, 61)


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "hypercs", "figure", "--id", "4", "--steps", "2"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert res.stdout.startswith("x,nbar_r1")
