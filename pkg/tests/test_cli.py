"""Command-line behaviour: output discipline, exit codes, the job/merge
pipeline, and the logarithmic integral."""

import math

import pytest

from combpi import cli
from reference_values import LI_MINUS_PI, PI_POW10


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_x():
    assert cli.parse_x("12345") == 12345
    assert cli.parse_x("10^6") == 10**6
    assert cli.parse_x("2^20") == 2**20
    with pytest.raises(ValueError):
        cli.parse_x("ten")


def test_pi_prints_value_only(capsys):
    code, out, err = run_cli(capsys, "pi", "10^6")
    assert code == 0
    assert out == "78498\n"


def test_pi_shorthand_power_of_two(capsys):
    code, out, _ = run_cli(capsys, "pi", "2^26")
    assert code == 0
    assert out.strip() == "3957809"


def test_pi_rejects_x_below_two(capsys):
    code, out, err = run_cli(capsys, "pi", "1")
    assert code == 1
    assert out == ""
    assert "x >= 2" in err


def test_pi_li_flag(capsys):
    code, out, _ = run_cli(capsys, "pi", "10^6", "--li")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "78498"
    assert lines[1] == "129.549"


def test_pi_capacity_error(capsys):
    code, _, err = run_cli(capsys, "pi", "2^70")
    assert code == 1
    assert "capacity" in err


def test_pi_param_flags(capsys):
    code, out, _ = run_cli(
        capsys, "pi", "10^6", "--alpha", "2", "--wheel", "3", "--block-log", "10"
    )
    assert code == 0 and out.strip() == "78498"


def test_job_merge_pipeline(tmp_path, capsys):
    files = []
    for j in range(2):
        out_path = tmp_path / f"job{j}.txt"
        code, out, err = run_cli(
            capsys, "job", "10^6", "--job", f"{j}/2", "--out", str(out_path)
        )
        assert code == 0
        assert out == ""  # files and diagnostics only, stdout stays clean
        files.append(str(out_path))
    code, out, _ = run_cli(capsys, "merge", *files)
    assert code == 0
    assert out == "78498\n"


def test_merge_single_job_equals_pi(tmp_path, capsys):
    out_path = tmp_path / "only.txt"
    code, _, _ = run_cli(capsys, "job", "10^5", "--job", "0/1", "--out", str(out_path))
    assert code == 0
    code, out, _ = run_cli(capsys, "merge", str(out_path))
    assert code == 0
    assert out.strip() == "9592"


def test_merge_missing_job_exit_3(tmp_path, capsys):
    out_path = tmp_path / "job0.txt"
    run_cli(capsys, "job", "10^6", "--job", "0/2", "--out", str(out_path))
    code, out, err = run_cli(capsys, "merge", str(out_path))
    assert code == 3
    assert "1" in err  # names the missing index


def test_merge_corrupt_file_exit_2(tmp_path, capsys):
    out_path = tmp_path / "job0.txt"
    run_cli(capsys, "job", "10^6", "--job", "0/1", "--out", str(out_path))
    text = out_path.read_text().replace("s_easy = ", "s_easy = 7", 1)
    out_path.write_text(text)
    code, _, err = run_cli(capsys, "merge", str(out_path))
    assert code == 2
    assert "integrity" in err


def test_job_usage_error(capsys):
    code, _, err = run_cli(capsys, "job", "10^6", "--job", "2")
    assert code == 1


def test_verify_passes(capsys):
    code, _, err = run_cli(capsys, "verify", "10^5", "25", "--seed", "3")
    assert code == 0
    assert "pass" in err


def test_verify_catches_injected_fault(monkeypatch, capsys):
    from combpi import phi_engine

    true_easy = phi_engine.easy_leaves

    def skewed(x, params, tables=None, b_filter=None):
        return true_easy(x, params, tables, b_filter) + 1

    monkeypatch.setattr(phi_engine, "easy_leaves", skewed)
    code, _, err = run_cli(capsys, "verify", "10^5", "5", "--seed", "3")
    assert code == 1
    assert "MISMATCH" in err


def test_bench_reports_bytes(capsys):
    code, out, err = run_cli(capsys, "bench", "10^5")
    assert code == 0
    assert "counters" in err
    line = out.strip().split()
    assert line[0] == "100000" and line[1] == "9592"


def test_bench_structure_bytes_accounting():
    from combpi.phi_engine import select_params

    params = select_params(10**6, alpha=1)
    sb = cli.structure_bytes(params)
    d = max(2, int(math.log2(params.y_max)))
    assert sb["sparse_pi"] == (params.y_max // d + 1) * 8
    packed = select_params(10**6, alpha=1, packed=True)
    sp = cli.structure_bytes(packed)
    assert sp["counters"] < sb["counters"]
    assert sp["counters"] == ((2 ** (params.L + 1) - 1) + 7) // 8


def test_li_values_against_series_table():
    for n in range(1, 11):
        diff = cli.li(10**n) - PI_POW10[n]
        assert abs(diff - LI_MINUS_PI[n]) < 1e-3


def test_li_against_quadrature():
    scipy = pytest.importorskip("scipy")
    from scipy.integrate import quad
    from scipy.special import expi

    for n in range(1, 9):
        x = 10**n
        pv, _ = quad(lambda t: 1.0 / math.log(t), 2, x, limit=400)
        li2 = float(expi(math.log(2)))
        assert abs(cli.li(x) - (pv + li2)) < 1e-3
        assert abs(cli.li(x) - float(expi(math.log(x)))) < 1e-3


def test_li_domain():
    with pytest.raises(ValueError):
        cli.li(1.0)
    code = cli.main(["li", "1"])
    assert code == 1


def test_li_command_output(capsys):
    code, out, _ = run_cli(capsys, "li", "10^5")
    assert code == 0
    assert abs(float(out.strip()) - (9592 + 37.809)) < 1e-3
