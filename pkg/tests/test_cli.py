import json

import pytest
from gmpy2 import mpq

import harmoniter.cli as cli
from harmoniter import ResourceLimitError
from harmoniter.cli import main, render_decimal


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --- decimal rendering --------------------------------------------------------


def test_render_decimal_basic():
    assert render_decimal(mpq(137, 60), 12) == "2.283333333333"
    assert render_decimal(mpq(1), 3) == "1.000"
    assert render_decimal(mpq(-137, 60), 4) == "-2.2833"
    assert render_decimal(mpq(2, 3), 6) == "0.666667"


def test_render_decimal_round_half_even():
    assert render_decimal(mpq(1, 8), 2) == "0.12"  # 0.125 -> even
    assert render_decimal(mpq(3, 8), 2) == "0.38"  # 0.375 -> even
    assert render_decimal(mpq(5, 2), 0) == "2"
    assert render_decimal(mpq(7, 2), 0) == "4"
    assert render_decimal(mpq(-1, 8), 2) == "-0.12"
    with pytest.raises(ValueError):
        render_decimal(mpq(1), -1)


# --- eval -----------------------------------------------------------------------


def test_eval_rational(capsys):
    code, out, _ = run(capsys, "eval", "--j", "1", "--n", "5", "--format", "rational")
    assert code == 0
    assert out.strip() == "137/60"


def test_eval_h2_at_one(capsys):
    code, out, _ = run(capsys, "eval", "--j", "2", "--n", "1")
    assert code == 0
    assert out.strip() == "1/1"


def test_eval_decimal(capsys):
    code, out, _ = run(capsys, "eval", "--j", "1", "--n", "5", "--format", "decimal")
    assert code == 0
    assert out.strip() == "2.283333333333"


def test_eval_csv(capsys):
    code, out, _ = run(capsys, "eval", "--j", "2", "--n", "3", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "j,n,rational,decimal"
    assert lines[1].startswith("2,3,50/33,1.515151")


def test_eval_json_carries_version_and_flags(capsys):
    code, out, _ = run(capsys, "eval", "--j", "1", "--n", "4", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rational"] == "25/12"
    assert payload["version"]
    assert payload["flags"]["j"] == 1 and payload["flags"]["n"] == 4


def test_eval_usage_error(capsys):
    code, _, err = run(capsys, "eval", "--j", "0", "--n", "5")
    assert code == 2
    assert "h_j(n)" in err


# --- scan -----------------------------------------------------------------------


def test_scan_single_prime_csv(tmp_path, capsys):
    out_csv = tmp_path / "t.csv"
    code, out, _ = run(capsys, "scan", "--j", "2", "--primes", "3",
                       "--n-max", "200", "--out", str(out_csv))
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "n_start,n_end,valuation"
    assert lines[1] == "1,1,0"
    assert lines[2] == "2,53,1"
    assert "(2,53,1)" in out


def test_scan_multi_prime_naming(tmp_path, capsys):
    out_csv = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "scan", "--j", "2", "--primes", "3,5",
                       "--n-max", "60", "--out", str(out_csv))
    assert code == 0
    assert (tmp_path / "scan.j2.p3.csv").exists()
    assert (tmp_path / "scan.j2.p5.csv").exists()


def test_scan_json_report(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    code, _, _ = run(capsys, "scan", "--j", "3", "--primes", "2",
                     "--n-max", "60", "--json", str(report_path))
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["j"] == 3 and report["n_max"] == 60
    assert report["primes"][0]["p"] == 2
    assert report["primes"][0]["runs"][:2] == [[1, 1, 0], [2, 11, 2]]
    assert report["checkpoint_digest"]
    assert report["version"]
    assert report["flags"]["engine"] == "auto"


def test_scan_json_stdout(capsys):
    code, out, _ = run(capsys, "scan", "--j", "1", "--primes", "2",
                       "--n-max", "8", "--json", "-")
    assert code == 0
    payload = json.loads(out[: out.index("\n}") + 2])
    assert payload["primes"][0]["runs"] == [[1, 1, 0], [2, 3, 1], [4, 7, 2], [8, 8, 3]]


def test_scan_resume_cli_flow(tmp_path, capsys):
    ckpt = tmp_path / "scan.ckpt"
    full_csv = tmp_path / "full.csv"
    resumed_csv = tmp_path / "resumed.csv"
    code, _, _ = run(capsys, "scan", "--j", "3", "--primes", "2", "--n-max", "150",
                     "--out", str(full_csv))
    assert code == 0
    code, _, _ = run(capsys, "scan", "--j", "3", "--primes", "2", "--n-max", "70",
                     "--checkpoint", str(ckpt))
    assert code == 0
    code, _, _ = run(capsys, "scan", "--j", "3", "--primes", "2", "--n-max", "150",
                     "--checkpoint", str(ckpt), "--resume", "--out", str(resumed_csv))
    assert code == 0
    assert resumed_csv.read_bytes() == full_csv.read_bytes()


def test_scan_checkpoint_dir_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.CHECKPOINT_DIR_ENV, str(tmp_path))
    code, _, _ = run(capsys, "scan", "--j", "1", "--primes", "2", "--n-max", "20",
                     "--checkpoint", "rel.ckpt")
    assert code == 0
    assert (tmp_path / "rel.ckpt").exists()


def test_scan_corrupt_checkpoint_exit_code(tmp_path, capsys):
    ckpt = tmp_path / "scan.ckpt"
    run(capsys, "scan", "--j", "2", "--primes", "3", "--n-max", "30",
        "--checkpoint", str(ckpt))
    ckpt.write_text(ckpt.read_text()[:40])
    code, _, err = run(capsys, "scan", "--j", "2", "--primes", "3", "--n-max", "60",
                       "--checkpoint", str(ckpt), "--resume")
    assert code == 4
    assert "checkpoint" in err


def test_scan_resource_limit_exit_code(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise ResourceLimitError("synthetic")

    monkeypatch.setattr(cli, "denominator_valuation_scan", boom)
    code, _, err = run(capsys, "scan", "--j", "2", "--primes", "3", "--n-max", "50")
    assert code == 3
    assert "resource" in err


def test_scan_nmax_cap(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--j", "2", "--primes", "3", "--n-max", "2001"])
    assert exc.value.code == 2


def test_scan_unbounded_lifts_cap(capsys):
    code, out, _ = run(capsys, "scan", "--j", "1", "--primes", "2",
                       "--n-max", "2050", "--unbounded", "--engine", "padic")
    assert code == 0
    assert "(2048,2050,11)" in out


def test_scan_bad_prime_usage(capsys):
    code, _, err = run(capsys, "scan", "--j", "2", "--primes", "4", "--n-max", "10")
    assert code == 2
    assert "prime" in err


# --- gamma ----------------------------------------------------------------------


def test_gamma_standard_prefix(capsys):
    code, out, _ = run(capsys, "gamma", "--j", "1", "--n", "5", "--method", "standard")
    assert code == 0
    assert out.startswith("0.6738")
    assert f"{float(out.splitlines()[0]):.3f}" == "0.674"


def test_gamma_improved_prefix(capsys):
    code, out, _ = run(capsys, "gamma", "--j", "1", "--n", "5", "--method", "improved")
    assert code == 0
    assert out.startswith("0.5738")
    assert f"{float(out.splitlines()[0]):.3f}" == "0.574"
    assert "corrected" in out


def test_gamma_j2_default_improved(capsys):
    code, out, _ = run(capsys, "gamma", "--j", "2", "--n", "1000")
    assert code == 0
    assert out.startswith("0.794678")
    assert "error order" in out


def test_gamma_primed_prints_annotation(capsys):
    code, out, _ = run(capsys, "gamma", "--j", "2", "--n", "100", "--method", "primed")
    assert code == 0
    assert "error order" in out
    assert "no digit" in out


def test_gamma_json(capsys):
    code, out, _ = run(capsys, "gamma", "--j", "2", "--n", "50", "--method", "primed",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "primed"
    assert payload["error_order"] is not None
    assert payload["corrected"] is None


def test_gamma_usage_errors(capsys):
    code, _, _ = run(capsys, "gamma", "--j", "1", "--n", "5", "--method", "primed")
    assert code == 2
    code, _, _ = run(capsys, "gamma", "--j", "2", "--n", "5", "--method", "minimal")
    assert code == 2
    code, _, _ = run(capsys, "gamma", "--j", "2", "--n", "1")
    assert code == 2


# --- check ----------------------------------------------------------------------


def test_check_integrality(capsys):
    code, out, _ = run(capsys, "check", "--what", "integrality", "--j", "2",
                       "--n-max", "200")
    assert code == 0
    assert "[1]" in out


def test_check_inequality(capsys):
    code, out, _ = run(capsys, "check", "--what", "inequality", "--n-max", "12")
    assert code == 0
    assert "k*=5; violations: 2,3,4" in out


def test_check_concavity(capsys):
    code, out, _ = run(capsys, "check", "--what", "concavity", "--j", "2",
                       "--n-max", "50")
    assert code == 0
    assert "concave" in out


def test_check_witnesses(capsys):
    code, out, _ = run(capsys, "check", "--what", "theisinger", "--n-max", "40")
    assert code == 0
    assert "verified" in out
    code, out, _ = run(capsys, "check", "--what", "kurschak", "--n-max", "40")
    assert code == 0
    assert "verified" in out


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
