import json
import subprocess
import sys

import pytest

from bilist import bounds
from bilist.cli import EXIT_CAP, EXIT_NEG, EXIT_OK, EXIT_USAGE, fixtures_dir, main, parse_table
from bilist.colorability import verify_certificate
from bilist.core import complete_certificate, load_certificate, read_certificate, write_certificate


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


# ---------------------------------------------------------------------------
# verify / decide
# ---------------------------------------------------------------------------

def test_verify_fixture(capsys):
    rc, out, err = run(capsys, "verify", str(fixtures_dir() / "classic-2-2.cert"))
    assert rc == EXIT_OK and out.strip() == "VERIFIED"
    assert err.startswith("bilist ") and "verify" in err


def test_verify_by_bare_name_falls_back_to_fixtures(capsys):
    rc, out, _ = run(capsys, "verify", "fano-K28-7.cert")
    assert rc == EXIT_OK and out.strip() == "VERIFIED"


def test_verify_csv_round_trip(capsys):
    rc, out, _ = run(capsys, "verify", "gadget-2-2.cert", "--format", "csv")
    rows = parse_table(out)
    assert rc == EXIT_OK and len(rows) == 1
    assert rows[0]["status"] == "VERIFIED" and rows[0]["provenance"] == "GADGET"


def test_verify_refuted_certificate(tmp_path, capsys):
    # dropping an A-list leaves a colourable instance, so the claim is refuted
    la = load_certificate(fixtures_dir() / "classic-2-2.cert").assignment
    path = tmp_path / "bad.cert"
    path.write_text(write_certificate(complete_certificate(la.lists_a[:-1], la.lists_b, "CLASSIC")))
    rc, out, _ = run(capsys, "verify", str(path))
    assert rc == EXIT_NEG and out.startswith("REFUTED")


def test_decide(capsys):
    rc, out, _ = run(capsys, "decide", "gadget-2-2.cert")
    assert rc == EXIT_NEG and out.strip() == "NOT COLOURABLE"
    rc, out, _ = run(capsys, "decide", "gadget-2-2.cert", "--format", "structured")
    assert json.loads(out)[0]["colourable"] is False


# ---------------------------------------------------------------------------
# search subcommands
# ---------------------------------------------------------------------------

def test_choosable_yes_and_no(tmp_path, capsys):
    rc, out, _ = run(capsys, "choosable", "--complete", "3", "2", "--ka", "2", "--kb", "2")
    assert rc == EXIT_OK and out.strip() == "YES"
    path = tmp_path / "k42.cert"
    rc, out, _ = run(capsys, "choosable", "--complete", "4", "2", "--ka", "2", "--kb", "2",
                     "--out", str(path), "--format", "csv")
    row = parse_table(out)[0]
    assert rc == EXIT_NEG and row["answer"] == "NO" and row["certificate"] == str(path)
    assert verify_certificate(load_certificate(path)).verified


def test_choosable_k20(tmp_path, capsys):
    path = tmp_path / "k20.cert"
    rc, out, _ = run(capsys, "choosable", "--complete", "20", "7", "--ka", "3", "--kb", "4", "--out", str(path))
    assert rc == EXIT_NEG
    assert out.splitlines() == ["NO", f"certificate: {path}"]
    cert = load_certificate(path)
    assert (cert.graph.a_size, cert.graph.b_size) == (20, 7)
    assert verify_certificate(cert).verified


def test_choosable_cap_gives_bracket(capsys):
    rc, out, _ = run(capsys, "choosable", "--complete", "2", "3", "--ka", "2", "--kb", "2",
                     "--palette-cap", "2", "--format", "csv")
    assert rc == EXIT_CAP and parse_table(out)[0]["answer"] == "UNKNOWN"


def test_threshold(capsys):
    rc, out, _ = run(capsys, "threshold", "--b", "2", "--ka", "2", "--kb", "2")
    assert rc == EXIT_OK and out.splitlines()[0] == "4"
    rc, out, _ = run(capsys, "threshold", "--b", "2", "--ka", "3", "--kb", "2", "--format", "csv")
    assert parse_table(out)[0]["a_star"] == "UNBOUNDED"


def test_threshold_timeout_exit_code(capsys):
    rc, out, _ = run(capsys, "threshold", "--b", "7", "--ka", "3", "--kb", "4", "--timeout", "0.05",
                     "--format", "csv")
    row = parse_table(out)[0]
    assert rc == EXIT_CAP and row["a_star"] == "" and int(row["lower"]) >= 1


def test_jobs_output_is_byte_identical(capsys):
    outs = []
    for jobs in ("1", "2"):
        rc, out, _ = run(capsys, "threshold", "--b", "3", "--ka", "3", "--kb", "2", "--jobs", jobs,
                         "--format", "csv")
        assert rc == EXIT_OK
        outs.append(out)
    assert outs[0] == outs[1]


def test_mbar(capsys):
    rc, out, _ = run(capsys, "mbar", "--k1", "2", "--k2", "4", "--l", "7")
    lines = out.splitlines()
    assert rc == EXIT_OK and lines[0] == "7"
    assert lines[2] == "7 4 7" and len(lines) == 3 + 7
    rc, out, _ = run(capsys, "mbar", "--k1", "2", "--k2", "4", "--l", "7", "--format", "csv")
    row = parse_table(out)[0]
    assert row["value"] == "7" and row["exact"] == "true"
    assert len(json.loads(row["family"])) == 7


def test_mbar_node_cap(capsys):
    rc, out, _ = run(capsys, "mbar", "--k1", "3", "--k2", "3", "--l", "8", "--max-nodes", "1")
    assert rc == EXIT_CAP and out.startswith("bracket ")


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def test_bounds_csv_parses_back(capsys):
    rc, out, _ = run(capsys, "bounds", "--delta-a", "2:3", "--delta-b", "10", "--ka", "2", "--kb", "15",
                     "--conditions", "transversal,coupon,degrees", "--format", "csv")
    assert rc == EXIT_OK
    rows = bounds.sweep_from_csv(out)
    assert len(rows) == 6
    assert bounds.sweep_to_csv(rows) == out


def test_bounds_complete_mode(capsys):
    rc, out, _ = run(capsys, "bounds", "--mode", "complete", "--a", "3", "--b", "2", "--ka", "2", "--kb", "2",
                     "--conditions", "cu1,boundary", "--format", "csv")
    rows = parse_table(out)
    assert rc == EXIT_OK and [r["id"] for r in rows] == ["cu1", "boundary"]


def test_bounds_row_cap(capsys):
    rc, _, err = run(capsys, "bounds", "--delta-a", "1:100", "--delta-b", "1:100", "--ka", "2", "--kb", "2",
                     "--max-rows", "10")
    assert rc == EXIT_CAP and "bilist:" in err


def test_bounds_usage_errors(capsys):
    assert run(capsys, "bounds", "--mode", "complete", "--ka", "2", "--kb", "2")[0] == EXIT_USAGE
    assert run(capsys, "bounds", "--delta-a", "2", "--delta-b", "2", "--ka", "2", "--kb", "2",
               "--conditions", "bogus")[0] == EXIT_USAGE


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("argv,size", [
    (["classic", "--k", "2", "--delta", "2"], (4, 2)),
    (["fano28"], (28, 7)),
    (["fano35"], (35, 7)),
    (["boundary", "--b", "4", "--delta", "2"], (6, 4)),
    (["gadget", "--k", "2", "--delta", "2"], None),
    (["witness", "--k", "2", "--m", "8", "--segments", "2"], (6, 12)),
])
def test_construct_kinds(capsys, argv, size):
    rc, out, _ = run(capsys, "construct", *argv)
    assert rc == EXIT_OK
    cert = read_certificate(out)
    if size is not None:
        assert (cert.graph.a_size, cert.graph.b_size) == size
    assert verify_certificate(cert).verified


def test_construct_matches_fixtures(capsys):
    for argv, name in [(["classic"], "classic-2-2.cert"), (["fano28"], "fano-K28-7.cert"),
                       (["boundary", "--b", "4", "--delta", "3"], "boundary-4-3.cert"),
                       (["gadget"], "gadget-2-2.cert")]:
        _, out, _ = run(capsys, "construct", *argv)
        assert read_certificate(out) == load_certificate(fixtures_dir() / name)


def test_construct_witness_beyond_scale(capsys):
    rc, out, err = run(capsys, "construct", "witness", "--k", "2")
    assert rc == EXIT_CAP
    assert json.loads(out)["m_formula"] == pytest.approx(464.615, abs=1e-3)


def test_construct_out_file(tmp_path, capsys):
    path = tmp_path / "c.cert"
    rc, out, _ = run(capsys, "construct", "classic", "--out", str(path))
    assert rc == EXIT_OK and out.strip() == str(path)
    assert load_certificate(path).provenance == "CLASSIC"


def test_fixture_dir_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("BILIST_FIXTURES", str(tmp_path))
    rc, out, _ = run(capsys, "construct", "classic", "--fixture")
    assert rc == EXIT_OK and (tmp_path / "classic-2-2.cert").exists()
    rc, out, _ = run(capsys, "verify", "classic-2-2.cert")
    assert rc == EXIT_OK
    assert run(capsys, "verify", "fano-K28-7.cert")[0] == EXIT_USAGE


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

TRANSVERSAL = ["--a", "30", "--b", "6", "--da", "2", "--db", "10", "--ka", "2", "--kb", "15", "--palette", "20"]


def test_sample_transversal_csv(capsys):
    rc, out, _ = run(capsys, "sample", "transversal", *TRANSVERSAL, "--count", "3", "--seed", "5", "--format", "csv")
    rows = parse_table(out)
    assert rc == EXIT_OK and [r["seed"] for r in rows] == ["5", "6", "7"]
    assert all(r["status"] == "OK" and len(json.loads(r["colouring_a"])) == 30 for r in rows)
    rc2, out2, _ = run(capsys, "sample", "transversal", *TRANSVERSAL, "--count", "3", "--seed", "5",
                       "--format", "csv")
    assert out2 == out


def test_sample_needs_seed_in_csv_mode(capsys):
    assert run(capsys, "sample", "transversal", *TRANSVERSAL, "--format", "csv")[0] == EXIT_USAGE


def test_sample_coupon_and_split(capsys):
    rc, out, _ = run(capsys, "sample", "coupon", "--a", "64", "--b", "64", "--da", "16", "--db", "16",
                     "--ka", "8", "--kb", "2", "--palette", "30", "--seed", "1", "--format", "csv")
    assert rc in (EXIT_OK, EXIT_NEG) and len(parse_table(out)) == 1
    rc, out, _ = run(capsys, "sample", "split", "--a", "2", "--b", "2", "--ka", "2", "--kb", "40",
                     "--palette", "60", "--mode", "EQ2", "--seed", "1", "--format", "csv")
    assert rc == EXIT_OK and parse_table(out)[0]["status"] == "OK"


def test_sample_on_certificate(capsys):
    rc, out, _ = run(capsys, "sample", "coupon", "--cert", "classic-2-2.cert", "--budget", "50",
                     "--seed", "0", "--format", "csv")
    row = parse_table(out)[0]
    assert rc == EXIT_NEG and row["status"] == "BUDGET_EXHAUSTED" and row["resamples"] == "50"


def test_sample_missing_sizes(capsys):
    assert run(capsys, "sample", "coupon", "--seed", "1")[0] == EXIT_USAGE


# ---------------------------------------------------------------------------
# usage errors
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    [], ["nope"], ["verify", "/no/such/file.cert"], ["mbar", "--k1", "2"],
    ["mbar", "--k1", "2", "--k2", "4", "--l", "7", "--bogus"], ["bounds", "--ka", "x", "--kb", "2"],
])
def test_usage_errors(capsys, argv):
    rc, out, err = run(capsys, *argv)
    assert rc == EXIT_USAGE
    assert "Traceback" not in err and "error" in err


def test_malformed_certificate_is_usage_error(tmp_path, capsys):
    path = tmp_path / "bad.cert"
    path.write_text("{not json")
    rc, _, err = run(capsys, "verify", str(path))
    assert rc == EXIT_USAGE and "Traceback" not in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bilist.cli", "verify", "classic-2-2.cert"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "VERIFIED"
    assert proc.stderr.splitlines()[0] == "bilist 0.1.0: bilist verify classic-2-2.cert"
    proc = subprocess.run([sys.executable, "-m", "bilist.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "bilist 0.1.0" in proc.stdout
