"""Command-line interface: exit codes, formats, determinism, file I/O."""

import json
import subprocess
import sys

import numpy as np
import pytest

from helpers import random_tensor, random_tsym
from tubal_spectra import cli
from tubal_spectra.spectral import psd_spectral
from tubal_spectra.tensor3 import (identity, is_f_diagonal, is_t_symmetric,
                                   read_tensor3, tensor3_from_text, transpose,
                                   write_matslice, write_tensor3)
from tubal_spectra.tproduct import tprod
from tubal_spectra.tubal import read_tube

RNG = np.random.default_rng(611)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def tsym_file(tmp_path):
    path = tmp_path / "sym.t3"
    write_tensor3(str(path), random_tsym(RNG, 3, 4))
    return str(path)


# --- JSON emitter -----------------------------------------------------------

def test_json_emitter_is_deterministic_and_parseable():
    doc = {"b": 0.1, "a": [1, 2.5, "x", None, True],
           "nested": {"empty_list": [], "empty_map": {}},
           "rows": [[1.0, 2.0], [3.0, 4.0]]}
    text = cli.dumps_doc(doc)
    assert text == cli.dumps_doc(doc)
    assert json.loads(text) == {
        "b": 0.1, "a": [1, 2.5, "x", None, True],
        "nested": {"empty_list": [], "empty_map": {}},
        "rows": [[1.0, 2.0], [3.0, 4.0]]}
    # insertion order, not alphabetical
    assert text.index('"b"') < text.index('"a"')
    # 17 significant digits round-trip doubles exactly
    assert "0.10000000000000001" in text


def test_json_emitter_rejects_non_finite():
    with pytest.raises(ValueError):
        cli.dumps_doc({"x": float("nan")})
    with pytest.raises(ValueError):
        cli.dumps_doc({"x": float("inf")})


# --- argument handling ------------------------------------------------------

def test_no_command_is_usage_error(capsys):
    code, _, err = run(capsys)
    assert code == 1
    assert "usage" in err


def test_help_exits_zero(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "tubal-spectra" in out


def test_unknown_command_is_usage_error(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1
    assert "error" in err


def test_missing_file_is_input_error(capsys, tmp_path):
    code, _, err = run(capsys, "info", str(tmp_path / "absent.t3"))
    assert code == 1
    assert "error" in err


def test_malformed_file_is_input_error(capsys, tmp_path):
    path = tmp_path / "junk.t3"
    path.write_text("not a tensor\n1 2 3\n")
    code, _, err = run(capsys, "info", str(path))
    assert code == 1
    assert "error" in err


def test_nonpositive_tol_is_usage_error(capsys, tsym_file):
    code, _, err = run(capsys, "psd", tsym_file, "--tol", "-1")
    assert code == 1
    assert "--tol" in err


# --- info -------------------------------------------------------------------

def test_info_reports_structure_flags(capsys, tmp_path):
    path = tmp_path / "id.t3"
    write_tensor3(str(path), identity(2, 3))
    code, out, _ = run(capsys, "info", str(path))
    assert code == 0
    assert "shape: 2 x 2 x 3" in out
    assert "t_symmetric: true" in out
    assert "f_diagonal: true" in out
    assert "standard_form: true" in out

    code, out, _ = run(capsys, "info", str(path), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "tubal-spectra/1"
    assert doc["kind"] == "info"
    assert doc["shape"] == {"m": 2, "n": 2, "p": 3}
    assert doc["t_symmetric"] is True
    assert doc["standard_form"] == "true"


def test_info_rectangular_has_no_symmetry_verdict(capsys, tmp_path):
    path = tmp_path / "rect.t3"
    write_tensor3(str(path), random_tensor(RNG, 2, 3, 2))
    code, out, _ = run(capsys, "info", str(path), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["t_symmetric"] is None
    assert doc["standard_form"] is None


# --- tensor-to-tensor commands ----------------------------------------------

def test_tprod_command_round_trips_exactly(capsys, tmp_path):
    A = random_tensor(RNG, 2, 3, 4)
    B = random_tensor(RNG, 3, 2, 4)
    fa, fb, fc = (str(tmp_path / name) for name in ("a.t3", "b.t3", "c.t3"))
    write_tensor3(fa, A)
    write_tensor3(fb, B)
    code, out, _ = run(capsys, "tprod", fa, fb, "-o", fc)
    assert code == 0
    assert out == ""  # -o suppresses stdout
    assert np.array_equal(read_tensor3(fc), tprod(A, B))


def test_tprod_shape_mismatch_is_input_error(capsys, tmp_path):
    fa, fb = str(tmp_path / "a.t3"), str(tmp_path / "b.t3")
    write_tensor3(fa, random_tensor(RNG, 2, 3, 4))
    write_tensor3(fb, random_tensor(RNG, 2, 2, 4))
    code, _, err = run(capsys, "tprod", fa, fb)
    assert code == 1
    assert "error" in err


def test_transpose_command_matches_library(capsys, tmp_path):
    A = random_tensor(RNG, 3, 2, 5)
    fa = str(tmp_path / "a.t3")
    write_tensor3(fa, A)
    code, out, _ = run(capsys, "transpose", fa)
    assert code == 0
    assert np.array_equal(tensor3_from_text(out), transpose(A))


def test_tensor_json_wrapper_carries_text_payload(capsys, tmp_path):
    A = random_tensor(RNG, 2, 2, 3)
    fa = str(tmp_path / "a.t3")
    write_tensor3(fa, A)
    code, out, _ = run(capsys, "transpose", fa, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "transpose"
    assert np.array_equal(tensor3_from_text(doc["result_t3"]), transpose(A))


# --- decompositions ----------------------------------------------------------

def test_ted_json_document(capsys, tsym_file):
    code, out, _ = run(capsys, "ted", tsym_file, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "ted"
    assert doc["shape"] == {"n": 3, "p": 4}
    assert len(doc["eigentuples"]) == 3
    assert doc["ordering"]["first_components_sorted"] is True
    assert doc["ordering"]["elementwise_chain"] in (
        "true", "false", "incomparable")
    assert doc["residuals"]["reconstruction"] <= 1e-10
    U = tensor3_from_text(doc["factors"]["u_t3"])
    D = tensor3_from_text(doc["factors"]["d_t3"])
    A = read_tensor3(tsym_file)
    recon = tprod(tprod(U, D), transpose(U))
    assert np.linalg.norm(recon - A) <= 1e-9 * np.linalg.norm(A)


def test_ted_rejects_unsymmetric_with_exit_2(capsys, tmp_path):
    path = tmp_path / "gen.t3"
    write_tensor3(str(path), random_tensor(RNG, 3, 3, 2))
    code, _, err = run(capsys, "ted", str(path))
    assert code == 2
    assert "NotTSymmetric" in err


def test_tsvd_json_document(capsys, tmp_path):
    A = random_tensor(RNG, 4, 2, 3)
    path = tmp_path / "a.t3"
    write_tensor3(str(path), A)
    code, out, _ = run(capsys, "tsvd", str(path), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["shape"] == {"m": 4, "n": 2, "p": 3}
    assert len(doc["singular_tuples"]) == 2
    assert doc["residuals"]["reconstruction"] <= 1e-10
    U = tensor3_from_text(doc["factors"]["u_t3"])
    S = tensor3_from_text(doc["factors"]["s_t3"])
    V = tensor3_from_text(doc["factors"]["v_t3"])
    recon = tprod(tprod(U, S), transpose(V))
    assert np.linalg.norm(recon - A) <= 1e-9 * np.linalg.norm(A)


# --- psd --------------------------------------------------------------------

def test_psd_exact_reports_criterion_oracle_gap(capsys, tmp_path):
    # The identity with two frontal slices passes the frequency criterion
    # but its form takes the value (2, -2): the oracle must disagree and
    # produce a witness proportional to (1, -1).
    path = tmp_path / "id.t3"
    write_tensor3(str(path), identity(1, 2))
    code, out, _ = run(capsys, "psd", str(path), "--exact",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["spectral"]["class"] == "PSD"
    assert doc["spectral"]["min_frequency_eigenvalue"] >= -1e-12
    assert doc["exact"]["class"] == "NOT_ELEMENTWISE_PSD"
    assert doc["exact"]["component"] == 2
    assert doc["exact"]["min_eigenvalue"] == pytest.approx(-1.0)
    w = np.asarray(doc["exact"]["witness"])
    assert w.shape == (1, 2)
    assert abs(abs(w[0, 0]) - 1 / np.sqrt(2)) <= 1e-12
    assert abs(w[0, 0] + w[0, 1]) <= 1e-12
    assert doc["verdicts_agree"] is False

    code, out, _ = run(capsys, "psd", str(path), "--exact")
    assert code == 0
    assert "note:" in out and "one-sided" in out


def test_psd_gram_tensor_reports_nonnegative_frequency_floor(capsys,
                                                             tmp_path):
    # A Gram tensor always has a nonnegative frequency spectrum; its
    # eigentuple ENTRIES may still be negative, so the spatial class is
    # whatever the entries say and must stay consistent with min_entry.
    B = random_tensor(RNG, 3, 3, 2)
    A = tprod(transpose(B), B)
    path = tmp_path / "gram.t3"
    write_tensor3(str(path), A)
    code, out, _ = run(capsys, "psd", str(path), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    spectral = doc["spectral"]
    assert spectral["min_frequency_eigenvalue"] >= -1e-10
    if spectral["class"] in ("PD", "PSD"):
        assert spectral["min_entry"] >= -spectral["tol"]
    else:
        assert spectral["class"] == "NOT_PSD_BY_CRITERION"
        assert spectral["min_entry"] < -spectral["tol"]
    assert doc["exact"] is None and doc["verdicts_agree"] is None


def test_psd_requires_symmetry_unless_asked(capsys, tmp_path):
    path = tmp_path / "gen.t3"
    write_tensor3(str(path), random_tensor(RNG, 3, 3, 2))
    code, _, err = run(capsys, "psd", str(path))
    assert code == 2
    assert "NotTSymmetric" in err
    code, out, _ = run(capsys, "psd", str(path), "--auto-symmetrize",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["spectral"]["class"] in (
        "PD", "PSD", "NOT_PSD_BY_CRITERION")


# --- quadform ----------------------------------------------------------------

def test_quadform_emits_tube(capsys, tmp_path):
    fa, fx, fout = (str(tmp_path / n) for n in ("a.t3", "x.mat", "f.tube"))
    write_tensor3(fa, identity(1, 2))
    write_matslice(fx, np.array([[1.0, -1.0]]))
    code, out, _ = run(capsys, "quadform", fa, fx)
    assert code == 0
    assert out == "TUBE 1\n2\n2 -2\n"
    code, _, _ = run(capsys, "quadform", fa, fx, "-o", fout)
    assert code == 0
    assert np.array_equal(read_tube(fout), [2.0, -2.0])
    code, out, _ = run(capsys, "quadform", fa, fx, "--format", "json")
    assert code == 0
    assert json.loads(out)["values"] == [2.0, -2.0]


# --- verify ------------------------------------------------------------------

def test_verify_passes_on_symmetric_input(capsys, tsym_file):
    code, out, _ = run(capsys, "verify", tsym_file)
    assert code == 0
    assert out.rstrip().endswith("verify: PASS")
    code, out, _ = run(capsys, "verify", tsym_file, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    names = {c["check"] for c in doc["checks"]}
    assert {"bcirc_roundtrip", "tprod_cross_path", "tsvd_reconstruction",
            "ted_reconstruction", "quadform_polarization"} <= names
    # informational entries carry no verdict
    info = [c for c in doc["checks"] if c["pass"] is None]
    assert all(c["threshold"] is None for c in info)


def test_verify_passes_on_rectangular_input(capsys, tmp_path):
    path = tmp_path / "rect.t3"
    write_tensor3(str(path), random_tensor(RNG, 3, 5, 2))
    code, out, _ = run(capsys, "verify", str(path), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    names = {c["check"] for c in doc["checks"]}
    assert "ted_reconstruction" not in names  # not square-symmetric


def test_verify_reports_failure_with_exit_3(capsys, tsym_file, monkeypatch):
    # Simulate a broken fast path: the cross-route check must catch it.
    monkeypatch.setattr(cli, "tprod", lambda A, B: tprod(A, B) + 1e-3)
    code, out, _ = run(capsys, "verify", tsym_file)
    assert code == 3
    assert "FAIL tprod_cross_path" in out
    assert out.rstrip().endswith("verify: FAIL")


# --- random / bench ----------------------------------------------------------

def test_random_kinds_have_claimed_structure(capsys):
    code, out, _ = run(capsys, "random", "general", "2", "3", "4")
    assert code == 0
    assert tensor3_from_text(out).shape == (2, 3, 4)

    code, out, _ = run(capsys, "random", "tsym", "3", "3", "2")
    assert code == 0
    assert is_t_symmetric(tensor3_from_text(out))

    code, out, _ = run(capsys, "random", "fdiag", "4", "3", "2")
    assert code == 0
    assert is_f_diagonal(tensor3_from_text(out))

    code, out, _ = run(capsys, "random", "psd", "3", "3", "2")
    assert code == 0
    A = tensor3_from_text(out)
    assert is_t_symmetric(A)
    assert psd_spectral(A).min_frequency_eigenvalue >= -1e-10


def test_random_rejects_bad_requests(capsys):
    code, _, err = run(capsys, "random", "tsym", "2", "3", "4")
    assert code == 1
    assert "m == n" in err
    code, _, err = run(capsys, "random", "general", "0", "3", "4")
    assert code == 1
    assert "positive" in err


def test_random_is_seed_deterministic(capsys):
    first = run(capsys, "random", "general", "3", "2", "4", "--seed", "7")
    second = run(capsys, "random", "general", "3", "2", "4", "--seed", "7")
    third = run(capsys, "random", "general", "3", "2", "4", "--seed", "8")
    assert first == second
    assert first[1] != third[1]


def test_bench_compares_routes(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "4x3x2", "--format",
                       "json")
    assert code == 0
    doc = json.loads(out)
    row = doc["results"][0]
    assert row["shape"] == "4x3x2"
    assert row["max_rel_diff"] <= 1e-12
    code, _, err = run(capsys, "bench", "--sizes", "4by3")
    assert code == 1
    assert "expected MxNxP" in err


# --- determinism and process-level entry -------------------------------------

def test_repeated_runs_are_byte_identical(capsys, tsym_file):
    first = run(capsys, "ted", tsym_file, "--format", "json")
    second = run(capsys, "ted", tsym_file, "--format", "json")
    assert first == second


def test_module_entry_point_runs(tmp_path):
    path = tmp_path / "a.t3"
    write_tensor3(str(path), identity(2, 2))
    proc = subprocess.run(
        [sys.executable, "-m", "tubal_spectra", "info", str(path)],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "shape: 2 x 2 x 2" in proc.stdout
