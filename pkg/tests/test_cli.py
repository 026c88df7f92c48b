import json

import numpy as np
import pytest

from gatequiz import qmodel, robust
from gatequiz.cli import evaluate_external, ingest_channels, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_words_stdout(capsys):
    code, out, _ = run(capsys, "words", "--problem", "eo:k=1:imax=3")
    assert code == 0
    assert out.splitlines() == ["word,label", ",y", "ss,n", "ssss,y", "ssssss,n"]


def test_words_needs_length(capsys):
    code, _, err = run(capsys, "words", "--problem", "eo:k=1")
    assert code == 2
    assert "max-len" in err


def test_bad_descriptor_is_input_error(capsys):
    code, _, err = run(capsys, "words", "--problem", "nope:k=1")
    assert code == 2
    assert "error" in err


def test_words_out_file_and_manifest(tmp_path, capsys):
    out = tmp_path / "words.csv"
    code, _, _ = run(capsys, "words", "--problem", "cl:len=3", "--out", str(out))
    assert code == 0
    assert out.read_text().startswith("word,label\n")
    manifest = json.loads((tmp_path / "words.csv.manifest.json").read_text())
    assert manifest["problem"] == "cl:len=3"
    assert "version" in manifest and "wall_time_s" in manifest


def test_dfa_check_verdicts(tmp_path, capsys):
    good = {"states": 4, "alphabet": ["s"], "delta": [[1], [2], [3], [0]],
            "initial": 0, "labels": {"y": [0], "n": [2]}}
    path = tmp_path / "dfa.json"
    path.write_text(json.dumps(good))
    code, out, _ = run(capsys, "dfa-check", "--problem", "eo:k=1", "--dfa", str(path))
    assert code == 0
    assert json.loads(out)["solves"] is True

    bad = dict(good, labels={"y": [0], "n": [1]})
    path.write_text(json.dumps(bad))
    code, out, _ = run(capsys, "dfa-check", "--problem", "eo:k=1", "--dfa", str(path))
    assert code == 1
    assert json.loads(out)["solves"] is False

    path.write_text("{broken")
    code, _, err = run(capsys, "dfa-check", "--problem", "eo:k=1", "--dfa", str(path))
    assert code == 2


def test_search_command(capsys):
    code, out, _ = run(capsys, "search", "--problem", "eo:k=1", "--max-states", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["min_states"] == 4
    assert payload["equivalence_classes"] == 1
    assert payload["witnesses"][0]["states"] == 4


def test_search_negative_verdict(capsys):
    code, out, _ = run(capsys, "search", "--problem", "eo:k=2", "--max-states", "5")
    assert code == 1
    assert json.loads(out)["min_states"] is None


def test_pfa_opt_command(capsys):
    code, out, _ = run(capsys, "pfa-opt", "--imax", "5")
    assert code == 0
    payload = json.loads(out)
    assert payload["p_fail"] == pytest.approx(1 / 3, abs=1e-6)
    assert payload["soundness_alpha"] == pytest.approx(1.5, abs=1e-5)


def test_qfa_check_command(capsys):
    code, out, _ = run(capsys, "qfa-check", "--problem", "geo:q=3:r=3", "--budget", "27")
    assert code == 0
    assert json.loads(out)["solves"] is True


def test_classify_command(capsys):
    code, out, _ = run(capsys, "classify-eo", "--unitary", "sqrt-z", "--k", "1", "--budget", "8")
    assert code == 0
    payload = json.loads(out)
    assert payload["valid"] and payload["j"] == 1
    code, out, _ = run(capsys, "classify-eo", "--unitary", "z", "--k", "1")
    assert code == 1
    code, _, _ = run(capsys, "classify-eo", "--unitary", "no-such-file.json", "--k", "1")
    assert code == 2


def test_eb_demo_command(capsys):
    code, out, _ = run(capsys, "eb-demo")
    assert code == 0
    payload = json.loads(out)
    assert payload["success"] == pytest.approx(23 / 32, abs=1e-12)


def test_survey_reproducible_across_runs_and_threads(tmp_path, capsys):
    paths = [tmp_path / f"s{i}.csv" for i in range(3)]
    for path, threads in zip(paths, ("1", "2", "2")):
        code, _, _ = run(
            capsys, "survey", "--problem", "eo:k=1:imax=3", "--n", "200",
            "--seed", "9", "--threads", threads, "--out", str(path),
        )
        assert code == 0
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]
    manifest = json.loads((tmp_path / "s0.csv.manifest.json").read_text())
    assert manifest["seed"] == 9


def test_slope_command(capsys):
    code, out, _ = run(capsys, "slope", "--family", "depolarizing", "--imax", "3", "--seed", "4")
    assert code == 0
    assert json.loads(out)["alpha_hat"] == pytest.approx(1 / 3, rel=0.05)


def test_noise_curve_command(tmp_path, capsys):
    out = tmp_path / "curves.csv"
    code, _, _ = run(
        capsys, "noise-curve", "--imax", "3", "--seed", "2", "--points", "3",
        "--out", str(out),
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "family,t,p_fail,infid"
    assert len(lines) == 1 + 4 * 3


def make_channel_file(tmp_path):
    ident = qmodel.matrix_to_json(np.eye(2))
    doubled = qmodel.matrix_to_json(2 * np.eye(2))
    dephasing = robust.noise_channel(robust.NoiseFamily("dephasing", 0.3))
    sqrtx = robust.SQRT_X
    from gatequiz.qcore import compose_channels, unitary_channel

    noisy = compose_channels(dephasing, unitary_channel(sqrtx))
    ar = compose_channels(
        robust.noise_channel(robust.NoiseFamily("amplitude_raising", 1.0)),
        unitary_channel(sqrtx),
    )
    payload = {
        "channels": {
            "identity": [ident],
            "doubled": [doubled],
            "dephased_gate": [qmodel.matrix_to_json(K) for K in noisy.kraus_ops],
            "noiseless_gate": [qmodel.matrix_to_json(sqrtx)],
            "raising_gate": [qmodel.matrix_to_json(K) for K in ar.kraus_ops],
        }
    }
    path = tmp_path / "channels.json"
    path.write_text(json.dumps(payload))
    return path


def test_ingest_channels(tmp_path):
    path = make_channel_file(tmp_path)
    accepted, skipped = ingest_channels(path)
    names = [ident for ident, _ in accepted]
    assert "identity" in names and "dephased_gate" in names
    assert "doubled" in skipped
    assert skipped["doubled"]["trace_defect"] == pytest.approx(3.0)


def test_evaluate_external_anchors(tmp_path):
    from gatequiz import problems

    path = make_channel_file(tmp_path)
    accepted, _ = ingest_channels(path)
    table = dict(accepted)
    p = problems.make_eo(1, 3)
    ids, points = evaluate_external(
        [("noiseless_gate", table["noiseless_gate"]),
         ("raising_gate", table["raising_gate"]),
         ("dephased_gate", table["dephased_gate"])],
        p, seed=5,
    )
    by_id = dict(zip(ids, points))
    assert by_id["noiseless_gate"].p_fail == pytest.approx(0.0, abs=1e-12)
    assert by_id["noiseless_gate"].infid == pytest.approx(0.0, abs=1e-9)
    assert by_id["raising_gate"].p_fail == pytest.approx(0.25, abs=1e-12)
    assert by_id["raising_gate"].infid == pytest.approx(0.5, abs=1e-3)
    deph = by_id["dephased_gate"]
    assert deph.p_fail > 0
    assert deph.infid < 2 * deph.p_fail  # below the soundness line


def test_ingest_eval_command(tmp_path, capsys):
    path = make_channel_file(tmp_path)
    out = tmp_path / "eval.csv"
    code, _, err = run(
        capsys, "ingest-eval", "--channels", str(path), "--problem", "eo:k=1:imax=3",
        "--seed", "5", "--out", str(out),
    )
    assert code == 0
    assert "doubled" in err
    lines = out.read_text().splitlines()
    assert lines[0] == "id,index,seed,p_fail,infid,kraus_rank"
    assert len(lines) == 5  # four accepted channels


def test_verify_claims_command(capsys):
    code, out, _ = run(capsys, "verify-claims")
    assert code == 0
    rows = json.loads(out)
    assert all(r["match"] in (True, None) for r in rows)
