import json
import math
from dataclasses import replace

import pytest

from bitassist.main import main
from bitassist.services import assist

FAST = ["--restarts", "2", "--iterations", "200", "--family-restarts", "3"]


def _structured(capsys, argv):
    code = main(argv + ["--format", "structured"])
    return code, json.loads(capsys.readouterr().out)


def test_succ_prevedel(capsys):
    code, report = _structured(capsys, ["succ", "prevedel"])
    assert code == 0
    assert report["values"]["succ"] == pytest.approx(5 / 6, abs=1e-9)
    assert report["checks"]["oracle_agreement"]
    assert report["certificates"]["encoder_pair"] == ["1", "2"]


def test_succ_uniform(capsys):
    code, report = _structured(capsys, ["succ", "uniform:inputs=3,outputs=2"])
    assert code == 0
    assert report["values"]["succ"] == pytest.approx(0.5)


def test_malformed_channel_exits_2(tmp_path, caplog):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps({"inputs": ["a", "b"], "outputs": ["0", "1"], "matrix": [[0.5, 0.4], [0, 1]]})
    )
    assert main(["succ", str(path)]) == 2
    assert "row 0" in caplog.text


def test_unknown_input_exits_2():
    assert main(["succ", "no-such-file.json"]) == 2


def test_non_integer_generator_parameter_exits_2(caplog):
    assert main(["succ", "hashing:m=x"]) == 2
    assert "must be int" in caplog.text


def test_unknown_generator_parameter_exits_2(caplog):
    assert main(["succ", "hashing:m=2,q=3"]) == 2
    assert "Unknown parameter" in caplog.text


def test_succ_ns_hashing(capsys):
    code, report = _structured(capsys, ["succ-ns", "hashing:m=2"])
    assert code == 0
    assert report["values"]["succ_ns"] == pytest.approx(1.0, abs=1e-8)
    assert len(report["certificates"]["center"]) == 6


def test_succ_q2_trivial_channels(capsys):
    code, report = _structured(capsys, ["succ-q2", "uniform"] + FAST)
    assert code == 0
    assert report["values"]["succ_q"] == pytest.approx(0.5, abs=1e-7)
    code, report = _structured(capsys, ["succ-q2", "noiseless"] + FAST)
    assert code == 0
    assert report["values"]["succ_q"] == pytest.approx(1.0, abs=1e-7)
    assert report["options"]["family_restarts"] == 3


def test_succ_q2_report_is_reproducible(capsys):
    argv = ["succ-q2", "prevedel", "--seed", "7", "--format", "structured"] + FAST
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    report = json.loads(first)
    assert len(report["certificates"]["family"]) == 6
    assert report["values"]["succ_q"] <= report["values"]["succ_ns"] + 1e-6


def test_succ_q2_reports_dual_gap(capsys):
    code, report = _structured(capsys, ["succ-q2", "prevedel"] + FAST)
    assert code == 0
    assert report["checks"]["dual_gap"]
    assert report["values"]["gap"] <= 1e-4


def test_succ_q2_uncertified_radius_exits_4(capsys, monkeypatch):
    solve = assist.succ_qn

    def loose(ch, n, opts):
        result = solve(ch, n, opts)
        weak = replace(result.radius, dual_lower_bound=result.radius.radius - 0.1)
        return replace(result, radius=weak)

    monkeypatch.setattr(assist, "succ_qn", loose)
    code, report = _structured(capsys, ["succ-q2", "prevedel"] + FAST)
    assert code == 4
    assert not report["checks"]["dual_gap"]
    assert not report["ok"]


def test_locfrac(capsys):
    code, report = _structured(capsys, ["locfrac", "tsirelson"])
    assert code == 0
    assert report["values"]["local_fraction"] == pytest.approx(2 - math.sqrt(2), abs=1e-6)
    assert report["values"]["chsh"][0] == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    code, report = _structured(capsys, ["locfrac", "pr:j=1,sign=+"])
    assert report["values"]["local_fraction"] == pytest.approx(0.0, abs=1e-9)
    code, report = _structured(capsys, ["locfrac", "deterministic:index=5"])
    assert report["values"]["local_fraction"] == pytest.approx(1.0, abs=1e-9)


def test_simulate_perfect_protocol(tmp_path, capsys):
    saved = tmp_path / "witness.json"
    code, report = _structured(
        capsys, ["simulate", "hashing:m=2", "device-e:m=2", "--save-strategy", str(saved)]
    )
    assert code == 0
    assert report["values"]["optimum"] == pytest.approx(1.0, abs=1e-12)
    assert report["values"]["bound_thm5"] == pytest.approx(1.0, abs=1e-12)
    assert report["values"]["thm5_equality"] is True
    assert saved.exists()

    code, replay = _structured(
        capsys, ["simulate", "hashing:m=2", "device-e:m=2", "--strategy", str(saved)]
    )
    assert code == 0
    assert replay["values"]["value"] == pytest.approx(1.0, abs=1e-12)


def test_simulate_fixed_output_device(capsys):
    code, report = _structured(capsys, ["simulate", "prevedel", "fixed-output"])
    assert code == 0
    assert report["values"]["optimum"] == pytest.approx(report["values"]["succ"], abs=1e-12)


def test_simulate_budget_exits_3():
    assert main(["simulate", "hashing:m=3", "device-e:m=3"]) == 3


def test_gen_is_bit_exact(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gen", "prevedel", "--out", str(a)]) == 0
    assert main(["gen", "prevedel", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_hashing_and_device(tmp_path, capsys):
    chan = tmp_path / "t3.json"
    assert main(["gen", "hashing", "--m", "3", "--out", str(chan), "--format", "structured"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert (report["values"]["inputs"], report["values"]["outputs"]) == (8, 14)

    box = tmp_path / "e2.json"
    code = main(["gen", "device-e", "--m", "2", "--out", str(box), "--format", "structured"])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["values"]["nonsignaling"] is True
    code, report = _structured(capsys, ["simulate", str(chan), "tsirelson"])
    assert code == 0


def test_verify_bounds_random(capsys):
    code, report = _structured(capsys, ["verify-bounds", "--random", "4", "--seed", "3"])
    assert code == 0
    assert report["values"]["thm4_count"] == 4
    assert report["checks"]["thm5"]


def test_verify_bounds_files(tmp_path, capsys):
    chan = tmp_path / "prevedel.json"
    main(["gen", "prevedel", "--out", str(chan)])
    capsys.readouterr()
    code, report = _structured(
        capsys, ["verify-bounds", "--channel", str(chan), "--correlation", "tsirelson"]
    )
    assert code == 0
    assert report["checks"]["cor9"]
    assert report["checks"]["thm6"]


def test_verify_bounds_needs_input():
    assert main(["verify-bounds"]) == 2


def test_report_written_to_out(tmp_path, capsys):
    out = tmp_path / "report.txt"
    assert main(["succ", "prevedel", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().rstrip().endswith("OK")
