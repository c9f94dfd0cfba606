import json
from pathlib import Path

import numpy as np
import pytest

from bitassist import schemas
from bitassist.core.errors import InputValidationError
from bitassist.models.status import ReportFormat
from bitassist.models.strategy import ProtocolStrategy
from bitassist.schemas.report import Report
from bitassist.schemas.strategy import StrategyFile
from bitassist.services import storage
from bitassist.services.correlations import device_E, pr_box
from bitassist.services.formatter import format_report
from bitassist.services.protocol import optimal_assisted_succ


def _write(path, document):
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def test_channel_file_is_bit_exact(tmp_path, prevedel):
    first = storage.save_channel(prevedel, tmp_path / "a.json")
    second = storage.save_channel(storage.load_channel(first), tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert np.array_equal(storage.load_channel(second).matrix, prevedel.matrix)


def test_row_sum_error_names_file_and_row(tmp_path):
    path = _write(
        tmp_path / "bad.json",
        {"inputs": ["a", "b"], "outputs": ["0", "1"], "matrix": [[0.5, 0.5], [0.5, 0.4]]},
    )
    with pytest.raises(InputValidationError) as info:
        storage.load_channel(path)
    assert "bad.json" in str(info.value)
    assert "row 1" in str(info.value)


def test_renormalize_on_ingestion(tmp_path):
    path = _write(
        tmp_path / "drift.json",
        {"inputs": ["a", "b"], "outputs": ["0", "1"], "matrix": [[0.45, 0.45], [0.1, 0.8]]},
    )
    ch = storage.load_channel(path, renormalize=True)
    assert np.allclose(ch.rows.sum(axis=1), 1.0)


def test_ragged_matrix_names_field(tmp_path):
    path = _write(
        tmp_path / "ragged.json",
        {"inputs": ["a", "b"], "outputs": ["0", "1"], "matrix": [[1.0, 0.0], [1.0]]},
    )
    with pytest.raises(InputValidationError, match="row 1"):
        storage.load_channel(path)


def test_missing_field(tmp_path):
    path = _write(tmp_path / "partial.json", {"inputs": ["a"], "matrix": [[1.0]]})
    with pytest.raises(InputValidationError, match="outputs"):
        storage.load_channel(path)


def test_missing_file(tmp_path):
    with pytest.raises(InputValidationError, match="not found"):
        storage.load_channel(tmp_path / "nope.json")


def test_correlation_round_trip(tmp_path):
    box = device_E(2)
    path = storage.save_correlation(box, tmp_path / "e.json")
    loaded = storage.load_correlation(path)
    assert loaded.alphabets == box.alphabets
    assert np.array_equal(loaded.table, box.table)


def test_correlation_shape_mismatch(tmp_path):
    path = _write(
        tmp_path / "box.json",
        {"alphabets": [["0"], ["0"], ["0", "1"], ["0"]], "table": [[[[1.0]]]]},
    )
    with pytest.raises(InputValidationError, match="shape"):
        storage.load_correlation(path)


def test_correlation_needs_four_alphabets(tmp_path):
    path = _write(tmp_path / "box.json", {"alphabets": [["0"], ["0"]], "table": [[[[1.0]]]]})
    with pytest.raises(InputValidationError, match="alphabets"):
        storage.load_correlation(path)


def test_strategy_round_trip(tmp_path, hashing2):
    device = device_E(2)
    strat = optimal_assisted_succ(hashing2, device).strategy
    path = storage.save_strategy(strat, hashing2, device, tmp_path / "s.json")
    assert storage.load_strategy(path, hashing2, device) == strat


def test_strategy_labels_are_checked(prevedel):
    box = pr_box(1, "+")
    strat = ProtocolStrategy((0, 1), ((0, 1), (2, 3)), (0,) * 6, ((0, 1),) * 6)
    doc = StrategyFile.from_strategy(strat, prevedel, box)
    assert doc.e2["1"] == {"0": "3", "1": "4"}

    broken = doc.model_copy(update={"d1": {y: "0" for y in ["1", "2", "3"]}})
    with pytest.raises(InputValidationError, match="d1"):
        broken.to_strategy(prevedel, box)
    unknown = doc.model_copy(update={"e1": {"0": "7", "1": "0"}})
    with pytest.raises(InputValidationError, match="not a valid label"):
        unknown.to_strategy(prevedel, box)


def test_report_rendering():
    report = Report(command="succ", inputs={"channel": "prevedel"})
    report.values["succ"] = 5 / 6
    report.add_check("oracle_agreement", True)
    human = format_report(report)
    assert "[PASS] oracle_agreement" in human
    assert human.rstrip().endswith("OK")

    structured = format_report(report, ReportFormat.STRUCTURED)
    assert json.loads(structured)["values"]["succ"] == 5 / 6
    assert structured == format_report(report, ReportFormat.STRUCTURED)

    report.add_check("bound", False)
    assert not report.ok
    assert format_report(report).rstrip().endswith("FAILED")


def test_schemas_import_models_not_services():
    for source in Path(schemas.__file__).parent.glob("*.py"):
        text = source.read_text(encoding="utf-8")
        assert "bitassist.services" not in text, f"{source.name} imports from services"
