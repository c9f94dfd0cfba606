"""
Local filesystem storage for channels, correlations, strategies and reports.
Documents are JSON; floats are written at full repr precision.
"""
import json
import logging
from pathlib import Path
from typing import Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from bitassist.core.config import settings
from bitassist.core.errors import InputValidationError
from bitassist.schemas.channel import ChannelFile
from bitassist.schemas.correlation import CorrelationFile
from bitassist.schemas.strategy import StrategyFile
from bitassist.models.channel import Channel
from bitassist.models.correlation import Correlation
from bitassist.models.strategy import ProtocolStrategy

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)
PathLike = Union[str, Path]


def _describe(error: ValidationError) -> str:
    first = error.errors()[0]
    where = ".".join(str(part) for part in first["loc"]) or "document"
    return f"{where}: {first['msg']}"


def read_document(path: PathLike, model: Type[Model]) -> Model:
    """Parse a JSON file into a schema model; failures name the file and field"""
    path = Path(path)
    if not path.is_file():
        raise InputValidationError(f"File not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputValidationError(f"Cannot read {path}", detail=str(e))
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise InputValidationError(f"Invalid {model.__name__} in {path}", detail=_describe(e))


def dump_document(model: BaseModel) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline"""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def write_document(model: BaseModel, path: PathLike) -> str:
    """
    Write a schema model to disk.
    Returns the file path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_document(model))
    logger.debug(f"Wrote {path}")
    return str(path)


def load_channel(path: PathLike, renormalize: bool = False) -> Channel:
    doc = read_document(path, ChannelFile)
    if renormalize:
        doc = doc.model_copy(update={"renormalize": True})
    try:
        return doc.to_channel()
    except InputValidationError as e:
        raise InputValidationError(f"Invalid channel in {path}", detail=str(e))


def save_channel(ch: Channel, path: PathLike) -> str:
    return write_document(ChannelFile.from_channel(ch), path)


def load_correlation(path: PathLike) -> Correlation:
    doc = read_document(path, CorrelationFile)
    try:
        return doc.to_correlation()
    except InputValidationError as e:
        raise InputValidationError(f"Invalid correlation in {path}", detail=str(e))


def save_correlation(d: Correlation, path: PathLike) -> str:
    return write_document(CorrelationFile.from_correlation(d), path)


def load_strategy(path: PathLike, ch: Channel, d: Correlation) -> ProtocolStrategy:
    return read_document(path, StrategyFile).to_strategy(ch, d)


def save_strategy(strat: ProtocolStrategy, ch: Channel, d: Correlation, path: PathLike) -> str:
    return write_document(StrategyFile.from_strategy(strat, ch, d), path)


def default_output_path(stem: str) -> Path:
    """Where `gen` writes when no --out is given"""
    return settings.OUTPUT_DIR / f"{stem}.json"
