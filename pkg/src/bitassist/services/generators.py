"""
Named generators for the channels and devices used throughout the package.
The `gen` command looks generators up here.
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, Union

from pydantic import TypeAdapter, ValidationError

from bitassist.core.errors import InputValidationError
from bitassist.models.channel import Channel
from bitassist.models.correlation import Correlation
from bitassist.services.channels import (
    make_hashing_channel,
    make_noiseless,
    make_prevedel,
    make_uniform,
)
from bitassist.services.correlations import (
    deterministic_boxes,
    device_E,
    fixed_output_box,
    pr_box,
    tsirelson_box,
)

Artifact = Union[Channel, Correlation]


class Generator(ABC):
    """Base class for named artifact generators"""

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @property
    @abstractmethod
    def kind(self) -> str:
        """Either "channel" or "correlation" """
        pass

    # Keyword parameters generate() accepts, with their types
    parameters: Dict[str, type] = {}

    @abstractmethod
    def generate(self, **params) -> Artifact:
        pass

    def build(self, **raw: Any) -> Artifact:
        """Coerce raw (often string) parameters to their declared types, then generate"""
        unknown = sorted(set(raw) - set(self.parameters))
        if unknown:
            allowed = ", ".join(self.parameters) or "none"
            raise InputValidationError(
                f"Unknown parameter(s) {unknown} for generator {self.name!r}; accepted: {allowed}"
            )
        params = {}
        for key, value in raw.items():
            try:
                params[key] = TypeAdapter(self.parameters[key]).validate_python(value)
            except ValidationError:
                expected = self.parameters[key].__name__
                raise InputValidationError(
                    f"Parameter {key}={value!r} for generator {self.name!r} must be {expected}"
                )
        return self.generate(**params)


class PrevedelGenerator(Generator):
    name = "prevedel"
    kind = "channel"

    def generate(self, **params) -> Channel:
        return make_prevedel()


class HashingGenerator(Generator):
    name = "hashing"
    kind = "channel"
    parameters = {"m": int}

    def generate(self, m: int = 2, **params) -> Channel:
        return make_hashing_channel(m)


class UniformGenerator(Generator):
    name = "uniform"
    kind = "channel"
    parameters = {"inputs": int, "outputs": int}

    def generate(self, inputs: int = 2, outputs: int = 2, **params) -> Channel:
        if inputs < 1 or outputs < 1:
            raise InputValidationError("uniform needs at least one input and one output")
        return make_uniform(inputs, outputs)


class NoiselessGenerator(Generator):
    name = "noiseless"
    kind = "channel"
    parameters = {"inputs": int}

    def generate(self, inputs: int = 2, **params) -> Channel:
        if inputs < 1:
            raise InputValidationError("noiseless needs at least one input")
        return make_noiseless(inputs)


class PrBoxGenerator(Generator):
    name = "pr"
    kind = "correlation"
    parameters = {"j": int, "sign": str}

    def generate(self, j: int = 1, sign: str = "+", **params) -> Correlation:
        return pr_box(j, sign)


class TsirelsonGenerator(Generator):
    name = "tsirelson"
    kind = "correlation"

    def generate(self, **params) -> Correlation:
        return tsirelson_box()


class DeterministicGenerator(Generator):
    name = "deterministic"
    kind = "correlation"
    parameters = {"index": int}

    def generate(self, index: int = 0, **params) -> Correlation:
        boxes = deterministic_boxes()
        if not 0 <= index < len(boxes):
            raise InputValidationError(f"Deterministic box index must be 0..{len(boxes) - 1}")
        return boxes[index]


class DeviceEGenerator(Generator):
    name = "device-e"
    kind = "correlation"
    parameters = {"m": int}

    def generate(self, m: int = 2, **params) -> Correlation:
        return device_E(m)


class FixedOutputGenerator(Generator):
    name = "fixed-output"
    kind = "correlation"
    parameters = {"inputs": int, "outputs": int}

    def generate(self, inputs: int = 2, outputs: int = 2, **params) -> Correlation:
        if inputs < 1 or outputs < 1:
            raise InputValidationError("fixed-output needs positive alphabet sizes")
        return fixed_output_box((inputs, inputs, outputs, outputs))


GENERATORS: Dict[str, type] = {
    cls.name: cls
    for cls in (
        PrevedelGenerator,
        HashingGenerator,
        UniformGenerator,
        NoiselessGenerator,
        PrBoxGenerator,
        TsirelsonGenerator,
        DeterministicGenerator,
        DeviceEGenerator,
        FixedOutputGenerator,
    )
}


def get_generator(name: str) -> Generator:
    """
    Look up a generator by name.

    Raises:
        InputValidationError: if the name is unknown
    """
    generator_class = GENERATORS.get(name.lower().replace("_", "-"))
    if not generator_class:
        raise InputValidationError(
            f"Unknown generator: {name}. Supported: {sorted(GENERATORS)}"
        )
    return generator_class()


def list_all_generators() -> Dict[str, Dict]:
    """Generator name -> kind and parameter names"""
    return {
        name: {"kind": cls.kind, "parameters": list(cls.parameters)}
        for name, cls in sorted(GENERATORS.items())
    }
