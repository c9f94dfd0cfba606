import numpy as np
import pytest

from bitassist.core.errors import InputValidationError
from bitassist.models.channel import Channel
from bitassist.models.correlation import Correlation
from bitassist.services.correlations import is_nonsignaling
from bitassist.services.generators import GENERATORS, get_generator, list_all_generators


def test_every_generator_produces_its_kind():
    for name in GENERATORS:
        generator = get_generator(name)
        artifact = generator.generate()
        expected = Channel if generator.kind == "channel" else Correlation
        assert isinstance(artifact, expected), name


def test_name_normalization():
    assert get_generator("Device_E").name == "device-e"


def test_unknown_generator():
    with pytest.raises(InputValidationError, match="Unknown generator"):
        get_generator("bsc")


def test_parameters_reach_constructors():
    assert get_generator("hashing").generate(m=3).num_inputs == 8
    assert get_generator("uniform").generate(inputs=3, outputs=5).rows.shape == (3, 5)
    assert get_generator("pr").generate(j=2, sign="-").name == "pr-2-"
    assert is_nonsignaling(get_generator("device-e").generate(m=3))


def test_parameter_validation():
    with pytest.raises(InputValidationError):
        get_generator("deterministic").generate(index=16)
    with pytest.raises(InputValidationError):
        get_generator("noiseless").generate(inputs=0)


def test_build_coerces_string_parameters():
    assert get_generator("hashing").build(m="3").num_inputs == 8
    assert get_generator("pr").build(j="2", sign="-").name == "pr-2-"
    assert get_generator("tsirelson").build().is_binary


def test_build_rejects_bad_and_unknown_parameters():
    with pytest.raises(InputValidationError, match="must be int"):
        get_generator("hashing").build(m="x")
    with pytest.raises(InputValidationError, match="Unknown parameter"):
        get_generator("hashing").build(m="2", q="3")
    with pytest.raises(InputValidationError, match="accepted: none"):
        get_generator("prevedel").build(m="2")


def test_listing():
    listing = list_all_generators()
    assert listing["hashing"] == {"kind": "channel", "parameters": ["m"]}
    assert listing["tsirelson"]["parameters"] == []
    assert np.all([info["kind"] in ("channel", "correlation") for info in listing.values()])
