from typing import List

from pydantic import BaseModel, Field, model_validator

from bitassist.models.channel import Channel


class ChannelFile(BaseModel):
    """On-disk channel: labels plus the row-stochastic matrix N(y|x)"""

    name: str = "channel"
    inputs: List[str] = Field(min_length=1)
    outputs: List[str] = Field(min_length=1)
    matrix: List[List[float]]
    renormalize: bool = Field(default=False, exclude=True)  # ingestion only

    @model_validator(mode="after")
    def check_shape(self) -> "ChannelFile":
        if len(self.matrix) != len(self.inputs):
            raise ValueError(
                f"matrix has {len(self.matrix)} rows but there are {len(self.inputs)} inputs"
            )
        for x, row in enumerate(self.matrix):
            if len(row) != len(self.outputs):
                raise ValueError(
                    f"matrix row {x} has {len(row)} entries, expected {len(self.outputs)}"
                )
        return self

    def to_channel(self) -> Channel:
        return Channel.build(
            self.matrix,
            inputs=self.inputs,
            outputs=self.outputs,
            name=self.name,
            renormalize=self.renormalize,
        )

    @classmethod
    def from_channel(cls, ch: Channel) -> "ChannelFile":
        return cls(
            name=ch.name,
            inputs=list(ch.inputs),
            outputs=list(ch.outputs),
            matrix=[[float(v) for v in row] for row in ch.matrix],
        )
