from typing import Dict

from pydantic import BaseModel

from bitassist.core.errors import InputValidationError
from bitassist.models.channel import Channel
from bitassist.models.correlation import Correlation
from bitassist.models.strategy import ProtocolStrategy

BITS = ("0", "1")


class StrategyFile(BaseModel):
    """
    Deterministic protocol as four label-keyed tables:

    e1[a] -> r, e2[a][p] -> x, d1[y] -> s, d2[y][q] -> guessed bit
    """

    e1: Dict[str, str]
    e2: Dict[str, Dict[str, str]]
    d1: Dict[str, str]
    d2: Dict[str, Dict[str, str]]

    def to_strategy(self, ch: Channel, d: Correlation) -> ProtocolStrategy:
        R, S, P, Q = d.alphabets

        def lookup(table: Dict[str, str], keys, values, field: str):
            missing = [k for k in keys if k not in table]
            if missing:
                raise InputValidationError(f"Strategy table {field} has no entry for {missing[0]!r}")
            out = []
            for k in keys:
                if table[k] not in values:
                    raise InputValidationError(
                        f"Strategy table {field}[{k!r}] = {table[k]!r} is not a valid label"
                    )
                out.append(values.index(table[k]))
            return tuple(out)

        for name, table in (("e2", self.e2), ("d2", self.d2)):
            keys = BITS if name == "e2" else ch.outputs
            for k in keys:
                if k not in table:
                    raise InputValidationError(f"Strategy table {name} has no entry for {k!r}")

        return ProtocolStrategy(
            e1=lookup(self.e1, BITS, R, "e1"),
            e2=tuple(lookup(self.e2[a], P, ch.inputs, f"e2[{a}]") for a in BITS),
            d1=lookup(self.d1, ch.outputs, S, "d1"),
            d2=tuple(lookup(self.d2[y], Q, BITS, f"d2[{y}]") for y in ch.outputs),
        )

    @classmethod
    def from_strategy(cls, strat: ProtocolStrategy, ch: Channel, d: Correlation) -> "StrategyFile":
        R, S, P, Q = d.alphabets
        return cls(
            e1={a: R[strat.e1[i]] for i, a in enumerate(BITS)},
            e2={a: {p: ch.inputs[x] for p, x in zip(P, strat.e2[i])} for i, a in enumerate(BITS)},
            d1={y: S[s] for y, s in zip(ch.outputs, strat.d1)},
            d2={y: {q: BITS[g] for q, g in zip(Q, row)} for y, row in zip(ch.outputs, strat.d2)},
        )
