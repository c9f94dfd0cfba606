from typing import Any, Dict

from pydantic import BaseModel, Field


class Report(BaseModel):
    """
    Result of one CLI command. Every value in `values` is backed by an entry
    in `certificates` or a flag in `checks`; `ok` is the conjunction of the checks.
    """

    command: str
    inputs: Dict[str, str] = Field(default_factory=dict)
    options: Dict[str, Any] = Field(default_factory=dict)
    values: Dict[str, Any] = Field(default_factory=dict)
    certificates: Dict[str, Any] = Field(default_factory=dict)
    checks: Dict[str, bool] = Field(default_factory=dict)
    ok: bool = True

    def add_check(self, name: str, passed: bool) -> None:
        self.checks[name] = bool(passed)
        self.ok = self.ok and bool(passed)
