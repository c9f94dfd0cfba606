from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from bitassist.core.config import settings


class SolverOptions(BaseModel):
    """Knobs shared by the radius solver and the projection-family search"""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=0, ge=0, lt=2**64)
    restarts: int = Field(default=32, ge=0)
    iterations: int = Field(default=5000, ge=0)
    tol: Optional[float] = Field(default=None, gt=0)  # None: 1e-7 for n=2, 1e-6 otherwise
    step_a: float = Field(default=1.0, gt=0)
    step_b: float = Field(default=10.0, gt=0)
    family_restarts: int = Field(default=64, ge=0)
    seesaw_rounds: int = Field(default=40, ge=1)
    angle_sweeps: int = Field(default=4, ge=0)
    angle_tol: float = Field(default=1e-7, gt=0)

    @classmethod
    def from_settings(cls, **overrides) -> "SolverOptions":
        """Defaults from the global Settings, then explicit overrides (None ignored)"""
        values = dict(
            seed=settings.DEFAULT_SEED,
            restarts=settings.RAD_RESTARTS,
            iterations=settings.RAD_ITERATIONS,
            step_a=settings.RAD_STEP_A,
            step_b=settings.RAD_STEP_B,
            family_restarts=settings.FAMILY_RESTARTS,
            seesaw_rounds=settings.FAMILY_SEESAW_ROUNDS,
            angle_sweeps=settings.ANGLE_SWEEPS,
            angle_tol=settings.ANGLE_TOL,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def tolerance_for(self, dim: int) -> float:
        if self.tol is not None:
            return self.tol
        return settings.RAD_TOL_QUBIT if dim == 2 else settings.RAD_TOL_GENERAL
