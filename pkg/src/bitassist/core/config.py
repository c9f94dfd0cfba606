from pathlib import Path
from typing import Tuple, Type

from pydantic_settings import BaseSettings, PydanticBaseSettingsSource


class Settings(BaseSettings):
    PROJECT_NAME: str = "BitAssist"
    VERSION: str = "1.0.0"

    # Reproducibility
    DEFAULT_SEED: int = 0

    # Operator-norm radius (projected subgradient + polish)
    RAD_RESTARTS: int = 32
    RAD_ITERATIONS: int = 5000
    RAD_STEP_A: float = 1.0
    RAD_STEP_B: float = 10.0
    RAD_TOL_QUBIT: float = 1e-7
    RAD_TOL_GENERAL: float = 1e-6
    RAD_GAP_TOL: float = 1e-4

    # Projection-family search for Succ_Q
    FAMILY_RESTARTS: int = 64
    FAMILY_SEESAW_ROUNDS: int = 40
    ANGLE_TOL: float = 1e-7
    ANGLE_SWEEPS: int = 4

    # Protocol enumeration
    ENUMERATION_BUDGET: int = 2**24

    # Linear algebra / LP
    LP_PIVOT_TOL: float = 1e-10
    LP_MAX_PIVOTS: int = 20000
    JACOBI_MAX_SWEEPS: int = 100
    JACOBI_OFFDIAG_TOL: float = 1e-12

    # Local paths
    OUTPUT_DIR: Path = Path("reports")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # Runs depend on flags and files only; environment and .env are ignored.
        return (init_settings,)


settings = Settings()
