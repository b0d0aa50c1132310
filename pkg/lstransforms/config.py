"""
Library Configuration

Loads numerical defaults from environment variables (prefix ``LS_``) or a
``.env`` file using Pydantic Settings.

- ``LS_MAX_N`` overrides the coefficient index ceiling N_max
- ``LS_ABS_TOL`` / ``LS_REL_TOL`` / ``LS_MAX_SUBDIVISIONS`` set the default quadrature tolerance
- ``LS_COEFFICIENT_TOL`` is the coefficient accuracy that precision warnings are measured against
"""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Settings loaded from ``LS_*`` environment variables.

    Every field has a default, so the library works without any environment.
    """

    # Precision envelope
    # cosh(12*pi) ~ 1.2e16 is where double precision stops resolving coefficients
    max_n: int = Field(
        default=12,
        ge=0,
        description="Largest coefficient index recovered without a precision warning (N_max)",
    )
    coefficient_tol: float = Field(
        default=1e-6,
        gt=0,
        description="Requested accuracy of recovered coefficients",
    )

    # Quadrature defaults
    abs_tol: float = Field(default=1e-12, gt=0, description="Default absolute quadrature tolerance")
    rel_tol: float = Field(default=1e-10, gt=0, description="Default relative quadrature tolerance")
    max_subdivisions: int = Field(
        default=2000,
        ge=1,
        description="Default panel budget of the adaptive integrator",
    )

    # Runtime
    workers: int = Field(default=1, ge=1, description="Threads used to fan out CLI grids")
    output_dir: str = Field(default=".", description="Base directory for relative report paths")
    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
    )

    model_config = SettingsConfigDict(
        env_prefix="LS_",
        env_file=".env",
        extra="allow",
        case_sensitive=False,
    )

    @field_validator("log_level")
    @classmethod
    def _upper_log_level(cls, value: str) -> str:
        level = value.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value!r}")
        return level


# Singleton imported throughout the package
settings = Settings()
