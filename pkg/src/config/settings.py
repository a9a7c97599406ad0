from functools import lru_cache
from pathlib import Path
from typing import Any

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from utils.errors import ConfigError

# Find the project root (where .env lives)
_PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent

# Budget fields an experiment config may override.
BUDGET_FIELDS = frozenset(
    {
        "bfs_max_keys",
        "enumeration_max_n",
        "enumeration_max_paths",
        "tree_table_max_n",
        "lattice_table_max_n_1d",
        "lattice_table_max_n_2d",
        "lattice_table_max_n_3d",
        "lattice_return_max_n",
        "grid_return_max_cells",
        "lamplighter_exact_max_n",
        "projection_max_n",
        "rejection_max_attempts",
    }
)


class Settings(BaseSettings):
    app_name: str = Field(default="bridgewalk", alias="BRIDGEWALK_APP_NAME")
    log_level: str = Field(default="INFO", alias="BRIDGEWALK_LOG_LEVEL")
    workers: int = Field(default=1, ge=1, alias="BRIDGEWALK_WORKERS")

    # Breadth-first search / enumeration budgets
    bfs_max_keys: int = Field(default=20_000_000, ge=1, alias="BRIDGEWALK_BFS_MAX_KEYS")
    enumeration_max_n: int = Field(default=8, ge=0, alias="BRIDGEWALK_ENUMERATION_MAX_N")
    enumeration_max_paths: int = Field(
        default=5_000_000, ge=1, alias="BRIDGEWALK_ENUMERATION_MAX_PATHS"
    )

    # Backward tables
    tree_table_max_n: int = Field(default=8192, ge=0, alias="BRIDGEWALK_TREE_TABLE_MAX_N")
    lattice_table_max_n_1d: int = Field(
        default=4096, ge=0, alias="BRIDGEWALK_LATTICE_TABLE_MAX_N_1D"
    )
    lattice_table_max_n_2d: int = Field(
        default=256, ge=0, alias="BRIDGEWALK_LATTICE_TABLE_MAX_N_2D"
    )
    lattice_table_max_n_3d: int = Field(
        default=48, ge=0, alias="BRIDGEWALK_LATTICE_TABLE_MAX_N_3D"
    )

    # Return-probability kernels
    lattice_return_max_n: int = Field(default=20_000, ge=0, alias="BRIDGEWALK_LATTICE_RETURN_MAX_N")
    grid_return_max_cells: int = Field(
        default=50_000_000, ge=1, alias="BRIDGEWALK_GRID_RETURN_MAX_CELLS"
    )
    lamplighter_exact_max_n: int = Field(
        default=120, ge=0, alias="BRIDGEWALK_LAMPLIGHTER_EXACT_MAX_N"
    )
    projection_max_n: int = Field(default=200, ge=0, alias="BRIDGEWALK_PROJECTION_MAX_N")
    mc_return_trials: int = Field(default=20_000, ge=1, alias="BRIDGEWALK_MC_RETURN_TRIALS")

    # Lamplighter rejection sampler
    rejection_max_attempts: int = Field(
        default=1_000_000, ge=1, alias="BRIDGEWALK_REJECTION_MAX_ATTEMPTS"
    )

    model_config = SettingsConfigDict(
        env_file=str(_PROJECT_ROOT / ".env"),
        env_file_encoding="utf-8",
        extra="ignore",
        populate_by_name=True,
    )

    def lattice_table_max_n(self, dim: int) -> int:
        """Backward-table cap for a lattice of the given dimension (0 when unsupported)."""
        caps = {
            1: self.lattice_table_max_n_1d,
            2: self.lattice_table_max_n_2d,
            3: self.lattice_table_max_n_3d,
        }
        return caps.get(dim, 0)

    def with_budgets(self, overrides: dict[str, int]) -> "Settings":
        """Return a validated copy with budget overrides applied."""
        unknown = sorted(set(overrides) - BUDGET_FIELDS)
        if unknown:
            raise ConfigError(f"unknown budget override(s): {', '.join(unknown)}", field="budgets")
        bad = [name for name, value in overrides.items() if not isinstance(value, int) or value < 0]
        if bad:
            raise ConfigError(
                f"budget override(s) must be non-negative integers: {', '.join(sorted(bad))}",
                field="budgets",
            )
        return self.model_copy(update=overrides)

    def as_log_context(self) -> dict[str, Any]:
        """
        Convenience helper for structured logging.
        """
        return {
            "app_name": self.app_name,
            "log_level": self.log_level,
            "workers": self.workers,
        }


@lru_cache
def get_settings() -> Settings:
    return Settings()
