# core/settings.py
import os
from typing import List, Literal, Optional, Tuple
from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


DEFAULT_HARDY_RADII: Tuple[float, ...] = (
    0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99
)


class Settings(BaseSettings):
    # --- Numerical Tolerances ---
    tol_ineq_rel: float = Field(1e-9, gt=0)       # tol_ineq = tol_ineq_rel * (1 + |lhs| + |rhs|)
    psd_clamp_rel: float = Field(1e-10, gt=0)     # eigenvalues >= -psd_clamp_rel * ||H|| are clamped
    comm_rel: float = Field(1e-8, gt=0)           # tau_comm = comm_rel * (1 + ||A||)(1 + ||B||)
    inv_rel: float = Field(1e-10, gt=0)           # smallest singular value > inv_rel * ||A||
    equality_tol: float = Field(1e-9, gt=0)
    min_t_tol: float = Field(1e-6, gt=0)

    # --- Hardy Space Model ---
    hardy_trunc: int = Field(64, ge=1)
    hardy_radii: List[float] = Field(default_factory=lambda: list(DEFAULT_HARDY_RADII))
    hardy_angles: int = Field(32, ge=1)
    hardy_r_max: float = Field(0.999, gt=0, le=0.999)
    hardy_mz_threshold: float = Field(0.98, gt=0, le=1)

    # --- Direct Sums ---
    ds_weight_steps: int = Field(5, ge=2)
    ds_phase_steps: int = Field(8, ge=1)
    ds_max_kernels: int = Field(200_000, gt=0)
    ds_max_copies: int = Field(4, ge=2)

    # --- Pair Scan ---
    scan_chunk_rows: int = Field(512, gt=0)
    scan_workers: int = Field(1, ge=1)

    # --- Verification Campaign ---
    campaign_seed: int = Field(20240517, ge=0, lt=2**64)
    campaign_cases_per_class: int = Field(200, ge=0)
    campaign_workers: int = Field(1, ge=1)
    campaign_dims: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 6])
    campaign_hardy_truncs: List[int] = Field(default_factory=lambda: [8, 16])
    campaign_hardy_radii: List[float] = Field(default_factory=lambda: [0.0, 0.3, 0.6, 0.9])
    campaign_hardy_angles: int = Field(8, ge=1)
    campaign_block_dims: List[int] = Field(default_factory=lambda: [2, 3])
    grid_t: List[float] = Field(default_factory=lambda: [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0])
    grid_r: List[float] = Field(default_factory=lambda: [1.0, 1.5, 2.0, 3.0])
    grid_s: List[float] = Field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])
    grid_alpha: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0])
    grid_lambda: List[float] = Field(default_factory=lambda: [0.0, 1.0, 5.0])

    # --- File Paths & Logging ---
    data_dir_name: str = "data"
    log_to_file: bool = False
    log_file_name: str = "berezin.log"
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"
    log_max_bytes: int = Field(5 * 1024 * 1024, gt=0)
    log_backup_count: int = Field(3, ge=0)

    model_config = SettingsConfigDict(
        env_prefix="BEREZIN_", env_file=".env", extra="ignore", env_file_encoding="utf-8"
    )

    @field_validator("hardy_radii", "campaign_hardy_radii")
    @classmethod
    def validate_radii(cls, v: List[float]) -> List[float]:
        """Radii must lie in [0, 1); the cap against hardy_r_max is checked after all fields load."""
        if not v:
            raise ValueError("radius grid must not be empty")
        for r in v:
            if not 0.0 <= r < 1.0:
                raise ValueError(f"radius {r} outside [0, 1)")
        return sorted(set(v))

    @field_validator("grid_t", "grid_s")
    @classmethod
    def validate_unit_grid(cls, v: List[float]) -> List[float]:
        if not v or any(not 0.0 <= x <= 1.0 for x in v):
            raise ValueError("grid values must lie in [0, 1] and the grid must not be empty")
        return v

    @field_validator("grid_r")
    @classmethod
    def validate_r_grid(cls, v: List[float]) -> List[float]:
        if not v or any(x < 1.0 for x in v):
            raise ValueError("Orlicz exponents must satisfy r >= 1")
        return v

    @field_validator("grid_alpha", "grid_lambda")
    @classmethod
    def validate_nonnegative_grid(cls, v: List[float]) -> List[float]:
        if not v or any(x < 0.0 for x in v):
            raise ValueError("grid values must be nonnegative")
        return v

    @field_validator("campaign_dims", "campaign_hardy_truncs", "campaign_block_dims")
    @classmethod
    def validate_positive_ints(cls, v: List[int]) -> List[int]:
        if not v or any(x < 1 for x in v):
            raise ValueError("dimension lists must hold positive integers")
        return v

    @model_validator(mode="after")
    def _validate_caps(self) -> "Settings":
        for r in self.hardy_radii + self.campaign_hardy_radii:
            if r > self.hardy_r_max:
                raise ValueError(f"radius {r} exceeds hardy_r_max={self.hardy_r_max}")
        return self

    @property
    def project_root_dir(self) -> str:
        """Project root relative to this file."""
        return os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

    def get_data_path(self, filename: Optional[str] = None) -> str:
        path = os.path.join(self.project_root_dir, self.data_dir_name)
        if filename:
            return os.path.join(path, filename)
        return path

    def get_log_file_path(self) -> str:
        return self.get_data_path(self.log_file_name)

    def ensure_data_dir_exists(self) -> None:
        full_data_dir_path = self.get_data_path()
        if not os.path.exists(full_data_dir_path):
            os.makedirs(full_data_dir_path, exist_ok=True)

    def tol_ineq(self, lhs: float, rhs: float) -> float:
        """Relative inequality tolerance for one bound instance."""
        return self.tol_ineq_rel * (1.0 + abs(lhs) + abs(rhs))


settings = Settings()
