from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional
import os
from dotenv import load_dotenv

load_dotenv(override=True)

class Settings(BaseSettings):
    # Reproducibility
    seed: int = int(os.getenv("LXMIX_SEED", "42"))

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None

    # Parallelism (joblib workers for per-lX candidate generation)
    n_jobs: int = 1

    # Simulation limits
    max_sim_qubits: int = 14
    max_dense_expm_qubits: int = 10
    leakage_tolerance: float = 1e-10
    transition_tolerance: float = 1e-8

    # Stabilizer / restriction search limits
    group_enumeration_limit: int = 20
    kernel_exhaustive_limit: int = 64
    kernel_max_support: int = 3
    kernel_max_columns: int = 512
    subgroup_exhaustive_limit: int = 12
    subgroup_search_budget: int = 200_000

    # Selection
    exact_selection_limit: int = 25
    max_edge_candidates: int = 64

    # QAOA harness
    qaoa_restarts: int = 5
    qaoa_maxiter: int = 400
    maxcut_attachment: int = 2

    # Output
    float_format: str = "%.15g"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="LXMIX_",
        case_sensitive=False,
        extra="ignore",
    )

settings = Settings()
