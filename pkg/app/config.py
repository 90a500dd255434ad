from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import field_validator

# Load environment variables if python-dotenv is available
try:
    from dotenv import load_dotenv
    load_dotenv()
except Exception:
    pass


class Settings(BaseSettings):
    # Parallelism (0 = physical core count)
    WORKERS: int = 1
    BATCH_SIZE: int = 1 << 17

    # Enumeration limits
    BUDGET: int = 500_000_000
    GROUP_CAP: int = 20_000
    EXHAUSTIVE_LIMIT: int = 10_000_000
    SCAN_LIMIT: int = 121

    # Simplicity testing
    NORTON_ROUNDS: int = 20
    SAMPLED_ROUNDS: int = 1000

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        if isinstance(v, str):
            return v.strip().upper() or "INFO"
        return v

    @field_validator("WORKERS", "BATCH_SIZE", "BUDGET", "GROUP_CAP", "EXHAUSTIVE_LIMIT",
                     "SCAN_LIMIT", "NORTON_ROUNDS", "SAMPLED_ROUNDS")
    @classmethod
    def non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("must be non-negative")
        return v

    # Pydantic v2 config
    model_config = SettingsConfigDict(env_file=".env", env_prefix="AUTALG_", extra="ignore")


settings = Settings()
