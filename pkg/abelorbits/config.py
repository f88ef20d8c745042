"""
Runtime configuration for abelorbits

Values come from the environment (optionally a .env file at the project root)
and are validated into a Settings model. CLI flags override them per run.
"""
import os
import logging

from dotenv import load_dotenv
from pydantic import BaseModel, Field

# Look for .env in parent directory (project root)
env_path = os.path.join(os.path.dirname(__file__), '..', '.env')
load_dotenv(dotenv_path=env_path)

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    """Rank ceilings, worker count, cache switch and log level"""
    lengths_max_rank_a: int = Field(ge=1, le=10, default=7, description="Largest A rank in the length suite (sl_8)")
    lengths_max_rank_b: int = Field(ge=1, le=8, default=5)
    lengths_max_rank_c: int = Field(ge=1, le=8, default=5)
    lengths_max_rank_d: int = Field(ge=2, le=8, default=5)

    conjecture_max_rank_a: int = Field(ge=1, le=8, default=6, description="Largest A rank in the poset suite (sl_7)")
    conjecture_max_rank_b: int = Field(ge=1, le=8, default=6)
    conjecture_max_rank_c: int = Field(ge=1, le=7, default=5)
    conjecture_max_rank_d: int = Field(ge=3, le=7, default=5)

    bruhat_oracle_max_rank: int = Field(ge=1, le=5, default=4, description="Cover-graph oracle ceiling for B/C/D")
    bruhat_oracle_max_rank_a: int = Field(ge=1, le=6, default=5, description="Cover-graph oracle ceiling for A")

    workers: int = Field(ge=1, le=64, default=1)
    cache_enabled: bool = True
    log_level: str = Field(default="WARNING", pattern="^(DEBUG|INFO|WARNING|ERROR)$")

    def lengths_ceiling(self, family: str) -> int:
        return getattr(self, f"lengths_max_rank_{family.lower()}")

    def conjecture_ceiling(self, family: str) -> int:
        return getattr(self, f"conjecture_max_rank_{family.lower()}")

    def oracle_ceiling(self, family: str) -> int:
        if family == "A":
            return self.bruhat_oracle_max_rank_a
        return self.bruhat_oracle_max_rank


def load_settings() -> Settings:
    """Build Settings from ABELORBITS_* environment variables"""
    values = {}
    for name in Settings.model_fields:
        raw = os.getenv(f"ABELORBITS_{name.upper()}")
        if raw is not None:
            values[name] = raw
    if "cache_enabled" in values:
        values["cache_enabled"] = values["cache_enabled"].lower() == "true"
    if "log_level" in values:
        values["log_level"] = values["log_level"].upper()
    return Settings(**values)


settings = load_settings()
