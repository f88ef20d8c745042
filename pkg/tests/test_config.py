"""
Tests for environment-driven settings
"""
import pytest
from pydantic import ValidationError

from abelorbits.config import Settings, load_settings


class TestSettings:
    """Test defaults, ceilings and environment overrides"""

    def test_defaults(self):
        s = Settings()
        assert s.workers == 1
        assert s.cache_enabled
        assert s.lengths_ceiling("A") == 7
        assert s.conjecture_ceiling("d") == 5

    def test_oracle_ceiling(self):
        s = Settings()
        assert s.oracle_ceiling("A") == 5
        assert s.oracle_ceiling("C") == 4

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("ABELORBITS_WORKERS", "4")
        monkeypatch.setenv("ABELORBITS_CACHE_ENABLED", "False")
        monkeypatch.setenv("ABELORBITS_LOG_LEVEL", "debug")
        s = load_settings()
        assert s.workers == 4
        assert not s.cache_enabled
        assert s.log_level == "DEBUG"

    def test_invalid_value(self, monkeypatch):
        monkeypatch.setenv("ABELORBITS_CONJECTURE_MAX_RANK_D", "2")
        with pytest.raises(ValidationError):
            load_settings()
