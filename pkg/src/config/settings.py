"""Configuration management"""

import os
import logging
from typing import Optional
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

_PACKAGED_CATALOG = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "geometry",
    "data",
    "catalog.json",
)


def _int_setting(name: str, default: int) -> int:
    """Safely parse integer environment variables, allowing blanks."""

    value = os.getenv(name)
    if value is None:
        return default

    value = value.strip()
    if value == "":
        return default

    try:
        return int(value)
    except ValueError as exc:
        raise ValueError(f"Invalid integer value for {name}: '{value}'") from exc


class Settings:
    """Application settings loaded from environment variables"""

    # Certificate corpus
    CORPUS_DIR = os.getenv("CORPUS_DIR", "certs")
    CHECK_WORKERS = _int_setting("CHECK_WORKERS", 4)

    # Geometry data
    CATALOG_FILE = os.getenv("CATALOG_FILE", "") or _PACKAGED_CATALOG

    # Upper-bound search
    GLCT_MAX_COEFF = _int_setting("GLCT_MAX_COEFF", 4)

    # Reports
    REPORT_FORMAT = os.getenv("REPORT_FORMAT", "text").lower()  # "text" or "json"

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE = os.getenv("LOG_FILE", "logs/burniat.log")

    @classmethod
    def corpus_dir(cls, override: Optional[str] = None) -> str:
        """Corpus directory, resolved against the project root when relative"""
        path = override or os.getenv("CORPUS_DIR") or cls.CORPUS_DIR
        if os.path.isabs(path):
            return path
        project_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
        candidate = os.path.join(project_root, path)
        return candidate if os.path.isdir(candidate) else os.path.abspath(path)

    @classmethod
    def validate(cls) -> bool:
        """Validate settings"""
        if cls.CHECK_WORKERS < 1:
            raise ValueError(f"CHECK_WORKERS must be at least 1, got {cls.CHECK_WORKERS}")
        if cls.GLCT_MAX_COEFF < 0:
            raise ValueError(f"GLCT_MAX_COEFF must be non-negative, got {cls.GLCT_MAX_COEFF}")
        if cls.REPORT_FORMAT not in ("text", "json"):
            raise ValueError(
                f"Invalid REPORT_FORMAT: {cls.REPORT_FORMAT}. Must be 'text' or 'json'"
            )
        if not os.path.exists(cls.CATALOG_FILE):
            logger.warning(f"Catalog file not found at {cls.CATALOG_FILE}")
        return True


# Global settings instance
settings = Settings()
