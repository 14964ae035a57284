import os
from pathlib import Path
from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent
ENV_FILE = BASE_DIR / ".env"
if not ENV_FILE.exists():
    ENV_FILE = BASE_DIR / ".." / ".env"
load_dotenv(dotenv_path=ENV_FILE)


def _env_int(name, default):
    return int(os.getenv(name, default))


class BaseConfig:
    APP_NAME = os.getenv("APP_NAME", "Mixed Moore Toolkit")
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
    DEBUG = False

    # Exact-arithmetic and backtracking caps
    ISOMORPHISM_MAX_ORDER = _env_int("ISOMORPHISM_MAX_ORDER", 16)
    CHARPOLY_MAX_ORDER = _env_int("CHARPOLY_MAX_ORDER", 64)

    # Census envelope and budgets
    CENSUS_MAX_ORDER = _env_int("CENSUS_MAX_ORDER", 12)
    CENSUS_MAX_R = _env_int("CENSUS_MAX_R", 2)
    CENSUS_MAX_Z = _env_int("CENSUS_MAX_Z", 2)
    SEARCH_NODE_BUDGET = _env_int("SEARCH_NODE_BUDGET", 10**9)
    SEARCH_TIME_BUDGET_SECONDS = _env_int("SEARCH_TIME_BUDGET_SECONDS", 600)
    SEARCH_WORKERS = _env_int("SEARCH_WORKERS", 1)


class DevelopmentConfig(BaseConfig):
    DEBUG = True
    LOG_LEVEL = os.getenv("LOG_LEVEL", "DEBUG").upper()


class TestingConfig(BaseConfig):
    DEBUG = True
    LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()
    SEARCH_TIME_BUDGET_SECONDS = _env_int("SEARCH_TIME_BUDGET_SECONDS", 300)


class ProductionConfig(BaseConfig):
    DEBUG = False
    LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()
    SEARCH_WORKERS = _env_int("SEARCH_WORKERS", os.cpu_count() or 1)


config_by_name = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
    "default": BaseConfig,
}


def get_config_by_name(config_name: str):
    return config_by_name.get(config_name, BaseConfig)
