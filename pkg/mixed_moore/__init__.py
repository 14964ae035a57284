import logging
import os
from dataclasses import dataclass, field

from config import BaseConfig, get_config_by_name

_active_config = None


@dataclass
class MooreApp:
    """Configured toolkit instance handed to the CLI commands."""

    config_name: str
    config: type = BaseConfig
    logger: logging.Logger = field(
        default_factory=lambda: logging.getLogger("mixed_moore")
    )


def current_config():
    """Return the configuration installed by ``create_app`` (or the env default)."""
    if _active_config is None:
        return get_config_by_name(os.getenv("MIXED_MOORE_CONFIG", "default"))
    return _active_config


def create_app(config_name="default"):
    """
    Application factory: installs the configuration and configures logging.
    """
    global _active_config

    app_config = get_config_by_name(config_name)
    _active_config = app_config
    app = MooreApp(config_name=config_name, config=app_config)

    logging.basicConfig(
        level=app_config.LOG_LEVEL,
        format="[%(asctime)s] [%(levelname)s] [%(name)s] %(module)s.%(funcName)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    app.logger.setLevel(app_config.LOG_LEVEL)
    app.logger.debug(
        f"App '{app_config.APP_NAME}' created with '{config_name}' config."
    )
    return app
