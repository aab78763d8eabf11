from typing import Any, Dict

from flask import Config as FlaskConfig

from reliefscan.utils.config import Config, validate
from reliefscan.utils.hooks import HookTrigger
from reliefscan.utils.logging import Logger
from reliefscan.utils.plugin import Segmenters

config = Config()
logger = Logger()
hooks = HookTrigger()
segmenters = Segmenters()


def create_app(config_override: Dict[str, Any] = None, config_file: str = None) -> FlaskConfig:

    app_config = config.get_user_config(config_file)
    app_config.update(config_override or {})
    validate(app_config)

    logger.setup_logging(app_config)
    hooks.init_app(app_config)
    segmenters.register(app_config)

    return app_config
