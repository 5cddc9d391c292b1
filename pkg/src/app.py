"""
Rotor Map - application bootstrap

Loads .env, installs the rich log handler and hands back the process settings.
Both the CLI and scripts call bootstrap() once before doing any work.
"""

import logging
from typing import Optional

from dotenv import load_dotenv
from rich.logging import RichHandler

from .config import Settings, load_settings

logger = logging.getLogger(__name__)


def configure_logging(level: str = "INFO") -> None:
    """Install a single RichHandler on the root logger; repeated calls only change the level"""
    root = logging.getLogger()
    if not any(isinstance(h, RichHandler) for h in root.handlers):
        handler = RichHandler(rich_tracebacks=True, show_path=False)
        handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
        root.addHandler(handler)
    root.setLevel(level.upper())


def bootstrap(log_level: Optional[str] = None) -> Settings:
    """Load the environment, configure logging and return the settings"""
    load_dotenv()
    settings = load_settings()
    configure_logging(log_level or settings.log_level)
    logger.debug("Settings: output_dir=%s workers=%d", settings.output_dir, settings.workers)
    return settings
