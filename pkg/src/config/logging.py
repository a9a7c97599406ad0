import logging
from logging.config import dictConfig

_LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"
_DEBUG_FORMAT = "[%(asctime)s] [%(levelname)s] [%(name)s:%(lineno)d] [pid %(process)d] %(message)s"

# Loggers that follow the requested level. numpy/scipy warnings arrive on py.warnings.
_PROJECT_LOGGERS = ("bridgewalk", "py.warnings")


def build_logging_config(level: str = "INFO") -> dict:
    """dictConfig for the CLI: everything on stderr so stdout stays free for data."""
    level = level.upper()
    verbose = level == "DEBUG"
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "default": {"format": _DEBUG_FORMAT if verbose else _LOG_FORMAT},
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": "default",
                "level": "DEBUG",
                "stream": "ext://sys.stderr",
            },
        },
        "loggers": {
            "": {"handlers": ["console"], "level": "WARNING"},
            **{name: {"level": level} for name in _PROJECT_LOGGERS},
        },
    }


def setup_logging(level: str = "INFO") -> None:
    dictConfig(build_logging_config(level))
    logging.captureWarnings(True)
    logging.getLogger(__name__).debug("Logging configured with level %s", level)
