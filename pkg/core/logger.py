# core/logger.py
import logging
import time
from logging.handlers import RotatingFileHandler
from core.settings import settings  # Import after settings is defined

try:
    import colorlog
    COLORLOG_AVAILABLE = True
except ImportError:
    colorlog = None
    COLORLOG_AVAILABLE = False


LOG_FORMAT = "%(asctime)s.%(msecs)03dZ [%(levelname)-8s] [%(name)s:%(module)s:%(lineno)d] %(message)s"
DATE_FORMAT = "%Y-%m-%dT%H:%M:%S"


# Custom formatter for UTC time
class UTCFormatter(logging.Formatter):
    converter = time.gmtime


if COLORLOG_AVAILABLE:
    class ColoredUTCFormatter(colorlog.ColoredFormatter):
        converter = time.gmtime

    stream_formatter: logging.Formatter = ColoredUTCFormatter(
        fmt="%(log_color)s" + LOG_FORMAT, datefmt=DATE_FORMAT
    )
else:
    stream_formatter = UTCFormatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT)


logger = logging.getLogger("BEREZIN")
logger.setLevel(getattr(logging, settings.log_level.upper(), logging.WARNING))
logger.propagate = False

if not logger.handlers:
    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(stream_formatter)
    logger.addHandler(stream_handler)

    if settings.log_to_file:
        settings.ensure_data_dir_exists()
        file_handler = RotatingFileHandler(
            settings.get_log_file_path(),
            maxBytes=settings.log_max_bytes,
            backupCount=settings.log_backup_count,
            encoding="utf-8",
        )
        file_handler.setFormatter(UTCFormatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(file_handler)


# Silence overly-noisy 3rd-party logs
logging.getLogger("asyncio").setLevel(logging.WARNING)
logging.getLogger("matplotlib").setLevel(logging.WARNING)


logger.debug(
    f"BEREZIN logger initialized. Level: {settings.log_level}. File logging: {settings.log_to_file}"
)
