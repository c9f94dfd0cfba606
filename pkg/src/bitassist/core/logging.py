import logging
import sys


class OptimizerNoiseFilter(logging.Filter):
    """Filter to suppress scipy/numpy informational chatter below WARNING"""

    def filter(self, record: logging.LogRecord) -> bool:
        if record.name.startswith(("scipy", "numpy")) and record.levelno < logging.WARNING:
            return False
        return True


def setup_logging(verbose: bool = False) -> None:
    """Configure basic logging on stderr; reports own stdout"""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s:     %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )
    for handler in logging.getLogger().handlers:
        handler.addFilter(OptimizerNoiseFilter())
