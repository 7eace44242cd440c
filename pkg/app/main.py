# app/main.py
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

from app.core.config import settings

# Configure logging; stdout carries results, so logs go to stderr
logging.basicConfig(
    level=getattr(logging, settings.log_level.upper(), logging.INFO),
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

from app.api.v1.router import dispatch


def run(argv: Optional[List[str]] = None) -> int:
    """Command-line entry point; returns the exit code"""
    logger.debug(f"Starting {settings.project_name} ({settings.environment})")
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(run())

# Run with: python -m app.main verify all
