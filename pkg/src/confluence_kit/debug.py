"""Tagged diagnostic lines on stderr, shared by every debug switch."""

import sys

from .constants import DEBUG_TAG


def print_debug(enabled: bool, message: str) -> None:
    if enabled:
        print(f"{DEBUG_TAG} {message}", file=sys.stderr)
