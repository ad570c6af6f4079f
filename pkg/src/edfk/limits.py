"""Brute-force ceilings.

Every exhaustive routine branches over some set of vertices. The ceiling caps
the size of that set. ``EDFK_CEILING`` overrides the default.
"""
import os

from .errors import InvalidArgument, ResourceLimitExceeded

DEFAULT_CEILING = 30


def ceiling(override=None) -> int:
    if override is not None:
        return int(override)
    raw = os.environ.get("EDFK_CEILING")
    if raw is None or raw == "":
        return DEFAULT_CEILING
    try:
        value = int(raw)
    except ValueError:
        raise InvalidArgument(f"EDFK_CEILING must be an integer, got {raw!r}")
    if value < 0:
        raise InvalidArgument("EDFK_CEILING must be nonnegative")
    return value


def enforce(size: int, what: str, override=None) -> None:
    limit = ceiling(override)
    if size > limit:
        raise ResourceLimitExceeded(
            f"{what}: {size} vertices exceeds the brute-force ceiling of {limit}"
        )
