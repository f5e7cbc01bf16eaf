"""Compatibility shims for older Python interpreters."""

import math
from enum import Enum

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11

    class StrEnum(str, Enum):  # type: ignore[no-redef]
        """Backport of :class:`enum.StrEnum` (Python 3.11+)."""

        def __str__(self) -> str:
            return str.__str__(self)

        def __format__(self, format_spec: str) -> str:
            return str.__format__(str(self), format_spec)

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):  # noqa: N805
            return name.lower()


if hasattr(math, "exp2"):
    exp2 = math.exp2
else:  # Python < 3.11

    def exp2(x: float) -> float:
        """Backport of :func:`math.exp2` (Python 3.11+)."""
        return 2.0 ** float(x)


__all__ = ["StrEnum", "exp2"]
