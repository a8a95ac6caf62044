from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidInput
from .partitions import HARD_CAP
from .weingarten import LIMITS, QGFamily

DEFAULT_RANGES = {
    "onplus": (3, 4, 5),
    "snplus": (6, 7),
    "hnplus": (6, 7),
    "appendix": (4, 5, 6, 7, 8, 9),
}


def parse_range(text: str) -> tuple[int, ...]:
    """'4..9', '6' or '4,6,8'."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            vals = tuple(range(int(lo), int(hi) + 1))
        else:
            vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InvalidInput(f"bad N range {text!r}") from None
    if not vals:
        raise InvalidInput(f"empty N range {text!r}")
    return vals


@dataclass
class RunConfig:
    cache_dir: Path | None = None
    caps: dict = field(default_factory=lambda: dict(LIMITS.caps))
    ranges: dict = field(default_factory=lambda: dict(DEFAULT_RANGES))
    tolerance: float = 1e-9
    output: str = "table"
    extended: bool = False
    jobs: int = 1

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise InvalidInput("tolerance must be positive")
        if self.output not in ("json", "table"):
            raise InvalidInput("output must be json or table")
        if self.jobs < 1:
            raise InvalidInput("jobs must be at least 1")
        for fam, cap in self.caps.items():
            if not 1 <= cap <= HARD_CAP:
                raise InvalidInput(f"cap for {QGFamily.parse(fam).value} must lie in 1..{HARD_CAP}")

    def apply(self) -> None:
        """Push the cache location and caps into the engine."""
        if self.cache_dir is not None:
            os.environ["QTRACE_CACHE"] = str(self.cache_dir)
        LIMITS.caps.update({QGFamily.parse(k): v for k, v in self.caps.items()})
        LIMITS.extended = self.extended
