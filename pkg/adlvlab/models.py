"""Shared run configuration for the command-line tools."""
from __future__ import annotations

import argparse
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Tuple

from .errors import UsageError
from .sigmaconj import DEFAULT_BUDGET

CACHE_ENV = "ADLVLAB_CACHE"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass
class RunConfig:
    group: str = "A1"
    command: str = "validate"
    args: Tuple[str, ...] = ()
    budget: int = DEFAULT_BUDGET
    q_values: Tuple[int, ...] = (2, 3, 5)
    cache_dir: Optional[Path] = None
    jobs: int = 1
    json_output: bool = False
    output: Optional[Path] = None
    log_level: str = "WARNING"
    options: dict = field(default_factory=dict)

    @classmethod
    def from_namespace(cls, args: argparse.Namespace, environ: Optional[Mapping[str, str]] = None) -> "RunConfig":
        environ = os.environ if environ is None else environ
        cache = environ.get(CACHE_ENV) or getattr(args, "cache", None)
        output = getattr(args, "output", None)
        positional = tuple(str(x) for x in getattr(args, "params", ()) or ())
        return cls(
            group=args.group,
            command=args.command,
            args=positional,
            budget=args.budget,
            q_values=tuple(args.q) if args.q else (2, 3, 5),
            cache_dir=Path(cache) if cache else None,
            jobs=args.jobs,
            json_output=args.json,
            output=Path(output) if output else None,
            log_level=args.log_level.upper(),
            options={k: v for k, v in vars(args).items() if k in ("level", "presets", "max_length")},
        )

    def validate(self) -> "RunConfig":
        if self.budget <= 0:
            raise UsageError(f"--budget must be positive, got {self.budget}")
        bad = [q for q in self.q_values if q < 2]
        if bad:
            raise UsageError(f"--q values must be at least 2, got {bad}")
        if self.jobs < 1:
            raise UsageError(f"--jobs must be at least 1, got {self.jobs}")
        if self.log_level not in LOG_LEVELS:
            raise UsageError(f"--log-level must be one of {', '.join(LOG_LEVELS)}")
        return self


__all__ = ["CACHE_ENV", "LOG_LEVELS", "RunConfig"]
