"""Run configuration for the command-line front end.

A config file is a flat ``key = value`` text document; ``#`` starts a
comment.  Keys match the long flag names with dashes replaced by
underscores.  Command-line flags override the file.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from typing import Optional

from . import core, spectral, stability
from .errors import DomainError

ENV_VAR = "LEL_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    ivp_abs: float = core.IVP_ATOL
    ivp_rel: float = core.IVP_RTOL
    eig_tol: float = spectral.AGREE_TOL
    marginal_band: float = stability.MARGINAL_BAND
    n_solve: int = core.DEFAULT_N
    n_spectral: int = spectral.DEFAULT_N
    format: str = "csv"
    output: Optional[str] = None

    def __post_init__(self):
        for name in ("ivp_abs", "ivp_rel", "eig_tol", "marginal_band"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        if self.n_solve < core.MIN_N:
            raise DomainError(f"n_solve must be at least {core.MIN_N}")
        if self.n_spectral < spectral.MIN_N or self.n_spectral % 2 == 0:
            raise DomainError(f"n_spectral must be odd and at least {spectral.MIN_N}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.format!r}")

    def merged(self, **overrides) -> "RunConfig":
        """Copy with every non-``None`` override applied."""
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _convert(key: str, raw: str):
    kind = _FIELDS[key].type
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            return int(raw)
    except ValueError:
        raise DomainError(f"config key {key}: cannot parse {raw!r}") from None
    return raw


def parse_config(text: str) -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELDS:
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw)
    return values


def load_config(path: Optional[str] = None) -> RunConfig:
    """Config from ``path`` or the file named by ``$LEL_CONFIG`` (defaults otherwise)."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from None
    return RunConfig(**parse_config(text))
