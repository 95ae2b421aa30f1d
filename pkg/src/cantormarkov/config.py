"""Flat ``section.key = value`` configuration files.

Example::

    # model parameters
    model.width_base = 0.5
    model.height_base = 0.3333333333333333
    caps.symbol_cap = 20
    mc.seed = 7

Lines starting with ``#`` and blank lines are ignored.  Values are parsed
as int, float or boolean where possible and kept as strings otherwise.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .errors import ArgumentError, ConfigError
from .model import ModelSpec
from .stats import RunConfig
from .thermo import Caps

SECTIONS = {
    "model": {f.name for f in fields(ModelSpec)},
    "caps": {f.name for f in fields(Caps)},
    "mc": {"seed", "burn_in", "steps", "samples", "threads"},
}


def _value(text: str):
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def parse_config(text: str) -> dict[str, dict]:
    """Parse config text into ``{section: {key: value}}``.

    Raises
    ------
    ConfigError
        Malformed lines, unknown sections or keys, or duplicate keys.
    """
    out: dict[str, dict] = {s: {} for s in SECTIONS}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if "." not in key:
            raise ConfigError(f"line {lineno}: key {key!r} needs a section prefix")
        section, name = key.split(".", 1)
        if section not in SECTIONS:
            raise ConfigError(f"line {lineno}: unknown section {section!r}")
        if name not in SECTIONS[section]:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if name in out[section]:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[section][name] = _value(val)
    return out


@dataclass
class Config:
    """Model, truncation and Monte Carlo settings."""

    spec: ModelSpec = field(default_factory=ModelSpec)
    caps: Caps = field(default_factory=Caps)
    mc: dict = field(default_factory=dict)
    source: str | None = None

    def run_config(self, **overrides) -> RunConfig:
        d = {**self.mc, **overrides}
        return RunConfig(**d)

    def to_dict(self) -> dict:
        return {"model": self.spec.to_dict(), "caps": asdict(self.caps), "mc": dict(self.mc),
                "source": self.source}


def build_config(sections: dict[str, dict], source: str | None = None) -> Config:
    try:
        spec = ModelSpec(**sections.get("model", {}))
        caps = Caps(**sections.get("caps", {}))
    except (ArgumentError, TypeError) as err:
        raise ConfigError(str(err)) from err
    return Config(spec, caps, dict(sections.get("mc", {})), source)


def load_config(path: str | Path | None) -> Config:
    """Read a config file; ``None`` gives the defaults."""
    if path is None:
        return Config()
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config {str(p)!r}: {err.strerror}") from err
    return build_config(parse_config(text), str(p))
