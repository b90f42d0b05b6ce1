"""Scenario files: flat ``section.field = value`` lines with ``#`` comments.

Values are parsed according to the type of the field's current value, so every
key that the scenario dataclasses expose is settable and nothing else is.
Tuples are comma separated; the Fried histogram is ``r0:days`` pairs.
"""
import logging
from dataclasses import fields, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Tuple

from key_rate.domain.entities import FriedHistogram
from scenarios.domain.entities import SECTIONS, ScenarioConfig
from shared.domain.errors import DomainError, ScenarioParseError

logger = logging.getLogger(__name__)

TRUE_WORDS = ("true", "yes", "on", "1")
FALSE_WORDS = ("false", "no", "off", "0")


def _parse_value(text: str, current):
    if isinstance(current, bool):
        word = text.lower()
        if word in TRUE_WORDS:
            return True
        if word in FALSE_WORDS:
            return False
        raise ValueError(f"expected a boolean, got {text!r}")
    if isinstance(current, Enum):
        enum_type = type(current)
        for member in enum_type:
            if text == str(member.value) or text.lower() == member.name.lower():
                return member
        choices = ", ".join(_format_value(m) for m in enum_type)
        raise ValueError(f"expected one of {choices}, got {text!r}")
    if isinstance(current, int):
        return int(text)
    if isinstance(current, float):
        return float(text)
    if isinstance(current, FriedHistogram):
        bins = []
        for item in filter(None, (part.strip() for part in text.split(","))):
            r0, sep, days = item.partition(":")
            if not sep:
                raise ValueError(f"histogram bins are r0:days pairs, got {item!r}")
            bins.append((float(r0), float(days)))
        return FriedHistogram(bins=tuple(bins))
    if isinstance(current, tuple):
        return tuple(float(part) for part in text.split(",") if part.strip())
    raise ValueError(f"unsupported field type {type(current).__name__}")


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return value.value if isinstance(value.value, str) else value.name.lower()
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, FriedHistogram):
        return ",".join(f"{r0!r}:{days!r}" for r0, days in value.bins)
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    return str(value)


def _split_key(key: str) -> Tuple[str, str]:
    section, sep, name = key.partition(".")
    if not sep or section not in SECTIONS:
        raise KeyError(key)
    return section, name


def with_value(scenario: ScenarioConfig, key: str, text: str, line: Optional[int] = None,
               source: str = "<override>") -> ScenarioConfig:
    """Scenario with one dotted key set from its text form; the change is recorded as an override."""
    try:
        section, name = _split_key(key)
        component = getattr(scenario, section)
        if name not in {f.name for f in fields(component)}:
            raise KeyError(key)
    except KeyError:
        raise ScenarioParseError(f"unknown key {key!r}", line=line, source=source) from None

    try:
        value = _parse_value(text.strip(), getattr(component, name))
        updated = replace(component, **{name: value})
    except DomainError as exc:
        raise ScenarioParseError(f"{key}: {exc}", line=line, source=source) from None
    except ValueError as exc:
        raise ScenarioParseError(f"{key}: invalid value {text.strip()!r} ({exc})", line=line, source=source) from None

    changes = {section: updated}
    if key == "orbit.altitude_km":
        try:
            changes["link"] = replace(scenario.link, altitude_km=value)
        except DomainError as exc:
            raise ScenarioParseError(f"{key}: {exc}", line=line, source=source) from None
    overrides = scenario.overrides + ((key, _format_value(value)),)
    return replace(scenario, overrides=overrides, **changes)


def parse_scenario(text: str, source: str = "<scenario>", base: Optional[ScenarioConfig] = None) -> ScenarioConfig:
    scenario = base if base is not None else ScenarioConfig()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ScenarioParseError(f"expected 'key = value', got {raw.strip()!r}", line=number, source=source)
        scenario = with_value(scenario, key.strip(), value, line=number, source=source)
    return scenario


def load_scenario(path) -> ScenarioConfig:
    """Read a scenario file; unspecified keys keep their defaults."""
    path = Path(path)
    scenario = parse_scenario(path.read_text(encoding="utf-8"), source=str(path))
    logger.info("Loaded scenario %s with %d overrides", path, len(scenario.overrides))
    return scenario


def scenario_items(scenario: ScenarioConfig) -> Iterable[Tuple[str, str]]:
    """Every settable key with its canonical text, in declaration order."""
    for section in SECTIONS:
        component = getattr(scenario, section)
        for f in fields(component):
            yield f"{section}.{f.name}", _format_value(getattr(component, f.name))


def dump_scenario(scenario: ScenarioConfig) -> str:
    """Canonical text that loads back to the same scenario values."""
    return "".join(f"{key} = {value}\n" for key, value in scenario_items(scenario))
