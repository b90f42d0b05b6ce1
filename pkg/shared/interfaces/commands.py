"""Command groups: each context registers its CLI commands on the application."""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

from shared.domain.errors import UnknownCommandError


@dataclass
class CommandResult:
    """Tabular output of one command; written as one CSV file."""
    columns: Sequence[str]
    rows: List[Sequence] = field(default_factory=list)


@dataclass(frozen=True)
class CommandSpec:
    name: str
    handler: Callable
    help: str


class CommandGroup:
    """A set of commands owned by one context."""

    def __init__(self, name: str):
        self.name = name
        self.commands: Dict[str, CommandSpec] = {}

    def command(self, name: str, help: str = ""):
        """Register the decorated function as a command handler."""
        def decorator(func):
            self.commands[name] = CommandSpec(name=name, handler=func, help=help or (func.__doc__ or "").strip())
            return func
        return decorator


class CommandRegistry:
    """All commands reachable from the command line."""

    def __init__(self):
        self._commands: Dict[str, CommandSpec] = {}

    def register_group(self, group: CommandGroup) -> None:
        for name, spec in group.commands.items():
            if name in self._commands:
                raise ValueError(f"Command {name} registered twice")
            self._commands[name] = spec

    def get(self, name: str) -> CommandSpec:
        try:
            return self._commands[name]
        except KeyError:
            raise UnknownCommandError(f"Unknown command: {name}") from None

    def names(self) -> List[str]:
        return sorted(self._commands)
