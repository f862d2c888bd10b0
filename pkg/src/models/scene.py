"""Scene script commands and execution reports."""

from pathlib import PurePath
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.exceptions import ScriptParseError
from src.models.geometry import Mesh, Transform, Vector3
from src.models.voxels import MatchResult


PRIMITIVE_VERBS = ("cube", "sphere", "cylinder")
BOOLEAN_VERBS = ("add", "subtract", "intersect")
SUBJECT_VERBS = ("resize", "resize_to", "dimension", "match", "export")

Verb = Literal[
    "cube", "sphere", "cylinder",
    "add", "subtract", "intersect",
    "resize", "resize_to", "dimension", "match", "export",
]


class Command(BaseModel):
    """One script line."""

    model_config = ConfigDict(frozen=True)

    verb: Verb
    line: int = Field(..., ge=1)
    name: str
    operands: tuple[str, ...] = ()
    transform: Transform | None = None
    tessellation: tuple[int, ...] = ()
    vector: Vector3 | None = None
    top_k: int | None = Field(None, ge=1)
    path: str | None = None
    stl_mode: Literal["ascii", "binary"] = "binary"

    @property
    def defines(self) -> str | None:
        """Name this command creates or replaces."""
        if self.verb in PRIMITIVE_VERBS or self.verb in BOOLEAN_VERBS:
            return self.name
        return None

    @property
    def references(self) -> tuple[str, ...]:
        """Names that must already exist when this command runs."""
        if self.verb in BOOLEAN_VERBS:
            return self.operands
        if self.verb in SUBJECT_VERBS:
            return (self.name,)
        return ()


class SceneScript(BaseModel):
    """Validated, ordered command list."""

    model_config = ConfigDict(frozen=True)

    commands: tuple[Command, ...] = ()

    @model_validator(mode="after")
    def check_names(self) -> "SceneScript":
        defined: set[str] = set()
        exported: str | None = None
        for command in self.commands:
            for name in command.references:
                if name not in defined:
                    raise ScriptParseError(f"undefined name '{name}'", line=command.line)
            if command.verb == "export":
                if exported is not None and exported != command.name:
                    raise ScriptParseError(
                        f"'{exported}' is already the exported object; "
                        f"cannot also export '{command.name}'",
                        line=command.line,
                    )
                exported = command.name
            if command.defines:
                defined.add(command.defines)
        return self

    @property
    def names(self) -> tuple[str, ...]:
        """Defined names in first-definition order."""
        seen: dict[str, None] = {}
        for command in self.commands:
            if command.defines:
                seen.setdefault(command.defines, None)
        return tuple(seen)

    @property
    def output_name(self) -> str | None:
        """The exported object, or else the last object produced or modified."""
        last = None
        for command in self.commands:
            if command.verb == "export":
                return command.name
            if command.defines or command.verb in ("resize", "resize_to"):
                last = command.name
        return last

    @property
    def needs_database(self) -> bool:
        return any(command.verb == "match" for command in self.commands)

    def __len__(self) -> int:
        return len(self.commands)


class RunReport(BaseModel):
    """Meshes and readouts produced by executing a script."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    meshes: dict[str, Mesh] = Field(default_factory=dict)
    dimensions: list[tuple[str, Vector3]] = Field(default_factory=list)
    matches: list[tuple[str, list[MatchResult]]] = Field(default_factory=list)
    exported: list[tuple[str, str]] = Field(default_factory=list)
    output_name: str | None = None

    @property
    def output(self) -> Mesh | None:
        if self.output_name is None:
            return None
        return self.meshes.get(self.output_name)

    def render(self) -> str:
        """Deterministic text report; exported files are shown by name only."""
        lines = [
            f"{name}: {w:.6f} {h:.6f} {d:.6f}" for name, (w, h, d) in self.dimensions
        ]
        for name, results in self.matches:
            lines.append(f"# match {name}")
            lines.extend(MatchResult.format_table(results).splitlines())
        lines.extend(
            f"exported: {name} -> {PurePath(path).name}" for name, path in self.exported
        )
        return "\n".join(lines) + "\n" if lines else ""
