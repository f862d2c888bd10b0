"""Error hierarchy shared by every MeshForge module.

Validators on pydantic models raise these directly; pydantic only wraps
``ValueError`` and ``AssertionError``, so none of these derive from them.
"""


class MeshForgeError(Exception):
    """Base class for all domain errors."""


class InvalidArgumentError(MeshForgeError):
    """An argument is outside its legal range."""


class InvalidTransformError(InvalidArgumentError):
    """A transform has a non-positive scale component."""


class InvalidMeshError(MeshForgeError):
    """Vertex or face arrays violate the mesh invariants."""


class EmptyMeshError(MeshForgeError):
    """The operation needs at least one vertex."""


class UndefinedVolumeError(MeshForgeError):
    """Volume is only defined for closed, consistently wound meshes."""


class TopologyUndefinedError(MeshForgeError):
    """Genus was requested for a mesh that fails a topology check."""

    def __init__(self, check: str, message: str):
        super().__init__(message)
        self.check = check


class InvalidOperandError(MeshForgeError):
    """A boolean or voxelization operand is not a closed surface."""


class ParseError(MeshForgeError):
    """Malformed input text or bytes."""

    def __init__(
        self,
        message: str,
        line: int | None = None,
        column: int | None = None,
        offset: int | None = None,
    ):
        self.message = message
        self.line = line
        self.column = column
        self.offset = offset
        super().__init__(self._format())

    def _format(self) -> str:
        if self.line is not None and self.column is not None:
            return f"line {self.line}, column {self.column}: {self.message}"
        if self.line is not None:
            return f"line {self.line}: {self.message}"
        if self.offset is not None:
            return f"byte {self.offset}: {self.message}"
        return self.message


class ScriptParseError(ParseError):
    """Scene script grammar or name-resolution error."""


class InteractiveOnlyCommandError(ScriptParseError):
    """The verb only makes sense in the interactive session."""


class ScriptExecutionError(MeshForgeError):
    """A script command failed; the module error is chained as ``__cause__``."""

    def __init__(self, line: int, verb: str, message: str):
        super().__init__(f"line {line} ({verb}): {message}")
        self.line = line
        self.verb = verb


class IncompatibleGridsError(MeshForgeError):
    """Voxel grids do not share origin, cell size and dims."""


class EmptyDatabaseError(MeshForgeError):
    """Retrieval against a database without entries."""


class ManifestError(MeshForgeError):
    """The model database manifest is invalid or references missing meshes."""


class ShapeMismatchError(MeshForgeError):
    """Displacement field length differs from the template vertex count."""


class CacheError(MeshForgeError):
    """The voxel cache file cannot be read or written."""
