"""Run a parsed scene script against the modeling kernel."""

import logging
from pathlib import Path
from typing import Callable

from src.csg import CSG_OPERATIONS
from src.exceptions import MeshForgeError, ScriptExecutionError
from src.formats import write_mesh
from src.matching import ModelDatabase, best_match
from src.models.geometry import Mesh, PrimitiveSpec
from src.models.scene import BOOLEAN_VERBS, PRIMITIVE_VERBS, Command, RunReport, SceneScript
from src.utils.mesh_ops import apply_transform, bounding_dimensions, resize, resize_to
from src.utils.primitives import make_primitive


logger = logging.getLogger(__name__)

PRIMITIVE_KINDS = {"cube": "cuboid", "sphere": "ellipsoid", "cylinder": "cylinder"}


class _Run:
    """Mutable state of one execution: named meshes plus the report being built."""

    def __init__(self, db: ModelDatabase | None, out_dir: Path):
        self.db = db
        self.out_dir = out_dir
        self.meshes: dict[str, Mesh] = {}
        self.report = RunReport()

    def primitive(self, command: Command) -> None:
        spec = PrimitiveSpec(kind=PRIMITIVE_KINDS[command.verb], tessellation=command.tessellation)
        mesh = make_primitive(spec)
        if command.transform is not None and not command.transform.is_identity:
            mesh = apply_transform(mesh, command.transform)
        self.meshes[command.name] = mesh

    def boolean(self, command: Command) -> None:
        a, b = (self.meshes[name] for name in command.operands)
        self.meshes[command.name] = CSG_OPERATIONS[command.verb](a, b)

    def resize(self, command: Command) -> None:
        self.meshes[command.name] = resize(self.meshes[command.name], command.vector)

    def resize_to(self, command: Command) -> None:
        self.meshes[command.name] = resize_to(self.meshes[command.name], command.vector)

    def dimension(self, command: Command) -> None:
        size, _ = bounding_dimensions(self.meshes[command.name])
        self.report.dimensions.append((command.name, size))

    def match(self, command: Command) -> None:
        results = best_match(self.meshes[command.name], self.db, k=command.top_k)
        self.report.matches.append((command.name, results))

    def export(self, command: Command) -> None:
        path = Path(command.path)
        if not path.is_absolute():
            path = self.out_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        write_mesh(self.meshes[command.name], path, command.stl_mode)
        self.report.exported.append((command.name, str(path)))

    def handler(self, verb: str) -> Callable[[Command], None]:
        if verb in PRIMITIVE_VERBS:
            return self.primitive
        if verb in BOOLEAN_VERBS:
            return self.boolean
        return getattr(self, verb)


def execute(
    script: SceneScript,
    db: ModelDatabase | None = None,
    out_dir: str | Path | None = None,
) -> RunReport:
    """
    Execute script commands in order.

    Args:
        script: Parsed script
        db: Model database, required when the script has a match command
        out_dir: Base directory for relative export paths (defaults to the
            working directory)

    Returns:
        RunReport with every named mesh, dimension readouts, rankings and
        exported files

    Raises:
        ScriptExecutionError: Carrying the failing command's line, with the
            module error chained
    """
    if script.needs_database and db is None:
        first = next(c for c in script.commands if c.verb == "match")
        raise ScriptExecutionError(first.line, first.verb, "match needs a model database")

    run = _Run(db, Path.cwd() if out_dir is None else Path(out_dir))
    for command in script.commands:
        logger.debug("line %d: %s %s", command.line, command.verb, command.name)
        try:
            run.handler(command.verb)(command)
        except (MeshForgeError, OSError) as exc:
            raise ScriptExecutionError(command.line, command.verb, str(exc)) from exc

    run.report.meshes = run.meshes
    run.report.output_name = script.output_name
    return run.report
