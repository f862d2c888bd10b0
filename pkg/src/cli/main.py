"""MeshForge command-line interface.

Reports go to stdout, errors and logs to stderr. Exit codes: 0 on success,
1 on a domain or I/O error (or a mesh that fails validation), 2 on a usage
error.
"""

import functools
import logging
import sys
from pathlib import Path

import click
from sqlalchemy.exc import SQLAlchemyError

from src import __version__
from src.config import settings
from src.database import VoxelCacheRepository, create_cache_engine, create_session_factory, session_scope
from src.deform import apply_displacement, load_displacement, make_template
from src.exceptions import CacheError, MeshForgeError
from src.formats import read_grid, read_mesh, write_grid, write_mesh
from src.matching import ModelDatabase, best_match, cache_path, format_matches, iou, voxelize
from src.models.geometry import PrimitiveSpec
from src.scene import execute, parse_script
from src.utils.log import configure_logging
from src.utils.mesh_ops import bounding_box, bounding_dimensions, resize, resize_to, validate_printable
from src.utils.primitives import make_primitive


logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
PRIMITIVE_KINDS = ("cuboid", "ellipsoid", "cylinder", "icosphere")

existing_file = click.Path(exists=True, dir_okay=False, path_type=Path)
output_file = click.Path(dir_okay=False, path_type=Path)


def domain_errors(func):
    """Report MeshForge and I/O errors on stderr and exit with status 1."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (MeshForgeError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def format_dims(size) -> str:
    return " ".join(f"{value:.6f}" for value in size)


def parse_tessellation(ctx, param, value: str | None) -> tuple[int, ...]:
    if value is None:
        return ()
    try:
        return tuple(int(part) for part in value.replace(",", " ").split())
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{value}'") from None


def resolve_db(db: Path | None) -> Path | None:
    if db is not None:
        return db
    return Path(settings.MESHFORGE_DB) if settings.MESHFORGE_DB else None


@click.group()
@click.version_option(__version__, prog_name="meshforge")
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default=None,
    help="Stderr log level (defaults to LOG_LEVEL).",
)
def cli(log_level: str | None):
    """Headless solid modeling: CSG, resizing, validation and voxel matching."""
    configure_logging(log_level)


@cli.command()
@click.argument("script", type=existing_file)
@click.option("--db", type=existing_file, envvar="MESHFORGE_DB", help="Model database manifest.")
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Directory for relative export paths (defaults to the working directory).",
)
@domain_errors
def build(script: Path, db: Path | None, out_dir: Path | None):
    """Execute a scene script and print its report."""
    parsed = parse_script(script.read_bytes())
    database = None
    if parsed.needs_database:
        manifest = resolve_db(db)
        if manifest is not None:
            database = ModelDatabase.load(manifest)
    report = execute(parsed, db=database, out_dir=out_dir)
    click.echo(report.render(), nl=False)


@cli.command()
@click.argument("source", type=existing_file)
@click.argument("target", type=output_file)
@click.option("--ascii", "ascii_stl", is_flag=True, help="Write ASCII instead of binary STL.")
@domain_errors
def convert(source: Path, target: Path, ascii_stl: bool):
    """Convert between OBJ and STL; formats follow the file extensions."""
    mesh = read_mesh(source)
    write_mesh(mesh, target, "ascii" if ascii_stl else "binary")
    click.echo(f"{target.name}: {mesh.vertex_count} vertices, {mesh.face_count} faces")


@cli.command()
@click.argument("mesh_path", metavar="MESH", type=existing_file)
@domain_errors
def dims(mesh_path: Path):
    """Print bounding-box width, height and depth in meters."""
    size, _ = bounding_dimensions(read_mesh(mesh_path))
    click.echo(format_dims(size))


@cli.command(name="resize")
@click.argument("mesh_path", metavar="MESH", type=existing_file)
@click.argument("target", type=output_file)
@click.option("--to", "to_dims", type=float, nargs=3, default=None, help="Target W H D in meters.")
@click.option("--by", "factors", type=float, nargs=3, default=None, help="Scale factors per axis.")
@domain_errors
def resize_command(mesh_path: Path, target: Path, to_dims, factors):
    """Resize a mesh about its bounding-box center."""
    if (to_dims is None) == (factors is None):
        raise click.UsageError("give exactly one of --to or --by")
    mesh = read_mesh(mesh_path)
    mesh = resize_to(mesh, to_dims) if to_dims is not None else resize(mesh, factors)
    write_mesh(mesh, target)
    size, _ = bounding_dimensions(mesh)
    click.echo(format_dims(size))


@cli.command(name="voxelize")
@click.argument("mesh_path", metavar="MESH", type=existing_file)
@click.argument("target", type=output_file)
@click.option("--res", "resolution", type=int, default=None, help="Cells along the longest side.")
@click.option(
    "--frame",
    type=click.Choice(("canonical", "bbox")),
    default="canonical",
    show_default=True,
    help="Normalized canonical frame, or the mesh's own bounding box.",
)
@domain_errors
def voxelize_command(mesh_path: Path, target: Path, resolution: int | None, frame: str):
    """Voxelize a closed mesh into a .vox grid."""
    mesh = read_mesh(mesh_path)
    grid = voxelize(mesh, resolution, bounding_box(mesh) if frame == "bbox" else "canonical")
    write_grid(grid, target)
    click.echo(f"occupied: {grid.occupied_count} of {grid.cell_count}")


@cli.command(name="iou")
@click.argument("first", type=existing_file)
@click.argument("second", type=existing_file)
@domain_errors
def iou_command(first: Path, second: Path):
    """Print the intersection over union of two .vox grids."""
    click.echo(f"{iou(read_grid(first), read_grid(second)):.6f}")


@cli.command()
@click.argument("mesh_path", metavar="MESH", type=existing_file)
@click.option("--db", type=existing_file, envvar="MESHFORGE_DB", help="Model database manifest.")
@click.option("--top", "top_k", type=int, default=None, help="Number of results (default 5).")
@domain_errors
def match(mesh_path: Path, db: Path | None, top_k: int | None):
    """Rank database models by voxel IoU with a mesh."""
    manifest = resolve_db(db)
    if manifest is None:
        raise click.UsageError("no model database: pass --db or set MESHFORGE_DB")
    results = best_match(read_mesh(mesh_path), ModelDatabase.load(manifest), k=top_k)
    click.echo(format_matches(results), nl=False)


@cli.command(name="cache-init")
@click.argument("manifest", type=existing_file, required=False, envvar="MESHFORGE_DB")
@click.option("--res", "resolution", type=int, default=None, help="Override the manifest resolution.")
@click.option("--reset", is_flag=True, help="Delete the cache file first.")
@domain_errors
def cache_init(manifest: Path | None, resolution: int | None, reset: bool):
    """Voxelize a manifest's models into its cache and list the cached grids."""
    manifest = resolve_db(manifest)
    if manifest is None:
        raise click.UsageError("no model database: pass MANIFEST or set MESHFORGE_DB")
    path = cache_path(manifest)
    if reset:
        path.unlink(missing_ok=True)

    database = ModelDatabase.load(manifest, resolution=resolution, use_cache=True)
    engine = create_cache_engine(path)
    try:
        with session_scope(create_session_factory(engine)) as session:
            rows = [
                f"{row.model_id}\t{row.resolution}\t{row.content_hash[:12]}"
                for row in VoxelCacheRepository(session).list_all()
            ]
    except SQLAlchemyError as exc:
        raise CacheError(f"voxel cache {path} is unreadable, rerun with --reset") from exc
    finally:
        engine.dispose()

    for row in rows:
        click.echo(row)
    click.echo(f"cached: {len(rows)} grids for {len(database)} models at resolution {database.resolution}")


@cli.command()
@click.argument("mesh_path", metavar="MESH", type=existing_file)
@domain_errors
def validate(mesh_path: Path):
    """Print the printability report; exit 1 if the mesh is not printable."""
    report = validate_printable(read_mesh(mesh_path))
    click.echo("\n".join(report.to_lines()))
    if not report.is_printable:
        sys.exit(1)


@cli.command()
@click.argument("kind", type=click.Choice(PRIMITIVE_KINDS))
@click.argument("target", type=output_file)
@click.option("--tess", callback=parse_tessellation, default=None, help='For example "16,24".')
@click.option("--ascii", "ascii_stl", is_flag=True, help="Write ASCII instead of binary STL.")
@domain_errors
def primitive(kind: str, target: Path, tess: tuple[int, ...], ascii_stl: bool):
    """Write a unit primitive centered at the origin."""
    mesh = make_primitive(PrimitiveSpec(kind=kind, tessellation=tess))
    write_mesh(mesh, target, "ascii" if ascii_stl else "binary")
    click.echo(f"{target.name}: {mesh.vertex_count} vertices, {mesh.face_count} faces")


@cli.command()
@click.argument("field_path", metavar="FIELD", type=existing_file)
@click.argument("target", type=output_file)
@click.option("--template", "template_path", type=existing_file, default=None,
              help="Template mesh (defaults to the icosphere template).")
@domain_errors
def deform(field_path: Path, target: Path, template_path: Path | None):
    """Apply a displacement field to the template mesh."""
    template = read_mesh(template_path) if template_path is not None else make_template()
    mesh = apply_displacement(template, load_displacement(field_path))
    write_mesh(mesh, target)
    click.echo(f"{target.name}: {mesh.vertex_count} vertices, {mesh.face_count} faces")


def main() -> None:
    cli(prog_name="meshforge")
