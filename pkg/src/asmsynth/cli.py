"""Command-line front end: validation, batch synthesis, assembly, exports.

Commands exit 0 on success, 1 on validation failures, and 2 on usage
errors. Data payloads go to files; stdout carries logs only.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import click

from .assembly import bom_to_json, interpret_program, program_from_json, program_to_json
from .bundled import toyarm_dir
from .catalog import Diagnostic, load_workspace, part_from_json, validate_part
from .errors import AsmSynthError
from .kinematics import dof, export_scene, export_urdf, forward_kinematics
from .pipeline import json_text, results_to_json, synthesize
from .synthesis import make_request, request_from_json
from .taxonomy import HIERARCHIES, load_taxonomies, make_atom
from .typesys import type_expr

ENV_DATA = "CLSCAD_DATA"


def _fail(message: str) -> "SystemExit":
    click.echo(f"error: {message}", err=True)
    return SystemExit(1)


def _default_data() -> str | None:
    return os.environ.get(ENV_DATA)


def _load_workspace(data: str | None):
    if data is None:
        data = _default_data()
    if data is None:
        raise _fail("no data directory given (use --data or set CLSCAD_DATA)")
    path = Path(data)
    if not path.is_dir():
        raise _fail(f"data directory {path} does not exist")
    try:
        return load_workspace(path)
    except AsmSynthError as exc:
        raise _fail(str(exc))


data_option = click.option("--data", "data", type=click.Path(), default=None, help="Workspace directory (taxonomies.json + parts/).")


@click.group()
def main() -> None:
    """Synthesize assemblies from a typed part catalog."""


@main.group()
def taxonomy() -> None:
    """Inspect and validate taxonomy documents."""


@taxonomy.command("validate")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
def taxonomy_validate(directory: str) -> None:
    """Check taxonomies.json in DIRECTORY for cycles and duplicates."""
    path = Path(directory) / "taxonomies.json"
    if not path.exists():
        raise _fail(f"{path} not found")
    try:
        load_taxonomies(json.loads(path.read_text()))
    except (AsmSynthError, json.JSONDecodeError) as exc:
        raise _fail(str(exc))
    click.echo("taxonomies ok")


@taxonomy.command("show")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
def taxonomy_show(directory: str) -> None:
    """Print each hierarchy as an indented tree (shared nodes repeat)."""
    path = Path(directory) / "taxonomies.json"
    if not path.exists():
        raise _fail(f"{path} not found")
    try:
        ctx = load_taxonomies(json.loads(path.read_text()))
    except (AsmSynthError, json.JSONDecodeError) as exc:
        raise _fail(str(exc))
    for h in HIERARCHIES:
        tax = ctx.taxonomy(h)
        click.echo(f"{h}:")
        roots = sorted(n for n in tax.nodes if not tax.parents_of(n))

        def show(name: str, depth: int) -> None:
            click.echo("  " * (depth + 1) + name)
            for child in sorted(tax.children_of(name)):
                show(child, depth + 1)

        for root in roots:
            show(root, 0)


@main.group()
def catalog() -> None:
    """Inspect and validate part catalogs."""


@catalog.command("validate")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
def catalog_validate(directory: str) -> None:
    """Validate every part in DIRECTORY's workspace; exit 1 on errors.

    Parses parts without resolving them against each other, so a broken
    part is reported rather than aborting the whole run.
    """
    path = Path(directory)
    tax_path = path / "taxonomies.json"
    if not tax_path.exists():
        raise _fail(f"{tax_path} not found")
    try:
        ctx = load_taxonomies(json.loads(tax_path.read_text()))
    except (AsmSynthError, json.JSONDecodeError) as exc:
        raise _fail(str(exc))
    parts = []
    diagnostics = []
    parts_dir = path / "parts"
    for file in sorted(parts_dir.glob("*.json")) if parts_dir.is_dir() else []:
        try:
            parts.append(part_from_json(json.loads(file.read_text())))
        except (AsmSynthError, json.JSONDecodeError) as exc:
            raise _fail(f"{file.name}: {exc}")
    seen_ids: set[str] = set()
    jo_owner: dict[str, str] = {}
    for part in parts:
        diagnostics.extend(validate_part(ctx, part))
        if part.part_id in seen_ids:
            diagnostics.append(
                Diagnostic("error", part.part_id, f"duplicate part id {part.part_id!r}")
            )
        seen_ids.add(part.part_id)
        for jo in part.joint_origins:
            owner = jo_owner.setdefault(jo.uuid, part.part_id)
            if owner != part.part_id:
                diagnostics.append(
                    Diagnostic(
                        "error",
                        part.part_id,
                        f"joint origin uuid {jo.uuid!r} already used by part {owner!r}",
                        jo.uuid,
                    )
                )
    for d in diagnostics:
        click.echo(f"{d.severity}: {d.part_id}: {d.message}")
    if any(d.severity == "error" for d in diagnostics):
        raise SystemExit(1)
    click.echo(f"{len(parts)} parts ok")


@main.command()
@data_option
@click.option("--request", "request_file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--limit", type=int, default=None, help="Overrides the request document's limit.")
def synth(data: str | None, request_file: str, out_dir: str, limit: int | None) -> None:
    """Run a synthesis request; write results.json plus per-result artifacts."""
    ctx, cat = _load_workspace(data)
    try:
        doc = json.loads(Path(request_file).read_text())
        if limit is not None:
            doc["limit"] = limit
        request = request_from_json(ctx, doc)
        results = synthesize(ctx, cat, request)
    except (AsmSynthError, json.JSONDecodeError) as exc:
        raise _fail(str(exc))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.json").write_text(json_text(results_to_json(results)))
    for i, r in enumerate(results):
        (out / f"program-{i}.json").write_text(json_text(program_to_json(r.program)))
        (out / f"bom-{i}.json").write_text(json_text(bom_to_json(r.bom)))
    click.echo(f"wrote {len(results)} results to {out}")


@main.command()
@data_option
@click.option("--program", "program_file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", "out_file", type=click.Path(dir_okay=False), required=True)
@click.option("--angles", default="", help="Comma-separated joint angles in radians; defaults to zeros.")
def assemble(data: str | None, program_file: str, out_file: str, angles: str) -> None:
    """Replay an assembly program and write the posed scene JSON."""
    _ctx, cat = _load_workspace(data)
    try:
        program = program_from_json(json.loads(Path(program_file).read_text()))
        tree, _partition = interpret_program(cat, program)
        n_rev = sum(1 for j in program.joints if j.kind == "revolute")
        values = [float(x) for x in angles.split(",") if x.strip()] if angles.strip() else [0.0] * n_rev
        posed = forward_kinematics(cat, tree, program, values)
    except (AsmSynthError, json.JSONDecodeError, ValueError) as exc:
        raise _fail(str(exc))
    Path(out_file).write_text(export_scene(posed))
    click.echo(f"wrote scene for {len(tree.nodes)} occurrences to {out_file}")


@main.command("export-urdf")
@data_option
@click.option("--results", "results_dir", type=click.Path(exists=True, file_okay=False), required=True,
              help="Directory written by synth.")
@click.option("--result", "index", type=int, required=True, help="Result index to export.")
@click.option("--out", "out_file", type=click.Path(dir_okay=False), required=True)
@click.option("--name", default="assembly", help="Robot name attribute.")
def export_urdf_cmd(data: str | None, results_dir: str, index: int, out_file: str, name: str) -> None:
    """Export one synthesized result as a URDF document."""
    _ctx, cat = _load_workspace(data)
    program_path = Path(results_dir) / f"program-{index}.json"
    if not program_path.exists():
        raise _fail(f"{program_path} not found")
    try:
        program = program_from_json(json.loads(program_path.read_text()))
        tree, partition = interpret_program(cat, program)
        n_rev = sum(1 for j in program.joints if j.kind == "revolute")
        posed = forward_kinematics(cat, tree, program, [0.0] * n_rev)
    except (AsmSynthError, json.JSONDecodeError) as exc:
        raise _fail(str(exc))
    Path(out_file).write_text(export_urdf(posed, partition, cat, name=name))
    click.echo(f"wrote URDF with {len(partition.links)} links to {out_file}")


@main.command()
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="demo-out", show_default=True)
def demo(out_dir: str) -> None:
    """Showcase run on the bundled toy arm catalog.

    Synthesizes arms whose sub-assembly can rotate itself, writes all
    artifacts, and exports the first result as URDF and posed scenes.
    """
    data = toyarm_dir()
    ctx, cat = _load_workspace(str(data))
    request = make_request(
        ctx,
        type_expr(make_atom("parts", "Arm")),
        propagated=(make_atom("attributes", "SelfRotate"),),
        limit=10,
    )
    results = synthesize(ctx, cat, request)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.json").write_text(json_text(results_to_json(results)))
    for i, r in enumerate(results):
        (out / f"program-{i}.json").write_text(json_text(program_to_json(r.program)))
        (out / f"bom-{i}.json").write_text(json_text(bom_to_json(r.bom)))
        click.echo(
            f"result {i}: {r.part_count} parts, {len(r.partition.links)} links, "
            f"dof {dof(r.tree)}, cost {r.bom.total_known_cost:.2f}"
        )
    first = results[0]
    n_rev = dof(first.tree)
    posed = forward_kinematics(cat, first.tree, first.program, [0.0] * n_rev)
    (out / "scene-0.json").write_text(export_scene(posed))
    bent = forward_kinematics(cat, first.tree, first.program, [math.pi / 6] * n_rev)
    (out / "scene-0-bent.json").write_text(export_scene(bent))
    (out / "arm-0.urdf").write_text(export_urdf(posed, first.partition, cat, name="toy-arm"))
    click.echo(f"wrote demo artifacts to {out}")


@main.command()
@data_option
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(data: str | None, port: int, host: str) -> None:
    """Start the HTTP service."""
    from .server import serve as run_server

    if data is None:
        data = _default_data()
    run_server(data, port=port, host=host)


if __name__ == "__main__":
    main()
