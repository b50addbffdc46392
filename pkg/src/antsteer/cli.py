"""Command line front end: headless solves and the live service."""

from __future__ import annotations

import json
import os
from pathlib import Path

import click

from antsteer.acs import AcsParams
from antsteer.instance import (Instance, ParseError, list_bundled,
                               load_bundled, load_tsplib)
from antsteer.oracle import (InstanceTooLarge, exact_optimum, load_optimum,
                             sidecar_path)
from antsteer.session import (build_result_doc, read_script, run_scripted,
                              write_session_dir)
from antsteer.steering import SteeringState

DATA_DIR_ENV = "ANTSTEER_DATA_DIR"


@click.group()
def main():
    """Interactive ant-colony TSP solver."""


def _load_instance(src: str) -> tuple[Instance, Path | None]:
    path = Path(src)
    if path.exists():
        try:
            return load_tsplib(path), path
        except ParseError as exc:
            raise click.ClickException(f"{src}: {exc}") from exc
    if src in list_bundled():
        return load_bundled(src), None
    raise click.ClickException(
        f"{src!r} is neither a readable file nor a bundled instance "
        f"(bundled: {', '.join(list_bundled())})")


@main.command()
@click.argument("instance_src")
@click.option("--seed", type=int, default=None, help="RNG seed.")
@click.option("--iterations", type=int, default=None)
@click.option("--ants", type=int, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--beta", type=float, default=None)
@click.option("--rho", type=float, default=None)
@click.option("--q0", type=float, default=None)
@click.option("--sigma", type=float, default=None,
              help="Accepted for config compatibility; has no effect.")
@click.option("--two-opt/--no-two-opt", "two_opt", default=None,
              help="Improve each constructed tour with 2-opt.")
@click.option("--hif", type=float, default=None,
              help="Initial human impact factor (without --script).")
@click.option("--script", "script_path", type=click.Path(exists=True),
              default=None, help="Steering script (JSON lines) to replay.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="JSON file with parameter defaults; "
              "flags take precedence.")
@click.option("--compare-optimal", is_flag=True,
              help="Print the gap against the exact or sidecar optimum.")
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Session directory to write (default <name>.session).")
def solve(instance_src, seed, iterations, ants, alpha, beta, rho, q0, sigma,
          two_opt, hif, script_path, config_path, compare_optimal, out_dir):
    """Run an instance to completion and write the session directory."""
    instance, src_path = _load_instance(instance_src)

    doc = {}
    if config_path:
        try:
            loaded = json.loads(Path(config_path).read_text())
        except json.JSONDecodeError as exc:
            raise click.ClickException(f"{config_path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise click.ClickException(f"{config_path}: expected a JSON object")
        doc.update(loaded)
    flags = {"seed": seed, "iterations": iterations, "ants": ants,
             "alpha": alpha, "beta": beta, "rho": rho, "q0": q0,
             "sigma": sigma, "use_two_opt": two_opt}
    doc.update({k: v for k, v in flags.items() if v is not None})
    try:
        params = AcsParams.from_doc(doc)
    except (TypeError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc

    if script_path and hif is not None:
        raise click.ClickException(
            "--hif conflicts with --script; the script carries its own hif")
    if script_path:
        script = read_script(script_path)
    else:
        initial = SteeringState(instance.n, hif=hif if hif is not None else 0.0)
        script = [{"iteration_applied": 1, "update": initial.to_doc()}]

    events: list[dict] = []
    record, versions = run_scripted(instance, params, script,
                                    event_sink=events.append)

    optimum = None
    gap = None
    if compare_optimal:
        if src_path is not None and sidecar_path(src_path).exists():
            optimum = load_optimum(sidecar_path(src_path))
        else:
            try:
                optimum = exact_optimum(instance)
            except InstanceTooLarge as exc:
                raise click.ClickException(f"optimum unavailable: {exc}") from exc
        gap = 100.0 * (record.tour.length - optimum.length) / optimum.length

    if out_dir is None:
        root = os.environ.get(DATA_DIR_ENV)
        out = (Path(root) if root else Path.cwd()) / f"{instance.name}.session"
    else:
        out = Path(out_dir)
    result = build_result_doc(record, params, versions, optimum, gap)
    write_session_dir(out, instance, params, events, script, result)

    click.echo(f"best length {record.tour.length}")
    if gap is not None:
        click.echo(f"optimal {optimum.length} gap {gap:.3f}%")
    click.echo(f"session written to {out}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--data-dir", envvar=DATA_DIR_ENV, default=None,
              help=f"Persistence root (or ${DATA_DIR_ENV}).")
def serve(host, port, data_dir):
    """Serve the HTTP and WebSocket API."""
    import uvicorn

    from antsteer.server import create_app

    uvicorn.run(create_app(data_dir), host=host, port=port,
                log_level="warning")


if __name__ == "__main__":
    main()
