import logging
from pathlib import Path

import click
from engine.exceptions import WarplabError

from . import echo
from .bounds import bounds
from .config import ConfigManager
from .counterexample import counterexample
from .identity import identity
from .profile import profile
from .spectrum import spectrum


def known_options(ctx, command, prefix=""):
    """config section => accepted keys, one section per leaf command"""
    if not isinstance(command, click.Group):
        return {prefix: {param.name for param in command.params if isinstance(param, click.Option)}}
    known = {}
    for name in command.list_commands(ctx):
        section = f"{prefix}.{name}" if prefix else name
        known.update(known_options(ctx, command.get_command(ctx, name), section))
    return known


class WarplabGroup(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except WarplabError as e:
            echo.error(str(e))
            ctx.exit(e.exit_code)


@click.group(cls=WarplabGroup)
@click.option(
    "--config",
    "config_file",
    type=click.Path(dir_okay=False, path_type=Path),
    help="INI file with one section per command [default: ./warplab.cfg]",
)
@click.option("-v", "--verbose", is_flag=True, help="debug logging")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default="runs", show_default=True)
@click.option("--workers", type=int, default=1, show_default=True, help="processes for sweeps, 0 for all cores")
@click.pass_context
def main(ctx, config_file, verbose, out, workers):
    """spectral Ricci bounds on warped products: checks, profiles and counterexamples"""
    level = logging.DEBUG if verbose else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if workers < 0:
        raise click.BadParameter(f"must be >= 0, got {workers}", param_hint="--workers")
    ctx.ensure_object(dict)
    ctx.obj.update(out=out, workers=workers)

    cfg = ConfigManager(config_file)
    cfg.validate(known_options(ctx, ctx.command))
    ctx.default_map = cfg.default_map()


main.add_command(spectrum)
main.add_command(bounds)
main.add_command(counterexample)
main.add_command(profile)
main.add_command(identity)


def parse_config(argv):
    """RunConfig the command line `argv` resolves to, without running anything"""
    obj = {"dry_run": True}
    main.main(args=list(argv), prog_name="warplab", standalone_mode=False, obj=obj)
    return obj.get("config")
