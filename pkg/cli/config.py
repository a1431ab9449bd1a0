from configparser import ConfigParser, Error
from pathlib import Path

import click
from cached_property import cached_property

DEFAULT_CONFIG_FILE = "warplab.cfg"


class ConfigManager:
    """
    Flat INI file with one section per command, e.g.

        [counterexample.large-diameter]
        gamma = 1.05:1.33:8
        L = 10
    """

    def __init__(self, path=None):
        self._path = path
        self._cfg = ConfigParser()
        # option names are case sensitive (L)
        self._cfg.optionxform = str
        self.read()

    @cached_property
    def file(self):
        if self._path is not None:
            return Path(self._path)
        return Path.cwd().joinpath(DEFAULT_CONFIG_FILE)

    def read(self):
        if not self.file.is_file():
            if self._path is not None:
                raise click.BadParameter(f"config file {self.file} does not exist", param_hint="--config")
            return
        try:
            self._cfg.read(self.file)
        except Error as e:
            raise click.BadParameter(f"{self.file}: {e}", param_hint="--config") from e

    def sections(self):
        return self._cfg.sections()

    def get(self, section, key, default=None):
        if not self._cfg.has_section(section):
            return default
        return self._cfg[section].get(key, default)

    def items(self, section):
        if not self._cfg.has_section(section):
            return {}
        return dict(self._cfg[section].items())

    def validate(self, known):
        """known: section => set of accepted keys"""
        for section in self.sections():
            if section not in known:
                raise click.UsageError(f"{self.file}: unknown section [{section}], expected one of {sorted(known)}")
            unknown = set(self.items(section)) - known[section]
            if unknown:
                raise click.UsageError(
                    f"{self.file}: unknown key(s) {', '.join(sorted(unknown))} in section [{section}]"
                )

    def default_map(self):
        """nested mapping in the shape click expects for Context.default_map"""
        tree = {}
        for section in self.sections():
            node = tree
            for part in section.split("."):
                node = node.setdefault(part, {})
            node.update(self.items(section))
        return tree
