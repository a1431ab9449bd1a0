from abc import ABC, abstractmethod
from dataclasses import fields

from cli import echo
from cli.colors import ERROR, SUCCESS


class AbstractManifest(ABC):
    @property
    @abstractmethod
    def id(self):
        pass

    @property
    @abstractmethod
    def name(self):
        pass

    @property
    @abstractmethod
    def description(self):
        pass

    @property
    @abstractmethod
    def params_type(self):
        """frozen dataclass holding the construction parameters"""
        pass

    @abstractmethod
    def build(self, params):
        """run the construction and return a ConstructionReport"""
        pass

    def params(self, **values):
        known = {f.name for f in fields(self.params_type)}
        return self.params_type(**{key: value for key, value in values.items() if key in known})

    def print_summary(self, report):
        echo.h2(f"{self.name}: n = {report.n}, gamma = {report.gamma}")
        for name, value in sorted(report.parameters.items()):
            echo.enum_elm(f"{name} = {value}")
        for check in report.checks:
            echo.enum_elm(
                f"{check.name}: {check.value:.6g} (threshold {check.threshold:.6g})",
                dash_color=SUCCESS if check.passed else ERROR,
            )
