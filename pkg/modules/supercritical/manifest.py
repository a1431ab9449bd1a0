from cli import echo

from ..manifest import AbstractManifest
from .construction import SupercriticalParams, build_supercritical_example


class Manifest(AbstractManifest):
    id = "supercritical"
    name = "Supercritical S^1 x S^(n-1)"
    description = "Periodic warped product with lambda1(-gamma Laplacian + Ric) > 0 and infinite fundamental group"
    params_type = SupercriticalParams

    def build(self, params):
        return build_supercritical_example(params)

    def print_summary(self, report):
        super().print_summary(report)
        echo.enum_elm(f"topology {report.metric.topology.value}: pi_1 = Z")
        echo.enum_elm(f"c(M) = {report.parameters['coercivity']:.12g} <= lambda1 = {report.lambda1.value:.12g}")
