from cli import echo

from ..manifest import AbstractManifest
from .construction import LargeDiameterParams, build_large_diameter_metric


class Manifest(AbstractManifest):
    id = "large-diameter"
    name = "Large diameter sphere"
    description = "Closed warped sphere with lambda1(-gamma Laplacian + Ric) >= n - 1 and diameter above 2L"
    params_type = LargeDiameterParams

    def build(self, params):
        return build_large_diameter_metric(params)

    def print_summary(self, report):
        super().print_summary(report)
        p = report.parameters
        echo.enum_elm(f"tips at r0 = {p['r0']:.12g}, smoothed radius {p['radius']:.12g}")
        echo.enum_elm(f"diameter {report.diameter.value:.9g} > 2L = {2 * p['L']:.9g}")
